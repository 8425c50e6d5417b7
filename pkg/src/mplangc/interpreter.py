"""Reference interpreter: the ground truth every compiler is checked against.

Evaluation is bottom-up per node, vectorized over nodes; the neighbor sum
follows the graph's deterministic edge order.
"""

from __future__ import annotations

import numpy as np

from .activations import apply_vec
from .errors import ArityError
from .expressions import Add, Apply, Diamond, Expr, ExprTuple, One, Proj, Scale, arity_check
from .graphs import FeatureMap, Graph

__all__ = ["eval_expr", "eval_tuple"]


def eval_expr(e: Expr, g: Graph, chi: FeatureMap) -> np.ndarray:
    """Per-node value of e on (g, chi); shape (node_count,)."""
    if chi.node_count != g.node_count:
        raise ArityError(
            f"feature map covers {chi.node_count} nodes, graph has {g.node_count}"
        )
    if not arity_check(e, chi.dimension):
        raise ArityError(f"expression needs arity > {chi.dimension}")
    return _ev(e, g, chi.values)


def _ev(e: Expr, g: Graph, values: np.ndarray) -> np.ndarray:
    if isinstance(e, One):
        return np.ones(values.shape[0])
    if isinstance(e, Proj):
        return values[:, e.index - 1]
    if isinstance(e, Scale):
        return e.factor * _ev(e.arg, g, values)
    if isinstance(e, Add):
        return _ev(e.left, g, values) + _ev(e.right, g, values)
    if isinstance(e, Apply):
        return apply_vec(e.func, _ev(e.arg, g, values))
    if isinstance(e, Diamond):
        return g.neighbor_sum(_ev(e.arg, g, values))
    raise TypeError(f"not an expression: {e!r}")


def eval_tuple(t: ExprTuple, g: Graph, chi: FeatureMap) -> FeatureMap:
    """Component-wise evaluation; output dimension = number of components."""
    if chi.dimension != t.input_arity:
        raise ArityError(
            f"tuple of arity {t.input_arity} applied to {chi.dimension}-dim features"
        )
    cols = [eval_expr(c, g, chi) for c in t.components]
    return FeatureMap(np.stack(cols, axis=1))
