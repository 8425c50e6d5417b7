"""Translate MPNNs into equivalent MPLang expression tuples.

Each layer output component becomes sigma applied to a sum of scaled
projections, scaled neighbor sums, and the bias; layers compose by
substituting the previous layer's expressions for the projections.
"""

from __future__ import annotations

from .activations import ID
from .expressions import (
    Apply,
    Diamond,
    Expr,
    ExprTuple,
    Proj,
    const,
    scaled,
    sum_terms,
)
from .mpnn import Mpnn

__all__ = ["mpnn_to_mplang"]


def mpnn_to_mplang(net: Mpnn) -> ExprTuple:
    exprs: list[Expr] = [Proj(i) for i in range(1, net.input_arity + 1)]
    for lyr in net.layers:
        new: list[Expr] = []
        for j in range(lyr.output_arity):
            terms: list[Expr] = []
            for k, sub in enumerate(exprs):
                w = lyr.w_self[j, k]
                if w != 0.0:
                    terms.append(scaled(w, sub))
            for k, sub in enumerate(exprs):
                w = lyr.w_neigh[j, k]
                if w != 0.0:
                    terms.append(scaled(w, Diamond(sub)))
            if lyr.bias[j] != 0.0:
                terms.append(const(lyr.bias[j]))
            body = sum_terms(terms)
            new.append(body if lyr.activation == ID else Apply(lyr.activation, body))
        exprs = new
    return ExprTuple(tuple(exprs), net.input_arity)
