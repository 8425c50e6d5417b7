"""Uniform approximation of arbitrary expressions by ReLU-only ones.

Every function application is replaced by a finite ReLU combination accurate
on an interval covering the argument's image, and the error budget is split
down the tree: halves across +, |a|-scaled through scaling, p-way through the
neighbor sum, and through an application via the approximant's modulus of
continuity.
"""

from __future__ import annotations

import numpy as np

from .activations import RELU, ReluSum, interval_image, modulus_delta, relu_approximate
from .errors import ArityError
from .expressions import (
    Add,
    Apply,
    Diamond,
    Expr,
    One,
    Proj,
    Scale,
    arity_check,
    classify,
    const,
    scaled,
    sum_terms,
)
from .graphs import FeatureMap, disjoint_union, random_instances
from .intervals import DomainBox, Interval
from .interpreter import eval_expr

__all__ = ["image_bounds", "approximate", "uniform_distance_estimate"]


def image_bounds(e: Expr, p: int, box: DomainBox) -> Interval:
    """Interval containing every value of e over degree-<=p graphs and box."""
    if isinstance(e, One):
        return Interval(1.0, 1.0)
    if isinstance(e, Proj):
        if e.index > box.dimension:
            raise ArityError(f"projection {e.index} outside box of dimension {box.dimension}")
        return box.intervals[e.index - 1]
    if isinstance(e, Scale):
        return image_bounds(e.arg, p, box).scale(e.factor)
    if isinstance(e, Add):
        return image_bounds(e.left, p, box).add(image_bounds(e.right, p, box))
    if isinstance(e, Apply):
        return interval_image(e.func, image_bounds(e.arg, p, box))
    if isinstance(e, Diamond):
        inner = image_bounds(e.arg, p, box)
        # Sum of up to p values from the image (or none at all).
        return Interval(p * min(0.0, inner.lo), p * max(0.0, inner.hi))
    raise TypeError(f"not an expression: {e!r}")


def _relu_sum_expr(rs: ReluSum, arg: Expr) -> Expr:
    """Expand sum of c*relu(a*x - b) into MPLang syntax applied to arg."""
    terms: list[Expr] = []
    for a, b, c in rs.terms:
        inner: list[Expr] = []
        if a != 0.0:
            inner.append(scaled(a, arg))
        if b != 0.0:
            inner.append(const(-b))
        terms.append(scaled(c, Apply(RELU, sum_terms(inner))))
    return sum_terms(terms)


def approximate(e: Expr, p: int, box: DomainBox, eps: float) -> Expr:
    """ReLU-only expression within eps of e over degree-<=p graphs and box."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not arity_check(e, box.dimension):
        raise ArityError(f"expression needs arity > {box.dimension}")
    if classify(e).relu_only:
        return e
    if isinstance(e, Scale):
        if e.factor == 0.0:
            return const(0.0)
        return Scale(e.factor, approximate(e.arg, p, box, eps / abs(e.factor)))
    if isinstance(e, Add):
        return Add(
            approximate(e.left, p, box, eps / 2.0),
            approximate(e.right, p, box, eps / 2.0),
        )
    if isinstance(e, Diamond):
        if p == 0:
            # No graph of degree 0 has neighbors, so the sum is identically 0.
            return const(0.0)
        return Diamond(approximate(e.arg, p, box, eps / p))
    if isinstance(e, Apply):
        image = image_bounds(e.arg, p, box)
        widened = image.widen(eps / 2.0)
        approximant = relu_approximate(e.func, widened, eps / 2.0)
        delta = modulus_delta(approximant, widened, eps / 2.0)
        inner = approximate(e.arg, p, box, min(delta, eps / 2.0))
        return _relu_sum_expr(approximant, inner)
    # One / Proj are relu-only and returned above; nothing else remains.
    raise TypeError(f"not an expression: {e!r}")


def uniform_distance_estimate(
    e1: Expr,
    e2: Expr,
    p: int,
    box: DomainBox,
    trials: int,
    seed: int,
) -> float:
    """Max |e1 - e2| over sampled (graph, features, node) triples.

    A lower bound on the true supremum; deterministic given the seed.
    """
    d = box.dimension
    if not (arity_check(e1, d) and arity_check(e2, d)):
        raise ArityError(f"expressions need arity > {d}")
    instances = list(random_instances(p, box, trials, seed))
    union, _ = disjoint_union(g for g, _ in instances)
    features = FeatureMap(np.concatenate([fm.values for _, fm in instances]))
    va = eval_expr(e1, union, features)
    vb = eval_expr(e2, union, features)
    return float(np.max(np.abs(va - vb))) if union.node_count else 0.0
