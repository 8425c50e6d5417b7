import numpy as np
import pytest

from helpers import batch_instances
from mplangc.approx import approximate, image_bounds, uniform_distance_estimate
from mplangc.errors import ArityError
from mplangc.expressions import One, Scale, classify
from mplangc.generate import random_expr
from mplangc.graphs import Graph
from mplangc.intervals import DomainBox, Interval
from mplangc.interpreter import eval_expr
from mplangc.parser import parse


# -- image_bounds ----------------------------------------------------------------

def test_image_of_unit_constant():
    assert image_bounds(parse("1"), 5, DomainBox.cube(-9, 9, 1)) == Interval(1.0, 1.0)


def test_image_of_neighbor_sum_nonnegative_box():
    got = image_bounds(parse("<>P1"), 3, DomainBox.from_pairs([[0.0, 1.0]]))
    assert got == Interval(0.0, 3.0)
    # extremal oracle: a star center with 3 unit leaves attains the bound
    star = Graph(4, ((0, 1), (0, 2), (0, 3)))
    from mplangc.graphs import FeatureMap

    vals = eval_expr(parse("<>P1"), star, FeatureMap(np.ones((4, 1))))
    assert vals[0] == 3.0


def test_image_of_neighbor_sum_symmetric_box():
    got = image_bounds(parse("<>P1"), 3, DomainBox.cube(-1, 1, 1))
    assert got == Interval(-3.0, 3.0)


def test_image_affine():
    got = image_bounds(parse("2*P1 + 1"), 0, DomainBox.cube(-1, 1, 1))
    assert got == Interval(-1.0, 3.0)


def test_image_scale_negative_swaps():
    got = image_bounds(parse("-2*P1"), 0, DomainBox.from_pairs([[0.0, 1.0]]))
    assert got == Interval(-2.0, 0.0)


@pytest.mark.parametrize("seed", range(15))
def test_image_bounds_sound_on_random_expressions(seed):
    rng = np.random.default_rng(900 + seed)
    d = int(rng.integers(1, 4))
    p = int(rng.integers(0, 4))
    e = random_expr(rng, int(rng.integers(1, 6)), d)
    box = DomainBox.cube(-1, 1, d)
    iv = image_bounds(e, p, box)
    union, fm = batch_instances(p, box, 200, seed)
    vals = eval_expr(e, union, fm)
    slack = 1e-9 * (1.0 + np.abs(vals))
    assert (vals >= iv.lo - slack).all() and (vals <= iv.hi + slack).all()


def test_image_bounds_monotone_under_box_shrinking():
    rng = np.random.default_rng(77)
    for _ in range(20):
        e = random_expr(rng, 4, 2)
        outer = DomainBox.cube(-2, 2, 2)
        inner = DomainBox.cube(-1, 1, 2)
        big = image_bounds(e, 3, outer)
        small = image_bounds(e, 3, inner)
        assert big.lo <= small.lo and small.hi <= big.hi


def test_image_bounds_arity_error():
    with pytest.raises(ArityError):
        image_bounds(parse("P3"), 1, DomainBox.cube(0, 1, 2))


# -- approximate ------------------------------------------------------------------

def test_relu_only_expression_returned_unchanged():
    e = parse("relu(P1 + <>P1) + 0.5*P1")
    out = approximate(e, 3, DomainBox.cube(-1, 1, 1), 0.25)
    assert out == e


def test_sin_on_single_nodes_within_budget():
    e = parse("sin(P1)")
    box = DomainBox.from_pairs([[-3.141592653589793, 3.141592653589793]])
    out = approximate(e, 0, box, 0.1)
    assert classify(out).relu_only
    rho = uniform_distance_estimate(e, out, 0, box, 10_000, 13)
    assert rho <= 0.1


def test_tanh_of_neighbor_sum_within_budget():
    e = parse("tanh(<>P1)")
    box = DomainBox.cube(-1, 1, 1)
    out = approximate(e, 3, box, 0.05)
    assert classify(out).relu_only
    rho = uniform_distance_estimate(e, out, 3, box, 5_000, 17)
    assert rho <= 0.05


def test_negative_scale_budget():
    e = parse("-2*sin(P1)")
    box = DomainBox.cube(-1, 1, 1)
    out = approximate(e, 2, box, 0.1)
    assert classify(out).relu_only
    rho = uniform_distance_estimate(e, out, 2, box, 5_000, 19)
    assert rho <= 0.1


def test_zero_scale_collapses_to_zero():
    e = Scale(0.0, parse("sin(P1)"))
    out = approximate(e, 2, DomainBox.cube(-1, 1, 1), 0.5)
    assert out == Scale(0.0, One())


def test_diamond_at_degree_zero_collapses_to_zero():
    e = parse("<>sin(P1)")
    out = approximate(e, 0, DomainBox.cube(-1, 1, 1), 0.5)
    assert out == Scale(0.0, One())


def test_rejects_nonpositive_eps():
    with pytest.raises(ValueError):
        approximate(parse("sin(P1)"), 1, DomainBox.cube(-1, 1, 1), 0.0)


def test_approximation_is_deterministic():
    e = parse("sin(<>tanh(P1)) + 0.5*P1")
    box = DomainBox.cube(-1, 1, 1)
    assert approximate(e, 3, box, 0.2) == approximate(e, 3, box, 0.2)


# -- uniform_distance_estimate -------------------------------------------------------

def test_distance_of_expression_to_itself_is_zero():
    e = parse("tanh(<>P1) + P1")
    assert uniform_distance_estimate(e, e, 2, DomainBox.cube(-1, 1, 1), 500, 3) == 0.0


def test_distance_approaches_analytic_sup():
    est = uniform_distance_estimate(
        parse("P1"), parse("0"), 0, DomainBox.cube(-1, 1, 1), 5_000, 11
    )
    assert 0.99 <= est <= 1.0


def test_relu_is_identity_on_nonnegatives():
    est = uniform_distance_estimate(
        parse("relu(P1)"), parse("P1"), 2, DomainBox.from_pairs([[0.0, 5.0]]), 1_000, 23
    )
    assert est == 0.0


def test_distance_is_seed_deterministic():
    e1, e2 = parse("sin(P1)"), parse("P1")
    box = DomainBox.cube(-1, 1, 1)
    a = uniform_distance_estimate(e1, e2, 1, box, 300, 7)
    b = uniform_distance_estimate(e1, e2, 1, box, 300, 7)
    assert a == b


def test_distance_arity_mismatch():
    with pytest.raises(ArityError):
        uniform_distance_estimate(
            parse("P2"), parse("P1"), 1, DomainBox.cube(-1, 1, 1), 10, 1
        )
