import numpy as np
import pytest

from mplangc.activations import RELU, SIN, TANH, Named
from mplangc.expressions import (
    Add,
    Apply,
    Diamond,
    One,
    Proj,
    Scale,
    arity_check,
    classify,
    format_expr,
    max_projection,
)
from mplangc.generate import random_expr
from mplangc.parser import MPLangSyntaxError, parse


def test_parse_max_expression():
    e = parse("relu(P2 + -1*P1) + P1")
    assert e == Add(
        Apply(RELU, Add(Proj(2), Scale(-1.0, Proj(1)))),
        Proj(1),
    )


def test_parse_diamond():
    assert parse("<>P1") == Diamond(Proj(1))


def test_parse_number_is_scaled_unit():
    assert parse("3.5") == Scale(3.5, One())


def test_parse_unit_literal():
    assert parse("1") == One()
    assert parse("1*1") == Scale(1.0, One())


def test_parse_nested_diamond_and_parens():
    assert parse("<><>P1") == Diamond(Diamond(Proj(1)))
    assert parse("2*(P1 + P2)") == Scale(2.0, Add(Proj(1), Proj(2)))


def test_parse_exponent_numbers():
    assert parse("1e-3*P1") == Scale(1e-3, Proj(1))
    assert parse("2.5E+1") == Scale(25.0, One())


def test_parse_signed_constants_in_sums():
    assert parse("P1 + -2") == Add(Proj(1), Scale(-2.0, One()))
    assert parse("P1+-2") == Add(Proj(1), Scale(-2.0, One()))


def test_whitespace_insignificant():
    assert parse(" relu( P1 ) ") == parse("relu(P1)")


@pytest.mark.parametrize(
    "bad",
    ["P0", "foo(P1)", "P1 +", "(P1", "P1 P2", "", "relu P1", "P1 - P2", "$"],
)
def test_syntax_errors(bad):
    with pytest.raises(MPLangSyntaxError):
        parse(bad)


def test_syntax_error_carries_position():
    with pytest.raises(MPLangSyntaxError) as err:
        parse("relu(P1) + $")
    assert err.value.pos == 11
    assert "position 11" in str(err.value)


def test_unknown_function_reported():
    with pytest.raises(MPLangSyntaxError, match="unknown function"):
        parse("softmax(P1)")


@pytest.mark.parametrize("seed", range(60))
def test_print_parse_roundtrip_random(seed):
    rng = np.random.default_rng(seed)
    e = random_expr(rng, depth=int(rng.integers(0, 7)), d=int(rng.integers(1, 5)))
    assert parse(format_expr(e)) == e


def test_roundtrip_tricky_scalars():
    for e in [
        Scale(1.0, One()),
        Scale(-0.5, Scale(3.0, One())),
        Scale(2.0, Add(One(), Proj(1))),
        Apply(Named("id"), Scale(1e-17, Proj(2))),
        Diamond(Scale(-2.0, Diamond(One()))),
    ]:
        assert parse(format_expr(e)) == e


def test_format_rejects_structured_activation():
    from mplangc.activations import ReluSum

    with pytest.raises(ValueError, match="concrete syntax"):
        format_expr(Apply(ReluSum(((1.0, 0.0, 1.0),)), Proj(1)))


# -- arity / classification ------------------------------------------------------

def test_arity_check_examples():
    assert not arity_check(Proj(2), 1)
    assert arity_check(Proj(2), 2)
    assert arity_check(One(), 0)


def test_max_projection():
    assert max_projection(parse("relu(P2 + -1*P1) + P3")) == 3
    assert max_projection(One()) == 0


def test_classify_relu_only():
    t = classify(parse("relu(P1)"))
    assert t.relu_only and t.addition_free and t.summation_free
    assert t.functions_used == frozenset({RELU})


def test_classify_diamond():
    t = classify(parse("<>P1"))
    assert t.addition_free and not t.summation_free
    assert t.functions_used == frozenset()
    assert t.relu_only  # vacuously: no function applications at all


def test_classify_mixed():
    t = classify(parse("tanh(P1)+1"))
    assert not t.relu_only and not t.addition_free
    assert t.functions_used == frozenset({TANH})


def test_classify_collects_all_functions():
    t = classify(parse("sin(tanh(P1) + relu(P2))"))
    assert t.functions_used == frozenset({SIN, TANH, RELU})


def test_proj_index_validation():
    with pytest.raises(ValueError):
        Proj(0)
