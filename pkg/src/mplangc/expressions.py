"""MPLang abstract syntax: six constructors, arity checks, syntactic traits.

The concrete text form (see parser) writes the neighbor-sum operator as
``<>``, scaling as ``a*e``, and a bare number ``a`` as shorthand for ``a*1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .activations import Activation, Named, RELU
from .errors import ArityError

__all__ = [
    "Expr",
    "One",
    "Proj",
    "Scale",
    "Add",
    "Apply",
    "Diamond",
    "ExprTuple",
    "ExprTraits",
    "arity_check",
    "max_projection",
    "classify",
    "format_expr",
    "const",
    "scaled",
    "sum_terms",
]


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Proj:
    index: int  # 1-based

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("projection index must be >= 1")


@dataclass(frozen=True)
class Scale:
    factor: float
    arg: "Expr"

    def __post_init__(self):
        object.__setattr__(self, "factor", float(self.factor))


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Apply:
    func: Activation
    arg: "Expr"


@dataclass(frozen=True)
class Diamond:
    arg: "Expr"


Expr = Union[One, Proj, Scale, Add, Apply, Diamond]


@dataclass(frozen=True)
class ExprTuple:
    """Tuple of expressions over a shared input arity; output arity = len."""

    components: tuple[Expr, ...]
    input_arity: int

    def __post_init__(self):
        if not self.components:
            raise ValueError("expression tuple must be nonempty")
        for e in self.components:
            if not arity_check(e, self.input_arity):
                raise ArityError(
                    f"component uses projection beyond arity {self.input_arity}"
                )

    @property
    def output_arity(self) -> int:
        return len(self.components)


def _children(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, (Scale, Apply, Diamond)):
        return (e.arg,)
    if isinstance(e, Add):
        return (e.left, e.right)
    return ()


def max_projection(e: Expr) -> int:
    """Largest projection index used, 0 if none."""
    if isinstance(e, Proj):
        return e.index
    return max((max_projection(c) for c in _children(e)), default=0)


def arity_check(e: Expr, d: int) -> bool:
    """True iff every projection index lies in 1..d."""
    return max_projection(e) <= d


@dataclass(frozen=True)
class ExprTraits:
    relu_only: bool
    addition_free: bool
    summation_free: bool
    functions_used: frozenset


def classify(e: Expr) -> ExprTraits:
    functions: set[Activation] = set()
    has_add = False
    has_diamond = False

    def walk(node: Expr) -> None:
        nonlocal has_add, has_diamond
        if isinstance(node, Apply):
            functions.add(node.func)
        elif isinstance(node, Add):
            has_add = True
        elif isinstance(node, Diamond):
            has_diamond = True
        for c in _children(node):
            walk(c)

    walk(e)
    return ExprTraits(
        relu_only=functions <= {RELU},
        addition_free=not has_add,
        summation_free=not has_diamond,
        functions_used=frozenset(functions),
    )


# -- text form -----------------------------------------------------------------

def _num(a: float) -> str:
    return repr(float(a))


def format_expr(e: Expr) -> str:
    """Concrete text for e; parse(format_expr(e)) reproduces e exactly."""
    if isinstance(e, Add):
        # The grammar is left-associative, so a right-nested sum needs parens.
        return f"{format_expr(e.left)} + {_format_term(e.right)}"
    return _format_term(e)


def _format_term(e: Expr) -> str:
    if isinstance(e, Scale):
        if isinstance(e.arg, One):
            return "1*1" if e.factor == 1.0 else _num(e.factor)
        return f"{_num(e.factor)}*{_format_factor(e.arg)}"
    return _format_factor(e)


def _format_factor(e: Expr) -> str:
    if isinstance(e, One):
        return "1"
    if isinstance(e, Proj):
        return f"P{e.index}"
    if isinstance(e, Apply):
        if not isinstance(e.func, Named):
            raise ValueError("only named activations have a concrete syntax")
        return f"{e.func.name}({format_expr(e.arg)})"
    if isinstance(e, Diamond):
        return f"<>{_format_factor(e.arg)}"
    return f"({format_expr(e)})"


# -- smart constructors ---------------------------------------------------------

def const(a: float) -> Expr:
    """The constant a, i.e. a*1 (or 1 itself)."""
    return One() if a == 1.0 else Scale(float(a), One())


def scaled(a: float, e: Expr) -> Expr:
    return e if a == 1.0 else Scale(float(a), e)


def sum_terms(terms: list[Expr]) -> Expr:
    """Left-associated sum; the empty sum is the constant 0."""
    if not terms:
        return Scale(0.0, One())
    out = terms[0]
    for t in terms[1:]:
        out = Add(out, t)
    return out
