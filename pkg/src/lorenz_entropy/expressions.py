"""Recursive-descent parser and evaluator for the one-variable map grammar.

Grammar (EBNF):

    expr   := term { ("+"|"-") term } ;
    term   := factor { ("*"|"/") factor } ;
    factor := [ "-" ] factor | power ;
    power  := base [ "^" factor ] ;
    base   := NUMBER | "x" | "(" expr ")" | FUNC "(" expr ")" ;
    FUNC   := "sqrt" | "exp" | "ln" | "abs" ;

"^" is right-associative and binds tighter than unary minus, so -x^2 parses
as -(x^2) while 2^-3 is still accepted.

Expressions evaluate in three modes: plain floats, exact rationals (raising
ExactnessError as soon as a step leaves the rationals, e.g. sqrt of a
non-square), and mpmath arbitrary precision.  The rational mode is what lets
critical orbits that are genuinely periodic (like piecewise maps built from
decimal constants) be followed exactly for any number of steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath


class ParseError(ValueError):
    """Syntax or name error, carrying the 0-based position in the source text."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ExactnessError(ArithmeticError):
    """Raised when a rational evaluation step has no exact rational result."""


class EvalDomainError(ArithmeticError):
    """Raised when evaluation produces a non-finite or out-of-domain value."""


def _rational_sqrt(v: Fraction) -> Fraction:
    if v < 0:
        raise EvalDomainError("sqrt of negative value")
    pn, pd = math.isqrt(v.numerator), math.isqrt(v.denominator)
    if pn * pn == v.numerator and pd * pd == v.denominator:
        return Fraction(pn, pd)
    raise ExactnessError("sqrt is irrational here")


@dataclass(frozen=True)
class Const:
    value: Fraction

    def eval_float(self, x: float) -> float:
        return float(self.value)

    def eval_rational(self, x: Fraction) -> Fraction:
        return self.value

    def eval_mp(self, x):
        return mpmath.mpf(self.value.numerator) / self.value.denominator


@dataclass(frozen=True)
class Var:
    def eval_float(self, x: float) -> float:
        return x

    def eval_rational(self, x: Fraction) -> Fraction:
        return x

    def eval_mp(self, x):
        return x


@dataclass(frozen=True)
class Unary:
    op: str  # neg | sqrt | exp | ln | abs
    arg: "Node"

    def eval_float(self, x: float) -> float:
        v = self.arg.eval_float(x)
        try:
            if self.op == "neg":
                return -v
            if self.op == "sqrt":
                return math.sqrt(v)
            if self.op == "exp":
                return math.exp(v)
            if self.op == "ln":
                return math.log(v)
            if self.op == "abs":
                return abs(v)
        except ValueError as e:
            raise EvalDomainError(str(e)) from None
        raise AssertionError(self.op)

    def eval_rational(self, x: Fraction) -> Fraction:
        v = self.arg.eval_rational(x)
        if self.op == "neg":
            return -v
        if self.op == "abs":
            return abs(v)
        if self.op == "sqrt":
            return _rational_sqrt(v)
        if self.op == "exp":
            if v == 0:
                return Fraction(1)
            raise ExactnessError("exp is irrational here")
        if self.op == "ln":
            if v == 1:
                return Fraction(0)
            if v <= 0:
                raise EvalDomainError("ln of non-positive value")
            raise ExactnessError("ln is irrational here")
        raise AssertionError(self.op)

    def eval_mp(self, x):
        v = self.arg.eval_mp(x)
        if self.op == "neg":
            return -v
        if self.op == "sqrt":
            if v < 0:
                raise EvalDomainError("sqrt of negative value")
            return mpmath.sqrt(v)
        if self.op == "exp":
            return mpmath.exp(v)
        if self.op == "ln":
            if v <= 0:
                raise EvalDomainError("ln of non-positive value")
            return mpmath.log(v)
        if self.op == "abs":
            return abs(v)
        raise AssertionError(self.op)


@dataclass(frozen=True)
class Binary:
    op: str  # + - * / ^
    left: "Node"
    right: "Node"

    def eval_float(self, x: float) -> float:
        a, b = self.left.eval_float(x), self.right.eval_float(x)
        try:
            if self.op == "+":
                return a + b
            if self.op == "-":
                return a - b
            if self.op == "*":
                return a * b
            if self.op == "/":
                return a / b
            if self.op == "^":
                return a**b
        except (ZeroDivisionError, OverflowError, ValueError) as e:
            raise EvalDomainError(str(e)) from None
        raise AssertionError(self.op)

    def eval_rational(self, x: Fraction) -> Fraction:
        a, b = self.left.eval_rational(x), self.right.eval_rational(x)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        if self.op == "/":
            if b == 0:
                raise EvalDomainError("division by zero")
            return a / b
        if self.op == "^":
            if b.denominator == 1:
                e = b.numerator
                if a == 0 and e < 0:
                    raise EvalDomainError("0 to a negative power")
                return a**e
            raise ExactnessError("non-integer exponent")
        raise AssertionError(self.op)

    def eval_mp(self, x):
        a, b = self.left.eval_mp(x), self.right.eval_mp(x)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        if self.op == "/":
            if b == 0:
                raise EvalDomainError("division by zero")
            return a / b
        if self.op == "^":
            return a**b
        raise AssertionError(self.op)


Node = Union[Const, Var, Unary, Binary]

_FUNCS = ("sqrt", "exp", "ln", "abs")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, self.pos)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def accept(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def expect(self, ch: str) -> None:
        if not self.accept(ch):
            raise self.error(f"expected {ch!r}")

    def parse(self) -> Node:
        node = self.expr()
        self.skip_ws()
        if self.pos != len(self.text):
            raise self.error("unexpected trailing input")
        return node

    def expr(self) -> Node:
        node = self.term()
        while True:
            if self.accept("+"):
                node = Binary("+", node, self.term())
            elif self.accept("-"):
                node = Binary("-", node, self.term())
            else:
                return node

    def term(self) -> Node:
        node = self.factor()
        while True:
            if self.accept("*"):
                node = Binary("*", node, self.factor())
            elif self.accept("/"):
                node = Binary("/", node, self.factor())
            else:
                return node

    def factor(self) -> Node:
        if self.accept("-"):
            return Unary("neg", self.factor())
        return self.power()

    def power(self) -> Node:
        node = self.base()
        if self.accept("^"):
            return Binary("^", node, self.factor())
        return node

    def base(self) -> Node:
        c = self.peek()
        if c == "(":
            self.pos += 1
            node = self.expr()
            self.expect(")")
            return node
        if c.isdigit() or c == ".":
            return self.number()
        if c.isalpha():
            return self.name()
        raise self.error("expected a number, 'x', a function call, or '('")

    def number(self) -> Const:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos < len(self.text) and self.text[self.pos] == ".":
            self.pos += 1
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
        lit = self.text[start : self.pos]
        if lit in ("", "."):
            self.pos = start
            raise self.error("malformed number")
        return Const(Fraction(lit))

    def name(self) -> Node:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalpha():
            self.pos += 1
        word = self.text[start : self.pos]
        if word == "x":
            return Var()
        if word in _FUNCS:
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return Unary(word, arg)
        self.pos = start
        raise self.error(f"unknown identifier {word!r}")


@dataclass(frozen=True)
class MapExpression:
    """A parsed branch definition; keeps the source text for serialization."""

    source: str
    root: Node

    def __call__(self, x: float) -> float:
        return self.evaluate(x)

    def evaluate(self, x: float) -> float:
        v = self.root.eval_float(x)
        if not math.isfinite(v):
            raise EvalDomainError(f"{self.source!r} is not finite at x={x}")
        return v

    def eval_rational(self, x: Fraction) -> Fraction:
        return self.root.eval_rational(x)

    def eval_mp(self, x):
        return self.root.eval_mp(x)


def parse_expression(text: str) -> MapExpression:
    """Parse a branch-definition expression; raises ParseError with position."""
    return MapExpression(text, _Parser(text).parse())
