import math
from fractions import Fraction

import pytest

from lorenz_entropy.expressions import (
    EvalDomainError,
    ExactnessError,
    ParseError,
    parse_expression,
)


class TestParsing:
    def test_linear_branch(self):
        e = parse_expression("1.001*x")
        assert e.evaluate(2.0) == pytest.approx(2.002)

    def test_exponential_branch(self):
        e = parse_expression("exp(x + ln(2) - 1) - 1")
        assert e.evaluate(0.5) == pytest.approx(2.0 * math.exp(-0.5) - 1.0)
        assert e.evaluate(1.0) == pytest.approx(1.0)

    def test_sqrt_branch(self):
        e = parse_expression("1.25*sqrt(x)")
        assert e.evaluate(0.64) == pytest.approx(1.0)

    def test_precedence_mul_over_add(self):
        assert parse_expression("1 + 2*3").evaluate(0.0) == 7.0

    def test_power_right_associative(self):
        assert parse_expression("2^3^2").evaluate(0.0) == 512.0

    def test_unary_minus_below_power(self):
        assert parse_expression("-x^2").evaluate(3.0) == -9.0

    def test_negative_exponent(self):
        assert parse_expression("1.25^-2").evaluate(0.0) == pytest.approx(0.64)

    def test_parentheses_and_division(self):
        e = parse_expression("(1.25^-6 - 1)/(1.25^-2 - 1)")
        assert e.evaluate(0.0) == pytest.approx(2.0496)

    def test_abs(self):
        assert parse_expression("abs(x - 1)").evaluate(0.25) == 0.75

    def test_syntax_error_carries_position(self):
        with pytest.raises(ParseError) as exc:
            parse_expression("1 + * 2")
        assert exc.value.position == 4

    def test_unknown_identifier(self):
        with pytest.raises(ParseError):
            parse_expression("2*y")

    def test_trailing_junk(self):
        with pytest.raises(ParseError):
            parse_expression("1 + 2 )")

    def test_unclosed_call(self):
        with pytest.raises(ParseError):
            parse_expression("sqrt(x")


class TestRationalEvaluation:
    def test_decimal_constants_are_exact(self):
        e = parse_expression("0.1 + 0.2")
        assert e.eval_rational(Fraction(0)) == Fraction(3, 10)

    def test_golden_branch_is_exact(self):
        b = parse_expression("(1.25^-6 - 1)/(1.25^-2 - 1)")
        assert b.eval_rational(Fraction(0)) == Fraction(1281, 625)  # 2.0496 exactly

    def test_sqrt_of_square_is_exact(self):
        e = parse_expression("1.25*sqrt(x)")
        assert e.eval_rational(Fraction(4096, 15625)) == Fraction(16, 25)

    def test_sqrt_of_nonsquare_escapes(self):
        with pytest.raises(ExactnessError):
            parse_expression("sqrt(x)").eval_rational(Fraction(1, 2))

    def test_exp_escapes(self):
        with pytest.raises(ExactnessError):
            parse_expression("exp(x)").eval_rational(Fraction(1, 2))
        assert parse_expression("exp(x)").eval_rational(Fraction(0)) == 1

    def test_ln_escapes(self):
        with pytest.raises(ExactnessError):
            parse_expression("ln(2)").eval_rational(Fraction(0))


class TestDomainErrors:
    def test_non_finite_value(self):
        with pytest.raises(EvalDomainError):
            parse_expression("1/x").evaluate(0.0)

    def test_sqrt_negative(self):
        with pytest.raises(EvalDomainError):
            parse_expression("sqrt(x - 1)").evaluate(0.0)

    def test_ln_nonpositive(self):
        with pytest.raises(EvalDomainError):
            parse_expression("ln(x)").evaluate(0.0)
