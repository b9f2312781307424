import math

import pytest
from hypothesis import given, strategies as st

from lorenz_entropy import SymbolWord, WordOrder, coding_map, lex_compare, metric_d, shift

words = st.builds(SymbolWord.from_bits, st.lists(st.integers(0, 1), max_size=40))
eq_len_pairs = st.integers(1, 32).flatmap(
    lambda n: st.tuples(
        *[st.builds(SymbolWord.from_bits, st.lists(st.integers(0, 1), min_size=n, max_size=n))] * 3
    )
)


def W(text):
    return SymbolWord.from_string(text)


class TestSymbolWord:
    def test_roundtrip_serialization(self):
        assert W("01101").to_string() == "01101"
        assert str(W("0")) == "0"
        assert len(W("")) == 0

    def test_rejects_non_binary(self):
        with pytest.raises(ValueError):
            SymbolWord(b"\x02")
        with pytest.raises(ValueError):
            SymbolWord.from_string("012")

    def test_prefix_int(self):
        assert W("101").prefix_int(3) == 5
        assert W("0011").prefix_int(2) == 0


class TestLexCompare:
    def test_first_symbol_decides(self):
        assert lex_compare(W("01111"), W("10000")) is WordOrder.LESS

    def test_identical_words(self):
        u = W("0101")
        assert lex_compare(u, u) is WordOrder.EQUAL_PREFIX

    def test_prefix_relation(self):
        assert lex_compare(W("110"), W("1101")) is WordOrder.EQUAL_PREFIX

    def test_antisymmetry(self):
        assert lex_compare(W("10000"), W("01111")) is WordOrder.GREATER


class TestMetric:
    def test_equal_strings(self):
        assert metric_d(W("00000"), W("00000")) == 0.0

    def test_difference_at_index_one(self):
        assert metric_d(W("01111"), W("00111")) == 0.5

    def test_difference_at_index_zero(self):
        # index 0 participates, so distinct words always separate
        assert metric_d(W("01111"), W("11111")) == 1.0

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            metric_d(W("01"), W("011"))

    @given(eq_len_pairs)
    def test_ultrametric(self, triple):
        u, v, w = triple
        assert metric_d(u, v) <= max(metric_d(u, w), metric_d(w, v)) + 1e-18

    @given(eq_len_pairs)
    def test_order_metric_compatibility(self, triple):
        # words closer to u than v is cannot jump past v
        u, v, w = triple
        if (
            lex_compare(u, v) is WordOrder.LESS
            and lex_compare(u, w) is WordOrder.LESS
            and metric_d(u, w) < metric_d(u, v)
        ):
            assert lex_compare(w, v) is WordOrder.LESS


class TestShift:
    def test_drops_head(self):
        assert shift(W("10000")).to_string() == "0000"

    def test_single_symbol(self):
        assert len(shift(W("1"))) == 0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            shift(W(""))

    @given(words, st.integers(0, 10))
    def test_iterated_length(self, u, k):
        k = min(k, len(u))
        w = u
        for _ in range(k):
            w = shift(w)
        assert len(w) == len(u) - k


class TestCodingMap:
    def test_all_zeros(self):
        assert coding_map(1.5, SymbolWord.zeros(12)).value == 0.0

    def test_all_ones_geometric(self):
        a, n = 1.7, 20
        val = coding_map(a, SymbolWord.ones(n)).value
        assert val == pytest.approx(1.0 - a**-n, abs=1e-12)

    def test_one_then_zeros_is_exactly_one_minus_inverse(self):
        a = 1.3
        w = SymbolWord.from_bits([1] + [0] * 9)
        assert coding_map(a, w).value == 1.0 - 1.0 / a

    def test_tail_bound_exposed(self):
        a, n = 1.5, 10
        cv = coding_map(a, SymbolWord.ones(n))
        assert cv.tail_bound == pytest.approx(a ** -(n - 1))

    def test_domain_check(self):
        for a in (0.5, 1.0, 2.0, 2.5):
            with pytest.raises(ValueError):
                coding_map(a, W("01"))

    @given(st.integers(2, 24), st.floats(1.05, 1.95))
    def test_monotone_on_zero_one_padded_extremes(self, n, a):
        # u0..0 < u1..1 strictly once the words differ
        base = [0, 1] * (n // 2) + [0] * (n % 2)
        lo = coding_map(a, SymbolWord.from_bits(base + [0] * 6)).value
        hi = coding_map(a, SymbolWord.from_bits(base + [1] * 6)).value
        assert lo < hi
