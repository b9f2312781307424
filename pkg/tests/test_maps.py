import json
import math
from fractions import Fraction

import pytest

from lorenz_entropy import (
    AdmissiblePair,
    LorenzMapSpec,
    Orientation,
    SymbolWord,
    WordOrder,
    eval_map,
    eval_uniform,
    itinerary,
    lex_compare,
    load_map_spec,
    validate_lorenz,
)
from lorenz_entropy.expressions import EvalDomainError


class TestAdmissiblePair:
    def test_interior_pair(self):
        AdmissiblePair(1.5, 0.5)

    def test_boundary_pairs_accepted(self):
        a = math.sqrt(2.0)
        AdmissiblePair(a, 1.0 / a)
        AdmissiblePair(a, 1.0 - 1.0 / a)

    def test_out_of_band_rejected(self):
        with pytest.raises(ValueError):
            AdmissiblePair(1.5, 0.1)  # below 1 - 1/a = 1/3
        with pytest.raises(ValueError):
            AdmissiblePair(1.5, 0.9)
        with pytest.raises(ValueError):
            AdmissiblePair(2.5, 0.5)


class TestEvalUniform:
    def test_zero_fixed(self):
        assert eval_uniform(AdmissiblePair(1.5, 0.5), Orientation.UPPER, 0.0) == 0.0

    def test_lower_left_branch_at_p(self):
        pair = AdmissiblePair(1.5, 0.5)
        assert eval_uniform(pair, Orientation.LOWER, 0.5) == 0.75

    def test_upper_right_branch_at_p(self):
        pair = AdmissiblePair(1.5, 0.5)
        assert eval_uniform(pair, Orientation.UPPER, 0.5) == pytest.approx(0.25)


class TestEvalMap:
    def test_branch_rule_at_q(self, markov_map):
        # the upper map hands q to the second branch
        b = 1.25**-6
        b = (b - 1) / (1.25**-2 - 1)
        want = b * 0.64 + 1 - b
        assert eval_map(markov_map, 0.64, Orientation.UPPER) == pytest.approx(want)

    def test_endpoints_fixed(self, markov_map):
        assert eval_map(markov_map, 0.0, Orientation.UPPER) == 0.0
        assert eval_map(markov_map, 1.0, Orientation.UPPER) == 1.0

    def test_escape_rejected(self):
        spec = LorenzMapSpec.from_strings("1.25*x", "x", "0.5")
        with pytest.raises(EvalDomainError):
            # f1(1) = 1 is fine but f0 pushed beyond via a synthetic call
            eval_map(
                LorenzMapSpec.from_strings("4*x", "x", "0.5"), 0.4, Orientation.UPPER
            )


class TestItinerary:
    def test_affine_orbit_by_hand(self):
        # 0.25 -> 0.375 -> 0.5625 -> 0.34375 under U+_{1.5,1/2}
        w = itinerary(AdmissiblePair(1.5, 0.5), 0.25, 4, Orientation.UPPER)
        assert w.to_string() == "0010"

    def test_boundary_lower_orbit_is_0_then_ones(self):
        a = math.sqrt(2.0)
        pair = AdmissiblePair(a, 1.0 / a)
        w = itinerary(pair, 1.0 / a, 12, Orientation.LOWER)
        assert w.to_string() == "0" + "1" * 11

    def test_boundary_upper_orbit_is_1_then_zeros(self):
        a = 1.7
        pair = AdmissiblePair(a, 1.0 - 1.0 / a)
        w = itinerary(pair, 1.0 - 1.0 / a, 12, Orientation.UPPER)
        assert w.to_string() == "1" + "0" * 11

    def test_head_rule(self, sqrt2_half):
        assert itinerary(sqrt2_half, 0.3, 5, Orientation.UPPER)[0] == 0
        assert itinerary(sqrt2_half, 0.7, 5, Orientation.UPPER)[0] == 1
        assert itinerary(sqrt2_half, 0.5, 5, Orientation.UPPER)[0] == 1
        assert itinerary(sqrt2_half, 0.5, 5, Orientation.LOWER)[0] == 0

    def test_monotone_in_x(self, sqrt2_half):
        # increasing x never produces a lexicographically smaller word
        n = 24
        xs = [i / 97.0 for i in range(98)]
        prev = None
        for x in xs:
            w = itinerary(sqrt2_half, x, n, Orientation.UPPER)
            if prev is not None:
                assert lex_compare(prev, w) is not WordOrder.GREATER
            prev = w

    def test_monotone_in_p(self):
        a = 1.6
        n = 24
        prev = None
        for i in range(40):
            p = (1 - 1 / a) + (2 / a - 1) * i / 39.0
            w = itinerary(AdmissiblePair(a, p), p, n, Orientation.UPPER)
            if prev is not None:
                assert lex_compare(prev, w) is not WordOrder.GREATER
            prev = w

    def test_uniform_rational_exactness(self):
        # rational a, p: symbols agree with the exact affine recursion, even
        # when the orbit lands exactly on p (x=1/3 reaches 1/2 in one step)
        pair = AdmissiblePair(1.5, 0.5)
        for x0 in (Fraction(1, 3), Fraction(3, 10)):
            word = itinerary(pair, x0, 30, Orientation.UPPER)
            y = x0
            for k in range(30):
                sym = 0 if y < Fraction(1, 2) else 1
                assert word[k] == sym, (x0, k)
                y = Fraction(3, 2) * y + (0 if sym == 0 else Fraction(-1, 2))

    def test_uniform_float_composition_matches_closed_form(self):
        # k-fold eval agrees with a^k x plus the accumulated affine offsets
        pair = AdmissiblePair(1.5, 0.5)
        x = 0.3
        offset = 0.0
        scale = 1.0
        y = x
        for k in range(1, 25):
            sym = 0 if y < 0.5 else 1
            if sym == 1:
                offset = 1.5 * offset + (1.0 - 1.5)
            else:
                offset = 1.5 * offset
            scale *= 1.5
            y = eval_uniform(pair, Orientation.UPPER, y)
            assert y == pytest.approx(scale * x + offset, abs=k * 1e-15 * scale)


class TestValidation:
    def test_markov_map_passes_all_conditions(self, markov_map):
        rep = validate_lorenz(markov_map, grid_size=4000)
        assert rep.ok, rep.summary()
        # the square-root branch is not one-step expanding near q, so the
        # check must have gone through orbit products
        assert rep.expansivity_constant < 1.0
        assert rep.expansivity_order > 1

    def test_exp_map_passes_with_one_step_constant(self, slow_exp_map):
        rep = validate_lorenz(slow_exp_map, grid_size=2000)
        assert rep.ok, rep.summary()
        assert rep.expansivity_constant == pytest.approx(1.001, abs=1e-3)

    def test_contraction_branch_fails_expansivity(self):
        spec = LorenzMapSpec.from_strings("x/2", "3.5*x - 2.5", "0.8")
        rep = validate_lorenz(spec, grid_size=500)
        assert not rep.conditions["expansive"]
        assert rep.structural_ok  # everything else is fine
        assert not rep.ok

    def test_branch_order_violation_fails(self):
        # f0(q) = 0.6 < f1(q) = 0.8 breaks the required ordering at q
        spec = LorenzMapSpec.from_strings("1.2*x", "0.4*x + 0.6", "0.5")
        rep = validate_lorenz(spec, grid_size=500)
        assert not rep.conditions["branch_order"]
        assert not rep.structural_ok

    def test_degenerate_pair_rejected(self):
        spec = LorenzMapSpec.from_strings("2*x", "2*x - 1", "0.5")
        rep = validate_lorenz(spec, grid_size=500)
        assert not rep.conditions["branch_order"]
        assert not rep.structural_ok


class TestMapSpecIO:
    def test_json_roundtrip(self, tmp_path):
        path = tmp_path / "map.json"
        path.write_text(
            json.dumps(
                {"f0": "1.25*sqrt(x)", "f1": "2.0496*x - 1.0496", "q": 0.64,
                 "orientation": "upper"}
            )
        )
        spec = load_map_spec(str(path))
        assert isinstance(spec, LorenzMapSpec)
        # decimal q must be exact: 0.64 the rational, not the double
        assert spec.q_exact == Fraction(16, 25)

    def test_uniform_block(self, tmp_path):
        path = tmp_path / "map.json"
        path.write_text(json.dumps({"uniform": {"a": 1.5, "p": 0.5}}))
        pair = load_map_spec(str(path))
        assert pair == AdmissiblePair(1.5, 0.5)

    def test_missing_field(self):
        with pytest.raises(ValueError):
            load_map_spec({"f0": "x"})
