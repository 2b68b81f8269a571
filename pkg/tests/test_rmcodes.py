"""Tests for coset enumerators and the codes C(Y)."""

from fractions import Fraction
from math import comb

import numpy as np
import pytest

from formscheme.codesets import FormSet
from formscheme.construct import quad_dcode_even_even, quad_dcode_odd_odd, sym_dcode
from formscheme.errors import DegenerateY, InvalidInput, UnsupportedCase
from formscheme.forms import QUAD, OrbitIndex, canonical_form, index_set
from formscheme.gf import as_field
from formscheme.rmcodes import (
    ClassicalCode,
    WeightEnumerator,
    code_length,
    coset_enum_brute,
    designed_distance,
    designed_distance_even,
    dist_enum_brute,
    dist_enum_theory,
    min_distance,
    omega,
    rm1_star,
    rm2_star_enum,
)


class TestWeightEnumerator:
    """Sparse exact polynomials."""

    def test_addition(self):
        """Counts add weight by weight."""
        a = WeightEnumerator(3, {0: 1, 2: 3})
        b = WeightEnumerator(3, {2: 1, 3: 1})
        assert (a + b).counts == {0: 1, 2: 4, 3: 1}

    def test_length_mismatch(self):
        """Enumerators of different lengths do not add."""
        with pytest.raises(InvalidInput):
            WeightEnumerator(3) + WeightEnumerator(4)

    def test_weight_out_of_range(self):
        """Weights lie in 0..length."""
        with pytest.raises(InvalidInput):
            WeightEnumerator(3, {4: 1})

    def test_zero_counts_dropped(self):
        """Zero terms vanish and the rest are sorted."""
        E = WeightEnumerator(5, {3: 2, 1: 0, 0: 1})
        assert E.weights() == [0, 3]
        assert E.min_weight() == 3
        assert str(E) == "1 + 2z^3"

    def test_scale(self):
        """Scaling by a rational keeps exact counts."""
        E = WeightEnumerator(2, {0: 1, 2: 3}).scale(Fraction(1, 2))
        assert E.counts == {0: Fraction(1, 2), 2: Fraction(3, 2)}
        assert not E.is_integral()
        assert E.size == 2

    def test_zero_code_has_no_min_weight(self):
        """Only weight 0 present."""
        assert WeightEnumerator(4, {0: 1}).min_weight() is None


class TestCosets:
    """Enumerators of Q + R_q(1,m)*."""

    def test_code_length(self):
        """Codes have length q^m - 1."""
        assert code_length(3, 2) == 7
        assert code_length(2, 3) == 8

    def test_rm1_star_size(self):
        """R_q(1,m)* has q^(m+1) words of length q^m - 1."""
        assert rm1_star(3, 2).shape == (16, 7)
        assert rm1_star(2, 3).shape == (27, 8)

    def test_omega_m3_q2(self):
        """The zero coset and the rank-3 coset of R_2(1,3)*."""
        assert omega(OrbitIndex(0, 1), 3, 2).counts == {0: 1, 3: 7, 4: 7, 7: 1}
        assert omega(OrbitIndex(3), 3, 2).counts == {1: 1, 2: 3, 3: 4, 4: 4, 5: 3, 6: 1}

    @pytest.mark.parametrize("m,q", [(m, q) for m in range(1, 6) for q in (2, 3, 4)])
    def test_omega_sizes(self, m, q):
        """Every coset has q^(m+1) words."""
        for i in index_set(m):
            assert omega(i, m, q).size == q ** (m + 1)

    @pytest.mark.parametrize("m,q", [(1, 2), (2, 2), (3, 2), (1, 3), (2, 3), (2, 4)])
    def test_omega_matches_brute(self, m, q):
        """Closed-form coset enumerators agree with evaluation."""
        for i in index_set(m):
            assert coset_enum_brute(canonical_form(i, m, QUAD, q)) == omega(i, m, q)


class TestClassicalCode:
    """C(Y) and its distance enumerator."""

    def test_headline_code(self):
        """Y = maximal 5-code in Q(5,2): a [31, 2048] code of minimum distance 11."""
        C = ClassicalCode(quad_dcode_odd_odd(5, 5, 2))
        assert (C.length, C.size) == (31, 2048)
        want = {0: 1, 11: 186, 12: 310, 15: 527, 16: 527, 19: 310, 20: 186, 31: 1}
        assert dist_enum_theory(C.Y).counts == want
        assert dist_enum_brute(C).counts == want
        assert min_distance(C) == designed_distance(5, 2, 2) == 11

    def test_whole_space(self):
        """Y = maximal 3-code in Q(3,2) gives every word of length 7."""
        C = ClassicalCode(quad_dcode_odd_odd(3, 3, 2))
        assert dist_enum_theory(C.Y).counts == {w: comb(7, w) for w in range(8)}
        words = C.codewords()
        assert words.shape == (128, 7)
        assert len({tuple(w) for w in words.tolist()}) == 128

    def test_non_additive_code(self):
        """Theory and pairwise census agree for the even-even construction."""
        C = ClassicalCode(quad_dcode_even_even(4, 4, 2))
        assert not C.additive
        assert dist_enum_theory(C.Y) == dist_enum_brute(C)
        assert min_distance(C) == designed_distance_even(4, 2, 2) == 5

    def test_odd_field(self):
        """Theory and census agree over F_3."""
        C = ClassicalCode(quad_dcode_odd_odd(3, 3, 3))
        assert dist_enum_theory(C.Y) == dist_enum_brute(C)

    def test_rank_one_rejected_over_f2(self):
        """x1^2 is affine over F_2."""
        Y = FormSet(as_field(2), 3, QUAD, [[0, 0, 0, 0, 0, 0], [1, 0, 0, 0, 0, 0]])
        with pytest.raises(DegenerateY):
            ClassicalCode(Y)

    def test_repeated_coset_rejected_over_f2(self):
        """Members differing by (x1 + x2)^2 share a coset over F_2."""
        Y = FormSet(as_field(2), 3, QUAD, [[0, 1, 0, 0, 0, 0], [1, 1, 0, 1, 0, 0]])
        with pytest.raises(DegenerateY, match="coset"):
            ClassicalCode(Y)

    def test_same_pattern_accepted_over_f3(self):
        """Over F_3 a rank-1 difference is not affine, so the cosets stay apart."""
        Y = FormSet(as_field(3), 3, QUAD, [[0, 1, 0, 0, 0, 0], [1, 1, 0, 1, 0, 0]])
        C = ClassicalCode(Y)
        assert C.size == 3**4 * 2
        assert len(np.unique(C.codewords(), axis=0)) == C.size

    def test_bilinear_rejected(self):
        """Only quadratic forms index cosets."""
        with pytest.raises(InvalidInput):
            ClassicalCode(sym_dcode(3, 3, 2))

    def test_rm2_star(self):
        """R_2(2,3)* is all of F_2^7; R_3(2,2)* has 3^6 words."""
        assert rm2_star_enum(3, 2).counts == {w: comb(7, w) for w in range(8)}
        assert rm2_star_enum(2, 3).size == 3**6


class TestDesignedDistance:
    """Closed-form minimum distances."""

    def test_values(self):
        """Known values."""
        assert designed_distance(5, 2, 2) == 11
        assert designed_distance(4, 3, 2) == 50
        assert designed_distance_even(4, 2, 2) == 5

    def test_delta_range(self):
        """delta runs over 1..floor(m/2)."""
        assert designed_distance(3, 2, 1) == 1
        with pytest.raises(InvalidInput):
            designed_distance(4, 2, 3)
        with pytest.raises(InvalidInput):
            designed_distance(3, 2, 2)
        with pytest.raises(InvalidInput):
            designed_distance(1, 2, 1)
        with pytest.raises(InvalidInput):
            designed_distance(5, 2, 0)

    def test_even_needs_even_parameters(self):
        """The even version needs m and q even."""
        with pytest.raises(UnsupportedCase):
            designed_distance_even(5, 2, 1)
