"""Tests for form sets, distributions, bounds and the duality identities."""

from fractions import Fraction

import numpy as np
import pytest

from formscheme.codesets import (
    FormSet,
    InnerDist,
    aggregate_b,
    annihilator,
    abc_transform_check,
    design_degree,
    dual_dist,
    i_set,
    inner_dist,
    is_additive,
    is_d_code,
    is_elliptic_code,
    is_t_design,
    macwilliams_check,
    random_formset,
    size_bound,
    span_set,
    sporadic_two_code,
    theoretical_inner_dist,
)
from formscheme.construct import build_family, maximal_code, quad_dcode_even_even
from formscheme.errors import DimensionMismatch, InvalidInput, NegativeDual, NotAdditive, UnsupportedCase
from formscheme.forms import QUAD, SYM, ZERO, OrbitIndex, QuadForm, SymForm, index_set
from formscheme.gf import as_field
from formscheme.scheme import valency


def by_label(D) -> dict:
    return {i.label: v for i, v in D.nonzero().items()}


def whole_space(m: int, q: int, kind: str) -> FormSet:
    n = m * (m + 1) // 2
    return span_set(as_field(q), m, kind, np.eye(n, dtype=np.int64))


class TestFormSet:
    """Construction and basic properties."""

    def test_duplicates_removed(self):
        """Repeated rows count once, first occurrence order kept."""
        X = FormSet(as_field(2), 2, QUAD, [[1, 0, 0], [0, 0, 0], [1, 0, 0]])
        assert len(X) == 2
        assert X.rows.tolist() == [[1, 0, 0], [0, 0, 0]]
        assert X.contains_zero()

    def test_empty_rejected(self):
        """A form set needs a member."""
        with pytest.raises(InvalidInput):
            FormSet(as_field(2), 2, QUAD, np.zeros((0, 3), dtype=np.int64))

    def test_false_additive_claim(self):
        """{0, x1^2, x1 x2} is not closed under addition."""
        with pytest.raises(NotAdditive):
            FormSet(as_field(2), 2, QUAD, [[0, 0, 0], [1, 0, 0], [0, 1, 0]], additive=True)

    def test_mixed_kinds_rejected(self):
        """from_forms needs one kind."""
        f = as_field(2)
        with pytest.raises(DimensionMismatch):
            FormSet.from_forms([QuadForm.zero(f, 2), SymForm.zero(f, 2)])

    def test_span_is_additive(self):
        """The whole space is a subgroup of size q^(m(m+1)/2)."""
        X = whole_space(2, 3, SYM)
        assert len(X) == 3**3
        assert is_additive(X)

    def test_span_of_no_generators(self):
        """An empty generator list spans {0}."""
        X = span_set(as_field(2), 2, QUAD, np.zeros((0, 3), dtype=np.int64))
        assert len(X) == 1
        assert X.contains_zero()
        Y = span_set(as_field(4), 2, SYM, [])
        assert len(Y) == 1

    def test_even_even_m_code(self):
        """The maximal 4-code in Q(4,2) has an empty linear part."""
        X = quad_dcode_even_even(4, 4, 2)
        assert len(X) == size_bound(QUAD, 4, 2, 4)
        assert is_d_code(X, 4)

    def test_random_is_seeded(self):
        """Equal seeds give equal sets of distinct forms."""
        a = random_formset(3, 3, QUAD, 20, seed=7)
        b = random_formset(3, 3, QUAD, 20, seed=7)
        assert len(a) == 20
        assert np.array_equal(a.rows, b.rows)

    def test_random_too_large(self):
        """Q(1,2) has only two forms."""
        with pytest.raises(InvalidInput):
            random_formset(2, 1, QUAD, 3)


class TestDistributions:
    """Inner and dual distributions."""

    def test_whole_space(self):
        """The inner distribution of Q(3,2) is its valencies."""
        D = inner_dist(whole_space(3, 2, QUAD))
        assert by_label(D) == {"0+": 1, "1": 7, "2+": 21, "2-": 7, "3": 28}

    def test_whole_space_dual(self):
        """The dual distribution of the whole space sits at 0."""
        Dp = dual_dist(inner_dist(whole_space(3, 2, QUAD)))
        assert Dp.nonzero() == {ZERO: Fraction(64)}

    @pytest.mark.parametrize("kind", [QUAD, SYM])
    def test_single_form_dual(self, kind):
        """A single form has dual distribution equal to the dual valencies."""
        X = FormSet(as_field(3), 2, kind, [[1, 2, 0]])
        Dp = dual_dist(inner_dist(X))
        other = SYM if kind == QUAD else QUAD
        assert all(Dp[k] == valency(other, k, 2, 3) for k in index_set(2))

    def test_negative_dual_detected(self):
        """A distribution no set can have gives a negative dual entry."""
        D = InnerDist(1, 2, QUAD, {ZERO: Fraction(1), OrbitIndex(1): Fraction(5)})
        with pytest.raises(NegativeDual):
            dual_dist(D)

    def test_i_set(self):
        """I_2 for m = 3."""
        assert [i.label for i in i_set(2, 3)] == ["1", "2+", "2-"]

    @pytest.mark.parametrize("kind", [QUAD, SYM])
    def test_grouped_transforms_on_random_sets(self, kind):
        """The grouped transforms hold for arbitrary sets."""
        assert abc_transform_check(random_formset(2, 3, kind, 12, seed=1))


class TestTheory:
    """Inner distributions of maximal codes from parameters alone."""

    def test_odd_odd_values(self):
        """(m, d, q) = (3, 3, 2), (5, 5, 2) and (5, 3, 2)."""
        assert by_label(theoretical_inner_dist("quad-odd-m-odd-d", 3, 2, 3)) == {"0+": 1, "3": 7}
        assert by_label(theoretical_inner_dist("quad-odd-m-odd-d", 5, 2, 5)) == {"0+": 1, "5": 31}
        D = theoretical_inner_dist("quad-odd-m-odd-d", 5, 2, 3)
        assert by_label(D) == {"0+": 1, "3": 155, "4+": 310, "4-": 186, "5": 372}
        assert D.size == 1024

    def test_even_odd_values(self):
        """(m, d, q) = (6, 3, 2)."""
        D = theoretical_inner_dist("quad-even-m-odd-d", 6, 2, 3)
        assert by_label(D) == {
            "0+": 1, "3": 315, "4+": 1470, "4-": 882, "5": 6804, "6+": 3888, "6-": 3024,
        }

    def test_elliptic_values(self):
        """Elliptic codes for m = 4 and m = 6 over F_2."""
        assert by_label(theoretical_inner_dist("elliptic", 4, 2, 4)) == {"0+": 1, "4-": 3}
        D = theoretical_inner_dist("elliptic", 4, 2, 2)
        assert by_label(D) == {"0+": 1, "2-": 5, "3": 30, "4+": 25, "4-": 3}
        D = theoretical_inner_dist("elliptic", 6, 2, 4)
        assert by_label(D) == {"0+": 1, "4-": 63, "5": 252, "6+": 189, "6-": 7}

    def test_partial_values(self):
        """Only B_s is determined for q and d even."""
        assert theoretical_inner_dist("quad-even-q-even-d-partial", 4, 2, 2).values == {0: 1, 1: 35, 2: 28}
        assert theoretical_inner_dist("quad-even-q-even-d-partial", 4, 2, 4).values == {0: 1, 1: 0, 2: 7}
        assert theoretical_inner_dist("quad-even-q-even-d-partial", 2, 2, 2).values == {0: 1, 1: 1}

    def test_parity_checked(self):
        """Each case rejects parameters of the wrong parity."""
        with pytest.raises(UnsupportedCase):
            theoretical_inner_dist("quad-odd-m-odd-d", 4, 2, 3)
        with pytest.raises(UnsupportedCase):
            theoretical_inner_dist("quad-even-q-even-d-partial", 4, 3, 2)
        with pytest.raises(UnsupportedCase):
            theoretical_inner_dist("hermitian", 3, 2, 3)

    @pytest.mark.parametrize("m,d,q", [(3, 3, 2), (3, 1, 2), (5, 3, 2), (3, 3, 3), (4, 3, 2)])
    def test_theory_matches_construction(self, m, d, q):
        """A constructed maximal code has the predicted distribution and design strength."""
        case = "quad-odd-m-odd-d" if m % 2 else "quad-even-m-odd-d"
        X = maximal_code(QUAD, m, d, q)
        assert inner_dist(X).as_list() == theoretical_inner_dist(case, m, q, d).as_list()
        assert is_t_design(X, design_degree(m, d))

    @pytest.mark.parametrize("m,d", [(4, 2), (4, 4), (2, 2)])
    def test_elliptic_construction(self, m, d):
        """Elliptic codes match theory and avoid hyperbolic rank-d differences."""
        X = maximal_code(QUAD, m, d, 2, elliptic=True)
        assert inner_dist(X).as_list() == theoretical_inner_dist("elliptic", m, 2, d).as_list()
        assert is_elliptic_code(X, d)
        assert is_t_design(X, design_degree(m, d, elliptic=True))

    def test_partial_construction(self):
        """The even-even construction has the predicted B_s."""
        X = quad_dcode_even_even(4, 2, 2)
        want = theoretical_inner_dist("quad-even-q-even-d-partial", 4, 2, 2)
        assert aggregate_b(inner_dist(X)).values == want.values


class TestBounds:
    """Size bounds and design degrees."""

    def test_size_bounds(self):
        """Known values over F_2."""
        assert size_bound(QUAD, 3, 2, 3) == 8
        assert size_bound(SYM, 3, 2, 3) == 8
        assert size_bound(QUAD, 4, 2, 4, "elliptic") == 4
        assert size_bound(SYM, 3, 2, 2, "additive") == 16
        assert size_bound(QUAD, 6, 2, 3) == 2**14

    def test_even_d_refused(self):
        """No general bound for even d in S(m, q)."""
        with pytest.raises(UnsupportedCase):
            size_bound(SYM, 3, 2, 2)

    def test_out_of_range(self):
        """d must lie in 1..m."""
        with pytest.raises(UnsupportedCase):
            size_bound(QUAD, 3, 2, 4)

    def test_design_degrees(self):
        """t for odd d, and m - d + 1 for elliptic codes."""
        assert design_degree(5, 3) == 4
        assert design_degree(4, 3) == 2
        assert design_degree(5, 5) == 2
        assert design_degree(4, 2, elliptic=True) == 3
        with pytest.raises(UnsupportedCase):
            design_degree(4, 2)


class TestSporadic:
    """A non-additive 2-code in S(3,2) above the additive bound."""

    def test_sporadic_code(self):
        """22 forms, minimum rank 2, more than 16."""
        X = sporadic_two_code()
        assert len(X) == 22
        assert is_d_code(X, 2)
        assert not is_additive(X)
        assert len(X) > size_bound(SYM, 3, 2, 2, "additive")


class TestDuality:
    """Annihilators and the MacWilliams identity."""

    def test_annihilator_size(self):
        """|X| |X°| = q^(m(m+1)/2) and the annihilator is bilinear."""
        X = maximal_code(QUAD, 3, 3, 2)
        ann = annihilator(X)
        assert len(X) * len(ann) == 64
        assert ann.kind == SYM

    @pytest.mark.parametrize("m,d,q", [(3, 3, 2), (3, 3, 3), (5, 3, 2), (5, 5, 2)])
    def test_annihilator_is_maximal_bilinear_code(self, m, d, q):
        """The annihilator of a maximal odd-odd d-code is a maximal (m-d+3)-code in S(m,q)."""
        ann = annihilator(maximal_code(QUAD, m, d, q))
        assert ann.kind == SYM
        assert len(ann) == size_bound(SYM, m, q, m - d + 3)
        assert is_d_code(ann, m - d + 3)

    def test_annihilator_needs_additive(self):
        """Only subgroups have an annihilator here."""
        with pytest.raises(NotAdditive):
            annihilator(sporadic_two_code())

    @pytest.mark.parametrize("family,m,d,q", [("quad-oo", 3, 3, 2), ("quad-oo", 3, 1, 3), ("sym", 3, 3, 2), ("sym", 3, 1, 3)])
    def test_macwilliams(self, family, m, d, q):
        """|X| a° = a' and the grouped transforms for additive codes."""
        X = build_family(family, m, d, q)
        assert macwilliams_check(X)
        assert abc_transform_check(X)

    def test_annihilator_of_whole_space(self):
        """The annihilator of everything is {0}."""
        ann = annihilator(whole_space(2, 2, SYM))
        assert len(ann) == 1
        assert ann.contains_zero()
