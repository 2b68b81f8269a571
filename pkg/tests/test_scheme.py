"""Tests for valencies, eigenvalues and the identities they satisfy."""

from fractions import Fraction

import pytest

from formscheme.errors import InadmissibleIndex, InvalidInput, NonIntegralSum
from formscheme.forms import QUAD, SYM, ZERO, OrbitIndex, index_set, upper_length
from formscheme.scheme import (
    beta_split_holds,
    cyclotomic_value,
    eig_tables,
    grouped_sums_hold,
    oracle_mismatches,
    p_grouped_sums_hold,
    p_number,
    q_number,
    recurrences_hold,
    row_sum_law_holds,
    valency,
    valency_table,
)

GRID = [(m, q) for m in range(1, 6) for q in (2, 3, 4, 5)]


class TestValencies:
    """Orbit sizes in closed form."""

    def test_m2_q2(self):
        """Quadratic and symmetric class sizes for m = 2 over F_2."""
        labels = ["0+", "1", "2+", "2-"]
        v = [valency(QUAD, OrbitIndex.parse(s), 2, 2) for s in labels]
        mu = [valency(SYM, OrbitIndex.parse(s), 2, 2) for s in labels]
        assert v == [1, 3, 3, 1]
        assert mu == [1, 3, 1, 3]

    @pytest.mark.parametrize("m,q", GRID)
    def test_valencies_fill_the_space(self, m, q):
        """Both schemes partition all q^(m(m+1)/2) forms."""
        table = valency_table(m, q)
        total = q ** upper_length(m)
        assert sum(table.v.values()) == total
        assert sum(table.mu.values()) == total

    def test_odd_field_alpha_beta(self):
        """alpha = 1/2 and beta_s = q^s / 2 for odd q."""
        table = valency_table(3, 3)
        assert table.alpha == {1: Fraction(1, 2), -1: Fraction(1, 2)}
        assert table.beta[1] == Fraction(3, 2)

    def test_unknown_kind(self):
        """Only quad and sym are schemes."""
        with pytest.raises(InvalidInput):
            valency("hermitian", ZERO, 2, 2)

    def test_rank_too_large(self):
        """Rank 3 does not occur for m = 2."""
        with pytest.raises(InadmissibleIndex):
            valency(QUAD, OrbitIndex(3), 2, 2)


class TestEigenvalues:
    """P and Q tables."""

    def test_q1_at_rank_one(self):
        """Q_1(1) = -1 for m = 2, q = 2."""
        assert q_number(OrbitIndex(1), OrbitIndex(1), 2, 2) == -1

    @pytest.mark.parametrize("q", [2, 3, 5])
    def test_m1_tables(self, q):
        """For m = 1 both tables are [[1, q-1], [1, -1]]."""
        tables = eig_tables(1, q)
        assert tables.P.rows == [[1, q - 1], [1, -1]]
        assert tables.Q.rows == [[1, q - 1], [1, -1]]

    @pytest.mark.parametrize("m,q", [(3, 2), (3, 3), (2, 4), (4, 2)])
    def test_boundary_rows(self, m, q):
        """Q_0 = 1, Q_k(0) = mu_k, P_0 = 1, P_i(0) = v_i."""
        for a in index_set(m):
            assert q_number(ZERO, a, m, q) == 1
            assert q_number(a, ZERO, m, q) == valency(SYM, a, m, q)
            assert p_number(ZERO, a, m, q) == 1
            assert p_number(a, ZERO, m, q) == valency(QUAD, a, m, q)

    @pytest.mark.parametrize("m,q", GRID)
    def test_pq_is_scalar(self, m, q):
        """P Q = q^(m(m+1)/2) I."""
        tables = eig_tables(m, q)
        P, Q = tables.P.rows, tables.Q.rows
        n = len(P)
        total = q ** upper_length(m)
        for a in range(n):
            for b in range(n):
                assert sum(P[a][c] * Q[c][b] for c in range(n)) == (total if a == b else 0)

    @pytest.mark.parametrize("m,q", [(3, 2), (4, 3)])
    def test_p_is_rescaled_q(self, m, q):
        """P_i(k) mu_k = v_i Q_k(i)."""
        for i in index_set(m):
            for k in index_set(m):
                lhs = p_number(i, k, m, q) * valency(SYM, k, m, q)
                assert lhs == valency(QUAD, i, m, q) * q_number(k, i, m, q)

    def test_symmetric_tables_are_swapped(self):
        """The symmetric scheme's P is the quadratic Q and vice versa."""
        tables = eig_tables(3, 3)
        assert tables.P_sym.rows == tables.Q.rows
        assert tables.Q_sym.rows == tables.P.rows
        assert tables.P_sym.kind == SYM

    def test_entry_lookup(self):
        """entry(k, i) reads P_i(k)."""
        tables = eig_tables(2, 3)
        k, i = OrbitIndex(2, -1), OrbitIndex(1)
        assert tables.P.entry(k, i) == p_number(i, k, 2, 3)

    @pytest.mark.parametrize("m,q", [(1, 2), (2, 2), (2, 3), (3, 2)])
    def test_oracle_agrees(self, m, q):
        """Closed forms match the character sums."""
        assert oracle_mismatches(m, q) == []


class TestIdentities:
    """Recurrences and grouped sums of the closed forms."""

    @pytest.mark.parametrize("m,q", GRID)
    def test_row_sum_law(self, m, q):
        """sum_i Q_k(i) v_i vanishes off k = 0."""
        assert row_sum_law_holds(m, q)

    @pytest.mark.parametrize("m,q", [(m, q) for m in range(2, 7) for q in (2, 3, 4)])
    def test_recurrences(self, m, q):
        """Q^(m) from Q^(m-1)."""
        assert recurrences_hold(m, q)

    @pytest.mark.parametrize("m,q", GRID)
    def test_beta_split(self, m, q):
        """beta_r F_r(s) splits over the two types."""
        assert beta_split_holds(m, q)

    @pytest.mark.parametrize("m,q", GRID)
    def test_grouped_sums(self, m, q):
        """Neighbouring-rank sums of Q- and P-numbers reduce to F-numbers."""
        assert grouped_sums_hold(m, q)
        assert p_grouped_sums_hold(m, q)


class TestCyclotomic:
    """Integer values of sums of p-th roots of unity."""

    def test_binary(self):
        """3 - 1 = 2 for p = 2."""
        assert cyclotomic_value([3, 1]) == 2

    def test_balanced_ternary(self):
        """c0 + c1 (omega + omega^2) = c0 - c1."""
        assert cyclotomic_value([1, 2, 2]) == -1

    def test_unbalanced_rejected(self):
        """Unequal nontrivial counts are not rational."""
        with pytest.raises(NonIntegralSum):
            cyclotomic_value([1, 2, 3])
