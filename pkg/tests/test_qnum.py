"""Tests for q^2-binomials and generalised Krawtchouk numbers."""

import pytest

from formscheme.qnum import (
    c_value,
    cross_degree_identities_hold,
    f_matrix,
    f_num,
    pascal_identities_hold,
    qbinom2,
    transform_identity_holds,
)


class TestGaussianBinomial:
    """[n, j] in q^2."""

    def test_small_values(self):
        """[2, 1] = (q^4 - 1)/(q^2 - 1) = q^2 + 1."""
        assert qbinom2(2, 1, 2) == 5
        assert qbinom2(2, 1, 3) == 10

    def test_edges(self):
        """[n, 0] = [n, n] = 1 and [n, j] = 0 for j > n or j < 0."""
        assert qbinom2(4, 0, 2) == 1
        assert qbinom2(4, 4, 3) == 1
        assert qbinom2(1, 2, 2) == 0
        assert qbinom2(3, -1, 2) == 0

    @pytest.mark.parametrize("q", [2, 3, 4])
    def test_pascal_identities(self, q):
        """Both recurrences hold for n <= 12."""
        assert all(pascal_identities_hold(n, k, q) for n in range(1, 13) for k in range(n + 1))


class TestFNumbers:
    """F^(m)_r(s)."""

    def test_c_value(self):
        """c = q^(m(m-1)/(2n))."""
        assert c_value(4, 2) == 8
        assert c_value(3, 2) == 8
        assert c_value(1, 5) == 1

    def test_table_m4_q2(self):
        """The F-number table for m = 4, q = 2."""
        assert f_matrix(4, 2) == [[1, 1, 1], [35, 3, -5], [28, -4, 4]]

    def test_first_row_is_ones(self):
        """F_0(s) = 1."""
        assert all(f_num(6, 0, s, 3) == 1 for s in range(4))

    def test_outside_range_is_zero(self):
        """Indices beyond floor(m/2) give 0."""
        assert f_num(4, 3, 0, 2) == 0
        assert f_num(4, 0, -1, 2) == 0

    @pytest.mark.parametrize("q", [2, 3, 4])
    @pytest.mark.parametrize("m", range(1, 9))
    def test_orthogonality(self, m, q):
        """F F = q^(m(m-1)/2) I (f_matrix raises otherwise)."""
        assert len(f_matrix(m, q)) == m // 2 + 1

    @pytest.mark.parametrize("q", [2, 3, 4])
    @pytest.mark.parametrize("m", range(1, 8))
    def test_transform_identity(self, m, q):
        """The binomial transform of F is [n-s, j] c^j."""
        assert transform_identity_holds(m, q)

    @pytest.mark.parametrize("q", [2, 3])
    @pytest.mark.parametrize("m", range(1, 7))
    def test_cross_degree_identities(self, m, q):
        """F^(m+1) from F^(m) and F^(m-1)."""
        assert cross_degree_identities_hold(m, q)
