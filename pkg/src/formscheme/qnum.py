"""Gaussian binomials in q^2 and the generalised Krawtchouk numbers F^(m)_r(s).

All values are exact Python integers.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache
from typing import List

from .errors import OrthogonalityViolation

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def qbinom2(n: int, j: int, q: int) -> int:
    """[n, j] = prod_{i<j} (q^{2n} - q^{2i}) / (q^{2j} - q^{2i}).

    Zero for j < 0 and for 0 <= n < j. A negative ``n`` is evaluated from
    the product formula and may be a non-integral Fraction.
    """
    if j < 0 or (n >= 0 and j > n):
        return 0
    if n >= 0:
        num = 1
        den = 1
        for i in range(j):
            num *= q ** (2 * n) - q ** (2 * i)
            den *= q ** (2 * j) - q ** (2 * i)
        assert num % den == 0, (n, j, q)
        return num // den
    value = Fraction(1)
    for i in range(j):
        value *= Fraction(q) ** (2 * n) - q ** (2 * i)
        value /= q ** (2 * j) - q ** (2 * i)
    return int(value) if value.denominator == 1 else value


def c_value(m: int, q: int) -> int:
    """c = q^{m(m-1)/(2n)} with n = floor(m/2); 1 when n = 0."""
    n = m // 2
    if n == 0:
        return 1
    num = m * (m - 1)
    assert num % (2 * n) == 0, m
    return q ** (num // (2 * n))


@lru_cache(maxsize=None)
def f_num(m: int, r: int, s: int, q: int) -> int:
    """F^(m)_r(s), zero outside 0 <= r, s <= floor(m/2)."""
    n = m // 2
    if not (0 <= r <= n and 0 <= s <= n):
        return 0
    if n == 0:
        return 1
    c = c_value(m, q)
    total = 0
    for j in range(r + 1):
        t = r - j
        term = q ** (t * (t - 1)) * qbinom2(n - j, n - r, q) * qbinom2(n - s, j, q) * c**j
        total += -term if t % 2 else term
    return total


def f_matrix(m: int, q: int) -> List[List[int]]:
    """T[r][s] = F^(m)_r(s), checked against T T = q^{m(m-1)/2} I."""
    n = m // 2
    table = [[f_num(m, r, s, q) for s in range(n + 1)] for r in range(n + 1)]
    scale = q ** (m * (m - 1) // 2)
    for a in range(n + 1):
        for b in range(n + 1):
            entry = sum(table[a][t] * table[t][b] for t in range(n + 1))
            if entry != (scale if a == b else 0):
                raise OrthogonalityViolation(
                    f"F-number orthogonality fails for m={m}, q={q} at ({a},{b}): {entry}"
                )
    logger.debug("F-number table m=%d q=%d passes orthogonality", m, q)
    return table


def pascal_identities_hold(n: int, k: int, q: int) -> bool:
    """Both q^2-Pascal recurrences for [n, k]."""
    lhs = qbinom2(n, k, q)
    first = q ** (2 * k) * qbinom2(n - 1, k, q) + qbinom2(n - 1, k - 1, q)
    second = qbinom2(n - 1, k, q) + q ** (2 * (n - k)) * qbinom2(n - 1, k - 1, q)
    return lhs == first == second


def transform_identity_holds(m: int, q: int) -> bool:
    """sum_{r<=j} [n-r, n-j] F_r(s) = [n-s, j] c^j for every j and s."""
    n = m // 2
    c = c_value(m, q)
    for j in range(n + 1):
        for s in range(n + 1):
            lhs = sum(qbinom2(n - r, n - j, q) * f_num(m, r, s, q) for r in range(j + 1))
            if lhs != qbinom2(n - s, j, q) * c**j:
                logger.warning("transform identity fails: m=%d q=%d j=%d s=%d", m, q, j, s)
                return False
    return True


def cross_degree_identities_hold(m: int, q: int) -> bool:
    """The two identities linking F^(m+1) with F^(m) and F^(m-1)."""
    if m < 1:
        return True
    for r in range((m + 1) // 2 + 1):
        for s in range(1, (m + 1) // 2 + 1):
            lhs = f_num(m + 1, r, s, q)
            rhs = q ** (2 * r) * f_num(m - 1, r, s - 1, q)
            if r >= 1:
                rhs -= q ** (2 * r - 2) * f_num(m - 1, r - 1, s - 1, q)
            if lhs != rhs:
                logger.warning("first cross-degree identity fails: m=%d r=%d s=%d", m, r, s)
                return False
    for s in range((m + 1) // 2 + 1):
        for r in range(m // 2 + 1):
            lhs = f_num(m + 1, s, r, q)
            rhs = q ** (2 * s) * f_num(m, s, r, q)
            if s >= 1:
                rhs += (q**m - q ** (2 * s - 2)) * f_num(m, s - 1, r, q)
            if lhs != rhs:
                logger.warning("second cross-degree identity fails: m=%d s=%d r=%d", m, s, r)
                return False
    return True
