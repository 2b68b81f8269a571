"""Valencies and eigenvalue tables of the schemes on quadratic and symmetric
bilinear forms.

Closed forms come from F-numbers; the oracles evaluate the defining
character sums over a full census of the dual space. Tables use the fixed
order of ``forms.index_set``: ``P.rows[k][i] = P_i(k)`` and
``Q.rows[i][k] = Q_k(i)``, so that P Q = q^{m(m+1)/2} I.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from .errors import EigenConsistencyViolation, InvalidInput, NonIntegralSum
from .forms import (
    KINDS,
    QUAD,
    SYM,
    ZERO,
    OrbitIndex,
    canonical_form,
    census,
    index_set,
    pairing_matrix,
    upper_length,
)
from .gf import as_field
from .qnum import f_num

logger = logging.getLogger(__name__)


def alpha(eps: int, q: int) -> Fraction:
    if q % 2 == 0:
        return Fraction(1 - eps, 2)
    return Fraction(1, 2)


def beta(s: int, q: int) -> Fraction:
    if q % 2 == 0:
        return Fraction(1)
    return Fraction(q**s, 2)


def _as_int(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise EigenConsistencyViolation(f"{what} evaluated to non-integer {value}")
    return value.numerator


def _q_of(q) -> int:
    return as_field(q).q


@lru_cache(maxsize=None)
def _valency(kind: str, i: OrbitIndex, m: int, q: int) -> int:
    if i == ZERO:
        return 1
    s = i.s
    den = 1
    for t in range(s):
        den *= q ** (2 * s) - q ** (2 * t)
    if i.is_odd:
        num = 1
        for t in range(2 * s + 1):
            num *= q**m - q**t
        return _as_int(Fraction(num, q**s * den), f"valency of {i}")
    num = 1
    for t in range(2 * s):
        num *= q**m - q**t
    tau = i.tau
    if kind == QUAD:
        weight = Fraction(q**s + tau, 2)
    else:
        weight = alpha(tau, q) * q**s + tau * beta(s, q) / q**s
    return _as_int(weight * num / den, f"valency of {i}")


def valency(kind: str, i: OrbitIndex, m: int, q) -> int:
    """v_i (quadratic) or mu_i (symmetric): the size of orbit i."""
    if kind not in KINDS:
        raise InvalidInput(f"unknown form kind {kind!r}")
    i.check(m)
    return _valency(kind, i, m, _q_of(q))


@dataclass
class ValencyTable:
    """Valencies of both schemes.

    Attributes:
        m: Dimension.
        q: Field order.
        v: Quadratic-form orbit sizes.
        mu: Symmetric-form orbit sizes.
        alpha: alpha_eps for eps = +1, -1.
        beta: beta_s for s = 0..floor(m/2).
    """

    m: int
    q: int
    v: Dict[OrbitIndex, int] = dc_field(default_factory=dict)
    mu: Dict[OrbitIndex, int] = dc_field(default_factory=dict)
    alpha: Dict[int, Fraction] = dc_field(default_factory=dict)
    beta: Dict[int, Fraction] = dc_field(default_factory=dict)


def valency_table(m: int, q) -> ValencyTable:
    q = _q_of(q)
    table = ValencyTable(m, q)
    for i in index_set(m):
        table.v[i] = valency(QUAD, i, m, q)
        table.mu[i] = valency(SYM, i, m, q)
    table.alpha = {eps: alpha(eps, q) for eps in (1, -1)}
    table.beta = {s: beta(s, q) for s in range(m // 2 + 1)}
    total = q ** upper_length(m)
    if sum(table.v.values()) != total or sum(table.mu.values()) != total:
        raise EigenConsistencyViolation(f"valencies for m={m}, q={q} do not sum to {total}")
    return table


# ---------------------------------------------------------------------------
# Closed forms


@lru_cache(maxsize=None)
def _q_number(k: OrbitIndex, i: OrbitIndex, m: int, q: int) -> int:
    if k.rank > m or i.rank > m:
        return 0
    if k == ZERO:
        return 1
    if i == ZERO:
        return _valency(SYM, k, m, q)
    r, s = k.s, i.s

    def F(mm: int, a: int, b: int) -> int:
        return f_num(mm, a, b, q)

    if k.is_odd:
        if i.is_odd:
            return -(q ** (2 * r)) * F(m - 1, r, s)
        return -(q ** (2 * r)) * F(m - 1, r, s - 1) + i.tau * q ** (m - s + 2 * r) * F(m - 2, r, s - 1)
    eps = k.tau
    if i.is_odd:
        value = alpha(eps, q) * q ** (2 * r) * F(m - 1, r, s) + eps * beta(r, q) * F(m, r, s)
    else:
        inner = q ** (2 * r) * F(m - 1, r, s - 1) - i.tau * q ** (m - s + 2 * r - 2) * F(m - 2, r - 1, s - 1)
        value = alpha(eps, q) * inner + eps * beta(r, q) * F(m, r, s)
    return _as_int(value, f"Q_{k}({i})")


def q_number(k: OrbitIndex, i: OrbitIndex, m: int, q) -> int:
    """Q_k(i) of the quadratic-form scheme; 0 when either class is empty."""
    return _q_number(k, i, m, _q_of(q))


@lru_cache(maxsize=None)
def _p_number(i: OrbitIndex, k: OrbitIndex, m: int, q: int) -> int:
    if k.rank > m or i.rank > m:
        return 0
    if i == ZERO:
        return 1
    if k == ZERO:
        return _valency(QUAD, i, m, q)
    if q % 2:
        # self-dual: P_i(k) = Q_i(k)
        value = _q_number(i, k, m, q)
    else:
        s, r = i.s, k.s

        def F(mm: int, a: int, b: int) -> int:
            return f_num(mm, a, b, q)

        if i.is_odd:
            if k.is_odd:
                value = -(q ** (2 * s)) * F(m - 1, s, r)
            elif k.tau == 1:
                value = (q**m - q ** (2 * s)) * F(m, s, r)
            else:
                value = -(q ** (2 * s)) * F(m - 1, s, r - 1)
        else:
            tau = i.tau
            if k.is_odd:
                twice = q ** (2 * s) * F(m - 1, s, r) + tau * q**s * F(m, s, r)
            elif k.tau == 1:
                twice = q**s * (q**s + tau) * F(m, s, r)
            else:
                twice = q ** (2 * s) * F(m - 1, s, r - 1) + tau * q**s * F(m, s, r)
            value = _as_int(Fraction(twice, 2), f"P_{i}({k})")
    if value * _valency(SYM, k, m, q) != _valency(QUAD, i, m, q) * _q_number(k, i, m, q):
        raise EigenConsistencyViolation(f"P_{i}({k}) = {value} disagrees with (v_i / mu_k) Q_k(i)")
    return value


def p_number(i: OrbitIndex, k: OrbitIndex, m: int, q) -> int:
    """P_i(k) of the quadratic-form scheme; 0 when either class is empty."""
    return _p_number(i, k, m, _q_of(q))


# ---------------------------------------------------------------------------
# Character-sum oracles


def cyclotomic_value(counts: np.ndarray) -> int:
    """sum_e counts[e] omega^e for a primitive p-th root omega, as an integer.

    The value is rational only when counts[1] = ... = counts[p-1].
    """
    counts = [int(c) for c in counts]
    if len(set(counts[1:])) > 1:
        raise NonIntegralSum(f"exponent counts {counts} do not sum to a rational integer")
    return counts[0] - (counts[1] if len(counts) > 1 else 0)


def oracle_q_number(k: OrbitIndex, i: OrbitIndex, m: int, q, cap: Optional[int] = None) -> int:
    """Q_k(i) = sum over B in S_k of <A, B> for the representative A of Q_i."""
    field = as_field(q)
    if k.rank > m or i.rank > m:
        return 0
    A = np.array([canonical_form(i, m, QUAD, field).upper()], dtype=np.int64)
    members = census(field, m, SYM, cap).members(k)
    exps = pairing_matrix(field, A, members)[0]
    return cyclotomic_value(np.bincount(exps, minlength=field.p))


def oracle_p_number(i: OrbitIndex, k: OrbitIndex, m: int, q, cap: Optional[int] = None) -> int:
    """P_i(k) = sum over [A] in Q_i of <A, B> for the representative B of S_k."""
    field = as_field(q)
    if k.rank > m or i.rank > m:
        return 0
    B = np.array([canonical_form(k, m, SYM, field).upper()], dtype=np.int64)
    members = census(field, m, QUAD, cap).members(i)
    exps = pairing_matrix(field, members, B)[:, 0]
    return cyclotomic_value(np.bincount(exps, minlength=field.p))


def oracle_mismatches(
    m: int, q, cap: Optional[int] = None
) -> List[Tuple[str, OrbitIndex, OrbitIndex, int, int]]:
    """Every (which, first, second, closed, oracle) where the two disagree."""
    out = []
    for k in index_set(m):
        for i in index_set(m):
            closed, oracle = q_number(k, i, m, q), oracle_q_number(k, i, m, q, cap)
            if closed != oracle:
                out.append(("Q", k, i, closed, oracle))
            closed, oracle = p_number(i, k, m, q), oracle_p_number(i, k, m, q, cap)
            if closed != oracle:
                out.append(("P", i, k, closed, oracle))
    for entry in out:
        logger.warning("oracle mismatch %s_%s(%s): closed %d, oracle %d", *entry)
    return out


# ---------------------------------------------------------------------------
# Tables


@dataclass
class EigTable:
    """An eigenvalue table over the fixed index order.

    Attributes:
        m: Dimension.
        q: Field order.
        kind: Scheme the table belongs to (QUAD or SYM).
        which: "P" or "Q".
        index: Orbit indices labelling both rows and columns.
        rows: ``rows[a][b]``; for P tables a is the eigenspace k and b the
            relation i, for Q tables the other way round.
    """

    m: int
    q: int
    kind: str
    which: str
    index: Tuple[OrbitIndex, ...]
    rows: List[List[int]]

    def entry(self, a: OrbitIndex, b: OrbitIndex) -> int:
        pos = {i: n for n, i in enumerate(self.index)}
        return self.rows[pos[a]][pos[b]]

    @property
    def size(self) -> int:
        return len(self.index)


class SchemeTables(NamedTuple):
    P: EigTable
    Q: EigTable
    P_sym: EigTable
    Q_sym: EigTable


def _matmul(A: List[List[int]], B: List[List[int]]) -> List[List[int]]:
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def eig_tables(m: int, q) -> SchemeTables:
    """P and Q of the quadratic scheme and, by duality, of the symmetric one."""
    q = _q_of(q)
    idx = index_set(m)
    P = [[p_number(i, k, m, q) for i in idx] for k in idx]
    Q = [[q_number(k, i, m, q) for k in idx] for i in idx]
    total = q ** upper_length(m)
    product = _matmul(P, Q)
    for a, row in enumerate(product):
        for b, x in enumerate(row):
            if x != (total if a == b else 0):
                raise EigenConsistencyViolation(
                    f"PQ != {total} I at ({idx[a]}, {idx[b]}) for m={m}, q={q}: {x}"
                )
    logger.debug("eigenvalue tables m=%d q=%d: %d classes, PQ check passed", m, q, len(idx))
    return SchemeTables(
        P=EigTable(m, q, QUAD, "P", idx, P),
        Q=EigTable(m, q, QUAD, "Q", idx, Q),
        # P'_k(i) = Q_k(i) and Q'_i(k) = P_i(k)
        P_sym=EigTable(m, q, SYM, "P", idx, [row[:] for row in Q]),
        Q_sym=EigTable(m, q, SYM, "Q", idx, [row[:] for row in P]),
    )


# ---------------------------------------------------------------------------
# Identities of the closed forms


def _q_rank(k_rank: int, i: OrbitIndex, m: int, q: int) -> int:
    """Q_k(i) for an integer rank k; even ranks sum over both types."""
    if k_rank < 0 or k_rank > m or i.rank > m:
        return 0
    if k_rank % 2:
        return q_number(OrbitIndex(k_rank), i, m, q)
    total = q_number(OrbitIndex(k_rank, 1), i, m, q)
    if k_rank > 0:
        total += q_number(OrbitIndex(k_rank, -1), i, m, q)
    return total


def recurrences_hold(m: int, q) -> bool:
    """The two recurrences linking Q^(m) with Q^(m-1)."""
    q = _q_of(q)
    for k in range(1, m + 1):
        for s in range(0, (m - 1) // 2 + 1):
            h = OrbitIndex(2 * s, 1)
            lhs = _q_rank(k, OrbitIndex(2 * s + 1), m, q)
            rhs = _q_rank(k, h, m, q) - q ** (m - s) * _q_rank(k - 1, h, m - 1, q)
            if lhs != rhs:
                logger.warning("first recurrence fails: m=%d q=%d k=%d s=%d", m, q, k, s)
                return False
        for s in range(1, m // 2 + 1):
            o = OrbitIndex(2 * s - 1)
            for tau in (1, -1):
                lhs = _q_rank(k, OrbitIndex(2 * s, tau), m, q)
                rhs = _q_rank(k, o, m, q) + tau * q ** (m - s) * _q_rank(k - 1, o, m - 1, q)
                if lhs != rhs:
                    logger.warning("second recurrence fails: m=%d q=%d k=%d s=%d tau=%d", m, q, k, s, tau)
                    return False
    return True


def _even_shapes(m: int):
    for s in range(1, m // 2 + 1):
        for tau in (1, -1):
            yield s, OrbitIndex(2 * s, tau)


def _odd_shapes(m: int):
    for s in range(0, (m - 1) // 2 + 1):
        yield s, OrbitIndex(2 * s + 1)


def grouped_sums_hold(m: int, q) -> bool:
    """Sums of Q-numbers over neighbouring ranks against F-numbers."""
    q = _q_of(q)
    ok = True
    for r in range(0, m // 2 + 1):
        # F^(m+1)_r(s) from ranks 2r and 2r-1, at i = 2s-1 and i = (2s, tau)
        for s in range(1, (m + 1) // 2 + 1):
            target = f_num(m + 1, r, s, q)
            if 2 * s - 1 <= m:
                i = OrbitIndex(2 * s - 1)
                if _q_rank(2 * r, i, m, q) + _q_rank(2 * r - 1, i, m, q) != target:
                    ok = False
            if 2 * s <= m:
                for tau in (1, -1):
                    i = OrbitIndex(2 * s, tau)
                    if _q_rank(2 * r, i, m, q) + _q_rank(2 * r - 1, i, m, q) != target:
                        ok = False
        if 2 * r + 1 > m:
            continue
        for s, i in _even_shapes(m):
            want = i.tau * q ** (m - s) * f_num(m, r, s, q)
            if _q_rank(2 * r, i, m, q) + _q_rank(2 * r + 1, i, m, q) != want:
                ok = False
        for s, i in _odd_shapes(m):
            if _q_rank(2 * r, i, m, q) + _q_rank(2 * r + 1, i, m, q) != 0:
                ok = False
    if not ok:
        logger.warning("grouped Q-number sums fail for m=%d q=%d", m, q)
    return ok


def beta_split_holds(m: int, q) -> bool:
    """beta_r F^(m)_r(s) = alpha_{-1} Q_{2r,1}(i) - alpha_1 Q_{2r,-1}(i)."""
    q = _q_of(q)
    shapes = list(_even_shapes(m)) + list(_odd_shapes(m))
    for r in range(0, m // 2 + 1):
        for s, i in shapes:
            plus = q_number(OrbitIndex(2 * r, 1), i, m, q)
            minus = q_number(OrbitIndex(2 * r, -1), i, m, q) if r > 0 else 0
            if beta(r, q) * f_num(m, r, s, q) != alpha(-1, q) * plus - alpha(1, q) * minus:
                logger.warning("beta split fails: m=%d q=%d r=%d i=%s", m, q, r, i)
                return False
    return True


def _p_rank(i_rank: int, k: OrbitIndex, m: int, q: int) -> int:
    if i_rank < 0 or i_rank > m or k.rank > m:
        return 0
    if i_rank % 2:
        return p_number(OrbitIndex(i_rank), k, m, q)
    total = p_number(OrbitIndex(i_rank, 1), k, m, q)
    if i_rank > 0:
        total += p_number(OrbitIndex(i_rank, -1), k, m, q)
    return total


def p_grouped_sums_hold(m: int, q) -> bool:
    """The P-number counterparts of the grouped sums."""
    q = _q_of(q)
    ok = True
    for s in range(0, m // 2 + 1):
        for r in range(1, (m + 1) // 2 + 1):
            target = f_num(m + 1, s, r, q)
            shapes = [OrbitIndex(2 * r - 1)] if 2 * r - 1 <= m else []
            if 2 * r <= m:
                shapes += [OrbitIndex(2 * r, 1), OrbitIndex(2 * r, -1)]
            for k in shapes:
                if _p_rank(2 * s, k, m, q) + _p_rank(2 * s - 1, k, m, q) != target:
                    ok = False
        for r in range(0, m // 2 + 1):
            diff_shapes = [OrbitIndex(2 * r, 1)] + ([OrbitIndex(2 * r, -1)] if r > 0 else [])
            if 2 * r + 1 <= m:
                diff_shapes.append(OrbitIndex(2 * r + 1))
            for k in diff_shapes:
                minus = p_number(OrbitIndex(2 * s, -1), k, m, q) if s > 0 else 0
                if p_number(OrbitIndex(2 * s, 1), k, m, q) - minus != q**s * f_num(m, s, r, q):
                    ok = False
            if 2 * s + 1 > m:
                continue
            for k in diff_shapes:
                total = _p_rank(2 * s, k, m, q) + _p_rank(2 * s + 1, k, m, q)
                if k.is_odd:
                    expected = Fraction(0)
                else:
                    expected = alpha(-k.tau, q) / beta(r, q) * k.tau * q**m * f_num(m, s, r, q)
                if total != expected:
                    ok = False
    if not ok:
        logger.warning("grouped P-number sums fail for m=%d q=%d", m, q)
    return ok


def row_sum_law_holds(m: int, q) -> bool:
    """sum_i Q_k(i) v_i = q^{m(m+1)/2} [k = (0,+)]."""
    q = _q_of(q)
    total = q ** upper_length(m)
    for k in index_set(m):
        acc = sum(q_number(k, i, m, q) * valency(QUAD, i, m, q) for i in index_set(m))
        if acc != (total if k == ZERO else 0):
            logger.warning("row-sum law fails: m=%d q=%d k=%s sum=%d", m, q, k, acc)
            return False
    return True


def census_matches_valencies(m: int, q, cap: Optional[int] = None) -> bool:
    """Orbit sizes of a full census equal v_i and mu_i."""
    field = as_field(q)
    for kind in KINDS:
        counts = census(field, m, kind, cap).counts()
        for i in index_set(m):
            v = valency(kind, i, m, field.q)
            if counts[i] != v:
                logger.warning("census of %s at %s: %d forms, valency %d", kind, i, counts[i], v)
                return False
    return True
