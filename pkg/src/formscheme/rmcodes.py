"""Classical codes C(Y) = union of the cosets Q + R_q(1,m)* over Q in Y.

Codeword positions are the nonzero elements of F_{q^m} in encoding order;
a quadratic form is evaluated there through the coordinates of each
element in the polynomial basis of the tower.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional

import numpy as np

from . import config
from .codesets import FormSet, inner_dist
from .errors import CapExceeded, DegenerateY, InvalidInput, UnsupportedCase
from .forms import (
    QUAD,
    OrbitIndex,
    QuadForm,
    classify_codes,
    eval_rows,
    index_position,
    index_set,
    pair_index,
    points,
)
from .gf import as_field, tower_for
from .scheme import valency

logger = logging.getLogger(__name__)


@dataclass
class WeightEnumerator:
    """Sparse polynomial sum_w counts[w] z^w over codes of a fixed length.

    Counts are exact; distance enumerators of non-additive codes may have
    rational counts.
    """

    length: int
    counts: Dict[int, Fraction] = dc_field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for w, c in self.counts.items():
            c = Fraction(c)
            if not c:
                continue
            if not 0 <= int(w) <= self.length:
                raise InvalidInput(f"weight {w} outside 0..{self.length}")
            clean[int(w)] = c
        self.counts = dict(sorted(clean.items()))

    def __add__(self, other: "WeightEnumerator") -> "WeightEnumerator":
        if other.length != self.length:
            raise InvalidInput(f"cannot add enumerators of lengths {self.length} and {other.length}")
        out = dict(self.counts)
        for w, c in other.counts.items():
            out[w] = out.get(w, Fraction(0)) + c
        return WeightEnumerator(self.length, out)

    def scale(self, r) -> "WeightEnumerator":
        r = Fraction(r)
        return WeightEnumerator(self.length, {w: c * r for w, c in self.counts.items()})

    @property
    def size(self) -> Fraction:
        return sum(self.counts.values(), Fraction(0))

    def min_weight(self) -> Optional[int]:
        """Smallest positive weight present, None for the zero code."""
        return next((w for w in self.counts if w > 0), None)

    def weights(self) -> List[int]:
        return list(self.counts)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.counts.values())

    def __str__(self) -> str:
        terms = [f"{c}z^{w}" if w else f"{c}" for w, c in self.counts.items()]
        return " + ".join(terms) or "0"


def _census_to_enum(length: int, hist: np.ndarray, scale: int = 1) -> WeightEnumerator:
    return WeightEnumerator(length, {w: Fraction(int(n), scale) for w, n in enumerate(hist) if n})


# ---------------------------------------------------------------------------
# Positions and R_q(1,m)*


@lru_cache(maxsize=None)
def _position_index(q: int, m: int) -> np.ndarray:
    """Row of ``points(field, m)`` holding the coordinates of each nonzero element."""
    tower = tower_for(q, m)
    weights = np.array([q ** (m - 1 - j) for j in range(m)], dtype=np.int64)
    coords = np.array([tower.coordinates(y) for y in range(1, tower.big.q)], dtype=np.int64)
    return coords @ weights


def code_length(m: int, q) -> int:
    return as_field(q).q ** m - 1


def rm1_star(m: int, q) -> np.ndarray:
    """All q^(m+1) words x -> Tr_m(a x) + c, a major, c minor."""
    tower = tower_for(as_field(q).q, m)
    base, big = tower.base, tower.big
    xs = np.arange(1, big.q, dtype=np.int64)
    linear = tower.trace_array[big.vmul(np.arange(big.q, dtype=np.int64)[:, None], xs[None, :])]
    consts = np.arange(base.q, dtype=np.int64)
    words = base.vadd(linear[:, None, :], consts[None, :, None])
    return words.reshape(-1, len(xs))


def form_values(Y: FormSet) -> np.ndarray:
    """Each member of Y evaluated at every codeword position."""
    if Y.kind != QUAD:
        raise InvalidInput("codes are built from quadratic forms")
    return eval_rows(Y.field, Y.m, Y.rows, QUAD)[:, _position_index(Y.q, Y.m)]


def _weight_hist(field, values: np.ndarray, rm: np.ndarray, threads: Optional[int] = None) -> np.ndarray:
    """Weight census of the union of cosets values[k] + rm."""
    n = rm.shape[1]
    step = max(1, 2**20 // max(1, rm.size))
    logger.debug("weight census of %d cosets of %d words, length %d", len(values), len(rm), n)

    def block(a: int) -> np.ndarray:
        words = field.vadd(values[a:a + step, None, :], rm[None, :, :])
        return np.bincount(np.count_nonzero(words, axis=2).ravel(), minlength=n + 1)

    starts = list(range(0, len(values), step))
    n_threads = config.threads(threads)
    if n_threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            parts = list(pool.map(block, starts))
    else:
        parts = [block(a) for a in starts]
    return np.sum(parts, axis=0)


# ---------------------------------------------------------------------------
# Coset enumerators


def omega(i: OrbitIndex, m: int, q) -> WeightEnumerator:
    """Weight enumerator of the coset Q + R_q(1,m)* for Q in class i."""
    q = as_field(q).q
    i.check(m)
    s = i.s
    Fq = Fraction(q)
    top = q ** (m - 1) * (q - 1)
    if i.is_odd:
        h = Fq ** (m - s - 1)
        terms = [
            (top - h - 1, Fraction(1, 2) * (q ** (2 * s) * (q - 1) - q**s) * (q - 1)),
            (top - h, Fraction(1, 2) * (q ** (2 * s) + q**s) * (q - 1)),
            (top - 1, (q**m - q ** (2 * s) * (q - 1)) * (q - 1)),
            (top, Fraction(q**m - q ** (2 * s) * (q - 1))),
            (top + h - 1, Fraction(1, 2) * (q ** (2 * s) * (q - 1) + q**s) * (q - 1)),
            (top + h, Fraction(1, 2) * (q ** (2 * s) - q**s) * (q - 1)),
        ]
    else:
        tau = i.tau
        h = tau * Fq ** (m - s - 1)
        g = tau * Fq ** (s - 1)
        low = Fq ** (2 * s - 1)
        terms = [
            ((Fq ** (m - 1) - h) * (q - 1) - 1, (low - g) * (q - 1)),
            ((Fq ** (m - 1) - h) * (q - 1), low + g * (q - 1)),
            (top - 1, Fraction((q**m - q ** (2 * s)) * (q - 1))),
            (top, Fraction(q**m - q ** (2 * s))),
            (top + h - 1, (low * (q - 1) + g) * (q - 1)),
            (top + h, (low - g) * (q - 1)),
        ]
    counts: Dict[int, Fraction] = {}
    for w, n in terms:
        if not n:
            continue
        if Fraction(w).denominator != 1:
            raise InvalidInput(f"non-integral weight {w} for class {i}")
        counts[int(w)] = counts.get(int(w), Fraction(0)) + n
    return WeightEnumerator(q**m - 1, counts)


def coset_enum_brute(Q: QuadForm, cap: Optional[int] = None) -> WeightEnumerator:
    """Weight census of Q + R_q(1,m)* by evaluation."""
    q, m = Q.field.q, Q.m
    cells = q ** (m + 1) * (q**m - 1)
    if cells > config.cap("enumeration_cap", cap):
        raise CapExceeded(f"{cells} coset evaluations exceed the enumeration cap")
    Y = FormSet(Q.field, m, QUAD, np.array([Q.upper()], dtype=np.int64))
    hist = _weight_hist(Q.field, form_values(Y), rm1_star(m, q))
    return _census_to_enum(q**m - 1, hist)


# ---------------------------------------------------------------------------
# Codes


@dataclass(eq=False)
class ClassicalCode:
    """C(Y) for a nondegenerate set Y of quadratic forms.

    Attributes:
        Y: Coset representatives.
    """

    Y: FormSet

    def __post_init__(self):
        if self.Y.kind != QUAD:
            raise InvalidInput("codes are built from quadratic forms")
        if self.Y.q == 2:
            codes = classify_codes(self.Y.field, self.Y.m, QUAD, self.Y.rows)
            if (codes == index_position(self.Y.m)[OrbitIndex(1)]).any():
                raise DegenerateY("over GF(2) the set contains a rank-1 form, which is affine")
            # x_i^2 = x_i over GF(2): the cross terms alone fix the coset
            cross = [k for k, (i, j) in enumerate(pair_index(self.m)) if i < j]
            keys = self.Y.rows[:, cross]
            distinct = len(np.unique(keys, axis=0)) if cross else 1
            if distinct < len(self.Y):
                raise DegenerateY(
                    f"over GF(2) {len(self.Y) - distinct} members repeat another member's coset"
                )

    @property
    def m(self) -> int:
        return self.Y.m

    @property
    def q(self) -> int:
        return self.Y.q

    @property
    def length(self) -> int:
        return self.q**self.m - 1

    @property
    def size(self) -> int:
        return self.q ** (self.m + 1) * len(self.Y)

    @property
    def additive(self) -> bool:
        return self.Y.additive

    def codewords(self, cap: Optional[int] = None) -> np.ndarray:
        """All codewords, coset by coset in the order of Y."""
        if self.size > config.cap("code_cap", cap):
            raise CapExceeded(f"{self.size} codewords exceed the code cap")
        words = self.Y.field.vadd(form_values(self.Y)[:, None, :], rm1_star(self.m, self.q)[None, :, :])
        return words.reshape(-1, self.length)


def dist_enum_theory(Y: FormSet, cap: Optional[int] = None) -> WeightEnumerator:
    """sum_i a_i omega_i(z) with a the inner distribution of Y."""
    ClassicalCode(Y)
    D = inner_dist(Y, cap)
    total = WeightEnumerator(Y.q**Y.m - 1)
    for i, a in D.values.items():
        total = total + omega(i, Y.m, Y.q).scale(a)
    return total


def dist_enum_brute(
    C: ClassicalCode, cap: Optional[int] = None, threads: Optional[int] = None
) -> WeightEnumerator:
    """Distance census of C: its weight census when additive, all pairs otherwise."""
    field = C.Y.field
    rm = rm1_star(C.m, C.q)
    values = form_values(C.Y)
    if C.additive:
        if C.size > config.cap("code_cap", cap):
            raise CapExceeded(f"{C.size} codewords exceed the code cap")
        return _census_to_enum(C.length, _weight_hist(field, values, rm, threads))
    if C.size > config.cap("pairwise_code_cap", cap):
        raise CapExceeded(f"{C.size} codewords exceed the pairwise code cap")
    words = C.codewords(cap)
    hist = np.zeros(C.length + 1, dtype=np.int64)
    for b in words:
        hist += np.bincount(np.count_nonzero(field.vsub(words, b[None, :]), axis=1), minlength=C.length + 1)
    return _census_to_enum(C.length, hist, len(words))


def min_distance(C: ClassicalCode, cap: Optional[int] = None) -> int:
    w = dist_enum_brute(C, cap).min_weight()
    if w is None:
        raise InvalidInput("a one-word code has no minimum distance")
    return w


def designed_distance(m: int, q, delta: int) -> int:
    """q^(m-1)(q-1) - q^(m-delta-1) - 1."""
    q = as_field(q).q
    if not 1 <= delta <= m // 2:
        raise InvalidInput(f"need 1 <= delta <= {m // 2}, got {delta}")
    return q ** (m - 1) * (q - 1) - q ** (m - delta - 1) - 1


def designed_distance_even(m: int, q, delta: int) -> int:
    """(q^(m-1) - q^(m-delta-1))(q-1) - 1 for maximal 2 delta-codes with m, q even."""
    q = as_field(q).q
    if m % 2 or q % 2:
        raise UnsupportedCase("the even designed distance needs m and q even")
    if not 1 <= delta <= m // 2:
        raise InvalidInput(f"need 1 <= delta <= {m // 2}, got {delta}")
    return (q ** (m - 1) - q ** (m - delta - 1)) * (q - 1) - 1


def zero_diagonal_forms(m: int, q=2) -> FormSet:
    """Forms sum_{i<j} A_ij x_i x_j: over GF(2) one per coset of R_2(1,m)* in R_2(2,m)*."""
    field = as_field(q)
    off = [t for t, (i, j) in enumerate(pair_index(m)) if i != j]
    rows = np.zeros((field.q ** len(off), len(pair_index(m))), dtype=np.int64)
    rows[:, off] = points(field, len(off))
    return FormSet(field, m, QUAD, rows, additive=True)


def rm2_star_enum(m: int, q) -> WeightEnumerator:
    """Distance enumerator of R_q(2,m)*, from the whole-space inner distribution.

    Over GF(2) the coset representatives are the zero-diagonal forms.
    """
    q = as_field(q).q
    if q == 2:
        return dist_enum_theory(zero_diagonal_forms(m, q))
    total = WeightEnumerator(q**m - 1)
    for i in index_set(m):
        total = total + omega(i, m, q).scale(valency(QUAD, i, m, q))
    return total
