"""Subsets of Q(m,q) or S(m,q): inner and dual distributions, bounds,
design and code predicates, annihilators and the MacWilliams identity.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional

import numpy as np

from . import config
from .errors import (
    CapExceeded,
    ConsistencyError,
    DimensionMismatch,
    InvalidInput,
    NegativeDual,
    NotAdditive,
    UnsupportedCase,
)
from .forms import (
    KINDS,
    QUAD,
    SYM,
    ZERO,
    Form,
    OrbitIndex,
    census,
    classify_codes,
    index_set,
    make_form,
    upper_length,
)
from .gf import (
    Field,
    as_field,
    from_prime_digits,
    nullspace,
    row_basis_mod_p,
    span_mod_p,
    to_prime_digits,
)
from .qnum import c_value, f_num, qbinom2
from .scheme import alpha, beta, p_number, q_number

logger = logging.getLogger(__name__)

CASES = (
    "quad-odd-m-odd-d",
    "quad-even-m-odd-d",
    "quad-even-q-even-d-partial",
    "elliptic",
)


def dual_kind(kind: str) -> str:
    return SYM if kind == QUAD else QUAD


@dataclass(eq=False)
class FormSet:
    """A set of distinct forms of one kind on F_q^m.

    Attributes:
        field: Base field.
        m: Dimension.
        kind: QUAD or SYM.
        rows: Upper vectors of the members, duplicates removed, first
            occurrence order kept.
        additive: Claimed closure under addition; verified on construction.
    """

    field: Field
    m: int
    kind: str
    rows: np.ndarray
    additive: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInput(f"unknown form kind {self.kind!r}")
        rows = np.asarray(self.rows, dtype=np.int64).reshape(-1, upper_length(self.m))
        if len(rows) == 0:
            raise InvalidInput("a form set needs at least one member")
        _, first = np.unique(rows, axis=0, return_index=True)
        self.rows = rows[np.sort(first)]
        if self.additive and not is_additive(self):
            raise NotAdditive(f"set of {len(self)} {self.kind} forms is not closed under addition")

    def __len__(self) -> int:
        return len(self.rows)

    @classmethod
    def from_forms(cls, forms: Iterable[Form], additive: bool = False) -> "FormSet":
        forms = list(forms)
        if not forms:
            raise InvalidInput("a form set needs at least one member")
        f, m, kind = forms[0].field, forms[0].m, forms[0].kind
        if any(F.field != f or F.m != m or F.kind != kind for F in forms):
            raise DimensionMismatch("form set members must share field, dimension and kind")
        return cls(f, m, kind, np.array([F.upper() for F in forms], dtype=np.int64), additive)

    @property
    def members(self) -> List[Form]:
        return [make_form(self.field, self.m, self.kind, r.tolist()) for r in self.rows]

    @property
    def q(self) -> int:
        return self.field.q

    def contains_zero(self) -> bool:
        return bool((~self.rows.any(axis=1)).any())


@dataclass
class InnerDist:
    """Exact distribution over the orbit indices.

    Attributes:
        m: Dimension.
        q: Field order.
        kind: Kind of the set the distribution was computed from.
        values: Orbit index -> exact rational; missing indices are zero.
    """

    m: int
    q: int
    kind: str
    values: Dict[OrbitIndex, Fraction] = dc_field(default_factory=dict)

    def __getitem__(self, i: OrbitIndex) -> Fraction:
        return self.values.get(i, Fraction(0))

    @property
    def size(self) -> Fraction:
        return sum(self.values.values(), Fraction(0))

    def as_list(self) -> List[Fraction]:
        return [self[i] for i in index_set(self.m)]

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.values.values())

    def nonzero(self) -> Dict[OrbitIndex, Fraction]:
        return {i: v for i, v in self.values.items() if v}


@dataclass
class DualDist(InnerDist):
    """a'_k, indexed by the classes of the dual space."""


@dataclass
class AggregateDist:
    """B_s = a_{2s,1} + a_{2s,-1} + a_{2s+1}, s = 0..floor(m/2).

    Used where only these sums are determined.
    """

    m: int
    q: int
    d: int
    values: Dict[int, Fraction] = dc_field(default_factory=dict)

    @property
    def size(self) -> Fraction:
        return sum(self.values.values(), Fraction(0))


# ---------------------------------------------------------------------------
# Additive structure


def _basis_digits(X: FormSet) -> np.ndarray:
    return row_basis_mod_p(to_prime_digits(X.field, X.rows), X.field.p)


def is_additive(X: FormSet) -> bool:
    """X is a subgroup iff |X| = p^(dimension of its F_p-span)."""
    return len(X) == X.field.p ** len(_basis_digits(X))


def additive_basis(X: FormSet) -> np.ndarray:
    """An F_p-basis of the span of X, as upper vectors."""
    return from_prime_digits(X.field, _basis_digits(X))


def span_set(
    field: Field, m: int, kind: str, generators: np.ndarray, cap: Optional[int] = None
) -> FormSet:
    """The additive set spanned over F_p by ``generators``."""
    generators = np.asarray(generators, dtype=np.int64).reshape(-1, upper_length(m))
    basis = row_basis_mod_p(to_prime_digits(field, generators), field.p)
    size = field.p ** len(basis)
    if size > config.cap("code_cap", cap):
        raise CapExceeded(f"span of {size} forms exceeds the code cap")
    rows = from_prime_digits(field, span_mod_p(basis, field.p))
    return FormSet(field, m, kind, rows, additive=True)


def annihilator(X: FormSet, cap: Optional[int] = None) -> FormSet:
    """All forms of the dual kind pairing trivially with every member of X."""
    if not is_additive(X):
        raise NotAdditive("the annihilator is defined for additive sets only")
    f = X.field
    n = upper_length(X.m)
    gens = additive_basis(X)
    # functional of each generator on the unit digit vectors of the dual space
    units = [f.from_digits([1 if v == u else 0 for v in range(f.k)]) for u in range(f.k)]
    M = [
        [f.abs_trace(f.mul(int(g[t]), units[u])) for t in range(n) for u in range(f.k)]
        for g in gens
    ]
    prime = as_field(f.p)
    kernel = np.array(nullspace(prime, M, ncols=n * f.k), dtype=np.int64).reshape(-1, n * f.k)
    size = f.p ** len(kernel)
    if size > config.cap("code_cap", cap):
        raise CapExceeded(f"annihilator of {size} forms exceeds the code cap")
    rows = from_prime_digits(f, span_mod_p(kernel, f.p))
    out = FormSet(f, X.m, dual_kind(X.kind), rows, additive=True)
    if len(X) * len(out) != f.q**n:
        raise ConsistencyError(f"|X| |X°| = {len(X) * len(out)} != {f.q ** n}")
    return out


# ---------------------------------------------------------------------------
# Distributions


def _counts_to_dist(X: FormSet, counts: np.ndarray, scale: int) -> InnerDist:
    values = {
        i: Fraction(int(n), scale) for i, n in zip(index_set(X.m), counts) if n
    }
    return InnerDist(X.m, X.q, X.kind, values)


def _census_counts(X: FormSet) -> np.ndarray:
    codes = classify_codes(X.field, X.m, X.kind, X.rows)
    return np.bincount(codes, minlength=len(index_set(X.m)))


def _pairwise_counts(X: FormSet, cap: Optional[int] = None) -> np.ndarray:
    size = len(X)
    if size * size > config.cap("pair_cap", cap):
        raise CapExceeded(f"{size * size} ordered pairs exceed the pair cap")
    f = X.field
    total = np.zeros(len(index_set(X.m)), dtype=np.int64)
    step = max(1, 2**14 // size)
    for a in range(0, size, step):
        block = X.rows[a:a + step]
        diffs = f.vsub(X.rows[None, :, :], block[:, None, :]).reshape(-1, X.rows.shape[1])
        codes = classify_codes(f, X.m, X.kind, diffs)
        total += np.bincount(codes, minlength=len(total))
    return total


def inner_dist(X: FormSet, cap: Optional[int] = None) -> InnerDist:
    """a_i = |{(x, y) in X^2 : x - y in class i}| / |X|."""
    if X.additive:
        counts = _census_counts(X)
        if len(X) <= 64:
            pairwise = _pairwise_counts(X, cap)
            if not np.array_equal(pairwise, counts * len(X)):
                raise ConsistencyError("census and pairwise distributions of an additive set differ")
        return _counts_to_dist(X, counts, 1)
    if len(X) ** 2 > config.cap("pair_cap", cap) and is_additive(X):
        return _counts_to_dist(X, _census_counts(X), 1)
    return _counts_to_dist(X, _pairwise_counts(X, cap), len(X))


def dual_dist(D: InnerDist) -> DualDist:
    """a'_k = sum_i Q_k(i) a_i, with the dual scheme's numbers for bilinear sets."""
    values = {}
    for k in index_set(D.m):
        if D.kind == QUAD:
            total = sum((q_number(k, i, D.m, D.q) * a for i, a in D.values.items()), Fraction(0))
        else:
            total = sum((p_number(k, i, D.m, D.q) * a for i, a in D.values.items()), Fraction(0))
        if total < 0:
            raise NegativeDual(f"dual distribution entry a'_{k} = {total} is negative")
        if total:
            values[k] = total
    return DualDist(D.m, D.q, D.kind, values)


def i_set(t: int, m: int) -> List[OrbitIndex]:
    """I_t: indices of rank 1..t."""
    return [i for i in index_set(m) if 1 <= i.rank <= t]


def is_d_code(X: FormSet, d: int, cap: Optional[int] = None) -> bool:
    D = inner_dist(X, cap)
    return all(D[i] == 0 for i in i_set(d - 1, X.m))


def is_t_design(X: FormSet, t: int, cap: Optional[int] = None) -> bool:
    Dp = dual_dist(inner_dist(X, cap))
    return all(Dp[k] == 0 for k in i_set(t, X.m))


def is_elliptic_code(X: FormSet, d: int, cap: Optional[int] = None) -> bool:
    """A d-code with no difference hyperbolic of rank exactly d."""
    if X.kind != QUAD or d % 2 or X.m % 2:
        raise UnsupportedCase("elliptic codes are quadratic with m and d even")
    D = inner_dist(X, cap)
    return all(D[i] == 0 for i in i_set(d - 1, X.m)) and D[OrbitIndex(d, 1)] == 0


def design_degree(m: int, d: int, elliptic: bool = False) -> int:
    """t for which a maximal code of minimum rank d is a t-design."""
    if elliptic:
        if m % 2 or d % 2:
            raise UnsupportedCase("elliptic codes need m and d even")
        return m - d + 1
    if d % 2 == 0:
        raise UnsupportedCase("no design degree is known for maximal codes with even d")
    return 2 * ((m + 1) // 2 - (d - 1) // 2)


def size_bound(kind: str, m: int, q, d: int, variant: str = "general") -> int:
    """Largest possible size of a d-code under the applicable bound."""
    q = as_field(q).q
    if not 1 <= d <= m:
        raise UnsupportedCase(f"minimum rank {d} outside 1..{m}")
    if variant not in ("general", "additive", "elliptic"):
        raise InvalidInput(f"unknown bound variant {variant!r}")
    if variant == "elliptic":
        if kind != QUAD or m % 2 or d % 2:
            raise UnsupportedCase("the elliptic bound needs quadratic forms with m and d even")
        return q ** (m * (m - d + 1) // 2)
    if kind == SYM or q % 2:
        if d % 2 == 0 and variant != "additive":
            raise UnsupportedCase(
                "no bound for non-additive even-d codes in S(m,q) or in Q(m,q) with q odd; "
                "the additive variant applies"
            )
        if (m - d) % 2 == 0:
            return q ** (m * (m - d + 2) // 2)
        return q ** ((m + 1) * (m - d + 1) // 2)
    if m % 2 and d % 2:
        return q ** (m * (m - d + 2) // 2)
    if d % 2:
        return q ** ((m + 1) * (m - d + 1) // 2)
    if m % 2 == 0:
        return q ** ((m - 1) * (m - d + 2) // 2)
    return q ** (m * (m - d + 1) // 2)


def _alt_sum(terms: Iterable) -> Fraction:
    return sum((Fraction(t) for t in terms), Fraction(0))


def theoretical_inner_dist(case: str, m: int, q, d: int):
    """Inner distribution of a maximal code from its parameters alone.

    Returns an InnerDist for the three fully determined cases and an
    AggregateDist for ``quad-even-q-even-d-partial``.
    """
    q = as_field(q).q

    def qb(a: int, b: int):
        return qbinom2(a, b, q)

    def sign(j: int) -> int:
        return -1 if j % 2 else 1

    values: Dict[OrbitIndex, Fraction] = {ZERO: Fraction(1)}
    if case == "quad-odd-m-odd-d":
        if m % 2 == 0 or d % 2 == 0 or not 1 <= d <= m:
            raise UnsupportedCase("quad-odd-m-odd-d needs m and d odd with 1 <= d <= m")
        n, delta = (m - 1) // 2, (d - 1) // 2

        def core(s: int) -> Fraction:
            return _alt_sum(
                sign(j) * q ** (j * (j - 1)) * qb(s, j) * (q ** (m * (s - delta - j)) - 1)
                for j in range(s - delta)
            )

        for s in range(1, n + 2):
            values[OrbitIndex(2 * s - 1)] = qb(n, s - 1) * core(s)
            if s <= n:
                for tau in (1, -1):
                    values[OrbitIndex(2 * s, tau)] = Fraction(q**s * (q**s + tau), 2) * qb(n, s) * core(s)
    elif case == "quad-even-m-odd-d":
        if m % 2 or d % 2 == 0 or not 1 <= d <= m:
            raise UnsupportedCase("quad-even-m-odd-d needs m even and d odd with 1 <= d <= m")
        n, delta = m // 2, (d - 1) // 2
        for s in range(1, n + 1):
            odd = _alt_sum(
                sign(j) * q ** (j * (j - 1)) * qb(s - 1, j) * q ** ((m + 1) * (s - delta - j - 1) + 2 * j)
                for j in range(s - delta)
            )
            values[OrbitIndex(2 * s - 1)] = (q ** (2 * s) - 1) * qb(n, s) * odd
            first = _alt_sum(
                sign(j) * q ** (j * (j - 1)) * qb(s, j) * (q ** ((m + 1) * (s - delta - j) + 2 * j) - 1)
                for j in range(s - delta + 1)
            )
            second = _alt_sum(
                sign(j) * q ** (j * (j - 1)) * qb(s, j)
                * (Fraction(q) ** ((m + 1) * (s - delta - j) + 2 * (j - s)) - 1)
                for j in range(s - delta)
            )
            for tau in (1, -1):
                values[OrbitIndex(2 * s, tau)] = (
                    Fraction(1, 2) * qb(n, s) * first + Fraction(tau * q**s, 2) * qb(n, s) * second
                )
    elif case == "elliptic":
        if m % 2 or d % 2 or not 2 <= d <= m:
            raise UnsupportedCase("elliptic needs m and d even with 2 <= d <= m")
        n, delta = m // 2, d // 2
        for s in range(1, n + 1):
            odd = _alt_sum(
                sign(j) * q ** (j * (j - 1)) * qb(s - 1, j) * q ** (m * (s - delta - j - 1) + s + j - 1)
                for j in range(s - delta)
            )
            values[OrbitIndex(2 * s - 1)] = (q ** (2 * s) - 1) * qb(n, s) * odd
            for tau in (1, -1):
                even = _alt_sum(
                    sign(j) * q ** (j * (j - 1)) * qb(s, j) * (q ** (m * (s - delta - j) + j) - tau)
                    for j in range(s - delta + 1)
                )
                values[OrbitIndex(2 * s, tau)] = Fraction(q**s + tau, 2) * qb(n, s) * even
    elif case == "quad-even-q-even-d-partial":
        if q % 2 or d % 2 or not 2 <= d <= m:
            raise UnsupportedCase("the partial case needs q even and d even with 2 <= d <= m")
        n, delta = m // 2, d // 2
        c = c_value(m, q)
        agg = {0: Fraction(1)}
        for s in range(1, n + 1):
            agg[s] = qb(n, s) * _alt_sum(
                sign(j) * q ** (j * (j - 1)) * qb(s, j) * (c ** (s - delta - j + 1) - 1)
                for j in range(s - delta + 1)
            )
        return AggregateDist(m, q, d, {s: v for s, v in agg.items()})
    else:
        raise UnsupportedCase(f"unknown case {case!r}; expected one of {', '.join(CASES)}")
    return InnerDist(m, q, QUAD, {i: Fraction(v) for i, v in values.items() if v})


def aggregate_b(D: InnerDist) -> AggregateDist:
    """B_s of a full distribution, for comparison with the partial case."""
    out = {}
    for s in range(D.m // 2 + 1):
        total = D[OrbitIndex(2 * s, 1)] + (D[OrbitIndex(2 * s, -1)] if s else 0)
        if 2 * s + 1 <= D.m:
            total += D[OrbitIndex(2 * s + 1)]
        out[s] = total
    return AggregateDist(D.m, D.q, 0, out)


# ---------------------------------------------------------------------------
# Identities


def macwilliams_check(X: FormSet, cap: Optional[int] = None) -> bool:
    """|X| a°_k = a'_k with a° the inner distribution of the annihilator."""
    if not is_additive(X):
        raise NotAdditive("the MacWilliams identity needs an additive set")
    dual = dual_dist(inner_dist(X, cap))
    ann = inner_dist(annihilator(X, cap), cap)
    ok = all(len(X) * ann[k] == dual[k] for k in index_set(X.m))
    if not ok:
        logger.warning("MacWilliams identity fails: |X| a° = %s, a' = %s",
                       [len(X) * v for v in ann.as_list()], dual.as_list())
    return ok


def _a(D: InnerDist, rank: int, tau: int = 0) -> Fraction:
    if rank < 0 or rank > D.m or (rank == 0 and tau == -1):
        return Fraction(0)
    return D[OrbitIndex(rank, tau if rank % 2 == 0 else 0)]


def _grouped(D: InnerDist, weighted_c: bool):
    n = D.m // 2
    A = [_a(D, 2 * s, 1) + _a(D, 2 * s, -1) + _a(D, 2 * s - 1) for s in range((D.m + 1) // 2 + 1)]
    B = [_a(D, 2 * s, 1) + _a(D, 2 * s, -1) + _a(D, 2 * s + 1) for s in range(n + 1)]
    if weighted_c:
        C = [
            alpha(-1, D.q) / beta(s, D.q) * _a(D, 2 * s, 1) - alpha(1, D.q) / beta(s, D.q) * _a(D, 2 * s, -1)
            for s in range(n + 1)
        ]
    else:
        C = [Fraction(1, D.q**s) * (_a(D, 2 * s, 1) - _a(D, 2 * s, -1)) for s in range(n + 1)]
    return A, B, C


def abc_transform_check(X: FormSet, cap: Optional[int] = None) -> bool:
    """The three F-number transforms between grouped inner and dual sums."""
    D = inner_dist(X, cap)
    Dp = dual_dist(D)
    # quadratic sets weight C on the dual side, bilinear sets on the inner side
    A, B, C = _grouped(D, weighted_c=X.kind == SYM)
    Ap, Bp, Cp = _grouped(Dp, weighted_c=X.kind == QUAD)
    m, q = X.m, X.q
    ok = True
    for r in range(len(Ap)):
        if Ap[r] != sum(f_num(m + 1, r, s, q) * A[s] for s in range(len(A))):
            logger.warning("A-transform fails at r=%d", r)
            ok = False
    for r in range(len(Cp)):
        if Cp[r] != sum(f_num(m, r, s, q) * B[s] for s in range(len(B))):
            logger.warning("C-transform fails at r=%d", r)
            ok = False
        if Bp[r] != q**m * sum(f_num(m, r, s, q) * C[s] for s in range(len(C))):
            logger.warning("B-transform fails at r=%d", r)
            ok = False
    return ok


# ---------------------------------------------------------------------------
# Fixtures


def sporadic_two_code() -> FormSet:
    """{0} and the 21 non-alternating rank-2 symmetric 3x3 matrices over F_2."""
    field = as_field(2)
    rank2 = census(field, 3, SYM).members(OrbitIndex(2, -1))
    rows = np.vstack([np.zeros((1, upper_length(3)), dtype=np.int64), rank2])
    return FormSet(field, 3, SYM, rows)


def random_formset(q, m: int, kind: str, size: int, seed: int = 0) -> FormSet:
    """``size`` distinct forms drawn with a seeded generator."""
    field = as_field(q)
    total = field.q ** upper_length(m)
    if size > total:
        raise InvalidInput(f"cannot draw {size} distinct forms from {total}")
    rng = np.random.default_rng(seed)
    picks = rng.choice(total, size=size, replace=False)
    n = upper_length(m)
    rows = np.stack([(picks // field.q ** (n - 1 - j)) % field.q for j in range(n)], axis=1)
    return FormSet(field, m, kind, rows)
