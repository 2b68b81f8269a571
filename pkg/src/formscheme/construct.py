"""Trace-form constructions of maximal d-codes and puncturing.

Forms on F_{q^m} are written as sums of traces of monomials and converted
to coordinates in a fixed F_q-basis. Quadratic forms use the polynomial
basis of the tower, bilinear forms its trace-dual basis, so that the
pairing of two forms is the trace of the products of their coefficients.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from . import config
from .codesets import FormSet, is_d_code, span_set
from .errors import (
    BadSubspace,
    CapExceeded,
    ConsistencyError,
    DimensionMismatch,
    FieldError,
    InvalidInput,
    OddCharacteristic,
    ParityMismatch,
)
from .forms import (
    QUAD,
    SYM,
    QuadForm,
    SymForm,
    pair_index,
    pairing,
    pairing_matrix,
    restrict,
    upper_length,
)
from .gf import Field, Tower, as_field, tower_for

logger = logging.getLogger(__name__)

FAMILIES = ("sym", "sym-punctured", "quad-oo", "quad-eo", "quad-oe", "quad-ee", "elliptic")


def slot_count(m: int) -> int:
    """Number of trace coefficients: floor(m/2) + 1 for either parity."""
    return m // 2 + 1


def _in_subfield_slot(m: int, i: int) -> bool:
    return m % 2 == 0 and i == m // 2


def _check_coeffs(tower: Tower, values: Sequence[int], name: str) -> Tuple[int, ...]:
    m = tower.m
    values = tuple(int(v) for v in values)
    if len(values) != slot_count(m):
        raise DimensionMismatch(f"expected {slot_count(m)} coefficients {name}_i for m={m}, got {len(values)}")
    sub = set(tower.subfield(m // 2)) if m % 2 == 0 else set()
    for i, v in enumerate(values):
        tower.big.check(v)
        if _in_subfield_slot(m, i) and v not in sub:
            raise FieldError(f"{name}_{i} = {v} must lie in F_(q^{m // 2})")
    return values


@dataclass(frozen=True)
class TraceQuadCoeffs:
    """Q(x) = sum_i Tr_m(f_i x^(q^i+1)), the last term Tr_n for even m = 2n."""

    tower: Tower
    f: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "f", _check_coeffs(self.tower, self.f, "f"))

    def __call__(self, x: int) -> int:
        T = self.tower
        big, base, q, m = T.big, T.base, T.base.q, T.m
        acc = 0
        for i, f in enumerate(self.f):
            if not f:
                continue
            y = big.mul(f, big.pow(x, q**i + 1))
            t = T.subfield_trace(y, m // 2) if _in_subfield_slot(m, i) else T.rel_trace(y)
            acc = base.add(acc, t)
        return acc


@dataclass(frozen=True)
class TraceSymCoeffs:
    """S(x, y) = Tr_m(g_0 x y) + sum_i Tr_m(g_i (x y^(q^i) + x^(q^i) y)).

    For even m = 2n the last term is Tr_m(g_n x y^(q^n)) with g_n in F_{q^n}.
    """

    tower: Tower
    g: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "g", _check_coeffs(self.tower, self.g, "g"))

    def __call__(self, x: int, y: int) -> int:
        T = self.tower
        big, base, q, m = T.big, T.base, T.base.q, T.m
        acc = 0
        for i, g in enumerate(self.g):
            if not g:
                continue
            if i == 0:
                z = big.mul(x, y)
            elif _in_subfield_slot(m, i):
                z = big.mul(x, big.pow(y, q**i))
            else:
                z = big.add(big.mul(x, big.pow(y, q**i)), big.mul(big.pow(x, q**i), y))
            acc = base.add(acc, T.rel_trace(big.mul(g, z)))
        return acc


def quad_basis(tower: Tower) -> Tuple[int, ...]:
    return tower.polynomial_basis()


def sym_basis(tower: Tower) -> Tuple[int, ...]:
    return tower.dual_basis(tower.polynomial_basis())


def _check_basis(tower: Tower, basis: Sequence[int]) -> Tuple[int, ...]:
    basis = tuple(int(b) for b in basis)
    tower.dual_basis(basis)  # raises SingularBasis
    return basis


def trace_quad_to_matrix(c: TraceQuadCoeffs, basis: Optional[Sequence[int]] = None) -> QuadForm:
    """Coefficients A_ii = Q(a_i), A_ij = Q(a_i + a_j) - Q(a_i) - Q(a_j)."""
    T = c.tower
    basis = quad_basis(T) if basis is None else _check_basis(T, basis)
    base, big = T.base, T.big
    diag = [c(a) for a in basis]
    vec = []
    for i, j in pair_index(T.m):
        if i == j:
            vec.append(diag[i])
        else:
            s = c(big.add(basis[i], basis[j]))
            vec.append(base.sub(base.sub(s, diag[i]), diag[j]))
    return QuadForm.from_upper(base, T.m, vec)


def trace_sym_to_matrix(c: TraceSymCoeffs, basis: Optional[Sequence[int]] = None) -> SymForm:
    """Gram matrix B_ij = S(b_i, b_j)."""
    T = c.tower
    basis = sym_basis(T) if basis is None else _check_basis(T, basis)
    vec = [c(basis[i], basis[j]) for i, j in pair_index(T.m)]
    return SymForm.from_upper(T.base, T.m, vec)


def coefficient_tuples(tower: Tower) -> Iterator[Tuple[int, ...]]:
    """Every admissible coefficient tuple, first slot most significant."""
    m = tower.m
    ranges = [
        tower.subfield(m // 2) if _in_subfield_slot(m, i) else tower.big.elements()
        for i in range(slot_count(m))
    ]
    return itertools.product(*ranges)


def coefficient_pairing(tower: Tower, f: Sequence[int], g: Sequence[int]) -> int:
    """Exponent of chi(sum_i Tr_m(f_i g_i)), with Tr_n for the last slot of even m."""
    big, base, m = tower.big, tower.base, tower.m
    acc = 0
    for i, (a, b) in enumerate(zip(f, g)):
        y = big.mul(a, b)
        t = tower.subfield_trace(y, m // 2) if _in_subfield_slot(m, i) else tower.rel_trace(y)
        acc = base.add(acc, t)
    return base.abs_trace(acc)


def coeff_pairing_check(
    m: int, q, cap: Optional[int] = None, samples: int = 256, seed: Optional[int] = None
) -> bool:
    """The pairing of the two matrices equals the trace pairing of their coefficients.

    Exhaustive when the number of coefficient pairs is within the pair cap,
    otherwise over ``samples`` seeded random pairs.
    """
    tower = tower_for(as_field(q).q, m)
    base, big = tower.base, tower.big
    total = base.q ** upper_length(m)
    if total * total <= config.cap("pair_cap", cap):
        fs = list(coefficient_tuples(tower))
        qrows = np.array([trace_quad_to_matrix(TraceQuadCoeffs(tower, f)).upper() for f in fs], dtype=np.int64)
        srows = np.array([trace_sym_to_matrix(TraceSymCoeffs(tower, g)).upper() for g in fs], dtype=np.int64)
        F = np.array(fs, dtype=np.int64)
        acc = np.zeros((len(fs), len(fs)), dtype=np.int64)
        for i in range(slot_count(m)):
            prod = big.vmul(F[:, i, None], F[None, :, i])
            if _in_subfield_slot(m, i):
                table = np.zeros(big.q, dtype=np.int64)
                for y in tower.subfield(m // 2):
                    table[y] = tower.subfield_trace(y, m // 2)
            else:
                table = tower.trace_array
            acc = base.vadd(acc, table[prod])
        ok = bool(np.array_equal(pairing_matrix(base, qrows, srows), base.trace_array[acc]))
        if not ok:
            logger.warning("pairing mismatch for m=%d q=%d", m, base.q)
        return ok

    rng = np.random.default_rng(config.settings()["seed"] if seed is None else seed)
    sub = tower.subfield(m // 2) if m % 2 == 0 else ()

    def draw() -> Tuple[int, ...]:
        return tuple(
            int(sub[rng.integers(len(sub))]) if _in_subfield_slot(m, i) else int(rng.integers(big.q))
            for i in range(slot_count(m))
        )

    for _ in range(samples):
        f, g = draw(), draw()
        Q = trace_quad_to_matrix(TraceQuadCoeffs(tower, f))
        S = trace_sym_to_matrix(TraceSymCoeffs(tower, g))
        if pairing(Q, S) != coefficient_pairing(tower, f, g):
            logger.warning("pairing mismatch for m=%d q=%d: f=%s g=%s", m, base.q, f, g)
            return False
    return True


# ---------------------------------------------------------------------------
# Additive families spanned by free coefficient slots


def _unit_elements(field: Field) -> List[int]:
    return [field.from_digits([1 if v == u else 0 for v in range(field.k)]) for u in range(field.k)]


def _slot_prime_basis(tower: Tower, i: int) -> List[int]:
    """An F_p-basis of the values slot i may take."""
    if _in_subfield_slot(tower.m, i):
        return [tower.scale(c, b) for b in tower.subfield_basis(tower.m // 2) for c in _unit_elements(tower.base)]
    return _unit_elements(tower.big)


def _slot_span(tower: Tower, kind: str, slots: Sequence[int], cap: Optional[int]) -> FormSet:
    gens = []
    for i in slots:
        for y in _slot_prime_basis(tower, i):
            coeffs = [0] * slot_count(tower.m)
            coeffs[i] = y
            if kind == QUAD:
                gens.append(trace_quad_to_matrix(TraceQuadCoeffs(tower, coeffs)).upper())
            else:
                gens.append(trace_sym_to_matrix(TraceSymCoeffs(tower, coeffs)).upper())
    gens = np.array(gens, dtype=np.int64).reshape(-1, upper_length(tower.m))
    return span_set(tower.base, tower.m, kind, gens, cap)


def _expect(X: FormSet, size: int, name: str, d: int, check: bool, cap: Optional[int]) -> FormSet:
    if len(X) != size:
        raise ConsistencyError(f"{name} has {len(X)} forms, expected {size}")
    if check and not is_d_code(X, d, cap):
        raise ConsistencyError(f"{name} is not a {d}-code")
    logger.info("%s: %d %s forms, m=%d, GF(%d)", name, len(X), X.kind, X.m, X.q)
    return X


def _size_guard(size: int, cap: Optional[int]) -> None:
    if size > config.cap("code_cap", cap):
        raise CapExceeded(f"{size} forms exceed the code cap")


def _check_range(m: int, d: int) -> None:
    if m < 1 or not 1 <= d <= m:
        raise InvalidInput(f"need 1 <= d <= m, got m={m}, d={d}")


def sym_dcode(m: int, d: int, q, cap: Optional[int] = None, check: bool = False) -> FormSet:
    """Additive d-code in S(m,q): g_0..g_{(m-d)/2} free, the rest zero."""
    _check_range(m, d)
    if (m - d) % 2:
        raise ParityMismatch(f"sym_dcode needs d = m mod 2, got m={m}, d={d}")
    tower = tower_for(as_field(q).q, m)
    size = tower.base.q ** (m * (m - d + 2) // 2)
    _size_guard(size, cap)
    X = _slot_span(tower, SYM, range((m - d) // 2 + 1), cap)
    return _expect(X, size, f"sym_dcode({m},{d})", d, check, cap)


def quad_dcode_odd_odd(m: int, d: int, q, cap: Optional[int] = None, check: bool = False) -> FormSet:
    """Additive maximal d-code in Q(m,q), m and d odd: f_(d-1)/2 .. f_(m-1)/2 free."""
    _check_range(m, d)
    if m % 2 == 0 or d % 2 == 0:
        raise ParityMismatch(f"quad_dcode_odd_odd needs m and d odd, got m={m}, d={d}")
    tower = tower_for(as_field(q).q, m)
    size = tower.base.q ** (m * (m - d + 2) // 2)
    _size_guard(size, cap)
    X = _slot_span(tower, QUAD, range((d - 1) // 2, (m - 1) // 2 + 1), cap)
    return _expect(X, size, f"quad_dcode_odd_odd({m},{d})", d, check, cap)


def elliptic_dcode(m: int, delta: int, q, cap: Optional[int] = None, check: bool = False) -> FormSet:
    """Additive maximal elliptic (2 delta)-code in Q(m,q), m = 2n."""
    if m % 2:
        raise ParityMismatch(f"elliptic codes need m even, got {m}")
    n = m // 2
    if not 1 <= delta <= n:
        raise InvalidInput(f"need 1 <= delta <= {n}, got {delta}")
    tower = tower_for(as_field(q).q, m)
    size = tower.base.q ** (m * (n - delta) + n)
    _size_guard(size, cap)
    X = _slot_span(tower, QUAD, range(delta, n + 1), cap)
    return _expect(X, size, f"elliptic_dcode({m},{delta})", 2 * delta, check, cap)


def _upper_from_values(base: Field, m: int, value: Callable[[Sequence[int]], int]) -> Tuple[int, ...]:
    units = [tuple(1 if t == i else 0 for t in range(m)) for i in range(m)]
    diag = [value(u) for u in units]
    vec = []
    for i, j in pair_index(m):
        if i == j:
            vec.append(diag[i])
        else:
            s = value(tuple(1 if t in (i, j) else 0 for t in range(m)))
            vec.append(base.sub(base.sub(s, diag[i]), diag[j]))
    return tuple(vec)


def quad_dcode_even_even(m: int, d: int, q, cap: Optional[int] = None, check: bool = False) -> FormSet:
    """Maximal d-code in Q(m,q) for even q and even m, d on F_{q^(m-1)} x F_q.

    Q(x,u) = sum_{i=1}^{m/2-1} Tr((f_0 x)^(q^i+1)) + u Tr(f_0 x)
             + sum_{i=1}^{(m-d)/2} Tr(f_i x^(q^i+1)),
    coordinates: polynomial basis of F_{q^(m-1)}, then u. Not additive.
    """
    base = as_field(q)
    if base.p != 2:
        raise OddCharacteristic(f"quad_dcode_even_even needs q even, got {base.q}")
    _check_range(m, d)
    if m % 2 or d % 2:
        raise ParityMismatch(f"quad_dcode_even_even needs m and d even, got m={m}, d={d}")
    size = base.q ** ((m - 1) * (m - d + 2) // 2)
    _size_guard(size, cap)
    tower = tower_for(base.q, m - 1)
    base, big, qq = tower.base, tower.big, base.q
    basis = tower.polynomial_basis()

    def point(v: Sequence[int]) -> Tuple[int, int]:
        x = 0
        for c, a in zip(v[: m - 1], basis):
            if c:
                x = big.add(x, tower.scale(c, a))
        return x, v[m - 1]

    def nonlinear(f0: int) -> Callable[[Sequence[int]], int]:
        def value(v: Sequence[int]) -> int:
            x, u = point(v)
            fx = big.mul(f0, x)
            acc = base.mul(u, tower.rel_trace(fx))
            for i in range(1, m // 2):
                acc = base.add(acc, tower.rel_trace(big.pow(fx, qq**i + 1)))
            return acc
        return value

    def linear(i: int, f: int) -> Callable[[Sequence[int]], int]:
        def value(v: Sequence[int]) -> int:
            x, _ = point(v)
            return tower.rel_trace(big.mul(f, big.pow(x, qq**i + 1)))
        return value

    heads = np.array([_upper_from_values(base, m, nonlinear(f0)) for f0 in big.elements()], dtype=np.int64)
    gens = [
        _upper_from_values(base, m, linear(i, y))
        for i in range(1, (m - d) // 2 + 1)
        for y in _unit_elements(big)
    ]
    tails = span_set(base, m, QUAD, np.array(gens, dtype=np.int64).reshape(-1, upper_length(m)), cap).rows
    rows = base.vadd(heads[:, None, :], tails[None, :, :]).reshape(-1, upper_length(m))
    X = FormSet(base, m, QUAD, rows)
    return _expect(X, size, f"quad_dcode_even_even({m},{d})", d, check, cap)


# ---------------------------------------------------------------------------
# Puncturing


def puncture(
    X: FormSet,
    W: Optional[Sequence[Sequence[int]]] = None,
    check_d: Optional[int] = None,
    cap: Optional[int] = None,
) -> FormSet:
    """Restrictions of the members of X to a hyperplane W, as a set.

    W defaults to the span of the first m-1 coordinate vectors.
    """
    m = X.m
    if m < 2:
        raise BadSubspace("cannot puncture forms in dimension 1")
    if W is None:
        pos = {ij: t for t, ij in enumerate(pair_index(m))}
        rows = X.rows[:, [pos[ij] for ij in pair_index(m - 1)]]
    else:
        W = [[int(a) for a in w] for w in W]
        if len(W) != m - 1:
            raise BadSubspace(f"a hyperplane of F_q^{m} needs {m - 1} vectors, got {len(W)}")
        rows = np.array([restrict(F, W).upper() for F in X.members], dtype=np.int64)
    out = FormSet(X.field, m - 1, X.kind, rows, additive=X.additive)
    if len(out) < len(X):
        logger.info("puncturing collapsed %d forms to %d", len(X), len(out))
    if check_d is not None and not is_d_code(out, check_d, cap):
        raise ConsistencyError(f"punctured set is not a {check_d}-code")
    return out


def sym_dcode_punctured(m: int, d: int, q, cap: Optional[int] = None, check: bool = False) -> FormSet:
    """Maximal d-code in S(m,q) for m - d odd, punctured from S(m+1,q)."""
    _check_range(m, d)
    if (m - d) % 2 == 0:
        raise ParityMismatch(f"sym_dcode_punctured needs m - d odd, got m={m}, d={d}")
    X = puncture(sym_dcode(m + 1, d + 2, q, cap), cap=cap)
    size = as_field(q).q ** ((m + 1) * (m - d + 1) // 2)
    return _expect(X, size, f"sym_dcode_punctured({m},{d})", d, check, cap)


def quad_dcode_even_m_odd_d(
    m: int, d: int, q, cap: Optional[int] = None, check: bool = False
) -> FormSet:
    """Maximal d-code in Q(m,q), m even and d odd, punctured from Q(m+1,q)."""
    _check_range(m, d)
    if m % 2 or d % 2 == 0:
        raise ParityMismatch(f"quad_dcode_even_m_odd_d needs m even and d odd, got m={m}, d={d}")
    X = puncture(quad_dcode_odd_odd(m + 1, d + 2, q, cap), cap=cap)
    size = as_field(q).q ** ((m + 1) * (m - d + 1) // 2)
    return _expect(X, size, f"quad_dcode_even_m_odd_d({m},{d})", d, check, cap)


def quad_dcode_odd_m_even_d(
    m: int, d: int, q, cap: Optional[int] = None, check: bool = False
) -> FormSet:
    """Maximal d-code in Q(m,q), q even, m odd and d even, punctured from Q(m+1,q)."""
    _check_range(m, d)
    if m % 2 == 0 or d % 2:
        raise ParityMismatch(f"quad_dcode_odd_m_even_d needs m odd and d even, got m={m}, d={d}")
    X = puncture(quad_dcode_even_even(m + 1, d + 2, q, cap), cap=cap)
    size = as_field(q).q ** (m * (m - d + 1) // 2)
    return _expect(X, size, f"quad_dcode_odd_m_even_d({m},{d})", d, check, cap)


def sym_to_quad(X: FormSet) -> FormSet:
    """Q(x) = S(x,x)/2 for odd q."""
    f = X.field
    if f.p == 2:
        raise OddCharacteristic("S(x,x)/2 needs odd q")
    half = f.inv(f.add(1, 1))
    rows = X.rows.copy()
    for t, (i, j) in enumerate(pair_index(X.m)):
        if i == j:
            rows[:, t] = f.vmul(rows[:, t], half)
    return FormSet(f, X.m, QUAD, rows, additive=X.additive)


def maximal_code(
    kind: str, m: int, d: int, q, elliptic: bool = False, cap: Optional[int] = None
) -> FormSet:
    """A maximal d-code of the given kind, choosing the construction by parity."""
    field = as_field(q)
    _check_range(m, d)
    if elliptic:
        if kind != QUAD or d % 2:
            raise ParityMismatch("elliptic codes are quadratic with d even")
        return elliptic_dcode(m, d // 2, field, cap)
    if kind == SYM:
        return sym_dcode(m, d, field, cap) if (m - d) % 2 == 0 else sym_dcode_punctured(m, d, field, cap)
    if kind != QUAD:
        raise InvalidInput(f"unknown form kind {kind!r}")
    if m % 2 and d % 2:
        return quad_dcode_odd_odd(m, d, field, cap)
    if field.p != 2:
        return sym_to_quad(maximal_code(SYM, m, d, field, cap=cap))
    if d % 2:
        return quad_dcode_even_m_odd_d(m, d, field, cap)
    if m % 2 == 0:
        return quad_dcode_even_even(m, d, field, cap)
    return quad_dcode_odd_m_even_d(m, d, field, cap)


def build_family(family: str, m: int, d: int, q, cap: Optional[int] = None) -> FormSet:
    """Construction by CLI family name; ``elliptic`` takes d = 2 delta."""
    if family == "sym":
        return sym_dcode(m, d, q, cap)
    if family == "sym-punctured":
        return sym_dcode_punctured(m, d, q, cap)
    if family == "quad-oo":
        return quad_dcode_odd_odd(m, d, q, cap)
    if family == "quad-eo":
        return quad_dcode_even_m_odd_d(m, d, q, cap)
    if family == "quad-oe":
        return quad_dcode_odd_m_even_d(m, d, q, cap)
    if family == "quad-ee":
        return quad_dcode_even_even(m, d, q, cap)
    if family == "elliptic":
        if d % 2:
            raise ParityMismatch(f"elliptic codes need d even, got {d}")
        return elliptic_dcode(m, d // 2, q, cap)
    raise InvalidInput(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
