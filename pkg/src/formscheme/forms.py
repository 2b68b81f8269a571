"""Quadratic forms and symmetric bilinear forms on V = F_q^m.

A quadratic form is stored as the upper-triangular representative A of its
coset modulo alternating matrices, so Q(x) = sum_{i<=j} A_ij x_i x_j. A
symmetric bilinear form is stored as its Gram matrix. Both kinds flatten to
the same "upper vector" (entries i <= j, row by row), which is what the
vectorised census code works on.

Orbit indices follow the rank/type classification: odd rank r, or even rank
r with type +1 (hyperbolic) or -1 (elliptic). The zero form is (0, +1).
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import ClassVar, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import config
from .errors import (
    BadSubspace,
    CapExceeded,
    ClassificationInconsistency,
    DimensionMismatch,
    FieldError,
    InadmissibleIndex,
    InvalidInput,
    SingularTransform,
)
from .gf import TABLE_LIMIT, Field, as_field, det, matmul, nullspace, rank, rref, transpose

logger = logging.getLogger(__name__)

QUAD = "quad"
SYM = "sym"
KINDS = (QUAD, SYM)

# Upper bound on (forms x points) cells evaluated in one numpy block.
CHUNK_CELLS = 2**22


# ---------------------------------------------------------------------------
# Orbit indices


@dataclass(frozen=True)
class OrbitIndex:
    """One element of the index set I.

    Attributes:
        rank: Rank of the forms in the class.
        tau: +1 or -1 for even rank, 0 for odd rank.
    """

    rank: int
    tau: int = 0

    def __post_init__(self):
        if self.rank < 0:
            raise InadmissibleIndex(f"negative rank {self.rank}")
        if self.rank % 2:
            if self.tau != 0:
                raise InadmissibleIndex(f"odd rank {self.rank} carries no type")
        else:
            if self.tau not in (1, -1):
                raise InadmissibleIndex(f"even rank {self.rank} needs type +1 or -1, got {self.tau}")
            if self.rank == 0 and self.tau == -1:
                raise InadmissibleIndex("(0,-1) is not an orbit index")

    @classmethod
    def odd(cls, r: int) -> "OrbitIndex":
        if r % 2 == 0:
            raise InadmissibleIndex(f"{r} is not odd")
        return cls(r, 0)

    @classmethod
    def even(cls, r: int, tau: int = 1) -> "OrbitIndex":
        if r % 2:
            raise InadmissibleIndex(f"{r} is not even")
        return cls(r, tau)

    @property
    def is_odd(self) -> bool:
        return self.rank % 2 == 1

    @property
    def s(self) -> int:
        """floor(rank / 2)."""
        return self.rank // 2

    @property
    def label(self) -> str:
        if self.is_odd:
            return str(self.rank)
        return f"{self.rank}{'+' if self.tau == 1 else '-'}"

    @classmethod
    def parse(cls, label: str) -> "OrbitIndex":
        text = str(label).strip().replace("−", "-")
        try:
            if text.endswith("+"):
                return cls.even(int(text[:-1]), 1)
            if text.endswith("-"):
                return cls.even(int(text[:-1]), -1)
            return cls.odd(int(text))
        except ValueError as e:
            raise InadmissibleIndex(f"cannot parse orbit index {label!r}") from e

    def sort_key(self) -> Tuple[int, int]:
        return (self.rank, 0 if self.tau >= 0 else 1)

    def check(self, m: int) -> "OrbitIndex":
        if self.rank > m:
            raise InadmissibleIndex(f"rank {self.rank} exceeds dimension {m}")
        return self

    def __str__(self) -> str:
        return self.label


ZERO = OrbitIndex(0, 1)


@lru_cache(maxsize=None)
def index_set(m: int) -> Tuple[OrbitIndex, ...]:
    """I for dimension m, ordered by rank with + before -; floor(3m/2)+1 entries."""
    out: List[OrbitIndex] = []
    for r in range(m + 1):
        if r % 2:
            out.append(OrbitIndex(r))
        else:
            out.append(OrbitIndex(r, 1))
            if r > 0:
                out.append(OrbitIndex(r, -1))
    return tuple(out)


@lru_cache(maxsize=None)
def index_position(m: int) -> Dict[OrbitIndex, int]:
    return {i: n for n, i in enumerate(index_set(m))}


# ---------------------------------------------------------------------------
# Forms


def _square(field: Field, M: Sequence[Sequence[int]], m: int) -> Tuple[Tuple[int, ...], ...]:
    if len(M) != m or any(len(row) != m for row in M):
        raise DimensionMismatch(f"expected a {m}x{m} matrix")
    return tuple(tuple(field.check(int(a)) for a in row) for row in M)


@lru_cache(maxsize=None)
def pair_index(m: int) -> Tuple[Tuple[int, int], ...]:
    """Positions (i, j), i <= j, in upper-vector order."""
    return tuple((i, j) for i in range(m) for j in range(i, m))


def upper_length(m: int) -> int:
    return m * (m + 1) // 2


@dataclass(frozen=True)
class QuadForm:
    """Q(x) = sum_{i<=j} coeffs[i][j] x_i x_j over ``field``."""

    field: Field
    m: int
    coeffs: Tuple[Tuple[int, ...], ...]

    kind: ClassVar[str] = QUAD

    def __post_init__(self):
        M = _square(self.field, self.coeffs, self.m)
        if any(M[i][j] for i in range(self.m) for j in range(i)):
            raise InvalidInput("quadratic form coefficients must be upper triangular")
        object.__setattr__(self, "coeffs", M)

    @property
    def matrix(self) -> Tuple[Tuple[int, ...], ...]:
        return self.coeffs

    @classmethod
    def from_matrix(cls, field: Field, M: Sequence[Sequence[int]]) -> "QuadForm":
        """The form x -> x^T M x for an arbitrary square M."""
        m = len(M)
        U = [[0] * m for _ in range(m)]
        for i in range(m):
            U[i][i] = M[i][i]
            for j in range(i + 1, m):
                U[i][j] = field.add(M[i][j], M[j][i])
        return cls(field, m, U)

    @classmethod
    def from_upper(cls, field: Field, m: int, vec: Sequence[int]) -> "QuadForm":
        if len(vec) != upper_length(m):
            raise DimensionMismatch(f"expected {upper_length(m)} coefficients, got {len(vec)}")
        U = [[0] * m for _ in range(m)]
        for (i, j), a in zip(pair_index(m), vec):
            U[i][j] = int(a)
        return cls(field, m, U)

    @classmethod
    def zero(cls, field: Field, m: int) -> "QuadForm":
        return cls(field, m, [[0] * m for _ in range(m)])

    def upper(self) -> Tuple[int, ...]:
        return tuple(self.coeffs[i][j] for i, j in pair_index(self.m))

    def __call__(self, x: Sequence[int]) -> int:
        return quad_eval(self, x)


@dataclass(frozen=True)
class SymForm:
    """S(x, y) = x^T gram y over ``field``."""

    field: Field
    m: int
    gram: Tuple[Tuple[int, ...], ...]

    kind: ClassVar[str] = SYM

    def __post_init__(self):
        M = _square(self.field, self.gram, self.m)
        if any(M[i][j] != M[j][i] for i in range(self.m) for j in range(i)):
            raise InvalidInput("gram matrix must be symmetric")
        object.__setattr__(self, "gram", M)

    @property
    def matrix(self) -> Tuple[Tuple[int, ...], ...]:
        return self.gram

    @classmethod
    def from_upper(cls, field: Field, m: int, vec: Sequence[int]) -> "SymForm":
        if len(vec) != upper_length(m):
            raise DimensionMismatch(f"expected {upper_length(m)} coefficients, got {len(vec)}")
        B = [[0] * m for _ in range(m)]
        for (i, j), a in zip(pair_index(m), vec):
            B[i][j] = B[j][i] = int(a)
        return cls(field, m, B)

    @classmethod
    def zero(cls, field: Field, m: int) -> "SymForm":
        return cls(field, m, [[0] * m for _ in range(m)])

    def upper(self) -> Tuple[int, ...]:
        return tuple(self.gram[i][j] for i, j in pair_index(self.m))

    def __call__(self, x: Sequence[int], y: Sequence[int]) -> int:
        return sym_eval(self, x, y)


Form = Union[QuadForm, SymForm]


def form_class(kind: str):
    if kind == QUAD:
        return QuadForm
    if kind == SYM:
        return SymForm
    raise InvalidInput(f"unknown form kind {kind!r}")


def make_form(field: Field, m: int, kind: str, vec: Sequence[int]) -> Form:
    return form_class(kind).from_upper(field, m, vec)


def _check_vector(x: Sequence[int], m: int) -> None:
    if len(x) != m:
        raise DimensionMismatch(f"vector of length {len(x)} for dimension {m}")


def quad_eval(Q: QuadForm, x: Sequence[int]) -> int:
    _check_vector(x, Q.m)
    f = Q.field
    acc = 0
    for i in range(Q.m):
        if not x[i]:
            continue
        row = Q.coeffs[i]
        for j in range(i, Q.m):
            if row[j] and x[j]:
                acc = f.add(acc, f.mul(row[j], f.mul(x[i], x[j])))
    return acc


def sym_eval(S: SymForm, x: Sequence[int], y: Sequence[int]) -> int:
    _check_vector(x, S.m)
    _check_vector(y, S.m)
    f = S.field
    acc = 0
    for i in range(S.m):
        if not x[i]:
            continue
        row = S.gram[i]
        for j in range(S.m):
            if row[j] and y[j]:
                acc = f.add(acc, f.mul(row[j], f.mul(x[i], y[j])))
    return acc


def polarize(Q: QuadForm) -> SymForm:
    """S_Q(x, y) = Q(x+y) - Q(x) - Q(y), gram A + A^T."""
    f, m, A = Q.field, Q.m, Q.coeffs
    return SymForm(f, m, [[f.add(A[i][j], A[j][i]) for j in range(m)] for i in range(m)])


def _require_same_space(a: Form, b: Form) -> None:
    if a.field != b.field or a.m != b.m:
        raise DimensionMismatch("forms live on different spaces")


def form_add(a: Form, b: Form) -> Form:
    _require_same_space(a, b)
    if a.kind != b.kind:
        raise DimensionMismatch("cannot add a quadratic and a bilinear form")
    f = a.field
    return make_form(f, a.m, a.kind, [f.add(x, y) for x, y in zip(a.upper(), b.upper())])


def form_sub(a: Form, b: Form) -> Form:
    _require_same_space(a, b)
    if a.kind != b.kind:
        raise DimensionMismatch("cannot subtract a quadratic and a bilinear form")
    f = a.field
    return make_form(f, a.m, a.kind, [f.sub(x, y) for x, y in zip(a.upper(), b.upper())])


# ---------------------------------------------------------------------------
# Classification


def _type_from_zero_count(n_zero: int, m: int, r: int, q: int) -> int:
    s = r // 2
    base = q ** (m - 1)
    shift = (q - 1) * q ** (m - s - 1)
    if n_zero == base + shift:
        return 1
    if n_zero == base - shift:
        return -1
    raise ClassificationInconsistency(
        f"{n_zero} zeros fit no type for rank {r} in dimension {m} over GF({q})"
    )


def zero_count(Q: QuadForm, cap: Optional[int] = None) -> int:
    """|{x in V : Q(x) = 0}| by exhaustion."""
    f, m = Q.field, Q.m
    if f.q**m > config.cap("enumeration_cap", cap):
        raise CapExceeded(f"zero count over {f.q}^{m} points exceeds the enumeration cap")
    if f.q <= TABLE_LIMIT:
        values = eval_rows(f, m, np.array([Q.upper()], dtype=np.int64), QUAD)
        return int((values == 0).sum())
    return sum(1 for x in itertools.product(range(f.q), repeat=m) if quad_eval(Q, x) == 0)


def quad_classify(Q: QuadForm) -> OrbitIndex:
    f, m = Q.field, Q.m
    B = polarize(Q).gram
    r0 = rank(f, B)
    radical = nullspace(f, B, ncols=m)
    r = r0 + 1 if any(quad_eval(Q, v) for v in radical) else r0
    n_zero = zero_count(Q)
    if r % 2:
        if n_zero != f.q ** (m - 1):
            raise ClassificationInconsistency(f"odd-rank form with {n_zero} zeros: {Q}")
        return OrbitIndex(r)
    if r == 0:
        return ZERO
    return OrbitIndex(r, _type_from_zero_count(n_zero, m, r, f.q))


def sym_classify(S: SymForm) -> OrbitIndex:
    f = S.field
    _, pivots = rref(f, S.gram)
    r = len(pivots)
    if r % 2:
        return OrbitIndex(r)
    if r == 0:
        return ZERO
    if f.p == 2:
        alternating = all(S.gram[i][i] == 0 for i in range(S.m))
        return OrbitIndex(r, 1 if alternating else -1)
    d = det(f, [[S.gram[i][j] for j in pivots] for i in pivots])
    signed = d if (r // 2) % 2 == 0 else f.neg(d)
    return OrbitIndex(r, 1 if f.is_square(signed) else -1)


def classify(F: Form) -> OrbitIndex:
    return quad_classify(F) if F.kind == QUAD else sym_classify(F)


def pairing(Q: QuadForm, S: SymForm) -> int:
    """Exponent e of <Q, S> = omega^e, e = Tr(tr(A B)) with theta = 1."""
    _require_same_space(Q, S)
    f = Q.field
    acc = 0
    for a, b in zip(Q.upper(), S.upper()):
        if a and b:
            acc = f.add(acc, f.mul(a, b))
    return f.abs_trace(acc)


def apply_transform(F: Form, a: int, L: Sequence[Sequence[int]]) -> Form:
    """x -> a F(Lx) (quadratic) or (x, y) -> a F(Lx, Ly) (bilinear)."""
    f, m = F.field, F.m
    if a == 0:
        raise SingularTransform("scalar must be nonzero")
    if len(L) != m or any(len(row) != m for row in L):
        raise DimensionMismatch(f"transform must be {m}x{m}")
    if rank(f, L) != m:
        raise SingularTransform("transform matrix is singular")
    M = matmul(f, transpose(L), matmul(f, F.matrix, L))
    M = [[f.mul(a, x) for x in row] for row in M]
    if F.kind == QUAD:
        return QuadForm.from_matrix(f, M)
    return SymForm(f, m, M)


def restrict(F: Form, vectors: Sequence[Sequence[int]]) -> Form:
    """Restriction of F to span(vectors), in that basis."""
    f, m = F.field, F.m
    if not vectors:
        raise BadSubspace("subspace needs at least one vector")
    if any(len(v) != m for v in vectors):
        raise BadSubspace(f"subspace vectors must have length {m}")
    if rank(f, vectors) != len(vectors):
        raise BadSubspace("subspace vectors are linearly dependent")
    L = transpose(vectors)
    M = matmul(f, transpose(L), matmul(f, F.matrix, L))
    if F.kind == QUAD:
        return QuadForm.from_matrix(f, M)
    return SymForm(f, len(vectors), M)


def canonical_form(i: OrbitIndex, m: int, kind: str, q) -> Form:
    """The fixed representative of orbit ``i``."""
    f = as_field(q)
    i.check(m)
    M = [[0] * m for _ in range(m)]
    r = i.rank
    hyperbolic_pairs = r // 2 if (i.is_odd or i.tau == 1) else r // 2 - 1
    for t in range(hyperbolic_pairs):
        M[2 * t][2 * t + 1] = 1
        if kind == SYM:
            M[2 * t + 1][2 * t] = 1
    if i.is_odd:
        M[r - 1][r - 1] = 1
    elif i.tau == -1:
        a, b = r - 2, r - 1
        if kind == QUAD:
            M[a][a] = 1
            if f.p == 2:
                M[a][b] = 1
                M[b][b] = f.least_trace_one
            else:
                M[b][b] = f.neg(f.least_nonsquare)
        else:
            if f.p == 2:
                M[a][b] = M[b][a] = 1
                M[b][b] = 1
            else:
                M[a][a] = 1
                M[b][b] = f.neg(f.least_nonsquare)
    return QuadForm(f, m, M) if kind == QUAD else SymForm(f, m, M)


def enumerate_forms(m: int, q, kind: str, cap: Optional[int] = None) -> Iterator[Form]:
    """Every form of the given kind, in lexicographic upper-vector order."""
    f = as_field(q)
    cls = form_class(kind)
    total = f.q ** upper_length(m)
    if total > config.cap("enumeration_cap", cap):
        raise CapExceeded(f"{total} forms exceed the enumeration cap")
    for vec in itertools.product(range(f.q), repeat=upper_length(m)):
        yield cls.from_upper(f, m, vec)


# ---------------------------------------------------------------------------
# Vectorised evaluation and census


def vectorisable(field: Field) -> bool:
    return field.q <= TABLE_LIMIT


@lru_cache(maxsize=64)
def points(field: Field, m: int) -> np.ndarray:
    """All of F_q^m as a (q^m, m) array, first coordinate most significant."""
    q = field.q
    idx = np.arange(q**m, dtype=np.int64)
    if m == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.stack([(idx // q ** (m - 1 - j)) % q for j in range(m)], axis=1)


def all_rows(field: Field, m: int, cap: Optional[int] = None) -> np.ndarray:
    """Upper vectors of every form in dimension m, in enumeration order."""
    n = upper_length(m)
    if field.q**n > config.cap("enumeration_cap", cap):
        raise CapExceeded(f"{field.q ** n} forms exceed the enumeration cap")
    return points(field, n)


def eval_rows(field: Field, m: int, rows: np.ndarray, kind: str) -> np.ndarray:
    """Values at every point: Q(x) for quadratic rows, S(x, x) for bilinear rows."""
    X = points(field, m)
    rows = np.asarray(rows, dtype=np.int64)
    out = np.zeros((rows.shape[0], X.shape[0]), dtype=np.int64)
    for t, (i, j) in enumerate(pair_index(m)):
        coef = rows[:, t]
        if kind == SYM and i != j:
            coef = field.vadd(coef, coef)
        if not coef.any():
            continue
        mono = field.vmul(X[:, i], X[:, j])
        out = field.vadd(out, field.vmul(coef[:, None], mono[None, :]))
    return out


def _radical_sizes(field: Field, m: int, rows: np.ndarray, kind: str, values: np.ndarray) -> np.ndarray:
    X = points(field, m)
    pos = {ij: t for t, ij in enumerate(pair_index(m))}
    in_rad = np.ones(values.shape, dtype=bool)
    for k in range(m):
        lin = np.zeros(values.shape, dtype=np.int64)
        for i in range(m):
            c = rows[:, pos[(min(i, k), max(i, k))]]
            if kind == QUAD and i == k:
                c = field.vadd(c, c)
            lin = field.vadd(lin, field.vmul(c[:, None], X[None, :, i]))
        in_rad &= lin == 0
    if kind == QUAD:
        in_rad &= values == 0
    return in_rad.sum(axis=1)


def _classify_block(field: Field, m: int, kind: str, rows: np.ndarray) -> np.ndarray:
    q = field.q
    where = index_position(m)
    log_q = {q**e: e for e in range(m + 1)}
    values = eval_rows(field, m, rows, kind)
    ranks = [m - log_q[int(n)] for n in _radical_sizes(field, m, rows, kind, values)]
    zeros = (values == 0).sum(axis=1)
    diag = [t for t, (i, j) in enumerate(pair_index(m)) if i == j]
    alternating = ~rows[:, diag].any(axis=1) if diag else np.ones(len(rows), dtype=bool)
    out = np.empty(len(rows), dtype=np.int64)
    for n, r in enumerate(ranks):
        if r == 0:
            idx = ZERO
        elif kind == SYM and field.p == 2:
            idx = OrbitIndex(r) if r % 2 else OrbitIndex(r, 1 if alternating[n] else -1)
        elif r % 2:
            if zeros[n] != q ** (m - 1):
                raise ClassificationInconsistency(f"odd-rank row {rows[n].tolist()} has {zeros[n]} zeros")
            idx = OrbitIndex(r)
        else:
            idx = OrbitIndex(r, _type_from_zero_count(int(zeros[n]), m, r, q))
        out[n] = where[idx]
    return out


def classify_codes(
    field: Field, m: int, kind: str, rows: np.ndarray, threads: Optional[int] = None
) -> np.ndarray:
    """Position in ``index_set(m)`` of every row's orbit."""
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, upper_length(m))
    if len(rows) == 0:
        return np.zeros(0, dtype=np.int64)
    if not vectorisable(field):
        where = index_position(m)
        return np.array([where[classify(make_form(field, m, kind, r.tolist()))] for r in rows])
    step = max(1, CHUNK_CELLS // max(1, field.q**m))
    blocks = [rows[a:a + step] for a in range(0, len(rows), step)]
    n_threads = config.threads(threads)
    if n_threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            parts = list(pool.map(lambda b: _classify_block(field, m, kind, b), blocks))
    else:
        parts = [_classify_block(field, m, kind, b) for b in blocks]
    return np.concatenate(parts)


def classify_rows(
    field: Field, m: int, kind: str, rows: np.ndarray, threads: Optional[int] = None
) -> List[OrbitIndex]:
    idx = index_set(m)
    return [idx[c] for c in classify_codes(field, m, kind, rows, threads)]


@dataclass(frozen=True, eq=False)
class Census:
    """Every form of one space together with its orbit.

    Attributes:
        field: Base field.
        m: Dimension.
        kind: QUAD or SYM.
        rows: Upper vectors of all forms, in enumeration order.
        codes: Position of each row's orbit in ``index_set(m)``.
    """

    field: Field
    m: int
    kind: str
    rows: np.ndarray
    codes: np.ndarray

    @property
    def index(self) -> Tuple[OrbitIndex, ...]:
        return index_set(self.m)

    def members(self, i: OrbitIndex) -> np.ndarray:
        return self.rows[self.codes == index_position(self.m)[i]]

    def counts(self) -> Dict[OrbitIndex, int]:
        tally = np.bincount(self.codes, minlength=len(self.index))
        return {i: int(n) for i, n in zip(self.index, tally)}


@lru_cache(maxsize=16)
def _census(field: Field, m: int, kind: str, cap: int) -> Census:
    rows = all_rows(field, m, cap)
    codes = classify_codes(field, m, kind, rows)
    logger.debug("census of %s forms, m=%d, GF(%d): %d rows", kind, m, field.q, len(rows))
    return Census(field, m, kind, rows, codes)


def census(q, m: int, kind: str, cap: Optional[int] = None) -> Census:
    if kind not in KINDS:
        raise InvalidInput(f"unknown form kind {kind!r}")
    field = as_field(q)
    if not vectorisable(field):
        raise FieldError(f"census needs GF(q) with q <= {TABLE_LIMIT}")
    return _census(field, m, kind, config.cap("enumeration_cap", cap))


def pairing_matrix(field: Field, qrows: np.ndarray, srows: np.ndarray) -> np.ndarray:
    """Pairing exponents for every (quadratic row, bilinear row) combination."""
    qrows = np.asarray(qrows, dtype=np.int64)
    srows = np.asarray(srows, dtype=np.int64)
    acc = np.zeros((qrows.shape[0], srows.shape[0]), dtype=np.int64)
    for t in range(qrows.shape[1]):
        acc = field.vadd(acc, field.vmul(qrows[:, t, None], srows[None, :, t]))
    return field.trace_array[acc]
