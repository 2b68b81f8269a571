"""Finite fields F_q (q = p^k), extension towers F_{q^m} / F_q, and linear
algebra over F_q.

An element is an int in ``[0, q)``: the coefficient vector of its polynomial
representative modulo the field's modulus, little-endian in base ``p``. The
prime subfield is therefore ``range(p)`` with ordinary residues.

Multiplication uses log/antilog tables up to ``TABLE_LIMIT`` elements and
schoolbook polynomial arithmetic above that.
"""

from __future__ import annotations

import logging
from functools import cached_property, lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from .errors import (
    DimensionMismatch,
    DivisionByZero,
    FieldError,
    Inconsistent,
    OddCharRequired,
    SingularBasis,
    SingularMatrix,
)

logger = logging.getLogger(__name__)

TABLE_LIMIT = 2**16
MAX_ORDER = 2**24

# Shipped moduli, coefficients low to high. Each is checked for
# irreducibility when a field is built from it.
MODULI: Dict[Tuple[int, int], Tuple[int, ...]] = {
    (2, 1): (0, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 0, 0, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (2, 9): (1, 0, 0, 0, 1, 0, 0, 0, 0, 1),
    (2, 10): (1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1),
    (2, 11): (1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    (2, 12): (1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1),
    (3, 1): (0, 1),
    (3, 2): (1, 0, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 1): (0, 1),
    (5, 2): (2, 0, 1),
    (5, 3): (3, 3, 0, 1),
    (7, 1): (0, 1),
    (7, 2): (1, 0, 1),
}

Matrix = Tuple[Tuple[int, ...], ...]


def _is_irreducible(p: int, modulus: Sequence[int]) -> bool:
    x = sympy.Symbol("x")
    poly = sympy.Poly.from_list(list(reversed(modulus)), x, modulus=p)
    return bool(poly.is_irreducible)


@lru_cache(maxsize=None)
def default_modulus(p: int, k: int) -> Tuple[int, ...]:
    """Shipped modulus for (p, k), else the least monic irreducible of degree k."""
    if (p, k) in MODULI:
        return MODULI[(p, k)]
    if k == 1:
        return (0, 1)
    for low in range(1, p**k):
        coeffs = tuple((low // p**i) % p for i in range(k)) + (1,)
        if coeffs[0] == 0:
            continue
        if _is_irreducible(p, coeffs):
            logger.debug("searched modulus for p=%d k=%d: %s", p, k, coeffs)
            return coeffs
    raise FieldError(f"no irreducible polynomial of degree {k} over F_{p}")


class Field:
    """The finite field F_{p^k} defined by a monic irreducible modulus."""

    def __init__(self, p: int, k: int = 1, modulus: Optional[Sequence[int]] = None):
        if not sympy.isprime(p):
            raise FieldError(f"characteristic must be prime, got {p}")
        if k < 1:
            raise FieldError(f"extension degree must be positive, got {k}")
        if p**k > MAX_ORDER:
            raise FieldError(f"fields with more than {MAX_ORDER} elements are not supported")
        if modulus is None:
            modulus = default_modulus(p, k)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {k}: {modulus}")
        if not _is_irreducible(p, modulus):
            raise FieldError(f"modulus {modulus} is reducible over F_{p}")

        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = modulus
        self._weights = [p**i for i in range(k)]
        self._exp: Optional[List[int]] = None
        self._log: Optional[List[int]] = None
        if self.q <= TABLE_LIMIT:
            self._build_tables()

    # identity

    def _key(self) -> tuple:
        return (self.p, self.k, self.modulus)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"Field(GF({self.q}), modulus={self.modulus})"

    def describe(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}

    # encoding

    def digits(self, a: int) -> List[int]:
        return [(a // w) % self.p for w in self._weights]

    def from_digits(self, ds: Sequence[int]) -> int:
        return sum((d % self.p) * w for d, w in zip(ds, self._weights))

    def check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise FieldError(f"{a} is not an element of GF({self.q})")
        return a

    def elements(self) -> range:
        return range(self.q)

    # schoolbook arithmetic

    def _poly_mul(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    if y:
                        prod[i + j] = (prod[i + j] + x * y) % p
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d]
            if c:
                for t, mt in enumerate(self.modulus):
                    prod[d - k + t] = (prod[d - k + t] - c * mt) % p
        return self.from_digits(prod[:k])

    def _poly_pow(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self._poly_mul(result, base)
            base = self._poly_mul(base, base)
            e >>= 1
        return result

    def _build_tables(self) -> None:
        order = self.q - 1
        if order == 1:
            gen = 1
        else:
            factors = sympy.primefactors(order)
            gen = next(
                g for g in range(2, self.q)
                if all(self._poly_pow(g, order // r) != 1 for r in factors)
            )
        exp = [1] * order
        for i in range(1, order):
            exp[i] = self._poly_mul(exp[i - 1], gen)
        log = [0] * self.q
        for i, e in enumerate(exp):
            log[e] = i
        self._exp, self._log = exp, log
        self.generator = gen
        logger.debug("built log tables for GF(%d), generator %d", self.q, gen)

    # scalar arithmetic

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.k == 1:
            return (a + b) % self.p
        p = self.p
        return sum(((x + y) % p) * w for x, y, w in zip(self.digits(a), self.digits(b), self._weights))

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.k == 1:
            return (-a) % self.p
        return self.from_digits([-d for d in self.digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self._poly_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in GF({self.q})")
        if self._exp is not None:
            return self._exp[(-self._log[a]) % (self.q - 1)]
        return self._poly_pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        if self._exp is not None:
            return self._exp[(self._log[a] * e) % (self.q - 1)]
        return self._poly_pow(a, e)

    def scalar(self, c: int) -> int:
        """The prime-field element c (mod p)."""
        return c % self.p

    def field_arith(self, a: int, b: int, op: str) -> int:
        """Dispatch on ``op`` in {add, sub, mul, div, pow, inv, neg}; ``b`` is the
        exponent for pow and ignored for the unary ops."""
        if op == "add":
            return self.add(a, b)
        if op == "sub":
            return self.sub(a, b)
        if op == "mul":
            return self.mul(a, b)
        if op == "div":
            return self.div(a, b)
        if op == "pow":
            return self.pow(a, b)
        if op == "inv":
            return self.inv(a)
        if op == "neg":
            return self.neg(a)
        raise ValueError(f"unknown field operation {op!r}")

    # traces and squares

    def abs_trace(self, y: int) -> int:
        """Absolute trace F_q -> F_p, returned as an int in range(p)."""
        s, t = y, y
        for _ in range(self.k - 1):
            t = self.pow(t, self.p)
            s = self.add(s, t)
        if s >= self.p:
            raise FieldError(f"trace of {y} left the prime field")
        return s

    def is_square(self, a: int) -> bool:
        """True iff a = b^2 for some b. 0 counts as a square."""
        if self.p == 2:
            raise OddCharRequired("square classes are only tested in odd characteristic")
        if a == 0:
            return True
        return self.pow(a, (self.q - 1) // 2) == 1

    @cached_property
    def least_nonsquare(self) -> int:
        return next(a for a in range(1, self.q) if not self.is_square(a))

    @cached_property
    def least_trace_one(self) -> int:
        return next(a for a in range(1, self.q) if self.abs_trace(a) == 1)

    # vectorised arithmetic

    def _require_tables(self) -> None:
        if self._exp is None:
            raise FieldError(f"vectorised arithmetic needs GF(q) with q <= {TABLE_LIMIT}")

    @cached_property
    def exp_array(self) -> np.ndarray:
        self._require_tables()
        return np.array(self._exp, dtype=np.int64)

    @cached_property
    def log_array(self) -> np.ndarray:
        self._require_tables()
        return np.array(self._log, dtype=np.int64)

    @cached_property
    def digit_array(self) -> np.ndarray:
        vals = np.arange(self.q, dtype=np.int64)
        return np.stack([(vals // w) % self.p for w in self._weights], axis=-1)

    @cached_property
    def weight_array(self) -> np.ndarray:
        return np.array(self._weights, dtype=np.int64)

    @cached_property
    def trace_array(self) -> np.ndarray:
        return np.array([self.abs_trace(a) for a in range(self.q)], dtype=np.int64)

    def vadd(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self.k == 1:
            return (a + b) % self.p
        d = (self.digit_array[a] + self.digit_array[b]) % self.p
        return d @ self.weight_array

    def vneg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return a
        if self.k == 1:
            return (-a) % self.p
        return ((-self.digit_array[a]) % self.p) @ self.weight_array

    def vsub(self, a, b) -> np.ndarray:
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b) -> np.ndarray:
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        out = self.exp_array[(self.log_array[a] + self.log_array[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)


@lru_cache(maxsize=None)
def field_for_order(q: int) -> Field:
    """Default field of order q."""
    if q < 2:
        raise FieldError(f"field order must be at least 2, got {q}")
    factors = sympy.factorint(q)
    if len(factors) != 1:
        raise FieldError(f"{q} is not a prime power")
    (p, k), = factors.items()
    return Field(p, k)


# ---------------------------------------------------------------------------
# Linear algebra over F_q. Matrices are sequences of rows of field elements.


def rref(field: Field, M: Sequence[Sequence[int]]) -> Tuple[List[List[int]], List[int]]:
    """Reduced row echelon form and pivot columns."""
    A = [list(row) for row in M]
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = field.inv(A[r][c])
        A[r] = [field.mul(inv, x) for x in A[r]]
        for i in range(nrows):
            f = A[i][c]
            if i != r and f:
                A[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A, pivots


def rank(field: Field, M: Sequence[Sequence[int]]) -> int:
    return len(rref(field, M)[1])


def nullspace(
    field: Field, M: Sequence[Sequence[int]], ncols: Optional[int] = None
) -> List[Tuple[int, ...]]:
    """Basis of {v : M v = 0}."""
    if ncols is None:
        if not M:
            raise DimensionMismatch("ncols is required for a matrix without rows")
        ncols = len(M[0])
    R, pivots = rref(field, M) if M else ([], [])
    basis = []
    for f in (c for c in range(ncols) if c not in pivots):
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(R, pivots):
            v[pc] = field.neg(row[f])
        basis.append(tuple(v))
    return basis


def det(field: Field, M: Sequence[Sequence[int]]) -> int:
    n = len(M)
    if any(len(row) != n for row in M):
        raise DimensionMismatch("determinant of a non-square matrix")
    A = [list(row) for row in M]
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            d = field.neg(d)
        d = field.mul(d, A[c][c])
        inv = field.inv(A[c][c])
        for i in range(c + 1, n):
            if A[i][c]:
                f = field.mul(A[i][c], inv)
                A[i] = [field.sub(x, field.mul(f, y)) for x, y in zip(A[i], A[c])]
    return d


def solve(field: Field, M: Sequence[Sequence[int]], b: Sequence[int]) -> Tuple[int, ...]:
    """One solution of M x = b (free variables set to 0)."""
    if len(M) != len(b):
        raise DimensionMismatch(f"{len(M)} equations but {len(b)} right-hand sides")
    ncols = len(M[0]) if M else 0
    R, pivots = rref(field, [list(row) + [bi] for row, bi in zip(M, b)])
    if ncols in pivots:
        raise Inconsistent("linear system has no solution")
    x = [0] * ncols
    for row, pc in zip(R, pivots):
        x[pc] = row[ncols]
    return tuple(x)


def inverse(field: Field, M: Sequence[Sequence[int]]) -> List[List[int]]:
    n = len(M)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(M)]
    R, pivots = rref(field, aug)
    if pivots[:n] != list(range(n)):
        raise SingularMatrix("matrix is singular")
    return [row[n:] for row in R]


def matmul(field: Field, A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> List[List[int]]:
    if A and len(A[0]) != len(B):
        raise DimensionMismatch("inner dimensions differ")
    cols = len(B[0]) if B else 0
    out = []
    for row in A:
        out_row = []
        for j in range(cols):
            s = 0
            for a, brow in zip(row, B):
                if a and brow[j]:
                    s = field.add(s, field.mul(a, brow[j]))
            out_row.append(s)
        out.append(out_row)
    return out


def transpose(A: Sequence[Sequence[int]]) -> List[List[int]]:
    return [list(col) for col in zip(*A)]


def linalg(field: Field, M: Sequence[Sequence[int]], op: str, rhs: Optional[Sequence[int]] = None):
    """Dispatch on ``op`` in {rank, nullspace, det, solve}."""
    if op == "rank":
        return rank(field, M)
    if op == "nullspace":
        return nullspace(field, M)
    if op == "det":
        return det(field, M)
    if op == "solve":
        if rhs is None:
            raise DimensionMismatch("solve needs a right-hand side")
        return solve(field, M, rhs)
    raise ValueError(f"unknown linear algebra operation {op!r}")


# ---------------------------------------------------------------------------
# Extension towers


class Tower:
    """F_{q^m} over F_q, with F_{q^m} realised as GF(p^{k m}).

    The base field is embedded by sending the generator of its polynomial
    representation to the least root of the base modulus in the big field.
    """

    def __init__(self, base: Field, m: int, big: Optional[Field] = None):
        if m < 1:
            raise FieldError(f"extension degree must be positive, got {m}")
        big = big if big is not None else Field(base.p, base.k * m)
        if big.p != base.p or big.k != base.k * m:
            raise FieldError(f"{big} is not a degree-{m} extension of {base}")
        self.base = base
        self.m = m
        self.big = big
        self._embed = self._find_embedding()
        self._project = {v: i for i, v in enumerate(self._embed)}

    def __repr__(self) -> str:
        return f"Tower(GF({self.big.q}) / GF({self.base.q}))"

    def _find_embedding(self) -> List[int]:
        base, big = self.base, self.big
        if base.k == 1:
            return list(range(base.p))

        def eval_modulus(z: int) -> int:
            acc = 0
            for c in reversed(base.modulus):
                acc = big.add(big.mul(acc, z), c)
            return acc

        root = next(z for z in big.elements() if eval_modulus(z) == 0)
        powers = [big.pow(root, i) for i in range(base.k)]
        table = []
        for a in base.elements():
            y = 0
            for d, zp in zip(base.digits(a), powers):
                if d:
                    y = big.add(y, big.mul(d, zp))
            table.append(y)
        return table

    def embed(self, a: int) -> int:
        return self._embed[a]

    def project(self, y: int) -> int:
        try:
            return self._project[y]
        except KeyError:
            raise FieldError(f"{y} does not lie in the base field GF({self.base.q})") from None

    def in_base(self, y: int) -> bool:
        return y in self._project

    def scale(self, c: int, y: int) -> int:
        """c * y for c in F_q and y in F_{q^m}."""
        return self.big.mul(self._embed[c], y)

    def conjugate_sum(self, y: int, n: int) -> int:
        """sum_{i<n} y^{q^i}, as an element of the big field."""
        big, q = self.big, self.base.q
        s, t = y, y
        for _ in range(n - 1):
            t = big.pow(t, q)
            s = big.add(s, t)
        return s

    def rel_trace(self, y: int) -> int:
        """Tr_m : F_{q^m} -> F_q."""
        if self.big.q <= TABLE_LIMIT:
            return int(self.trace_array[y])
        return self.project(self.conjugate_sum(y, self.m))

    @cached_property
    def trace_array(self) -> np.ndarray:
        return np.array(
            [self.project(self.conjugate_sum(y, self.m)) for y in self.big.elements()],
            dtype=np.int64,
        )

    @lru_cache(maxsize=None)
    def subfield(self, n: int) -> Tuple[int, ...]:
        """Elements of F_{q^n} inside F_{q^m}, in encoding order."""
        if n < 1 or self.m % n:
            raise FieldError(f"F_(q^{n}) is not a subfield of F_(q^{self.m})")
        qn = self.base.q**n
        return tuple(y for y in self.big.elements() if self.big.pow(y, qn) == y)

    def subfield_trace(self, y: int, n: int) -> int:
        """Tr_n : F_{q^n} -> F_q for y in the subfield F_{q^n}."""
        return self.project(self.conjugate_sum(y, n))

    @lru_cache(maxsize=None)
    def polynomial_basis(self) -> Tuple[int, ...]:
        theta = self.big.p if self.big.k > 1 else 1
        return tuple(self.big.pow(theta, i) for i in range(self.m))

    def dual_basis(self, basis: Sequence[int]) -> Tuple[int, ...]:
        """The basis beta with Tr_m(alpha_i beta_j) = delta_ij."""
        if len(basis) != self.m:
            raise SingularBasis(f"a basis of F_(q^{self.m}) over F_q has {self.m} elements")
        big = self.big
        gram = [[self.rel_trace(big.mul(a, b)) for b in basis] for a in basis]
        try:
            ginv = inverse(self.base, gram)
        except SingularMatrix:
            raise SingularBasis("elements are not linearly independent over F_q") from None
        dual = []
        for j in range(self.m):
            y = 0
            for i, a in enumerate(basis):
                if ginv[i][j]:
                    y = big.add(y, self.scale(ginv[i][j], a))
            dual.append(y)
        return tuple(dual)

    @cached_property
    def _coordinate_dual(self) -> Tuple[int, ...]:
        return self.dual_basis(self.polynomial_basis())

    def coordinates(self, y: int) -> Tuple[int, ...]:
        """Coordinates of y in the polynomial basis."""
        return tuple(self.rel_trace(self.big.mul(y, b)) for b in self._coordinate_dual)

    def from_coordinates(self, xs: Sequence[int]) -> int:
        if len(xs) != self.m:
            raise DimensionMismatch(f"expected {self.m} coordinates, got {len(xs)}")
        y = 0
        for x, a in zip(xs, self.polynomial_basis()):
            if x:
                y = self.big.add(y, self.scale(x, a))
        return y

    @lru_cache(maxsize=None)
    def subfield_basis(self, n: int) -> Tuple[int, ...]:
        """An F_q-basis of F_{q^n}, chosen greedily in encoding order."""
        chosen: List[int] = []
        rows: List[Tuple[int, ...]] = []
        for y in self.subfield(n):
            if y == 0:
                continue
            trial = rows + [self.coordinates(y)]
            if rank(self.base, trial) == len(trial):
                chosen.append(y)
                rows = trial
                if len(chosen) == n:
                    break
        return tuple(chosen)


@lru_cache(maxsize=None)
def tower_for(q: int, m: int) -> Tower:
    return Tower(field_for_order(q), m)


def as_field(q) -> Field:
    """Accept a Field or a prime power."""
    if isinstance(q, Field):
        return q
    return field_for_order(int(q))


# ---------------------------------------------------------------------------
# F_p-linear structure of vectors over F_q, used for additive sets


def to_prime_digits(field: Field, rows: np.ndarray) -> np.ndarray:
    """(C, N) field elements -> (C, N*k) prime-field digits."""
    rows = np.asarray(rows, dtype=np.int64)
    return field.digit_array[rows].reshape(rows.shape[0], rows.shape[1] * field.k)


def from_prime_digits(field: Field, digits: np.ndarray) -> np.ndarray:
    digits = np.asarray(digits, dtype=np.int64)
    return digits.reshape(digits.shape[0], digits.shape[1] // field.k, field.k) @ field.weight_array


def row_basis_mod_p(A: np.ndarray, p: int) -> np.ndarray:
    """Nonzero rows of the reduced echelon form of A over F_p."""
    A = np.array(A, dtype=np.int64) % p
    nrows, ncols = A.shape
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if len(nz) == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        col = A[:, c].copy()
        col[r] = 0
        A = (A - np.outer(col, A[r])) % p
        r += 1
    return A[:r]


def span_mod_p(basis: np.ndarray, p: int) -> np.ndarray:
    """All F_p-combinations of the basis rows."""
    basis = np.asarray(basis, dtype=np.int64)
    d = basis.shape[0]
    if d == 0:
        return np.zeros((1, basis.shape[1]), dtype=np.int64)
    idx = np.arange(p**d, dtype=np.int64)
    coeffs = np.stack([(idx // p ** (d - 1 - j)) % p for j in range(d)], axis=1)
    return (coeffs @ basis) % p
