"""Dense exact linear algebra over a prime field F_p.

Matrices are numpy int64 arrays holding residues in [0, p).  The free
functions (``rref``, ``kernel_basis``, ...) are what the rest of the package
uses; ``FieldScalar`` and ``Matrix`` are thin value types that pin the
characteristic and refuse to mix residues of different primes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np


class CharacteristicMismatch(ValueError):
    pass


class SingularMatrixError(ValueError):
    pass


@lru_cache(maxsize=None)
def check_prime(p: int) -> int:
    if not isinstance(p, (int, np.integer)) or p < 2:
        raise ValueError(f"characteristic must be a prime, got {p!r}")
    p = int(p)
    d = 2
    while d * d <= p:
        if p % d == 0:
            raise ValueError(f"characteristic must be a prime, got {p}")
        d += 1
    return p


@lru_cache(maxsize=None)
def _inverse_table(p: int) -> np.ndarray:
    table = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        table[a] = pow(a, -1, p)
    return table


def as_mod(a, p: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) % p


def rref(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns of ``a`` over F_p."""
    m = as_mod(a, p).copy()
    if m.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    rows, cols = m.shape
    inv = _inverse_table(p)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        m[r] = (m[r] * inv[m[r, c]]) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            m[hit] = (m[hit] - np.outer(col[hit], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    # eliminate along the shorter side
    if a.shape[0] > a.shape[1]:
        a = a.T
    return len(rref(a, p)[1])


def kernel_basis(a, p: int) -> np.ndarray:
    """Columns form a basis of {v : a v = 0}; shape (cols, cols - rank)."""
    a = as_mod(a, p)
    rows, cols = a.shape
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    r, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        basis[f, k] = 1
        for i, pc in enumerate(pivots):
            basis[pc, k] = (-r[i, f]) % p
    return basis


def column_space_basis(a, p: int) -> np.ndarray:
    """A maximal independent subset of the columns of ``a`` (kept in order)."""
    a = as_mod(a, p)
    if a.size == 0:
        return np.zeros((a.shape[0], 0), dtype=np.int64)
    _, pivots = rref(a, p)
    return a[:, pivots]


def solve(a, b, p: int) -> Optional[np.ndarray]:
    """Some x with a x = b, or None when b is outside the column space."""
    a = as_mod(a, p)
    b = as_mod(b, p)
    rows, cols = a.shape
    if b.shape[0] != rows:
        raise ValueError("right-hand side length must equal the row count")
    single = b.ndim == 1
    bb = b[:, None] if single else b
    r, pivots = rref(np.hstack([a, bb]), p)
    if any(pc >= cols for pc in pivots):
        return None
    x = np.zeros((cols, bb.shape[1]), dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = r[i, cols:]
    return x[:, 0] if single else x


def is_invertible(a, p: int) -> bool:
    a = np.asarray(a)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and rank(a, p) == a.shape[0]


def inverse(a, p: int) -> np.ndarray:
    a = as_mod(a, p)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    r, pivots = rref(np.hstack([a, np.eye(n, dtype=np.int64)]), p)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return r[:, n:]


def left_inverse(a, p: int) -> np.ndarray:
    """L with L a = I for a of full column rank."""
    a = as_mod(a, p)
    rows, cols = a.shape
    if cols == 0:
        return np.zeros((0, rows), dtype=np.int64)
    _, rows_idx = rref(a.T, p)
    if len(rows_idx) != cols:
        raise SingularMatrixError("matrix does not have full column rank")
    inv = inverse(a[rows_idx, :], p)
    out = np.zeros((cols, rows), dtype=np.int64)
    out[:, rows_idx] = inv
    return out


def matmul(a, b, p: int) -> np.ndarray:
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % p


def matpow(a, e: int, p: int) -> np.ndarray:
    """a**e by repeated squaring; e may be a huge Python int."""
    a = as_mod(a, p)
    result = np.eye(a.shape[0], dtype=np.int64)
    while e:
        if e & 1:
            result = matmul(result, a, p)
        e >>= 1
        if e:
            a = matmul(a, a, p)
    return result


@dataclass(frozen=True)
class FieldScalar:
    value: int
    p: int

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "value", int(self.value) % self.p)

    def _other(self, other) -> int:
        if isinstance(other, FieldScalar):
            if other.p != self.p:
                raise CharacteristicMismatch(f"cannot mix F_{self.p} and F_{other.p}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldScalar(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldScalar(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldScalar(o - self.value, self.p)

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldScalar(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldScalar(-self.value, self.p)

    def inverse(self) -> "FieldScalar":
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse")
        return FieldScalar(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self * FieldScalar(o, self.p).inverse()

    def __int__(self):
        return self.value


class Matrix:
    """Immutable matrix over F_p with the kernel operations attached."""

    __slots__ = ("_a", "p")

    def __init__(self, entries, p: int, shape: Optional[Sequence[int]] = None):
        self.p = check_prime(p)
        a = np.array(
            [[int(x) for x in row] for row in entries] if not isinstance(entries, np.ndarray) else entries,
            dtype=np.int64,
        )
        if shape is not None:
            a = a.reshape(tuple(shape))
        if a.ndim == 1 and a.size == 0:
            a = a.reshape(0, 0)
        a = a % self.p
        a.setflags(write=False)
        self._a = a

    @classmethod
    def identity(cls, n: int, p: int) -> "Matrix":
        return cls(np.eye(n, dtype=np.int64), p)

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> "Matrix":
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def entries(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self._a.ravel())

    def array(self) -> np.ndarray:
        return self._a.copy()

    def _same_field(self, other: "Matrix") -> None:
        if other.p != self.p:
            raise CharacteristicMismatch(f"cannot mix F_{self.p} and F_{other.p}")

    def __eq__(self, other):
        return isinstance(other, Matrix) and other.p == self.p and np.array_equal(self._a, other._a)

    def __hash__(self):
        return hash((self.p, self._a.shape, self._a.tobytes()))

    def __repr__(self):
        return f"Matrix({self._a.tolist()}, p={self.p})"

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        return Matrix(matmul(self._a, other._a, self.p), self.p)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        return Matrix(self._a + other._a, self.p)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_field(other)
        return Matrix(self._a - other._a, self.p)

    def transpose(self) -> "Matrix":
        return Matrix(self._a.T.copy(), self.p)

    def apply(self, v) -> tuple[int, ...]:
        return tuple(int(x) for x in matmul(self._a, as_mod(v, self.p), self.p))

    def rref(self) -> tuple["Matrix", int, list[int]]:
        r, piv = rref(self._a, self.p)
        return Matrix(r, self.p), len(piv), piv

    def rank(self) -> int:
        return rank(self._a, self.p)

    def kernel_basis(self) -> list[tuple[int, ...]]:
        k = kernel_basis(self._a, self.p)
        return [tuple(int(x) for x in k[:, j]) for j in range(k.shape[1])]

    def solve(self, b) -> Optional[tuple[int, ...]]:
        if isinstance(b, Sequence) and b and isinstance(b[0], FieldScalar):
            for s in b:
                if s.p != self.p:
                    raise CharacteristicMismatch(f"cannot mix F_{self.p} and F_{s.p}")
            b = [s.value for s in b]
        x = solve(self._a, np.asarray(b, dtype=np.int64), self.p)
        return None if x is None else tuple(int(v) for v in x)

    def is_invertible(self) -> bool:
        return is_invertible(self._a, self.p)

    def inverse(self) -> "Matrix":
        return Matrix(inverse(self._a, self.p), self.p)
