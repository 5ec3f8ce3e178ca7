"""Matrix families over F_q, determinants, Pfaffians and square-class tests.

Matrices store integer encodings of field elements in a numpy array, so
elimination steps are whole-array operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import ff
from .ff import FieldCtx, FieldElem
from .ntheory import factorize, is_prime, jacobi


@dataclass(frozen=True, eq=False)
class MatrixOverField:
    ctx: FieldCtx
    data: np.ndarray

    def __post_init__(self):
        if self.data.ndim != 2 or self.data.shape[0] != self.data.shape[1]:
            raise ValueError(f"matrix must be square, got shape {self.data.shape}")

    @classmethod
    def from_rows(cls, ctx: FieldCtx, rows: Sequence[Sequence]) -> "MatrixOverField":
        data = np.array(
            [[(e if isinstance(e, FieldElem) else ctx(e)).index for e in row] for row in rows],
            dtype=ctx.dtype,
        ).reshape(len(rows), -1)
        return cls(ctx, data)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    def __getitem__(self, ij) -> FieldElem:
        i, j = ij
        return self.ctx.from_index(int(self.data[i, j]))

    @property
    def entries(self) -> list[list[FieldElem]]:
        return [[self.ctx.from_index(int(v)) for v in row] for row in self.data]

    def rows_str(self) -> list[list[str]]:
        return [[str(e) for e in row] for row in self.entries]

    def transpose(self) -> "MatrixOverField":
        return MatrixOverField(self.ctx, self.data.T.copy())

    def permuted(self, perm: Sequence[int]) -> "MatrixOverField":
        """Simultaneous row/column relabeling P A P^T."""
        perm = np.asarray(perm)
        return MatrixOverField(self.ctx, self.data[np.ix_(perm, perm)].copy())

    def is_skew(self) -> bool:
        return bool(np.all(self.ctx.vadd(self.data, self.data.T) == 0))

    def is_symmetric(self) -> bool:
        return bool(np.all(self.data == self.data.T))

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixOverField):
            return NotImplemented
        return self.ctx is other.ctx and np.array_equal(self.data, other.data)


@dataclass(frozen=True)
class IntegerMatrix:
    """A matrix over Z/nZ for composite odd n; det/Pfaffian go through ``mod_prime``."""

    modulus: int
    data: np.ndarray

    @property
    def n(self) -> int:
        return self.data.shape[0]

    def mod_prime(self, p: int) -> MatrixOverField:
        if self.modulus % p or not is_prime(p):
            raise ValueError(f"{p} is not a prime factor of {self.modulus}")
        ctx = ff.field_create(p)
        return MatrixOverField(ctx, (self.data % p).astype(ctx.dtype))

    def prime_factors(self) -> list[int]:
        return factorize(self.modulus).primes()


# ---------------------------------------------------------------------------
# builders


def _char_as_field(ctx: FieldCtx, chars: np.ndarray) -> np.ndarray:
    one = ctx.one().index
    minus_one = (-ctx.one()).index
    return np.where(chars == 1, one, np.where(chars == -1, minus_one, 0)).astype(ctx.dtype)


def build_T_tilde(ctx: FieldCtx, d: FieldElem, m: int) -> MatrixOverField:
    """[(a_i + d a_j)^m phi(a_i + d a_j)] over the canonical squares a_1..a_n."""
    if d.ctx is not ctx:
        raise ValueError("d belongs to a different field")
    if d.is_zero():
        raise ValueError("d must be nonzero")
    if m < 0:
        raise ValueError(f"exponent must be nonnegative, got {m}")
    a = ff.squares(ctx).indices
    base = ctx.vadd(a[:, None], ctx.vmul(np.asarray(d.index, dtype=ctx.dtype), a[None, :]))
    data = ctx.vmul(ctx.vpow(base, m), _char_as_field(ctx, ctx.vchar(base)))
    return MatrixOverField(ctx, np.asarray(data, dtype=ctx.dtype))


def _legendre_table(p: int) -> np.ndarray:
    return np.array([jacobi(r, p) for r in range(p)], dtype=np.int64)


def _half_range(p: int) -> np.ndarray:
    return np.arange(1, (p - 1) // 2 + 1, dtype=object if p >= 1 << 31 else np.int64)


def build_T(p: int, d: int, m: int) -> MatrixOverField:
    """[(i^2 + d j^2)^m ((i^2 + d j^2)/p)] for 1 <= i, j <= (p-1)/2, over F_p."""
    if p % 2 == 0 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    if d % p == 0:
        raise ValueError(f"{p} divides d={d}")
    if m < 0:
        raise ValueError(f"exponent must be nonnegative, got {m}")
    ctx = ff.field_create(p)
    i = _half_range(p)
    base = (i[:, None] ** 2 + (d % p) * i[None, :] ** 2) % p
    sym = _legendre_table(p)[base.astype(np.int64)]
    data = ctx.vpow(base, m) * sym % p
    return MatrixOverField(ctx, data.astype(ctx.dtype))


def build_D(n_odd: int, m: int) -> MatrixOverField | IntegerMatrix:
    """[(i^2 - j^2)^m ((i^2 - j^2)/n)] for 1 <= i, j <= (n-1)/2 (Jacobi symbol).

    Over F_n when n is prime, otherwise an ``IntegerMatrix`` over Z/nZ.
    """
    if n_odd < 3 or n_odd % 2 == 0:
        raise ValueError(f"n must be odd and >= 3, got {n_odd}")
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    i = np.arange(1, (n_odd - 1) // 2 + 1, dtype=object)
    diff = (i[:, None] ** 2 - i[None, :] ** 2) % n_odd
    sym = np.array([jacobi(r, n_odd) for r in range(n_odd)], dtype=object)[diff.astype(np.int64)]
    powered = np.vectorize(lambda b: pow(int(b), m, n_odd), otypes=[object])(diff)
    data = powered * sym % n_odd
    if is_prime(n_odd):
        ctx = ff.field_create(n_odd)
        return MatrixOverField(ctx, data.astype(ctx.dtype))
    return IntegerMatrix(n_odd, data.astype(np.int64))


def build_S(p: int, d: int, e: int) -> MatrixOverField:
    """[(i^2 + d j^2)^e] for (p-1)/2 <= e <= p-1, or the symbol matrix
    [((i^2 + d j^2)/p)] when e = 0."""
    if p % 2 == 0 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    if e != 0 and not (p - 1) // 2 <= e <= p - 1:
        raise ValueError(f"exponent {e} outside [(p-1)/2, p-1] and not 0")
    ctx = ff.field_create(p)
    i = _half_range(p)
    base = (i[:, None] ** 2 + (d % p) * i[None, :] ** 2) % p
    if e == 0:
        data = _legendre_table(p)[base.astype(np.int64)] % p
    else:
        data = ctx.vpow(base, e)
    return MatrixOverField(ctx, data.astype(ctx.dtype))


# ---------------------------------------------------------------------------
# determinant and Pfaffian


def det(matrix: MatrixOverField) -> FieldElem:
    """Determinant by Gaussian elimination with row pivoting."""
    ctx = matrix.ctx
    a = matrix.data.copy()
    n = matrix.n
    acc = ctx.one()
    for c in range(n):
        nz = np.flatnonzero(a[c:, c] != 0)
        if nz.size == 0:
            return ctx.zero()
        r = c + int(nz[0])
        if r != c:
            a[[c, r]] = a[[r, c]]
            acc = -acc
        pivot = int(a[c, c])
        acc = acc * ctx.from_index(pivot)
        if c + 1 < n:
            f = ctx.vmul(a[c + 1 :, c], ctx.scalar_inv(pivot))
            a[c + 1 :, c:] = ctx.vsub(a[c + 1 :, c:], ctx.vmul(f[:, None], a[c, c:][None, :]))
    return acc


def pfaffian(matrix: MatrixOverField) -> FieldElem:
    """Pfaffian of a skew-symmetric matrix of even order, pf([[0,a],[-a,0]]) = a.

    Each step pivots a nonzero entry into position (k, k+1) by a
    simultaneous row/column swap (flipping the sign), then clears the rest
    of row k with a unimodular congruence; the Pfaffian picks up the pivot
    and recurses on the trailing block.
    """
    ctx = matrix.ctx
    n = matrix.n
    if n % 2:
        raise ValueError(f"Pfaffian needs even order, got {n}")
    if not matrix.is_skew():
        raise ValueError("matrix is not skew-symmetric")
    a = matrix.data.copy()
    acc = ctx.one()
    for k in range(0, n, 2):
        nz = np.flatnonzero(a[k, k + 1 :] != 0)
        if nz.size == 0:
            return ctx.zero()
        j = k + 1 + int(nz[0])
        if j != k + 1:
            a[[k + 1, j]] = a[[j, k + 1]]
            a[:, [k + 1, j]] = a[:, [j, k + 1]]
            acc = -acc
        pivot = int(a[k, k + 1])
        acc = acc * ctx.from_index(pivot)
        if k + 2 < n:
            tau = ctx.vmul(a[k, k + 2 :], ctx.scalar_inv(pivot))
            u = a[k + 1, k + 2 :]
            block = ctx.vsub(a[k + 2 :, k + 2 :], ctx.vmul(tau[:, None], u[None, :]))
            a[k + 2 :, k + 2 :] = ctx.vadd(block, ctx.vmul(u[:, None], tau[None, :]))
    return acc


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SquareClassResult:
    """Outcome of testing ``value == coefficient * w**2`` for some w in F_q.

    ``ratio`` is value/coefficient when the coefficient is nonzero.
    """

    value: FieldElem
    coefficient: FieldElem
    holds: bool
    degenerate_zero: bool
    witness: FieldElem | None = None
    ratio: FieldElem | None = None


def square_class_equal(
    value: FieldElem, coefficient: FieldElem, *, want_witness: bool = True
) -> SquareClassResult:
    if value.ctx is not coefficient.ctx:
        raise ValueError("value and coefficient live in different fields")
    if coefficient.is_zero():
        zero = value.is_zero()
        return SquareClassResult(value, coefficient, zero, zero, value.ctx.zero() if zero else None)
    ratio = value / coefficient
    if value.is_zero():
        return SquareClassResult(value, coefficient, True, True, value.ctx.zero(), ratio)
    holds = ff.quad_char(ratio) == 1
    witness = ff.sqrt(ratio) if holds and want_witness else None
    return SquareClassResult(value, coefficient, holds, False, witness, ratio)
