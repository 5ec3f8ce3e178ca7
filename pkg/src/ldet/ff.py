"""Exact arithmetic in F_q, q = p^k odd.

Elements of F_{p^k} are polynomials over F_p reduced modulo a fixed monic
irreducible. Two arithmetic paths exist:

* ``FieldElem`` does scalar arithmetic directly on coefficient tuples.
* ``FieldCtx.vadd`` / ``vmul`` / ... work on numpy arrays of integer
  encodings (``sum(c_i * p**i)``) and back the matrix code. For ``k > 1``
  they go through discrete log / antilog tables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Union

import numpy as np

from .ntheory import factorize, is_prime

# beyond this p the modular products no longer fit in int64
_INT64_SAFE_P = 1 << 31


# ---------------------------------------------------------------------------
# polynomials over F_p, coefficient lists low degree first


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod(a, b, f, p):
    k = len(f) - 1
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    # f is monic: x^k = -(f_0 + ... + f_{k-1} x^{k-1})
    for d in range(len(out) - 1, k - 1, -1):
        c = out[d] % p
        if c:
            for i in range(k):
                out[d - k + i] -= c * f[i]
        out[d] = 0
    return _trim([c % p for c in out[:k]])


def _poly_powmod(a, e, f, p):
    result = [1]
    base = list(a)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, f, p)
        base = _poly_mulmod(base, base, f, p)
        e >>= 1
    return result


def _poly_mod(a, b, p):
    a = _trim([c % p for c in a])
    inv_lead = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        _trim(a)
    return a


def _poly_gcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def is_irreducible(f: tuple[int, ...], p: int) -> bool:
    """Rabin's test for a monic polynomial ``f`` (low degree first) over F_p."""
    k = len(f) - 1
    if k == 1:
        return True
    x = [0, 1]
    if _poly_powmod(x, p**k, f, p) != x:
        return False
    for r in factorize(k).factors:
        h = _poly_powmod(x, p ** (k // r), f, p)
        diff = _trim([(a - b) % p for a, b in itertools.zip_longest(h, x, fillvalue=0)])
        if len(_poly_gcd(list(f), diff, p)) != 1:
            return False
    return True


def _smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    # itertools.product enumerates (c_0, ..., c_{k-1}) with c_0 most significant
    for low in itertools.product(range(p), repeat=k):
        f = low + (1,)
        if f[0] and is_irreducible(f, p):
            return f
    raise AssertionError("no irreducible polynomial found")  # impossible over a field


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FieldCtx:
    """The field F_q with q = p^k, modulo the monic irreducible ``modulus``."""

    p: int
    k: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def prime_field(self) -> bool:
        return self.k == 1

    def __repr__(self) -> str:
        return f"F_{self.q}" if self.k == 1 else f"F_{self.q}[mod {list(self.modulus)}]"

    # -- scalars --------------------------------------------------------

    def __call__(self, value: Union[int, tuple, list]) -> "FieldElem":
        if isinstance(value, (tuple, list)):
            if len(value) > self.k:
                raise ValueError(f"{value} has more than {self.k} coefficients")
            cs = tuple(int(c) % self.p for c in value) + (0,) * (self.k - len(value))
            return FieldElem(self, cs)
        return embed_int(self, int(value))

    def zero(self) -> "FieldElem":
        return FieldElem(self, (0,) * self.k)

    def one(self) -> "FieldElem":
        return embed_int(self, 1)

    def from_index(self, index: int) -> "FieldElem":
        cs = []
        for _ in range(self.k):
            index, c = divmod(int(index), self.p)
            cs.append(c)
        return FieldElem(self, tuple(cs))

    def elements(self) -> Iterator["FieldElem"]:
        """All field elements in canonical order (lexicographic, low degree first), lazily."""
        if self.k == 1:  # product() would materialize range(p)
            return (FieldElem(self, (c,)) for c in range(self.p))
        return (FieldElem(self, cs) for cs in itertools.product(range(self.p), repeat=self.k))

    # -- vectorized arithmetic on integer encodings ---------------------

    @property
    def dtype(self):
        return np.int64 if self.p < _INT64_SAFE_P else object

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray]:
        g = find_generator(self)
        exp = np.empty(self.q - 1, dtype=np.int64)
        log = np.full(self.q, -1, dtype=np.int64)
        cur = self.one()
        for e in range(self.q - 1):
            exp[e] = cur.index
            log[cur.index] = e
            cur = cur * g
        return exp, log

    def vadd(self, a, b):
        if self.k == 1:
            return (a + b) % self.p
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        pw = 1
        for _ in range(self.k):
            out += (((a // pw) % self.p + (b // pw) % self.p) % self.p) * pw
            pw *= self.p
        return out

    def vneg(self, a):
        if self.k == 1:
            return (-a) % self.p
        out = np.zeros(np.shape(a), dtype=np.int64)
        pw = 1
        for _ in range(self.k):
            out += ((-((a // pw) % self.p)) % self.p) * pw
            pw *= self.p
        return out

    def vsub(self, a, b):
        if self.k == 1:
            return (a - b) % self.p
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        if self.k == 1:
            return a * b % self.p
        exp, log = self._tables
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        la, lb = log[a], log[b]
        out = exp[(la + lb) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def vpow(self, a, e: int):
        """Elementwise a**e (with 0**0 = 1)."""
        a = np.asarray(a, dtype=self.dtype)
        if self.k == 1:
            out = np.ones_like(a)
            base = a % self.p
            while e:
                if e & 1:
                    out = out * base % self.p
                base = base * base % self.p
                e >>= 1
            return out
        exp, log = self._tables
        out = exp[(log[a] * (e % (self.q - 1))) % (self.q - 1)]
        if e == 0:
            return np.ones_like(a)
        return np.where(a == 0, 0, out)

    def vchar(self, a):
        """Elementwise quadratic character as -1/0/+1 integers."""
        r = self.vpow(a, (self.q - 1) // 2)
        one = self.one().index
        return np.where(np.asarray(a) == 0, 0, np.where(r == one, 1, -1)).astype(np.int64)

    def scalar_inv(self, index: int) -> int:
        if self.k == 1:
            return pow(int(index), -1, self.p)
        exp, log = self._tables
        if index == 0:
            raise ZeroDivisionError("inverse of zero")
        return int(exp[(-log[index]) % (self.q - 1)])


@dataclass(frozen=True)
class FieldElem:
    ctx: FieldCtx
    coeffs: tuple[int, ...]

    @property
    def index(self) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * self.ctx.p + c
        return acc

    @property
    def sort_key(self) -> tuple[int, ...]:
        return self.coeffs

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def _coerce(self, other) -> "FieldElem":
        if isinstance(other, FieldElem):
            if other.ctx is not self.ctx:
                raise ValueError(f"mixed fields: {self.ctx!r} and {other.ctx!r}")
            return other
        if isinstance(other, (int, np.integer)):
            return embed_int(self.ctx, int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ctx.p
        return FieldElem(self.ctx, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.ctx.p
        return FieldElem(self.ctx, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ctx = self.ctx
        if ctx.k == 1:
            return FieldElem(ctx, (self.coeffs[0] * other.coeffs[0] % ctx.p,))
        prod_ = _poly_mulmod(list(self.coeffs), list(other.coeffs), ctx.modulus, ctx.p)
        return FieldElem(ctx, tuple(prod_) + (0,) * (ctx.k - len(prod_)))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        result, base = self.ctx.one(), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inv(self) -> "FieldElem":
        if self.is_zero():
            raise ZeroDivisionError(f"inverse of zero in {self.ctx!r}")
        if self.ctx.k == 1:
            return FieldElem(self.ctx, (pow(self.coeffs[0], -1, self.ctx.p),))
        return self ** (self.ctx.q - 2)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            return self.coeffs == embed_int(self.ctx, int(other)).coeffs
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.ctx is other.ctx and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((id(self.ctx), self.coeffs))

    def __str__(self) -> str:
        if self.ctx.k == 1:
            return str(self.coeffs[0])
        return "[" + ",".join(map(str, self.coeffs)) + "]"

    def __repr__(self) -> str:
        return f"FieldElem({self}, {self.ctx!r})"


@lru_cache(maxsize=64)
def field_create(p: int, k: int = 1) -> FieldCtx:
    """F_{p^k} with the lexicographically smallest monic irreducible modulus.

    For k = 1 the modulus is ``x`` and elements are plain residues.
    """
    if p % 2 == 0 or not is_prime(p):
        raise ValueError(f"characteristic must be an odd prime, got {p}")
    if k < 1:
        raise ValueError(f"extension degree must be >= 1, got {k}")
    modulus = (0, 1) if k == 1 else _smallest_irreducible(p, k)
    if not is_irreducible(modulus, p):
        raise AssertionError(f"modulus {modulus} is reducible over F_{p}")
    return FieldCtx(p, k, modulus)


def embed_int(ctx: FieldCtx, z: int) -> FieldElem:
    return FieldElem(ctx, (z % ctx.p,) + (0,) * (ctx.k - 1))


def quad_char(x: FieldElem) -> int:
    if x.is_zero():
        return 0
    return 1 if x ** ((x.ctx.q - 1) // 2) == x.ctx.one() else -1


@dataclass(frozen=True)
class SquareList:
    ctx: FieldCtx
    items: tuple[FieldElem, ...]

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, i):
        return self.items[i]

    @cached_property
    def indices(self) -> np.ndarray:
        return np.array([a.index for a in self.items], dtype=self.ctx.dtype)


@lru_cache(maxsize=64)
def squares(ctx: FieldCtx) -> SquareList:
    """The (q-1)/2 nonzero squares of F_q in canonical order."""
    if ctx.k == 1:
        p = ctx.p
        vals = sorted({x * x % p for x in range(1, (p + 1) // 2)})
        return SquareList(ctx, tuple(FieldElem(ctx, (v,)) for v in vals))
    seen = {x * x for x in ctx.elements() if not x.is_zero()}
    return SquareList(ctx, tuple(sorted(seen, key=lambda e: e.sort_key)))


@lru_cache(maxsize=64)
def least_nonsquare(ctx: FieldCtx) -> FieldElem:
    for x in ctx.elements():
        if quad_char(x) == -1:
            return x
    raise AssertionError("odd-order field has nonsquares")


@lru_cache(maxsize=64)
def find_generator(ctx: FieldCtx) -> FieldElem:
    """First element, in canonical order, of multiplicative order q-1."""
    order = ctx.q - 1
    exps = [order // r for r in factorize(order).factors]
    one = ctx.one()
    for g in ctx.elements():
        if g.is_zero():
            continue
        if all(g**e != one for e in exps):
            return g
    raise AssertionError("cyclic group has a generator")


def sqrt(x: FieldElem) -> FieldElem | None:
    """A square root of ``x`` by Tonelli-Shanks, or None for a nonsquare."""
    ctx = x.ctx
    if x.is_zero():
        return x
    if quad_char(x) != 1:
        return None
    s, t = 0, ctx.q - 1
    while t % 2 == 0:
        s += 1
        t //= 2
    c = least_nonsquare(ctx) ** t
    r = x ** ((t + 1) // 2)
    u = x**t
    one = ctx.one()
    m = s
    while u != one:
        i, w = 0, u
        while w != one:
            w = w * w
            i += 1
        b = c ** (1 << (m - i - 1))
        r = r * b
        c = b * b
        u = u * c
        m = i
    return r
