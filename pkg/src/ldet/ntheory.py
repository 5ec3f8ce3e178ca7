"""Integer-side number theory: primality, quadratic symbols, permutation signs,
the F_m(k) integers and factorization.

Everything here is a pure function of its arguments.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, isqrt, prod

# Miller-Rabin with these bases is exact for n < 3.3 * 10**24, which covers 2**64.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DETERMINISTIC_LIMIT = 3317044064679887385961981
# rounds used above the deterministic range
MR_PROBABILISTIC_ROUNDS = 40

TRIAL_DIVISION_BOUND = 10**6
RHO_MAX_RESEEDS = 32
RHO_ITERATION_CAP = 2_000_000

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def _mr_round(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Primality test.

    Exact for ``n < 2**64`` (and well beyond); above the deterministic range
    it runs ``MR_PROBABILISTIC_ROUNDS`` Miller-Rabin rounds with bases drawn
    from an RNG seeded by ``n``, so repeated calls agree.
    """
    if n < 2:
        return False
    for sp in _SMALL_PRIMES:
        if n == sp:
            return True
        if n % sp == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < _MR_DETERMINISTIC_LIMIT:
        return all(_mr_round(n, a, d, s) for a in _MR_BASES)
    rng = random.Random(n)
    return all(
        _mr_round(n, rng.randrange(2, n - 1), d, s)
        for _ in range(MR_PROBABILISTIC_ROUNDS)
    )


@lru_cache(maxsize=8)
def _sieve(limit: int) -> bytearray:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"[: min(2, limit + 1)]
    for i in range(2, isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = bytes(len(range(i * i, limit + 1, i)))
    return flags


_SIEVE_MAX = 10**7


def primes_in(lo: int, hi: int, residue: tuple[int, int] | None = None) -> list[int]:
    """All primes in ``[lo, hi]`` ascending, optionally only those
    congruent to ``r`` modulo ``mod`` where ``residue = (r, mod)``."""
    if lo > hi:
        raise ValueError(f"empty range: lo={lo} > hi={hi}")
    lo = max(lo, 2)
    if hi < lo:
        return []
    if hi <= _SIEVE_MAX:
        flags = _sieve(max(hi, 1000))
        out = [n for n in range(lo, hi + 1) if flags[n]]
    else:
        out = [n for n in range(lo, hi + 1) if is_prime(n)]
    if residue is not None:
        r, mod = residue
        out = [n for n in out if (n - r) % mod == 0]
    return out


def _require_odd_prime(p: int) -> None:
    if p % 2 == 0 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1, by the binary reciprocity algorithm."""
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"Jacobi symbol needs an odd positive modulus, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p); ``p`` must be an odd prime."""
    _require_odd_prime(p)
    return jacobi(a, p)


def lerch_sign(a: int, n: int) -> int:
    """Sign of the permutation x -> a*x of Z/nZ (Lerch's formula)."""
    if n <= 0:
        raise ValueError(f"modulus must be positive, got {n}")
    if gcd(a, n) != 1:
        raise ValueError(f"gcd({a}, {n}) != 1")
    if n % 2 == 1:
        return jacobi(a, n)
    if n % 4 == 2:
        return 1
    return -1 if a % 4 == 3 else 1


def is_prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``q == p**k`` and p prime, or None."""
    if q < 2:
        return None
    for k in range(q.bit_length(), 0, -1):
        p = _iroot(q, k)
        if p >= 2 and p**k == q and is_prime(p):
            return p, k
    return None


def _iroot(n: int, k: int) -> int:
    # floor of the k-th root of n
    lo, hi = 1, 1 << (n.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**k <= n:
            lo = mid
        else:
            hi = mid - 1
    return lo


def inv_sign(q: int) -> int:
    """Sign of x -> 1/x on the nonzero squares of F_q, for odd prime powers q."""
    pk = is_prime_power(q)
    if pk is None or pk[0] == 2:
        raise ValueError(f"{q} is not an odd prime power")
    return -1 if ((q - 3) * (q - 5) // 8) % 2 else 1


def huang_pan_sign(a: int, p: int) -> int:
    """Sign of the folded multiplication map on {1, ..., (p-1)/2}.

    The permutation sends k to the unique r in that range with
    a*k = +-r (mod p); its sign is (a/p)**((p+1)/2).
    """
    _require_odd_prime(p)
    if a % p == 0:
        raise ValueError(f"{p} divides {a}")
    s = legendre(a, p)
    return s if ((p + 1) // 2) % 2 else 1


@dataclass(frozen=True)
class FmkValue:
    m: int
    k: int
    value: int


def _descending(top: int, bottom: int, step: int = 1) -> int:
    # top * (top - step) * ... * bottom; empty when top < bottom
    return prod(range(top, bottom - 1, -step))


def fmk(m: int, k: int) -> FmkValue:
    """F_m(k) = 2^(m-2k)(m-k)...(k+1) + (2m-2k-1)(2m-2k-3)...(2k+1)."""
    if m < 1 or m % 2 == 0:
        raise ValueError(f"m must be an odd positive integer, got {m}")
    if not 0 <= k <= (m - 1) // 2:
        raise ValueError(f"k={k} outside 0..{(m - 1) // 2}")
    value = 2 ** (m - 2 * k) * _descending(m - k, k + 1) + _descending(
        2 * m - 2 * k - 1, 2 * k + 1, 2
    )
    return FmkValue(m, k, value)


def fmk_bound(m: int) -> int:
    """max over 0 <= k <= (m-1)/2 of F_m(k); primes above it are never exceptional."""
    return max(fmk(m, k).value for k in range((m - 1) // 2 + 1))


@dataclass(frozen=True)
class Factorization:
    """Prime factorization of ``n``.

    ``unresolved`` holds composite cofactors the effort budget could not
    split; ``complete`` is False exactly when it is nonempty.
    """

    n: int
    factors: dict[int, int] = field(default_factory=dict)
    unresolved: tuple[int, ...] = ()

    @property
    def complete(self) -> bool:
        return not self.unresolved

    def primes(self) -> list[int]:
        return sorted(self.factors)


def _brent(n: int, c: int, y: int, iteration_cap: int) -> int | None:
    """One Pollard-rho run with Brent's cycle detection; returns a factor or None."""
    m = 128
    g = r = q = 1
    x = ys = y
    steps = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = gcd(q, n)
            k += m
        r *= 2
        steps += r
        if steps > iteration_cap:
            return None
    if g == n:
        # batched gcd overshot; step back one at a time
        while True:
            ys = (ys * ys + c) % n
            g = gcd(abs(x - ys), n)
            if g > 1:
                break
    return g if g != n else None


def _split(n: int) -> int | None:
    rng = random.Random(n)
    for _ in range(RHO_MAX_RESEEDS):
        d = _brent(n, rng.randrange(1, n), rng.randrange(0, n), RHO_ITERATION_CAP)
        if d is not None:
            return d
    return None


def factorize(n: int) -> Factorization:
    """Factor ``n``: trial division below ``TRIAL_DIVISION_BOUND``, then
    Pollard-rho (Brent) with up to ``RHO_MAX_RESEEDS`` reseeds per cofactor.

    Composites that survive the budget are reported in ``unresolved``
    rather than raised.
    """
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    factors: dict[int, int] = {}
    rest = n
    bound = min(TRIAL_DIVISION_BOUND, isqrt(n))
    if bound >= 2:
        flags = _sieve(max(bound, 1000))
        for p in range(2, bound + 1):
            if not flags[p]:
                continue
            if p * p > rest:
                break
            while rest % p == 0:
                factors[p] = factors.get(p, 0) + 1
                rest //= p
    unresolved: list[int] = []
    stack = [rest] if rest > 1 else []
    while stack:
        c = stack.pop()
        if is_prime(c):
            factors[c] = factors.get(c, 0) + 1
            continue
        r = isqrt(c)
        if r * r == c:
            stack += [r, r]
            continue
        d = _split(c)
        if d is None:
            unresolved.append(c)
        else:
            stack += [d, c // d]
    return Factorization(n, dict(sorted(factors.items())), tuple(sorted(unresolved)))


def factorial_mod(n: int, p: int) -> int:
    """n! mod p (0 once n >= p)."""
    if n >= p:
        return 0
    acc = 1 % p
    for i in range(2, n + 1):
        acc = acc * i % p
    return acc


def binomial_mod(n: int, k: int, p: int) -> int:
    """C(n, k) mod prime p via Lucas' theorem, each digit by factorials and inversion."""
    if k < 0 or k > n:
        return 0
    acc = 1
    while n or k:
        ni, ki = n % p, k % p
        if ki > ni:
            return 0
        num = factorial_mod(ni, p)
        den = factorial_mod(ki, p) * factorial_mod(ni - ki, p) % p
        acc = acc * num * pow(den, -1, p) % p
        n //= p
        k //= p
    return acc
