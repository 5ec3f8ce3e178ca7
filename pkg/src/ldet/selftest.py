"""Invariant battery run by ``ldet selftest``.

Each check returns (ok, detail). Bounds are fixed so a run is reproducible
and finishes in well under five minutes on a laptop.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import ff, matrices, theorems as th
from .ntheory import is_prime, is_prime_power, legendre, primes_in

SEED = 20240501


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str
    seconds: float

    def line(self) -> str:
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.name}: {self.detail} ({self.seconds:.1f}s)"


def _random_prime(rng: random.Random, lo: int, hi: int) -> int:
    while True:
        n = rng.randrange(lo, hi) | 1
        if is_prime(n):
            return n


def _random_skew(ctx: ff.FieldCtx, n: int, rng: random.Random) -> matrices.MatrixOverField:
    a = np.zeros((n, n), dtype=ctx.dtype)
    for i in range(n):
        for j in range(i + 1, n):
            v = rng.randrange(ctx.q) if rng.random() > 0.1 else 0
            a[i, j] = v
            a[j, i] = (ctx.q - v) % ctx.q
    return matrices.MatrixOverField(ctx, a)


def check_pf_squared(count: int = 1000) -> tuple[bool, str]:
    rng = random.Random(SEED)
    bad = 0
    for _ in range(count):
        p = _random_prime(rng, 3, 1 << 31)
        ctx = ff.field_create(p)
        A = _random_skew(ctx, rng.choice(range(2, 13, 2)), rng)
        pf = matrices.pfaffian(A)
        bad += pf * pf != matrices.det(A)
    return bad == 0, f"{count} skew matrices, {bad} mismatches"


def _pf_expand(rows: list[list[int]], p: int) -> int:
    # expansion along the first row
    n = len(rows)
    if n == 0:
        return 1
    total = 0
    for j in range(1, n):
        keep = [k for k in range(n) if k not in (0, j)]
        minor = [[rows[r][c] for c in keep] for r in keep]
        total += (-1) ** (j - 1) * rows[0][j] * _pf_expand(minor, p)
    return total % p


def check_pf_definition(count: int = 200) -> tuple[bool, str]:
    rng = random.Random(SEED + 1)
    bad = 0
    for _ in range(count):
        p = rng.choice([3, 5, 7, 11, 13, 101, 65537])
        ctx = ff.field_create(p)
        A = _random_skew(ctx, rng.choice([2, 4, 6, 8]), rng)
        bad += matrices.pfaffian(A).index != _pf_expand(A.data.tolist(), p)
    return bad == 0, f"{count} matrices against the expansion, {bad} mismatches"


def check_lemma_2_1(trials: int = 500) -> tuple[bool, str]:
    fields = [ff.field_create(101), ff.field_create(11, 2)]
    failures = done = 0
    per = -(-trials // (len(fields) * 8))
    for ctx in fields:
        for n in range(1, 9):
            rec = th.verify_lemma_2_1(ctx, n, per, seed=SEED)
            failures += int(rec.computed["failures"])
            done += per
    return failures == 0, f"{done} trials over F_101 and F_121, n<=8, {failures} failures"


def check_lemma_2_2() -> tuple[bool, str]:
    rec = th.verify_lemma_2_2(128)
    return rec.verdict == th.PASS, f"n<=128, {rec.computed['checked']} units, {rec.computed['failures']} failures"


def check_lemma_2_3() -> tuple[bool, str]:
    rec = th.verify_lemma_2_3(343)
    return rec.verdict == th.PASS, f"odd q<=343, {rec.computed['checked']} fields, {rec.computed['failures']} failures"


def check_huang_pan() -> tuple[bool, str]:
    checked, failures = th.verify_huang_pan(200)
    return failures == 0, f"p<=200, {checked} pairs, {failures} failures"


def check_euler() -> tuple[bool, str]:
    bad = checked = 0
    for q in range(3, 344):
        pk = is_prime_power(q)
        if pk is None or pk[0] == 2:
            continue
        ctx = ff.field_create(*pk)
        sq = set(ff.squares(ctx).indices.tolist())
        for x in ctx.elements():
            checked += 1
            if x.is_zero():
                bad += ff.quad_char(x) != 0
                continue
            euler = x ** ((q - 1) // 2)
            expect = 1 if x.index in sq else -1
            bad += ff.quad_char(x) != expect or euler != expect
            if pk[1] == 1:
                bad += legendre(x.index, q) != expect
    return bad == 0, f"{checked} elements, odd q<=343, {bad} disagreements"


def check_T_consistency() -> tuple[bool, str]:
    bad = cases = 0
    for p in primes_in(3, 200):
        ctx = ff.field_create(p)
        ds = [1] + ([ff.least_nonsquare(ctx).index] if p > 3 else [])
        for d in ds:
            for m in range(4):
                cases += 1
                a = matrices.det(matrices.build_T(p, d, m))
                b = matrices.det(matrices.build_T_tilde(ctx, ctx(d), m))
                bad += a != b
    return bad == 0, f"{cases} (p,d,m) cases, {bad} mismatches"


def check_permutation_invariance(perms: int = 50) -> tuple[bool, str]:
    rng = random.Random(SEED + 2)
    instances = [
        matrices.build_T_tilde(ff.field_create(13), ff.field_create(13).one(), 2),
        matrices.build_T_tilde(ff.field_create(5, 2), ff.field_create(5, 2).one(), 1),
        matrices.build_T_tilde(ff.field_create(7, 2), ff.least_nonsquare(ff.field_create(7, 2)), 3),
        matrices.build_D(13, 1),
        matrices.build_D(101, 3),
        matrices.build_S(29, 1, 0),
        matrices.build_T(31, 1, 2),
    ]
    bad = 0
    for A in instances:
        ref = matrices.det(A)
        for _ in range(perms):
            perm = list(range(A.n))
            rng.shuffle(perm)
            bad += matrices.det(A.permuted(perm)) != ref
    return bad == 0, f"{len(instances)} instances x {perms} permutations, {bad} changes"


def check_identities() -> tuple[bool, str]:
    bad = [p for p in primes_in(5, 500) if th.verify_identities(p).verdict != th.PASS]
    return not bad, f"5<=p<=500, failing primes {bad}"


def check_proof_chain() -> tuple[bool, str]:
    bad = []
    cases = 0
    for m in (1, 3, 5, 7):
        for p in primes_in(2 * m + 1, 500, (1, 4)):
            cases += 1
            lhs = th.p_divides_D(p, m)
            rhs = any(th.coefficient_vanishes(p, m, k) for k in range((m - 1) // 2 + 1))
            if lhs != rhs:
                bad.append((p, m))
    return not bad, f"{cases} (p,m) pairs, p<=500, mismatches {bad}"


CHECKS: list[tuple[str, Callable[[], tuple[bool, str]]]] = [
    ("pf^2 = det", check_pf_squared),
    ("pfaffian vs expansion", check_pf_definition),
    ("lemma 2.1 (randomized)", check_lemma_2_1),
    ("lemma 2.2 (Lerch sign)", check_lemma_2_2),
    ("lemma 2.3 (inversion sign)", check_lemma_2_3),
    ("Huang-Pan sign", check_huang_pan),
    ("Euler criterion", check_euler),
    ("T vs T~ consistency", check_T_consistency),
    ("det under relabeling", check_permutation_invariance),
    ("identities", check_identities),
    ("E(m) proof chain", check_proof_chain),
]


def run_all(echo: Callable[[str], None] | None = print) -> list[CheckResult]:
    results = []
    for name, fn in CHECKS:
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed check, not a crashed battery
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        res = CheckResult(name, ok, detail, time.perf_counter() - t0)
        if echo is not None:
            echo(res.line())
        results.append(res)
    return results
