import itertools

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from ldet import ff
from ldet.ntheory import factorial_mod, is_prime_power, legendre

FIELDS = [(3, 1), (5, 1), (13, 1), (101, 1), (3, 2), (5, 2), (7, 2), (3, 3), (11, 2), (13, 2), (7, 3)]
fields = st.sampled_from(FIELDS).map(lambda pk: ff.field_create(*pk))


def _sympy_mul(ctx, a, b):
    x = sympy.symbols("x")
    f = sympy.Poly(list(reversed(ctx.modulus)), x, modulus=ctx.p)
    pa = sympy.Poly(list(reversed(a.coeffs)), x, modulus=ctx.p)
    pb = sympy.Poly(list(reversed(b.coeffs)), x, modulus=ctx.p)
    r = (pa * pb).rem(f)
    coeffs = [int(c) % ctx.p for c in reversed(r.all_coeffs())]
    return ctx(coeffs + [0] * (ctx.k - len(coeffs)))


def test_field_create_prime():
    F5 = ff.field_create(5, 1)
    assert F5.q == 5 and F5.prime_field


def test_field_create_f25_smallest_modulus():
    F25 = ff.field_create(5, 2)
    # x^2 + c1 x + c0, coefficients compared low degree first: first irreducible is x^2 + x + 2?
    # enumerate independently
    for c0, c1 in itertools.product(range(5), repeat=2):
        if all((r * r + c1 * r + c0) % 5 for r in range(5)):
            first = (c0, c1, 1)
            break
    assert F25.modulus == first


@pytest.mark.parametrize("p,k", [(2, 3), (9, 1), (5, 0)])
def test_field_create_rejects(p, k):
    with pytest.raises(ValueError):
        ff.field_create(p, k)


@pytest.mark.parametrize("p,k", FIELDS)
def test_modulus_irreducible_per_sympy(p, k):
    ctx = ff.field_create(p, k)
    poly = sympy.Poly(list(reversed(ctx.modulus)), sympy.symbols("x"), modulus=p)
    assert poly.is_irreducible


def test_is_irreducible_against_root_search_degree_2_3():
    for p in (3, 5, 7):
        for k in (2, 3):
            for tail in itertools.product(range(p), repeat=k):
                f = tail + (1,)
                rootless = all(sum(c * pow(r, i, p) for i, c in enumerate(f)) % p for r in range(p))
                assert ff.is_irreducible(f, p) == rootless


@pytest.mark.parametrize("x,expected", [(0, 0), (4, 1), (2, -1)])
def test_quad_char_f13(x, expected):
    assert ff.quad_char(ff.field_create(13)(x)) == expected


def test_squares_examples():
    assert [int(str(a)) for a in ff.squares(ff.field_create(13))] == [1, 3, 4, 9, 10, 12]
    assert [int(str(a)) for a in ff.squares(ff.field_create(5))] == [1, 4]


def test_embed_examples():
    assert ff.embed_int(ff.field_create(7), 10) == 3
    F25 = ff.field_create(5, 2)
    assert ff.embed_int(F25, factorial_mod(12, 5)).is_zero()
    assert ff.embed_int(ff.field_create(13), -1) == 12


def test_inverse_example():
    F13 = ff.field_create(13)
    assert F13(4).inv() == 10
    with pytest.raises(ZeroDivisionError):
        F13.zero().inv()


def test_mixed_contexts_rejected():
    with pytest.raises(ValueError):
        ff.field_create(13)(1) + ff.field_create(11)(1)


def test_generators():
    assert ff.find_generator(ff.field_create(5)) == 2
    assert ff.find_generator(ff.field_create(7)) == 3
    for p, k in FIELDS:
        ctx = ff.field_create(p, k)
        g = ff.find_generator(ctx)
        assert len({(g**e).index for e in range(ctx.q - 1)}) == ctx.q - 1


@given(fields, st.data())
def test_mul_matches_sympy(ctx, data):
    a = ctx.from_index(data.draw(st.integers(0, ctx.q - 1)))
    b = ctx.from_index(data.draw(st.integers(0, ctx.q - 1)))
    assert a * b == _sympy_mul(ctx, a, b)


@given(fields, st.data())
def test_field_axioms(ctx, data):
    draw = lambda: ctx.from_index(data.draw(st.integers(0, ctx.q - 1)))
    a, b, c = draw(), draw(), draw()
    assert (a + b) * c == a * c + b * c
    assert a * (b * c) == (a * b) * c
    assert a - a == ctx.zero()
    if not a.is_zero():
        assert a * a.inv() == ctx.one()
        assert a**0 == ctx.one()
        assert b / a * a == b


@given(fields, st.data())
def test_quad_char_multiplicative(ctx, data):
    a = ctx.from_index(data.draw(st.integers(0, ctx.q - 1)))
    b = ctx.from_index(data.draw(st.integers(0, ctx.q - 1)))
    assert ff.quad_char(a * b) == ff.quad_char(a) * ff.quad_char(b)


def test_squares_structure_all_q_le_343():
    for q in range(3, 344, 2):
        pk = is_prime_power(q)
        if pk is None:
            continue
        ctx = ff.field_create(*pk)
        sq = ff.squares(ctx)
        idx = {a.index for a in sq}
        assert len(sq) == len(idx) == (q - 1) // 2
        assert 0 not in idx
        assert [a.sort_key for a in sq] == sorted(a.sort_key for a in sq)
        for x in ctx.elements():
            if not x.is_zero():
                assert (x * x).index in idx
                assert (ff.quad_char(x) == 1) == (x.index in idx)


@pytest.mark.parametrize("q", [5, 9, 13, 25, 49, 121, 169, 7, 27, 11])
def test_minus_one_is_square_iff_q_1_mod_4(q):
    ctx = ff.field_create(*is_prime_power(q))
    assert (ff.quad_char(-ctx.one()) == 1) == (q % 4 == 1)


def test_quad_char_is_legendre_on_prime_fields():
    for p in sympy.primerange(3, 200):
        ctx = ff.field_create(p)
        for a in range(1, p):
            assert ff.quad_char(ff.embed_int(ctx, a)) == legendre(a, p)


@pytest.mark.parametrize("p,k", FIELDS)
def test_sqrt_roundtrip(p, k):
    ctx = ff.field_create(p, k)
    for x in ctx.elements():
        r = ff.sqrt(x)
        if ff.quad_char(x) == -1:
            assert r is None
        else:
            assert r * r == x


def test_sqrt_large_prime():
    p = 2**31 - 1
    ctx = ff.field_create(p)
    x = ctx(123456789) * ctx(123456789)
    r = ff.sqrt(x)
    assert r * r == x


@pytest.mark.parametrize("p,k", FIELDS + [(2**31 - 1, 1)])
def test_vector_ops_match_scalar(p, k):
    ctx = ff.field_create(p, k)
    rng = np.random.default_rng(7)
    n = 200
    a = [int(v) for v in rng.integers(0, ctx.q, n)]
    b = [int(v) for v in rng.integers(0, ctx.q, n)]
    A = np.array(a, dtype=ctx.dtype)
    B = np.array(b, dtype=ctx.dtype)
    E = [ctx.from_index(v) for v in a]
    F = [ctx.from_index(v) for v in b]
    assert ctx.vadd(A, B).tolist() == [(x + y).index for x, y in zip(E, F)]
    assert ctx.vsub(A, B).tolist() == [(x - y).index for x, y in zip(E, F)]
    assert ctx.vmul(A, B).tolist() == [(x * y).index for x, y in zip(E, F)]
    assert ctx.vneg(A).tolist() == [(-x).index for x in E]
    assert ctx.vpow(A, 5).tolist() == [(x**5).index for x in E]
    assert ctx.vpow(A, 0).tolist() == [ctx.one().index] * n
    assert ctx.vchar(A).tolist() == [ff.quad_char(x) for x in E]
