from fractions import Fraction
from math import prod

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from ldet import ntheory as nt
from ldet.theorems import multiplication_permutation, permutation_sign, folded_permutation


# -- primality ---------------------------------------------------------------


@pytest.mark.parametrize("n,expected", [(2, True), (4785, False), (401, True), (1, False), (0, False)])
def test_is_prime_examples(n, expected):
    assert nt.is_prime(n) is expected


def test_is_prime_matches_sieve_below_20000():
    assert [n for n in range(20000) if nt.is_prime(n)] == list(sympy.primerange(0, 20000))


@given(st.integers(min_value=0, max_value=2**80))
@settings(max_examples=300)
def test_is_prime_agrees_with_sympy(n):
    assert nt.is_prime(n) == sympy.isprime(n)


def test_is_prime_strong_pseudoprimes():
    # strong pseudoprimes to several small bases
    for n in (2047, 3215031751, 3825123056546413051, 318665857834031151167461):
        assert not nt.is_prime(n)
    assert nt.is_prime(2**89 - 1)


@pytest.mark.parametrize(
    "lo,hi,res,expected",
    [(1, 10, None, [2, 3, 5, 7]), (1, 30, (1, 4), [5, 13, 17, 29]), (14, 16, None, [])],
)
def test_primes_in(lo, hi, res, expected):
    assert nt.primes_in(lo, hi, res) == expected


def test_primes_in_rejects_reversed_range():
    with pytest.raises(ValueError):
        nt.primes_in(10, 1)


# -- symbols -----------------------------------------------------------------


@pytest.mark.parametrize("a,p,expected", [(1, 5, 1), (5, 5, 0), (2, 5, -1)])
def test_legendre_examples(a, p, expected):
    assert nt.legendre(a, p) == expected


@pytest.mark.parametrize("a,n,expected", [(1, 9, 1), (3, 9, 0), (2, 15, 1)])
def test_jacobi_examples(a, n, expected):
    assert nt.jacobi(a, n) == expected


@pytest.mark.parametrize("bad", [0, -3, 8])
def test_jacobi_rejects_bad_modulus(bad):
    with pytest.raises(ValueError):
        nt.jacobi(1, bad)


def test_legendre_rejects_composite():
    with pytest.raises(ValueError):
        nt.legendre(2, 9)


def test_euler_criterion_p_le_200():
    for p in sympy.primerange(3, 201):
        for a in range(p):
            assert nt.legendre(a, p) % p == pow(a, (p - 1) // 2, p)


@given(
    st.integers(-10**6, 10**6),
    st.integers(-10**6, 10**6),
    st.integers(1, 5000).map(lambda k: 2 * k + 1),
)
def test_jacobi_multiplicative_in_numerator(a, b, n):
    assert nt.jacobi(a * b, n) == nt.jacobi(a, n) * nt.jacobi(b, n)


@given(
    st.integers(-10**6, 10**6),
    st.integers(0, 2000).map(lambda k: 2 * k + 1),
    st.integers(0, 2000).map(lambda k: 2 * k + 1),
)
def test_jacobi_multiplicative_in_denominator(a, m, n):
    assert nt.jacobi(a, m * n) == nt.jacobi(a, m) * nt.jacobi(a, n)


@given(st.integers(-10**9, 10**9), st.integers(0, 10**6).map(lambda k: 2 * k + 1))
def test_jacobi_agrees_with_sympy(a, n):
    assert nt.jacobi(a, n) == sympy.jacobi_symbol(a, n)


# -- permutation signs -------------------------------------------------------


@pytest.mark.parametrize("a,n,expected", [(2, 5, -1), (3, 8, -1), (5, 6, 1)])
def test_lerch_sign_examples(a, n, expected):
    assert nt.lerch_sign(a, n) == expected


def test_lerch_sign_rejects_non_unit():
    with pytest.raises(ValueError):
        nt.lerch_sign(2, 6)


def test_lerch_sign_exhaustive_n_le_128():
    from math import gcd

    for n in range(1, 129):
        for a in range(n):
            if gcd(a, n) == 1:
                assert nt.lerch_sign(a, n) == permutation_sign(multiplication_permutation(a, n)), (a, n)


@pytest.mark.parametrize("q,expected", [(5, 1), (7, -1), (13, 1)])
def test_inv_sign_examples(q, expected):
    assert nt.inv_sign(q) == expected


def test_inv_sign_rejects_non_prime_power():
    with pytest.raises(ValueError):
        nt.inv_sign(15)


@pytest.mark.parametrize("a,p,expected", [(1, 13, 1), (4, 5, 1), (2, 13, -1)])
def test_huang_pan_examples(a, p, expected):
    assert nt.huang_pan_sign(a, p) == expected


def test_huang_pan_rejects_multiple_of_p():
    with pytest.raises(ValueError):
        nt.huang_pan_sign(13, 13)


def test_huang_pan_exhaustive_p_le_200():
    for p in nt.primes_in(3, 200):
        for a in range(1, p):
            assert nt.huang_pan_sign(a, p) == permutation_sign(folded_permutation(a, p))


def test_is_prime_power():
    assert nt.is_prime_power(343) == (7, 3)
    assert nt.is_prime_power(2**61 - 1) == (2**61 - 1, 1)
    assert nt.is_prime_power((10**9 + 7) ** 3) == (10**9 + 7, 3)
    assert nt.is_prime_power(15) is None
    assert nt.is_prime_power(1) is None


# -- F_m(k) ------------------------------------------------------------------


@pytest.mark.parametrize("m,k,expected", [(5, 0, 4785), (1, 0, 3), (5, 2, 11), (5, 1, 297)])
def test_fmk_examples(m, k, expected):
    assert nt.fmk(m, k).value == expected


@pytest.mark.parametrize("m,k", [(5, 3), (5, -1), (4, 0)])
def test_fmk_rejects_out_of_range(m, k):
    with pytest.raises(ValueError):
        nt.fmk(m, k)


def _generalized_descending(top: int, bottom: int, step: int) -> Fraction:
    # product top*(top-step)*...*bottom, continued to reversed ranges as a reciprocal
    if top >= bottom - step:
        return Fraction(prod(range(top, bottom - 1, -step)))
    return 1 / Fraction(prod(range(bottom - step, top, -step)))


def _fmk_general(m: int, k: int) -> Fraction:
    return Fraction(2) ** (m - 2 * k) * _generalized_descending(m - k, k + 1, 1) + _generalized_descending(
        2 * m - 2 * k - 1, 2 * k + 1, 2
    )


@pytest.mark.parametrize("m", [1, 3, 5, 7, 9, 11, 13])
def test_fmk_symmetry_under_k_to_m_minus_k(m):
    # reading the mirrored orientation with reversed ranges: F(m-k) * A * B = F(k),
    # where F(k) = A + B term by term, so the two orientations carry the same odd primes
    for k in range((m - 1) // 2 + 1):
        A = Fraction(2) ** (m - 2 * k) * _generalized_descending(m - k, k + 1, 1)
        B = _generalized_descending(2 * m - 2 * k - 1, 2 * k + 1, 2)
        assert _fmk_general(m, k) == nt.fmk(m, k).value
        assert _fmk_general(m, m - k) * A * B == nt.fmk(m, k).value


def test_fmk_bound_is_max():
    assert nt.fmk_bound(5) == 4785


# -- factorization -----------------------------------------------------------


@pytest.mark.parametrize("n,expected", [(1, {}), (4785, {3: 1, 5: 1, 11: 1, 29: 1}), (16, {2: 4})])
def test_factorize_examples(n, expected):
    f = nt.factorize(n)
    assert f.factors == expected and f.complete


@given(st.integers(1, 10**18))
@settings(max_examples=150, deadline=None)
def test_factorize_agrees_with_sympy(n):
    f = nt.factorize(n)
    assert f.complete
    assert f.factors == sympy.factorint(n)
    assert prod(p**e for p, e in f.factors.items()) == n


def test_factorize_semiprime_beyond_trial_division():
    p, q = 1000003, 998244353
    assert nt.factorize(p * q).factors == {p: 1, q: 1}


def test_factorize_fmk_values_complete():
    for m in range(1, 14, 2):
        for k in range((m - 1) // 2 + 1):
            v = nt.fmk(m, k).value
            f = nt.factorize(v)
            assert f.complete and all(nt.is_prime(p) for p in f.factors)
            assert prod(p**e for p, e in f.factors.items()) == v


# -- factorials --------------------------------------------------------------


@pytest.mark.parametrize("n,p,expected", [(0, 7, 1), (6, 13, 5), (12, 5, 0)])
def test_factorial_mod_examples(n, p, expected):
    assert nt.factorial_mod(n, p) == expected


def test_half_factorial_squared_is_minus_one():
    for p in nt.primes_in(5, 1000, (1, 4)):
        h = nt.factorial_mod((p - 1) // 2, p)
        assert h * h % p == p - 1


@given(st.integers(0, 400), st.integers(0, 400), st.sampled_from([3, 5, 7, 11, 13, 29]))
def test_binomial_mod_lucas(n, k, p):
    assert nt.binomial_mod(n, k, p) == sympy.binomial(n, k) % p
