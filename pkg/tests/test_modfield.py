import numpy as np
import pytest

from kloosterman.modfield import (
    ModulusTooLargeError,
    NotPrimeError,
    UnsupportedPrimeError,
    ZeroInverseError,
    egcd_inverse,
    is_prime,
    legendre,
    make_modulus,
    mod_inverse,
    mod_pow,
    odd_primes,
)
from oracles import inverse_by_search, legendre_by_enumeration, squares_mod

SMALL_PRIMES = odd_primes(3, 101)


def test_make_modulus_p5_table():
    m = make_modulus(5)
    assert m.p == 5
    assert m.inv_table.tolist()[1:] == [1, 3, 2, 4]
    for x in range(1, 5):
        assert x * int(m.inv_table[x]) % 5 == 1


@pytest.mark.parametrize("n", [4, 9, 15, 1, 0, -7, 91, 561])
def test_rejects_composites(n):
    with pytest.raises(NotPrimeError) as exc:
        make_modulus(n)
    assert exc.value.code == "not_prime"


def test_rejects_two_with_distinct_code():
    with pytest.raises(UnsupportedPrimeError) as exc:
        make_modulus(2)
    assert exc.value.code == "p2_unsupported"
    assert exc.value.code != NotPrimeError.code


def test_rejects_above_cap():
    with pytest.raises(ModulusTooLargeError):
        make_modulus(2**31 + 11)


def test_accepts_cap_prime_without_table():
    m = make_modulus(2**31 - 1, with_table=False)
    assert mod_inverse(2, m) * 2 % m.p == 1


def test_is_prime_against_sieve():
    sieve = set(odd_primes(3, 5000)) | {2}
    assert [n for n in range(5001) if is_prime(n)] == sorted(sieve)


def test_is_prime_strong_pseudoprimes():
    # strong pseudoprimes to bases {2}, {2, 3}, {2, 3, 5}
    for n in (2047, 1373653, 25326001):
        assert not is_prime(n)
    assert is_prime(2**31 - 1)


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_inverse_table_matches_search(p, backend):
    m = make_modulus(p)
    assert [int(m.inv_table[x]) for x in range(1, p)] == [inverse_by_search(x, p) for x in range(1, p)]


def test_mod_inverse_examples():
    assert mod_inverse(2, make_modulus(5)) == 3
    assert mod_inverse(1, make_modulus(7)) == 1
    assert mod_inverse(3, make_modulus(7)) == 5


def test_mod_inverse_zero():
    with pytest.raises(ZeroInverseError, match="zero has no inverse"):
        mod_inverse(0, make_modulus(7))
    with pytest.raises(ZeroInverseError):
        mod_inverse(14, make_modulus(7))


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_inverse_involution_and_egcd(p):
    m = make_modulus(p)
    for x in range(1, p):
        assert mod_inverse(mod_inverse(x, m), m) == x
        assert egcd_inverse(x, p) == mod_inverse(x, m)


def test_mod_pow_examples():
    assert mod_pow(2, 0, make_modulus(7)) == 1
    assert mod_pow(3, 3, make_modulus(5)) == 2
    m = make_modulus(5)
    assert mod_pow(2, 2, m) == 4 == m.p - 1
    assert 2 not in squares_mod(5)


def test_mod_pow_matches_builtin():
    m = make_modulus(101)
    for base in range(101):
        for e in (0, 1, 2, 50, 99, 100, 12345):
            assert mod_pow(base, e, m) == pow(base, e, 101)


def test_legendre_examples():
    assert legendre(1, make_modulus(7)) == 1
    assert legendre(0, make_modulus(7)) == 0
    assert legendre(2, make_modulus(5)) == -1
    assert legendre(-1, make_modulus(5)) == 1
    assert legendre(-1, make_modulus(7)) == -1


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_legendre_matches_enumeration(p):
    m = make_modulus(p)
    for a in range(-p, 2 * p):
        assert legendre(a, m) == legendre_by_enumeration(a, p)


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_legendre_balanced_and_multiplicative(p):
    m = make_modulus(p)
    values = [legendre(a, m) for a in range(1, p)]
    assert values.count(1) == values.count(-1) == (p - 1) // 2
    for a in range(1, p):
        for b in range(1, p):
            assert legendre(a * b, m) == values[a - 1] * values[b - 1]


def test_pair_order_covers_residues():
    m = make_modulus(13)
    order = m.pair_order.tolist()
    assert sorted(order) == list(range(1, 13))
    assert order[:1] == [1]


def test_modulus_equality_and_readonly():
    m = make_modulus(11)
    assert m == make_modulus(11)
    assert hash(m) == hash(make_modulus(11))
    with pytest.raises(ValueError):
        m.inv_table[1] = 3
    assert isinstance(m.cos_table, np.ndarray)
