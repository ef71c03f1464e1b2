import itertools

import pytest

from utroots.prime_field import (
    FieldError,
    FpElement,
    InversionOfZero,
    ModulusMismatch,
    fp_add,
    fp_inv,
    fp_mul,
    fp_pow,
    is_prime,
)

SMALL_PRIMES = [2, 3, 5, 7, 11, 13]


def brute_inverse(v, p):
    return next(u for u in range(p) if (u * v) % p == 1)


def test_inverse_examples():
    assert fp_inv(FpElement(1, 7)) == FpElement(1, 7)
    assert fp_inv(FpElement(2, 5)) == FpElement(brute_inverse(2, 5), 5) == FpElement(3, 5)
    with pytest.raises(InversionOfZero):
        fp_inv(FpElement(0, 3))


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_inverse_matches_search(p):
    for v in range(1, p):
        x = FpElement(v, p)
        assert fp_inv(x).value == brute_inverse(v, p)
        assert fp_mul(x, fp_inv(x)) == FpElement(1, p)


def test_pow_examples():
    assert fp_pow(FpElement(2, 3), 0) == FpElement(1, 3)
    assert fp_pow(FpElement(2, 3), 2) == FpElement(1, 3)


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_fermat_and_frobenius(p):
    for v in range(p):
        x = FpElement(v, p)
        assert fp_pow(x, p) == x
        if v:
            assert fp_pow(x, p - 1) == FpElement(1, p)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_field_axioms_exhaustive(p):
    F = [FpElement(v, p) for v in range(p)]
    zero, one = FpElement(0, p), FpElement(1, p)
    for x, y, z in itertools.product(F, repeat=3):
        assert fp_add(fp_add(x, y), z) == fp_add(x, fp_add(y, z))
        assert fp_mul(fp_mul(x, y), z) == fp_mul(x, fp_mul(y, z))
        assert fp_mul(x, fp_add(y, z)) == fp_add(fp_mul(x, y), fp_mul(x, z))
    for x, y in itertools.product(F, repeat=2):
        assert x + y == y + x and x * y == y * x
    for x in F:
        assert x + zero == x and x * one == x
        assert x + (-x) == zero
        if x:
            assert x * fp_inv(x) == one


def test_construction_reduces_and_checks_prime():
    assert FpElement(-1, 5).value == 4
    assert FpElement(12, 5).value == 2
    for bad in (0, 1, 4, 9, 91):
        with pytest.raises(FieldError):
            FpElement(1, bad)
    assert [q for q in range(100) if is_prime(q)][:6] == [2, 3, 5, 7, 11, 13]


def test_mixed_moduli_rejected():
    with pytest.raises(ModulusMismatch):
        FpElement(1, 3) + FpElement(1, 5)
    with pytest.raises(ModulusMismatch):
        FpElement(1, 3) * FpElement(1, 5)


def test_division_and_negative_power():
    x = FpElement(3, 7)
    assert x / x == FpElement(1, 7)
    assert x ** -1 == fp_inv(x)
