import random
from fractions import Fraction

import pytest

from fano_workbench.errors import NotPrime
from fano_workbench.fields import GF, QQ, FieldSpec, is_prime, next_prime_after


def test_prime_validation():
    for bad in (4, 1, 0, -7, 2, 9, 15):
        with pytest.raises(NotPrime):
            FieldSpec(bad)
    for good in (3, 5, 7, 13, 101, 2**31 - 1):
        assert FieldSpec(good).p == good


def test_is_prime_small():
    primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}
    for n in range(2, 50):
        assert is_prime(n) == (n in primes)


def test_next_prime_after():
    assert next_prime_after(7) == 11
    assert next_prime_after(13) == 17
    assert next_prime_after(2) == 3


def test_field_axioms_random_sample():
    rng = random.Random(1)
    for p in (5, 7, 101):
        f = GF(p)
        for _ in range(200):
            a, b, c = (f.random_element(rng) for _ in range(3))
            assert f.add(a, b) == f.add(b, a)
            assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
            if a != 0:
                assert f.mul(a, f.inv(a)) == 1


def test_rational_arithmetic_normalized():
    f = QQ
    x = f.parse_scalar("6/4")
    assert x == Fraction(3, 2) and x.denominator == 2
    assert f.inv(Fraction(3, 2)) == Fraction(2, 3)
    assert f.add(Fraction(1, 3), Fraction(1, 6)) == Fraction(1, 2)


def test_prime_scalar_parse_division():
    f = GF(7)
    assert f.parse_scalar("3/2") == f.div(3, 2)
    assert f.mul(f.parse_scalar("3/2"), 2) == 3


def test_lift_roundtrip():
    f = GF(11)
    for a in f.elements():
        assert f(f.lift(a)) == a
