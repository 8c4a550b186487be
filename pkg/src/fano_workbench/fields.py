"""Exact scalar arithmetic: prime fields F_p and the rationals.

A FieldSpec is a small immutable object describing the coefficient domain.
Elements are ordinary Python values:

  * prime mode:    ints in {0, ..., p-1}
  * rational mode: fractions.Fraction (arbitrary-precision, gcd-normalized)

All arithmetic is exact; there is no floating point anywhere in the core.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import NotPrime, Unsupported

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3e24 (covers machine words)."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FieldSpec:
    """Coefficient field: GF(p) for an odd machine-word prime, or QQ."""

    __slots__ = ("p",)

    def __init__(self, p: int | None = None):
        if p is not None:
            if not isinstance(p, int) or p >= 1 << 62 or not is_prime(p) or p <= 2:
                raise NotPrime(f"modulus must be a machine-word prime > 2, got {p!r}")
        self.p = p

    @property
    def is_rationals(self) -> bool:
        return self.p is None

    @property
    def is_prime_field(self) -> bool:
        return self.p is not None

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and self.p == other.p

    def __hash__(self):
        return hash(("FieldSpec", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    # -- element constructors ------------------------------------------

    def __call__(self, value) -> int | Fraction:
        """Coerce an int / Fraction / element into canonical form."""
        if self.p is None:
            return Fraction(value)
        return int(value) % self.p

    @property
    def zero(self):
        return 0 if self.p is not None else Fraction(0)

    @property
    def one(self):
        return 1 if self.p is not None else Fraction(1)

    def parse_scalar(self, text: str):
        """Parse an integer, or 'a/b' in rational mode."""
        text = text.strip()
        if "/" in text:
            if self.p is not None:
                num, den = text.split("/")
                return self.div(self(int(num)), self(int(den)))
            return Fraction(text)
        return self(int(text))

    # -- arithmetic ------------------------------------------------------

    def add(self, a, b):
        return (a + b) % self.p if self.p is not None else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p is not None else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.p is not None else a * b

    def neg(self, a):
        return (-a) % self.p if self.p is not None else -a

    def inv(self, a):
        if self.p is not None:
            if a % self.p == 0:
                raise ZeroDivisionError("inverse of 0 in prime field")
            return pow(a, self.p - 2, self.p)
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in QQ")
        return 1 / Fraction(a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    # -- helpers -----------------------------------------------------------

    def lift(self, a) -> int:
        """Canonical integer representative (prime mode only)."""
        if self.p is None:
            raise Unsupported("lift is only defined for prime fields")
        return int(a) % self.p

    def random_element(self, rng: random.Random):
        if self.p is not None:
            return rng.randrange(self.p)
        return Fraction(rng.randrange(-20, 21), rng.randrange(1, 11))

    def random_nonzero(self, rng: random.Random):
        while True:
            a = self.random_element(rng)
            if a != 0:
                return a

    def elements(self):
        """All field elements (prime mode only)."""
        if self.p is None:
            raise Unsupported("cannot enumerate QQ")
        return range(self.p)

    def render(self, a) -> str:
        return str(a)


QQ = FieldSpec()


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)


def next_prime_after(n: int) -> int:
    """Smallest prime strictly greater than n."""
    q = n + 1 + (n % 2)
    if n < 2:
        return 2
    if n == 2:
        return 3
    while not is_prime(q):
        q += 2
    return q
