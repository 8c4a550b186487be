"""Sparse homogeneous multivariate polynomials with exact coefficients.

A form is a map from exponent tuples to nonzero scalars of a FieldSpec.
Every stored exponent tuple sums to exactly `degree`; zero coefficients are
never stored, so equality is structural.  The zero form is the empty map and
carries an explicit degree (it cannot be inferred).

Variables are x0..x(num_vars-1).  Text grammar:

    poly    = term (('+' | '-') term)*
    term    = [coeff '*'] factor ('*' factor)*  |  coeff
    factor  = 'x' INDEX ['^' EXP]
    coeff   = integer | integer '/' integer     (fractions in rational mode)

Whitespace is ignored; the unicode minus sign is accepted.
"""

from __future__ import annotations

import re
from typing import Iterable, Sequence

from .errors import (
    CharacteristicTooSmall,
    DegreeMismatch,
    NonHomogeneous,
    UnknownVariable,
    ZeroPolynomial,
)
from .fields import FieldSpec

_FACTOR_RE = re.compile(r"^x(\d+)(?:\^(\d+))?$")
_COEFF_RE = re.compile(r"^-?\d+(?:/\d+)?$")


class HomogeneousForm:
    """Immutable-by-convention sparse homogeneous polynomial."""

    __slots__ = ("field", "num_vars", "degree", "terms")

    def __init__(self, field: FieldSpec, num_vars: int, degree: int, terms: dict):
        self.field = field
        self.num_vars = num_vars
        self.degree = degree
        self.terms = terms  # exponent tuple -> nonzero scalar

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_terms(cls, field, num_vars, degree, items) -> "HomogeneousForm":
        terms = {}
        for exps, coeff in items:
            exps = tuple(exps)
            if len(exps) != num_vars:
                raise DegreeMismatch(f"exponent tuple {exps} has wrong arity")
            if sum(exps) != degree:
                raise NonHomogeneous(
                    f"exponent tuple {exps} has degree {sum(exps)}, expected {degree}"
                )
            c = field(coeff)
            if exps in terms:
                c = field.add(terms[exps], c)
            if c == 0:
                terms.pop(exps, None)
            else:
                terms[exps] = c
        return cls(field, num_vars, degree, terms)

    @classmethod
    def zero(cls, field, num_vars, degree) -> "HomogeneousForm":
        return cls(field, num_vars, degree, {})

    @classmethod
    def variable(cls, field, num_vars, i) -> "HomogeneousForm":
        exps = [0] * num_vars
        exps[i] = 1
        return cls(field, num_vars, 1, {tuple(exps): field.one})

    @classmethod
    def monomial(cls, field, num_vars, exps, coeff=1) -> "HomogeneousForm":
        return cls.from_terms(field, num_vars, sum(exps), [(tuple(exps), coeff)])

    @classmethod
    def linear(cls, field, coeffs: Sequence) -> "HomogeneousForm":
        """Linear form sum(coeffs[i] * x_i)."""
        n = len(coeffs)
        items = []
        for i, c in enumerate(coeffs):
            exps = [0] * n
            exps[i] = 1
            items.append((tuple(exps), c))
        return cls.from_terms(field, n, 1, items)

    # -- basics --------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self):
        """Terms in descending lex order of exponent tuples (graded-lex canonical)."""
        return sorted(self.terms.items(), key=lambda kv: kv[0], reverse=True)

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), self.field.zero)

    def __eq__(self, other):
        return (
            isinstance(other, HomogeneousForm)
            and self.field == other.field
            and self.num_vars == other.num_vars
            and self.degree == other.degree
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.field, self.num_vars, self.degree, tuple(self.sorted_terms())))

    def __repr__(self):
        return f"HomogeneousForm({self.field}, n_vars={self.num_vars}, {poly_render(self)!r})"

    # -- arithmetic ------------------------------------------------------------

    def _check_compatible(self, other):
        if self.field != other.field or self.num_vars != other.num_vars:
            raise DegreeMismatch("forms live in different polynomial rings")

    def __add__(self, other):
        self._check_compatible(other)
        if self.degree != other.degree and not (self.is_zero or other.is_zero):
            raise DegreeMismatch(
                f"cannot add degree {self.degree} and degree {other.degree}"
            )
        if self.is_zero:
            return HomogeneousForm(other.field, other.num_vars, other.degree, dict(other.terms))
        if other.is_zero:
            return HomogeneousForm(self.field, self.num_vars, self.degree, dict(self.terms))
        f = self.field
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = f.add(terms.get(e, f.zero), c)
            if s == 0:
                terms.pop(e, None)
            else:
                terms[e] = s
        return HomogeneousForm(f, self.num_vars, self.degree, terms)

    def __neg__(self):
        f = self.field
        return HomogeneousForm(
            f, self.num_vars, self.degree, {e: f.neg(c) for e, c in self.terms.items()}
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, scalar):
        f = self.field
        scalar = f(scalar)
        if scalar == 0:
            return HomogeneousForm.zero(f, self.num_vars, self.degree)
        return HomogeneousForm(
            f, self.num_vars, self.degree, {e: f.mul(c, scalar) for e, c in self.terms.items()}
        )

    def __mul__(self, other):
        if not isinstance(other, HomogeneousForm):
            return self.scale(other)
        self._check_compatible(other)
        f = self.field
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = f.add(out.get(e, f.zero), f.mul(c1, c2))
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        return HomogeneousForm(f, self.num_vars, self.degree + other.degree, out)

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("negative power of a polynomial")
        result = HomogeneousForm.monomial(self.field, self.num_vars, (0,) * self.num_vars, 1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result


# -- module-level operations ---------------------------------------------------


def poly_parse(text: str, num_vars: int, field: FieldSpec, degree: int | None = None):
    """Parse polynomial text into canonical form.

    `degree` supplies the degree for the zero polynomial (which has no terms
    to infer it from); without it an all-cancelling input raises ZeroPolynomial.
    """
    compact = text.replace("−", "-").replace(" ", "").replace("\t", "")
    if not compact:
        raise NonHomogeneous("empty polynomial text")
    # split into signed term pieces
    pieces = re.split(r"(?=[+-])", compact)
    pieces = [p for p in pieces if p not in ("", "+", "-")]
    items = []
    seen_degree = None
    for piece in pieces:
        sign = 1
        while piece and piece[0] in "+-":
            if piece[0] == "-":
                sign = -sign
            piece = piece[1:]
        if not piece:
            raise NonHomogeneous(f"dangling sign in {text!r}")
        chunks = piece.split("*")
        coeff = field.one
        start = 0
        if _COEFF_RE.match(chunks[0]):
            coeff = field.parse_scalar(chunks[0])
            start = 1
        exps = [0] * num_vars
        for chunk in chunks[start:]:
            m = _FACTOR_RE.match(chunk)
            if not m:
                raise NonHomogeneous(f"bad factor {chunk!r} in {text!r}")
            idx = int(m.group(1))
            if idx >= num_vars:
                raise UnknownVariable(f"variable x{idx} with only {num_vars} variables")
            exps[idx] += int(m.group(2) or 1)
        if sign < 0:
            coeff = field.neg(coeff)
        term_degree = sum(exps)
        if coeff != 0:
            if seen_degree is None:
                seen_degree = term_degree
            elif term_degree != seen_degree:
                raise NonHomogeneous(
                    f"mixed degrees {seen_degree} and {term_degree} in {text!r}"
                )
        items.append((tuple(exps), coeff))
    if seen_degree is None:
        if degree is None:
            raise ZeroPolynomial("zero polynomial with no degree context")
        return HomogeneousForm.zero(field, num_vars, degree)
    form = HomogeneousForm.from_terms(field, num_vars, seen_degree, items)
    if form.is_zero:
        if degree is None:
            raise ZeroPolynomial("terms cancel to zero and no degree context given")
        return HomogeneousForm.zero(field, num_vars, degree)
    return form


def poly_render(form: HomogeneousForm) -> str:
    """Canonical text, graded-lex descending.  Inverse of poly_parse up to order."""
    if form.is_zero:
        return "0"
    out = []
    for exps, coeff in form.sorted_terms():
        factors = []
        for i, e in enumerate(exps):
            if e == 1:
                factors.append(f"x{i}")
            elif e > 1:
                factors.append(f"x{i}^{e}")
        negative = coeff < 0
        mag = -coeff if negative else coeff
        body = "*".join(factors)
        if not factors:
            body = str(mag)
        elif mag != 1:
            body = f"{mag}*{body}"
        if not out:
            out.append(f"-{body}" if negative else body)
        else:
            out.append(f" - {body}" if negative else f" + {body}")
    return "".join(out)


def poly_eval(form: HomogeneousForm, point: Sequence):
    """Exact value of the form at a point (tuple of scalars)."""
    if len(point) != form.num_vars:
        raise DegreeMismatch(
            f"point has {len(point)} coordinates, form has {form.num_vars} variables"
        )
    f = form.field
    pt = [f(x) for x in point]
    total = f.zero
    if f.p is not None:
        p = f.p
        acc = 0
        for exps, coeff in form.terms.items():
            v = coeff
            for x, e in zip(pt, exps):
                if e:
                    v = v * pow(x, e, p) % p
                    if v == 0:
                        break
            acc = (acc + v) % p
        return acc
    for exps, coeff in form.terms.items():
        v = coeff
        for x, e in zip(pt, exps):
            if e:
                v *= x**e
        total += v
    return total


def poly_substitute(form: HomogeneousForm, images: Sequence[HomogeneousForm]):
    """Substitute x_i -> images[i]; images are forms of one common degree e >= 1.

    The result is homogeneous of degree form.degree * e in the image variables,
    and evaluation commutes with substitution.
    """
    if len(images) != form.num_vars:
        raise DegreeMismatch(
            f"{len(images)} images for {form.num_vars} variables"
        )
    if not images:
        raise DegreeMismatch("empty image list")
    e = images[0].degree
    m = images[0].num_vars
    f = form.field
    for g in images:
        if g.degree != e or g.num_vars != m or g.field != f:
            raise DegreeMismatch("substitution images disagree in degree/ring/field")
    if e < 1:
        raise DegreeMismatch("substitution images must have degree >= 1")
    # cache powers of each image up to the max exponent it is raised to
    max_exp = [0] * form.num_vars
    for exps in form.terms:
        for i, k in enumerate(exps):
            if k > max_exp[i]:
                max_exp[i] = k
    one = HomogeneousForm.monomial(f, m, (0,) * m, 1)
    powers = []
    for i, g in enumerate(images):
        row = [one]
        for _ in range(max_exp[i]):
            row.append(row[-1] * g)
        powers.append(row)
    result = HomogeneousForm.zero(f, m, form.degree * e)
    for exps, coeff in form.terms.items():
        piece = one.scale(coeff)
        for i, k in enumerate(exps):
            if k:
                piece = piece * powers[i][k]
        # piece is homogeneous of degree form.degree*e unless it collapsed to 0
        if piece.is_zero:
            continue
        result = result + piece
    return result


def linear_substitute(form: HomogeneousForm, matrix: Sequence[Sequence]):
    """Coordinate change x_i = sum_j matrix[i][j] * y_j (matrix is (num_vars) x m)."""
    f = form.field
    images = [HomogeneousForm.linear(f, row) for row in matrix]
    return poly_substitute(form, images)


def partial_derivatives(form: HomogeneousForm):
    """All first partials; requires p > degree in prime mode (Euler factors stay units)."""
    f = form.field
    if form.degree < 1:
        raise DegreeMismatch("cannot differentiate a degree-0 form")
    if f.p is not None and f.p <= form.degree:
        raise CharacteristicTooSmall(
            f"p={f.p} <= degree {form.degree}; increase the prime"
        )
    out = []
    for i in range(form.num_vars):
        terms = {}
        for exps, coeff in form.terms.items():
            k = exps[i]
            if k == 0:
                continue
            new = list(exps)
            new[i] = k - 1
            terms[tuple(new)] = f.mul(coeff, f(k))
        out.append(HomogeneousForm(f, form.num_vars, form.degree - 1, terms))
    return tuple(out)


def reduce_mod(form: HomogeneousForm, p: int) -> HomogeneousForm:
    """Reduce an integer-coefficient rational form (or lift a prime-field form) mod p."""
    target = FieldSpec(p)
    items = []
    for exps, coeff in form.terms.items():
        if form.field.is_rationals:
            if coeff.denominator % p == 0:
                raise DegreeMismatch(f"denominator of {coeff} not invertible mod {p}")
            c = coeff.numerator * pow(coeff.denominator, p - 2, p) % p
        else:
            c = form.field.lift(coeff) % p
        items.append((exps, c))
    return HomogeneousForm.from_terms(target, form.num_vars, form.degree, items)


def binary_forms_have_common_zero(forms: Iterable[HomogeneousForm]) -> bool:
    """Whether binary forms (2 variables s,t) share a projective root over the
    algebraic closure.  Exact: dehomogenize at s=1 and take a polynomial gcd;
    a shared root at [0,1] shows up as a common degree drop."""
    forms = list(forms)
    nonzero = [g for g in forms if not g.is_zero]
    if not nonzero:
        return True  # the all-zero family vanishes everywhere
    f = nonzero[0].field

    def to_coeffs(g):
        # univariate in t at s=1: coefficient j is the s^(d-j) t^j coefficient
        cs = [f.zero] * (g.degree + 1)
        for (_, et), c in g.terms.items():
            cs[et] = c
        while cs and cs[-1] == 0:
            cs.pop()
        return cs

    def rem(a, b):
        a = a[:]
        while len(a) >= len(b):
            shift = len(a) - len(b)
            factor = f.div(a[-1], b[-1])
            for i, c in enumerate(b):
                a[i + shift] = f.sub(a[i + shift], f.mul(factor, c))
            while a and a[-1] == 0:
                a.pop()
        return a

    # common factor of s <=> every form drops degree after dehomogenizing
    if all(len(to_coeffs(g)) - 1 < g.degree for g in nonzero):
        return True
    g = None
    for form_ in nonzero:
        cs = to_coeffs(form_)
        g = cs if g is None else _gcd_univariate(g, cs, rem)
        if len(g) == 1:
            return False
    return len(g) > 1


def _gcd_univariate(a, b, rem):
    while b:
        a, b = b, rem(a, b)
    return a
