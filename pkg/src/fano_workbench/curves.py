"""Rational curves on hypersurfaces and exact twisted-section counts.

Everything is a kernel computation.  Sections of the pulled-back tangent
bundle twisted by O(e*m) are tuples (g_0..g_n) of binary forms of degree
e*(m+1) satisfying sum_i (df/dx_i along the curve) * g_i = 0, modulo the
Euler line subbundle; the subtraction term h^0(O(e*m)) is valid for
e*m >= -1 (and drops to h^0(O(e*m - 1)) when sections must vanish at a
marked parameter point, valid for e*m >= 0).  Twists outside those windows
raise instead of returning a wrong number.

For a line the tangent direction splits off and the normal bundle's
splitting multiset {a_i} is recovered from successive differences of the
h^0 table, using a_i in [2-d, 1].
"""

from __future__ import annotations

import random
from typing import Optional, Sequence

from .errors import (
    CurveNotOnX,
    DimensionMismatch,
    InputError,
    InternalInvariantViolation,
    TwistOutOfWindow,
)
from .linalg import ExactMatrix, nullspace_rank
from .poly import (
    HomogeneousForm,
    binary_forms_have_common_zero,
    partial_derivatives,
    poly_eval,
    poly_render,
    poly_substitute,
)
from .varieties import Hypersurface, KPlane


class RationalCurve:
    """Parameterized map P^1 -> X: n+1 binary forms of one degree e with no
    common root (checked exactly via a gcd over the coefficient field)."""

    __slots__ = ("target", "degree", "components")

    def __init__(self, target: Hypersurface, components: Sequence[HomogeneousForm]):
        if len(components) != target.ambient_dim + 1:
            raise DimensionMismatch("one component per ambient coordinate")
        e = None
        for g in components:
            if g.num_vars != 2 or g.field != target.field:
                raise DimensionMismatch("components must be binary forms over the field of X")
            if not g.is_zero:
                e = g.degree if e is None else e
                if g.degree != e:
                    raise DimensionMismatch("components must share one degree")
        if e is None or e < 1:
            raise InputError("curve components are all zero or constant")
        comps = [
            g if not g.is_zero else HomogeneousForm.zero(target.field, 2, e)
            for g in components
        ]
        if binary_forms_have_common_zero(comps):
            raise InputError("components share a root; the map has a base point")
        if not poly_substitute(target.form, comps).is_zero:
            raise CurveNotOnX("the parameterized curve does not lie on X")
        self.target = target
        self.degree = e
        self.components = tuple(comps)

    @classmethod
    def from_line(cls, X: Hypersurface, line: KPlane) -> "RationalCurve":
        if line.dim != 1 or line.ambient_dim != X.ambient_dim:
            raise DimensionMismatch("need a line in the ambient space of X")
        field = X.field
        comps = []
        for j in range(X.ambient_dim + 1):
            comps.append(
                HomogeneousForm.from_terms(
                    field, 2, 1, [((1, 0), line.basis[0][j]), ((0, 1), line.basis[1][j])]
                )
            )
        return cls(X, comps)

    def point_at(self, param: Sequence) -> tuple:
        return tuple(poly_eval(g, param) for g in self.components)

    def __repr__(self):
        comps = ", ".join(poly_render(g) for g in self.components)
        return f"RationalCurve(e={self.degree}, [{comps}])"


def _binary_coeff(form: HomogeneousForm, t_exp: int):
    """Coefficient of s^(deg - t_exp) t^t_exp."""
    return form.terms.get((form.degree - t_exp, t_exp), form.field.zero)


def h0_twisted_tangent(
    X: Hypersurface,
    C: RationalCurve,
    m: int,
    vanish_at: Optional[Sequence] = None,
) -> int:
    """h^0 of the pulled-back tangent bundle of X twisted by O(e*m), with an
    optional one-point vanishing condition at the parameter `vanish_at`."""
    if C.target.form != X.form:
        raise CurveNotOnX("curve was built on a different hypersurface")
    field = X.field
    e = C.degree
    if m < -1:
        raise TwistOutOfWindow(f"m={m} < -1")
    em = e * m
    if vanish_at is None:
        if em < -1:
            raise TwistOutOfWindow(f"e*m = {em} < -1 breaks the subtraction term")
        correction = max(0, em + 1)
    else:
        if em < 0:
            raise TwistOutOfWindow(f"e*m = {em} < 0 with a vanishing point")
        correction = max(0, em)
    # unknowns: coefficients of g_i, binary of degree e*(m+1)
    gdeg = e * (m + 1)
    ncols = (X.ambient_dim + 1) * (gdeg + 1)
    grads = [poly_substitute(di, C.components) for di in partial_derivatives(X.form)]
    outdeg = e * (X.degree + m)
    rows = []
    for l in range(outdeg + 1):
        row = [field.zero] * ncols
        for i, Di in enumerate(grads):
            if Di.is_zero:
                continue
            for j in range(gdeg + 1):
                t_exp = l - j
                if 0 <= t_exp <= Di.degree:
                    row[i * (gdeg + 1) + j] = _binary_coeff(Di, t_exp)
        rows.append(row)
    if vanish_at is not None:
        qs, qt = (field(x) for x in vanish_at)
        if qs == 0 and qt == 0:
            raise InputError("vanishing point must be a projective parameter")
        powers = [
            field.mul(pow_scalar(field, qs, gdeg - j), pow_scalar(field, qt, j))
            for j in range(gdeg + 1)
        ]
        for i in range(X.ambient_dim + 1):
            row = [field.zero] * ncols
            for j in range(gdeg + 1):
                row[i * (gdeg + 1) + j] = powers[j]
            rows.append(row)
    rank_, basis = nullspace_rank(ExactMatrix(field, rows))
    kernel_dim = len(basis)
    h0 = kernel_dim - correction
    if h0 < 0:
        raise InternalInvariantViolation("negative section count")
    return h0


def pow_scalar(field, x, k: int):
    out = field.one
    for _ in range(k):
        out = field.mul(out, x)
    return out


class SplittingType:
    """Normal-bundle splitting multiset of a line, with its h^0 table."""

    __slots__ = ("a", "h0_table", "n", "d")

    def __init__(self, a, h0_table, n, d):
        self.a = tuple(sorted(a, reverse=True))
        self.h0_table = dict(h0_table)
        self.n = n
        self.d = d

    def h0_from_multiset(self, m: int) -> int:
        return sum(max(0, ai + m + 1) for ai in self.a)

    @property
    def sum(self) -> int:
        return sum(self.a)

    @property
    def globally_generated(self) -> bool:
        return min(self.a) >= 0

    def to_dict(self):
        return {
            "a": list(self.a),
            "h0_table": {str(m): v for m, v in sorted(self.h0_table.items())},
            "sum": self.sum,
            "free": self.globally_generated,
        }

    def __repr__(self):
        return f"SplittingType(a={self.a})"


def normal_bundle_splitting(X: Hypersurface, line) -> SplittingType:
    """Splitting multiset {a_i} of the normal bundle of a line on X.

    h^0(N(m)) = h^0(curve tangent twist m) - h^0(O(m+2)) splits off the
    tangent direction (valid for m >= -2); differences of the table count
    #{a_i >= -m}, and a_i in [2-d, 1] bounds the range m = -1..d-2.
    """
    if isinstance(line, KPlane):
        C = RationalCurve.from_line(X, line)
    else:
        C = line
        if C.degree != 1:
            raise DimensionMismatch("splitting types are computed for lines only")
    n, d = X.ambient_dim, X.degree
    table = {}
    for m in range(-1, max(0, d - 1)):
        table[m] = h0_twisted_tangent(X, C, m) - max(0, m + 3)
        if table[m] < 0:
            raise InternalInvariantViolation("negative normal section count")
    # cumulative counts c_j = #{a_i >= j} for j = 1 down to 2-d
    cumulative = {1: table[-1]}
    for m in range(0, max(0, d - 1)):
        cumulative[-m] = table[m] - table[m - 1]
    rank = n - 2
    lowest = 2 - d if d >= 2 else 1
    if cumulative[lowest] != rank:
        raise InternalInvariantViolation(
            f"splitting counts {cumulative} do not account for rank {rank}"
        )
    a = []
    prev = 0
    for j in range(1, lowest - 1, -1):
        here = cumulative[j]
        a.extend([j] * (here - prev))
        prev = here
    split = SplittingType(a, table, n, d)
    if split.sum != n - d - 1 or (a and max(a) > 1):
        raise InternalInvariantViolation(f"splitting {a} violates degree constraints")
    for m, v in table.items():
        if split.h0_from_multiset(m) != v:
            raise InternalInvariantViolation("h0 table inconsistent with multiset")
    return split


def is_free(X: Hypersurface, C) -> bool:
    """Globally generated pulled-back tangent / normal bundle.

    Lines: min a_i >= 0.  Higher degree: the twist-down section count equals
    the first Chern number e*(n+1-d) exactly iff no negative summand occurs;
    checked at two parameter points (the count is point-independent).
    """
    if isinstance(C, KPlane) or (isinstance(C, RationalCurve) and C.degree == 1):
        return normal_bundle_splitting(X, C).globally_generated
    e, n, d = C.degree, X.ambient_dim, X.degree
    expected = e * (n + 1 - d)
    vals = {
        h0_twisted_tangent(X, C, 0, vanish_at=q) for q in ((1, 0), (0, 1))
    }
    if len(vals) != 1:
        raise InternalInvariantViolation(f"point-dependent section count {vals}")
    return vals.pop() == expected


def expected_dim_curves(n: int, d: int, e: int) -> int:
    """Expected dimension of the space of degree-e rational curves on X."""
    if e < 1:
        raise DimensionMismatch("curve degree must be >= 1")
    return e * (n + 1 - d) + n - 4
