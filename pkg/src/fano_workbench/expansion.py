"""Local expansions of a hypersurface equation around a point or a plane.

Around a point p moved to [1,0,...,0] the equation splits as
f = sum_i piece_i * y0^(d-i) with piece_i of degree i in the remaining
variables; the pieces are the local equations for lines through p.

Around a c-dimensional center plane moved to span(e_0..e_c) the equation
splits as f = sum_I coeff_I * y^I over exponent tuples I on the first c+1
variables with |I| <= d-1; coeff_I has degree d-|I| in the last n-c
variables, which are homogeneous coordinates on the P^(n-c-1) of
(c+1)-planes containing the center.  The coeff_I are the local equations
for those planes lying in X.

Linear parts at a common zero of the local equations are taken in an affine
chart moving the diagnosed fiber point to the origin; their span has a rank
(delta) that measures the tangent-space defect, and in the plane case a
"downward" subfamily of indices realizing that rank exists for a general
center inside the diagnosed plane (the center is resampled until one is
found).
"""

from __future__ import annotations

import math
import random
from itertools import combinations_with_replacement
from typing import Optional, Sequence

from .errors import (
    CoordinateVanishesAtCenter,
    DimensionMismatch,
    DownwardSetNotFound,
    IndexOutOfRange,
    InternalInvariantViolation,
    NotAFanoPoint,
    PlaneNotInX,
    PointNotOnX,
    SearchSpaceTooLarge,
)
from .fields import FieldSpec
from .linalg import ExactMatrix, extend_to_basis, invert, nullspace_rank, rank, rref
from .poly import HomogeneousForm, linear_substitute, partial_derivatives, poly_eval
from .varieties import (
    DEFAULT_POINT_BUDGET,
    Hypersurface,
    KPlane,
    contains,
    normalize_point,
    projective_point_count,
    projective_points,
)


# -- multiset index bookkeeping -------------------------------------------------


def index_set(symbols: int, d: int):
    """All exponent tuples on `symbols` variables with total degree <= d-1,
    ordered by degree then lexicographically."""
    out = []
    for size in range(d):
        for combo in combinations_with_replacement(range(symbols), size):
            exps = [0] * symbols
            for j in combo:
                exps[j] += 1
            out.append(tuple(exps))
    return tuple(sorted(out, key=lambda e: (sum(e), e)))


def multiset_of(exps: Sequence[int]):
    """Exponent tuple -> sorted multiset listing, e.g. (2,0,1) -> [0,0,2]."""
    out = []
    for j, e in enumerate(exps):
        out.extend([j] * e)
    return out


def exponents_of(multiset: Sequence[int], symbols: int):
    exps = [0] * symbols
    for j in multiset:
        if not 0 <= j < symbols:
            raise IndexOutOfRange(f"symbol {j} outside 0..{symbols - 1}")
        exps[j] += 1
    return tuple(exps)


def is_downward(family, symbols: int, d: int) -> bool:
    """A family of exponent tuples is downward when every member of size
    < d-1 stays in the family after adjoining any one symbol."""
    fam = set()
    for exps in family:
        exps = tuple(exps)
        if len(exps) != symbols or any(e < 0 for e in exps):
            raise IndexOutOfRange(f"bad exponent tuple {exps} for {symbols} symbols")
        if sum(exps) > d - 1:
            raise IndexOutOfRange(f"{exps} has size {sum(exps)} > d-1 = {d - 1}")
        fam.add(exps)
    for exps in fam:
        if sum(exps) < d - 1:
            for j in range(symbols):
                bumped = list(exps)
                bumped[j] += 1
                if tuple(bumped) not in fam:
                    return False
    return True


# -- coordinate frames ---------------------------------------------------------


def _frame_for_plane(plane: KPlane, rng: Optional[random.Random]):
    """Invertible matrix whose first dim+1 columns span the plane.

    Deterministic completion uses standard vectors at non-pivot columns; with
    an rng the completion is a random complement (general position choice).
    """
    field = plane.field
    rows = [list(r) for r in plane.basis]
    n1 = plane.ambient_dim + 1
    if rng is None:
        full = extend_to_basis(rows, field)
    else:
        while True:
            extra = [
                [field.random_element(rng) for _ in range(n1)]
                for _ in range(n1 - len(rows))
            ]
            full = rows + extra
            if rank(full, field) == n1:
                break
    # columns of the frame are the chosen basis points
    to_ambient = ExactMatrix(field, list(zip(*full)))
    return to_ambient, invert(to_ambient)


def _split_leading(form: HomogeneousForm, head: int):
    """Group terms of a form by their exponents on the first `head` variables.

    Returns dict: head-exponent tuple -> form in the trailing variables.
    """
    field = form.field
    tail_vars = form.num_vars - head
    buckets: dict = {}
    for exps, coeff in form.terms.items():
        lead = exps[:head]
        tail = exps[head:]
        buckets.setdefault(lead, {})[tail] = coeff
    return {
        lead: HomogeneousForm(field, tail_vars, form.degree - sum(lead), terms)
        for lead, terms in buckets.items()
    }


# -- point expansion ---------------------------------------------------------------


class PointExpansion:
    """f in coordinates where the center point is [1,0,...,0]."""

    __slots__ = (
        "hypersurface",
        "center",
        "x0_coeffs",
        "to_local",
        "to_ambient",
        "pieces",
    )

    def __init__(self, hypersurface, center, x0_coeffs, to_local, to_ambient, pieces):
        self.hypersurface = hypersurface
        self.center = center
        self.x0_coeffs = x0_coeffs
        self.to_local = to_local  # y = B x, center -> e0
        self.to_ambient = to_ambient  # x = B^{-1} y
        self.pieces = pieces  # degree i -> form of degree i in n fiber vars

    @property
    def fiber_vars(self) -> int:
        return self.hypersurface.ambient_dim

    def local_form(self) -> HomogeneousForm:
        return linear_substitute(self.hypersurface.form, self.to_ambient.entries)

    def reassemble(self) -> HomogeneousForm:
        """sum_i piece_i * y0^(d-i); equals local_form exactly."""
        X = self.hypersurface
        field = X.field
        n1 = X.ambient_dim + 1
        total = HomogeneousForm.zero(field, n1, X.degree)
        for i, piece in self.pieces.items():
            terms = {}
            for exps, coeff in piece.terms.items():
                terms[(X.degree - i,) + exps] = coeff
            total = total + HomogeneousForm(field, n1, X.degree, terms)
        return total

    def direction_to_ambient(self, at: Sequence) -> tuple:
        """Fiber point (a line direction) -> ambient point spanning the line with the center."""
        field = self.hypersurface.field
        return self.to_ambient.matvec((field.zero,) + tuple(field(a) for a in at))

    def line_at(self, at: Sequence) -> KPlane:
        return self.center.span_with(self.direction_to_ambient(at))


def expand_at_point(
    X: Hypersurface,
    point: Sequence,
    x0: Optional[Sequence] = None,
    rng: Optional[random.Random] = None,
) -> PointExpansion:
    """Expand f around a point of X with respect to a coordinate not vanishing there."""
    field = X.field
    pt = normalize_point(field, point)
    if poly_eval(X.form, pt) != 0:
        raise PointNotOnX(f"{pt} is not on the hypersurface")
    n1 = X.ambient_dim + 1

    def pairing(coeffs):
        acc = field.zero
        for a, b in zip(coeffs, pt):
            acc = field.add(acc, field.mul(a, b))
        return acc

    if x0 is not None:
        lam = tuple(field(c) for c in x0)
        if pairing(lam) == 0:
            raise CoordinateVanishesAtCenter(f"coordinate {lam} vanishes at {pt}")
    else:
        rng = rng or random.Random(0)
        while True:
            lam = tuple(field.random_element(rng) for _ in range(n1))
            if pairing(lam) != 0:
                break
    # rows: the distinguished coordinate, then a basis of forms vanishing at pt
    _, perp = nullspace_rank(ExactMatrix(field, [pt]))
    to_local = ExactMatrix(field, [list(lam)] + [list(v) for v in perp])
    to_ambient = invert(to_local)
    local = linear_substitute(X.form, to_ambient.entries)
    buckets = _split_leading(local, 1)
    if buckets.get((X.degree,), HomogeneousForm.zero(field, X.ambient_dim, 0)).terms:
        raise InternalInvariantViolation("constant term survives at an on-X center")
    pieces = {}
    for i in range(1, X.degree + 1):
        got = buckets.get((X.degree - i,))
        pieces[i] = (
            got if got is not None else HomogeneousForm.zero(field, X.ambient_dim, i)
        )
    return PointExpansion(X, KPlane.point(field, pt), lam, to_local, to_ambient, pieces)


# -- plane expansion ----------------------------------------------------------------


class PlaneExpansion:
    """f in coordinates where the center c-plane is span(e_0..e_c)."""

    __slots__ = (
        "hypersurface",
        "center",
        "to_ambient",
        "to_local",
        "index_set",
        "coefficients",
    )

    def __init__(self, hypersurface, center, to_ambient, to_local, idx, coefficients):
        self.hypersurface = hypersurface
        self.center = center
        self.to_ambient = to_ambient  # x = A y, center = span of first columns
        self.to_local = to_local
        self.index_set = idx
        self.coefficients = coefficients  # I -> form of degree d-|I| in fiber vars

    @property
    def head(self) -> int:
        return self.center.dim + 1

    @property
    def fiber_vars(self) -> int:
        return self.hypersurface.ambient_dim - self.center.dim

    def local_form(self) -> HomogeneousForm:
        return linear_substitute(self.hypersurface.form, self.to_ambient.entries)

    def reassemble(self) -> HomogeneousForm:
        X = self.hypersurface
        field = X.field
        n1 = X.ambient_dim + 1
        total = HomogeneousForm.zero(field, n1, X.degree)
        for I, c in self.coefficients.items():
            terms = {}
            for exps, coeff in c.terms.items():
                terms[I + exps] = coeff
            total = total + HomogeneousForm(field, n1, X.degree, terms)
        return total

    def fiber_point_to_ambient(self, at: Sequence) -> tuple:
        field = self.hypersurface.field
        padded = (field.zero,) * self.head + tuple(field(a) for a in at)
        return self.to_ambient.matvec(padded)

    def plane_at(self, at: Sequence) -> KPlane:
        """Fiber point -> the (c+1)-plane spanned by the center and that direction."""
        return self.center.span_with(self.fiber_point_to_ambient(at))

    def fiber_coords_of_plane(self, plane: KPlane) -> tuple:
        """Inverse of plane_at for a plane of one dimension more than the center."""
        if plane.dim != self.center.dim + 1 or not plane.contains_subspace(self.center):
            raise DimensionMismatch("plane does not extend the center by one dimension")
        field = self.hypersurface.field
        for row in plane.basis:
            local = self.to_local.matvec(row)
            tail = local[self.head :]
            if any(x != 0 for x in tail):
                return normalize_point(field, tail)
        raise InternalInvariantViolation("extending plane collapsed into the center")


def expand_at_plane(
    X: Hypersurface, center: KPlane, rng: Optional[random.Random] = None
) -> PlaneExpansion:
    """Expansion around a center plane contained in X.

    For a center of dimension c this produces the C(d+c, c+1) local equations
    for (c+1)-planes through the center, as forms on P^(n-c-1).
    """
    if not contains(X, center):
        raise PlaneNotInX("expansion center is not contained in the hypersurface")
    field = X.field
    to_ambient, to_local = _frame_for_plane(center, rng)
    local = linear_substitute(X.form, to_ambient.entries)
    head = center.dim + 1
    buckets = _split_leading(local, head)
    idx = index_set(head, X.degree)
    coeffs = {}
    for I in idx:
        got = buckets.pop(I, None)
        coeffs[I] = (
            got
            if got is not None
            else HomogeneousForm.zero(field, X.ambient_dim + 1 - head, X.degree - sum(I))
        )
    if buckets:
        # a leftover bucket would be a pure center monomial, impossible on X
        raise InternalInvariantViolation(f"unexpected head exponents {list(buckets)}")
    return PlaneExpansion(X, center, to_ambient, to_local, idx, coeffs)


# -- tangent diagnostics --------------------------------------------------------------


class TangentDiagnostics:
    """Linear-part data of the local equations at a fiber point.

    delta is the rank of the span of the linear parts; downward_set (plane
    expansions only) is a downward family of indices whose linear parts are a
    basis of that span, found for a generically resampled center.
    """

    __slots__ = ("at_plane", "linear_parts", "delta", "downward_set", "witness_seeds", "chart")

    def __init__(self, at_plane, linear_parts, delta, downward_set, witness_seeds, chart):
        self.at_plane = at_plane
        self.linear_parts = linear_parts
        self.delta = delta
        self.downward_set = downward_set
        self.witness_seeds = witness_seeds
        self.chart = chart

    def to_dict(self):
        doc = {
            "delta": self.delta,
            "downward_set": None
            if self.downward_set is None
            else [multiset_of(I) for I in self.downward_set],
            "seeds": list(self.witness_seeds),
            "chart": [[str(x) for x in row] for row in self.chart.entries],
        }
        return doc


def _chart_at(field: FieldSpec, at: Sequence, rng: Optional[random.Random]):
    """Invertible fiber matrix whose first column is the diagnosed point."""
    pt = normalize_point(field, at)
    m = len(pt)
    if rng is None:
        cols = extend_to_basis([list(pt)], field)
    else:
        while True:
            extra = [[field.random_element(rng) for _ in range(m)] for _ in range(m - 1)]
            cols = [list(pt)] + extra
            if rank(cols, field) == m:
                break
    return ExactMatrix(field, list(zip(*cols)))


def _linear_parts_at(pieces, field, at, rng):
    """Linear parts of each piece in the affine chart at the fiber point.

    Returns (chart matrix, dict key -> coefficient row of the linear part).
    Raises NotAFanoPoint when some piece has a nonzero constant part.
    """
    chart = _chart_at(field, at, rng)
    rows = {}
    m = chart.cols
    for key, piece in pieces:
        if piece.is_zero:
            rows[key] = [field.zero] * (m - 1)
            continue
        moved = linear_substitute(piece, chart.entries)
        deg = piece.degree
        const = moved.terms.get((deg,) + (0,) * (m - 1))
        if const:
            raise NotAFanoPoint(f"local equation {key} does not vanish at the point")
        row = []
        for j in range(1, m):
            exps = [0] * m
            exps[0] = deg - 1
            exps[j] = 1
            row.append(moved.terms.get(tuple(exps), field.zero))
        rows[key] = row
    return chart, rows


def _greedy_downward(idx, rows, field, d):
    """Largest-size-first greedy basis selection constrained to stay downward.

    Returns (selected index list, achieved rank).
    """
    order = sorted(idx, key=lambda I: (-sum(I), I))
    symbols = len(idx[0]) if idx else 0
    chosen: list = []
    chosen_set = set()
    mat: list = []
    current_rank = 0
    for I in order:
        if sum(I) < d - 1:
            closure_ok = all(
                tuple(e + (1 if j == pos else 0) for pos, e in enumerate(I)) in chosen_set
                for j in range(symbols)
            )
            if not closure_ok:
                continue
        trial = mat + [rows[I]]
        r = rank(trial, field)
        if r > current_rank:
            chosen.append(I)
            chosen_set.add(I)
            mat = trial
            current_rank = r
    return chosen, current_rank


def linear_diagnostics(
    exp,
    at: Sequence,
    rng: Optional[random.Random] = None,
    retry_budget: int = 32,
) -> TangentDiagnostics:
    """Tangent diagnostics of the local equations at a common zero `at`.

    For plane expansions the center is resampled inside the diagnosed plane
    (up to retry_budget times) until the greedy downward basis spans; the
    failure, if it persists, is raised with the seeds that were tried.
    """
    field = exp.hypersurface.field
    if isinstance(exp, PointExpansion):
        pieces = [(i, exp.pieces[i]) for i in sorted(exp.pieces)]
        chart, rows = _linear_parts_at(pieces, field, at, None)
        delta = rank(list(rows.values()), field)
        return TangentDiagnostics(exp.line_at(at), rows, delta, None, [], chart)

    if not isinstance(exp, PlaneExpansion):
        raise DimensionMismatch(f"cannot diagnose {type(exp).__name__}")

    seeds = []
    rng = rng or random.Random(0)
    current = exp
    current_at = tuple(at)
    d = exp.hypersurface.degree
    delta = None
    for attempt in range(retry_budget):
        pieces = [(I, current.coefficients[I]) for I in current.index_set]
        chart, rows = _linear_parts_at(pieces, field, current_at, None)
        new_delta = rank(list(rows.values()), field)
        if delta is not None and new_delta != delta:
            raise InternalInvariantViolation(
                f"delta changed under center resampling: {delta} -> {new_delta}"
            )
        delta = new_delta
        chosen, got = _greedy_downward(current.index_set, rows, field, d)
        if got == delta and is_downward(chosen, current.head, d):
            return TangentDiagnostics(
                current.plane_at(current_at), rows, delta, tuple(chosen), seeds, chart
            )
        # resample a general center inside the diagnosed plane and re-expand
        seed = rng.randrange(1 << 30)
        seeds.append(seed)
        sub_rng = random.Random(seed)
        diagnosed = current.plane_at(current_at)
        new_center = diagnosed.random_subplane(exp.center.dim, sub_rng)
        current = expand_at_plane(exp.hypersurface, new_center, sub_rng)
        current_at = current.fiber_coords_of_plane(diagnosed)
    raise DownwardSetNotFound(
        f"no downward basis after {retry_budget} center resamplings", seeds
    )


# -- tangency loci ------------------------------------------------------------------


class TangencyReport:
    __slots__ = ("points", "count", "dim_estimate", "prime", "scanned")

    def __init__(self, points, count, dim_estimate, prime, scanned):
        self.points = points
        self.count = count
        self.dim_estimate = dim_estimate
        self.prime = prime
        self.scanned = scanned

    def to_dict(self):
        return {
            "count": self.count,
            "dim_estimate": self.dim_estimate,
            "prime": self.prime,
            "scanned": self.scanned,
            "points": [list(pt) for pt in self.points],
        }


def tangency_locus(
    h: HomogeneousForm,
    lower: Sequence[HomogeneousForm],
    points=None,
    budget: int = DEFAULT_POINT_BUDGET,
    keep_points: int = 10**4,
) -> TangencyReport:
    """Points where V(h) meets V(lower) and grad(h) lies in span{grad(h_i)}.

    With an empty `lower` this is exactly the F_p singular locus of V(h).
    The scan is the full canonical point list unless `points` is supplied.
    """
    field = h.field
    if field.p is None:
        raise DimensionMismatch("tangency scans need a prime field")
    for g in lower:
        if g.num_vars != h.num_vars or g.field != field:
            raise DimensionMismatch("lower forms live in a different ring")
        if g.degree >= h.degree:
            raise DimensionMismatch("lower forms must have degree < deg h")
    n = h.num_vars - 1
    if points is None:
        total = projective_point_count(n, field.p)
        if total > budget:
            raise SearchSpaceTooLarge(f"scan of {total} points exceeds budget {budget}")
        points = projective_points(n, field.p)
        scanned = total
    else:
        points = list(points)
        scanned = len(points)
    grad_h = partial_derivatives(h)
    grads_lower = [partial_derivatives(g) for g in lower]
    found = []
    count = 0
    for pt in points:
        if poly_eval(h, pt) != 0:
            continue
        if any(poly_eval(g, pt) != 0 for g in lower):
            continue
        lower_rows = [[poly_eval(gi, pt) for gi in grads] for grads in grads_lower]
        gh = [poly_eval(gi, pt) for gi in grad_h]
        base = rank(lower_rows, field) if lower_rows else 0
        if rank(lower_rows + [gh], field) == base:
            count += 1
            if len(found) < keep_points:
                found.append(pt)
    if count == 0:
        dim_estimate = -1
    else:
        dim_estimate = round(math.log(count) / math.log(field.p))
    return TangencyReport(found, count, dim_estimate, field.p, scanned)
