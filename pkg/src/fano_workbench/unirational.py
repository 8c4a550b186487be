"""Residual hypersurfaces, boundary linear series, quadric parameterizations,
and a desk-scale unirational point sampler.

Setup: X = V(f) of degree d contains a marked k-plane.  A (k+1)-plane
through the marked plane (and not inside X) meets X in the marked plane plus
a residual hypersurface of degree d-1; dividing the restricted equation by
the linear coordinate cutting the marked plane is exact.  The residual's
trace on the marked plane is linear in the choice of enveloping plane, so
those traces form a linear series; for smooth X it is basepoint free (a
basepoint would be singular on every plane section through it).

The sampler walks this reduction down to degree 2, parameterizes the final
quadric by projection from a point on it, and lifts the produced point back
up; every emitted point satisfies f = 0 exactly.  Success rates over F_p are
limited by root solvability (e.g. quadratic residuosity), so failures are
tallied by cause, never hidden.
"""

from __future__ import annotations

import math
import random
from typing import Callable, Optional, Sequence

from .errors import (
    DegreeZeroResidual,
    DimensionMismatch,
    InputError,
    InternalInvariantViolation,
    NotNested,
    PhiInsideX,
    PlaneNotInX,
    PointNotOnQ,
    PointSingular,
    RetryBudgetExhausted,
    SearchSpaceTooLarge,
    Unsupported,
)
from .expansion import PlaneExpansion, expand_at_plane
from .fields import FieldSpec
from .linalg import rank
from .poly import (
    HomogeneousForm,
    partial_derivatives,
    poly_eval,
    poly_substitute,
    reduce_mod,
)
from .varieties import (
    DEFAULT_POINT_BUDGET,
    Hypersurface,
    KPlane,
    contains,
    normalize_point,
    projective_point_count,
    projective_points,
    singular_search,
)


# -- residual hypersurfaces ---------------------------------------------------------


class ResidualDatum:
    """One enveloping plane, its residual hypersurface, and the boundary trace.

    Coordinates on the enveloping (k+1)-plane are (x_0..x_k, t): the first
    k+1 are coordinates on the marked plane, t cuts it out.  `embedding` maps
    those coordinates to ambient ones.
    """

    __slots__ = ("gamma", "phi", "fiber_point", "residual", "trace", "embedding")

    def __init__(self, gamma, phi, fiber_point, residual, trace, embedding):
        self.gamma = gamma
        self.phi = phi
        self.fiber_point = fiber_point
        self.residual = residual  # Hypersurface of degree d-1 in k+2 coordinates
        self.trace = trace  # form of degree d-1 on the marked plane (k+1 coordinates)
        self.embedding = embedding  # (k+2) rows of ambient coordinates

    def to_ambient(self, phi_point: Sequence) -> tuple:
        field = self.residual.field
        out = [field.zero] * len(self.embedding[0])
        for c, row in zip(phi_point, self.embedding):
            if c != 0:
                out = [field.add(o, field.mul(c, x)) for o, x in zip(out, row)]
        return tuple(out)


def _residual_from_values(expansion: PlaneExpansion, at, values):
    """Build the residual datum from evaluated local equations c_I(at)."""
    X = expansion.hypersurface
    field = X.field
    k = expansion.center.dim
    d = X.degree
    if all(v == 0 for v in values.values()):
        raise PhiInsideX("enveloping plane lies inside X; no residual")
    res_terms = {}
    trace_terms = {}
    for I, v in values.items():
        if v == 0:
            continue
        t_exp = d - sum(I) - 1  # after exact division by t
        res_terms[I + (t_exp,)] = v
        if t_exp == 0:
            trace_terms[I] = v
    residual_form = HomogeneousForm(field, k + 2, d - 1, res_terms)
    trace = HomogeneousForm(field, k + 1, d - 1, trace_terms)
    embedding = [
        expansion.to_ambient.matvec(
            tuple(field.one if i == j else field.zero for i in range(X.ambient_dim + 1))
        )
        for j in range(k + 1)
    ]
    embedding.append(expansion.fiber_point_to_ambient(at))
    return ResidualDatum(
        expansion.center,
        expansion.plane_at(at),
        tuple(at),
        Hypersurface(residual_form),
        trace,
        embedding,
    )


def residual(X: Hypersurface, gamma: KPlane, phi: KPlane) -> ResidualDatum:
    """Residual hypersurface of X inside phi, relative to the marked plane gamma."""
    if X.degree < 2:
        raise DegreeZeroResidual("degree-1 hypersurfaces have no residual")
    if not contains(X, gamma):
        raise PlaneNotInX("marked plane is not contained in X")
    if phi.dim != gamma.dim + 1 or not phi.contains_subspace(gamma):
        raise NotNested("enveloping plane must contain the marked plane, one dimension up")
    expansion = expand_at_plane(X, gamma)
    at = expansion.fiber_coords_of_plane(phi)
    values = {I: poly_eval(c, at) for I, c in expansion.coefficients.items()}
    return _residual_from_values(expansion, at, values)


# -- the boundary linear series ----------------------------------------------------


class BoundarySeries:
    """Traces of the residual hypersurfaces on the marked plane.

    Rows are indexed by the size-(d-1) exponent tuples; each row is a linear
    form in the fiber coordinates.  Members are degree-(d-1) forms on the
    marked plane, varying linearly with the enveloping plane.
    """

    __slots__ = ("hypersurface", "gamma", "expansion", "rows")

    def __init__(self, hypersurface, gamma, expansion, rows):
        self.hypersurface = hypersurface
        self.gamma = gamma
        self.expansion = expansion
        self.rows = rows  # list of (I, linear form in fiber coordinates)

    @property
    def param_dim(self) -> int:
        """Parameters live in P^(n-k-1)."""
        return self.hypersurface.ambient_dim - self.gamma.dim - 1

    def member(self, at: Sequence) -> HomogeneousForm:
        """The trace cut by the enveloping plane with fiber coordinates `at`."""
        field = self.hypersurface.field
        terms = {}
        for I, linear in self.rows:
            v = poly_eval(linear, at)
            if v != 0:
                terms[I] = v
        return HomogeneousForm(field, self.gamma.dim + 1, self.hypersurface.degree - 1, terms)

    def basepoint_forms(self):
        """One degree-(d-1) form on the marked plane per fiber coordinate; their
        common zeros are exactly the basepoints of the series."""
        field = self.hypersurface.field
        nfib = self.expansion.fiber_vars
        out = []
        for j in range(nfib):
            terms = {}
            for I, linear in self.rows:
                exps = [0] * nfib
                exps[j] = 1
                c = linear.terms.get(tuple(exps), field.zero)
                if c != 0:
                    terms[I] = c
            out.append(
                HomogeneousForm(field, self.gamma.dim + 1, self.hypersurface.degree - 1, terms)
            )
        return out


def boundary_series(X: Hypersurface, gamma: KPlane) -> BoundarySeries:
    if not contains(X, gamma):
        raise PlaneNotInX("marked plane is not contained in X")
    expansion = expand_at_plane(X, gamma)
    d = X.degree
    rows = []
    if d >= 2:
        for I in expansion.index_set:
            if sum(I) == d - 1:
                linear = expansion.coefficients[I]
                if linear.degree != 1:
                    raise InternalInvariantViolation("boundary row is not linear")
                rows.append((I, linear))
    return BoundarySeries(X, gamma, expansion, rows)


class BasepointReport:
    __slots__ = ("basepoint_free", "witness", "primes_checked", "notes")

    def __init__(self, basepoint_free, witness, primes_checked, notes):
        self.basepoint_free = basepoint_free
        self.witness = witness
        self.primes_checked = primes_checked
        self.notes = notes

    def to_dict(self):
        return {
            "basepoint_free": self.basepoint_free,
            "witness": None if self.witness is None else list(self.witness),
            "primes_checked": list(self.primes_checked),
            "notes": list(self.notes),
        }


def basepoint_free_check(
    series: BoundarySeries, second_prime: Optional[int] = None
) -> BasepointReport:
    """Scan the marked plane for a common zero of all series members.

    With `second_prime`, the hypersurface and marked plane are lifted to
    integer representatives and the check reruns over that prime (evidence
    against basepoints appearing only over extensions).
    """
    field = series.hypersurface.field
    if field.p is None:
        raise Unsupported("basepoint scan needs a prime field")
    if not series.rows:
        raise InputError("empty boundary series (degree-1 hypersurface)")
    notes = ["basepoint-freeness over F_p is evidence, not a proof over extensions"]
    primes = []

    def scan(s: BoundarySeries):
        forms = s.basepoint_forms()
        k = s.gamma.dim
        for q in projective_points(k, s.hypersurface.field.p):
            if all(poly_eval(g, q) == 0 for g in forms):
                return q
        return None

    witness_local = scan(series)
    primes.append(field.p)
    if witness_local is not None:
        # report the basepoint in ambient coordinates
        pt = series.expansion.to_ambient.matvec(
            tuple(witness_local) + (field.zero,) * series.expansion.fiber_vars
        )
        return BasepointReport(False, normalize_point(field, pt), primes, notes)
    if second_prime is not None:
        lifted_form = reduce_mod(series.hypersurface.form, second_prime)
        X2 = Hypersurface(lifted_form)
        field2 = X2.field
        rows2 = [[field.lift(x) % second_prime for x in row] for row in series.gamma.basis]
        if rank(rows2, field2) != series.gamma.dim + 1:
            notes.append(f"lift to GF({second_prime}) degenerated the plane; check skipped")
            return BasepointReport(True, None, primes, notes)
        gamma2 = KPlane.from_rows(field2, rows2)
        if not contains(X2, gamma2):
            notes.append(
                f"integer lift does not contain the plane over GF({second_prime}); check skipped"
            )
            return BasepointReport(True, None, primes, notes)
        witness2 = scan(boundary_series(X2, gamma2))
        primes.append(second_prime)
        if witness2 is not None:
            notes.append(f"basepoint appears over GF({second_prime}) but not GF({field.p})")
            return BasepointReport(False, witness2, primes, notes)
    return BasepointReport(True, None, primes, notes)


# -- Bertini strata ------------------------------------------------------------------


class BertiniStrata:
    """Counts of parameters whose member is singular in at least a given
    excess dimension over the base locus."""

    __slots__ = ("param_dim", "prime", "base_dim", "base_count", "strata", "violations")

    def __init__(self, param_dim, prime, base_dim, base_count, strata, violations):
        self.param_dim = param_dim
        self.prime = prime
        self.base_dim = base_dim
        self.base_count = base_count
        self.strata = strata  # k -> count of parameters with sing dim >= k + base_dim
        self.violations = violations

    def to_dict(self):
        return {
            "param_dim": self.param_dim,
            "prime": self.prime,
            "base_locus": {"count": self.base_count, "dim_evidence": self.base_dim},
            "strata": {
                str(k): {"count": c, "budget": self.prime ** (self.param_dim - k)}
                for k, c in sorted(self.strata.items())
            },
            "violations": self.violations,
            "dimension_note": "F_p point counts as dimension evidence",
        }


def bertini_strata(
    members: Callable[[Sequence], HomogeneousForm],
    param_dim: int,
    ambient_dim: int,
    field: FieldSpec,
    slack: int = 8,
    budget: int = DEFAULT_POINT_BUDGET,
) -> BertiniStrata:
    """Stratify an enumerable family of forms on P^ambient_dim by the size of
    the singular locus of each member away from the base locus.

    The expected pattern (for a linear series with base dimension b): the set
    of parameters whose member is singular in dimension >= k + b has
    codimension >= k, i.e. count at most about p^(m-k)."""
    p = field.p
    if p is None:
        raise Unsupported("strata scans need a prime field")
    n_pts = projective_point_count(ambient_dim, p)
    m_pts = projective_point_count(param_dim, p)
    if n_pts * m_pts > budget:
        raise SearchSpaceTooLarge(f"{m_pts} members x {n_pts} points over budget")
    params = list(projective_points(param_dim, p))
    space = list(projective_points(ambient_dim, p))
    cached = [members(a) for a in params]
    base = []
    for q in space:
        if all(g.is_zero or poly_eval(g, q) == 0 for g in cached):
            base.append(q)
    base_set = set(base)
    base_dim = -1 if not base else round(math.log(len(base)) / math.log(p))
    sing_dims = []
    for g in cached:
        if g.is_zero:
            sing_dims.append(ambient_dim)
            continue
        if g.degree == 0:
            sing_dims.append(-1)
            continue
        grads = partial_derivatives(g)
        count = 0
        for q in space:
            if q in base_set:
                continue
            if poly_eval(g, q) == 0 and all(poly_eval(gi, q) == 0 for gi in grads):
                count += 1
        sing_dims.append(-1 if count == 0 else round(math.log(count) / math.log(p)))
    strata = {}
    violations = []
    for k in range(0, param_dim + 2):
        c = sum(1 for s in sing_dims if s >= k + base_dim)
        strata[k] = c
        bound = p ** max(param_dim - k, 0)
        if c > slack * bound:
            violations.append({"k": k, "count": c, "budget": bound})
    return BertiniStrata(param_dim, p, base_dim, len(base), strata, violations)


def residual_family(X: Hypersurface, gamma: KPlane):
    """The residual hypersurfaces as a family of forms on the enveloping-plane
    coordinates, for Bertini-style stratification."""
    expansion = expand_at_plane(X, gamma)
    field = X.field
    k = gamma.dim
    d = X.degree

    def member(at):
        values = {I: poly_eval(c, at) for I, c in expansion.coefficients.items()}
        terms = {}
        for I, v in values.items():
            if v != 0:
                terms[I + (d - sum(I) - 1,)] = v
        return HomogeneousForm(field, k + 2, d - 1, terms)

    return member, expansion.fiber_vars - 1, k + 1


# -- quadric parameterization --------------------------------------------------------


class QuadricParam:
    """Projection parameterization of a quadric from a smooth point on it.

    Components are quadratic forms in N parameters (N = ambient dimension)
    satisfying Q(components) = 0 as an exact polynomial identity; the line
    through the base point in direction v meets Q again at the image point.
    """

    __slots__ = ("quadric", "base_point", "dropped", "components")

    def __init__(self, quadric, base_point, dropped, components):
        self.quadric = quadric
        self.base_point = base_point
        self.dropped = dropped
        self.components = components

    @property
    def param_vars(self) -> int:
        return self.quadric.ambient_dim

    def point_at(self, v: Sequence):
        """Image point, or None when the direction is degenerate (maps to 0)."""
        pt = tuple(poly_eval(g, v) for g in self.components)
        if all(x == 0 for x in pt):
            return None
        return normalize_point(self.quadric.field, pt)

    def jacobian_rank_at(self, v: Sequence) -> int:
        field = self.quadric.field
        rows = []
        for g in self.components:
            rows.append([poly_eval(gi, v) for gi in partial_derivatives(g)])
        return rank(list(zip(*rows)), field)

    def dominance_evidence(self, rng: random.Random, tries: int = 8) -> bool:
        """Some random parameter has full Jacobian rank (projective rank N-1)."""
        n = self.param_vars
        for _ in range(tries):
            v = tuple(self.quadric.field.random_element(rng) for _ in range(n))
            if any(x != 0 for x in v) and self.jacobian_rank_at(v) == n:
                return True
        return False


def quadric_param(Q: Hypersurface, pt: Sequence) -> QuadricParam:
    """Parameterize a quadric by second intersections of lines through a
    smooth point of it."""
    if Q.degree != 2:
        raise DimensionMismatch(f"expected a quadric, got degree {Q.degree}")
    field = Q.field
    pt = normalize_point(field, pt)
    if poly_eval(Q.form, pt) != 0:
        raise PointNotOnQ(f"{pt} is not on the quadric")
    grads = partial_derivatives(Q.form)
    grad_at = [poly_eval(g, pt) for g in grads]
    if all(x == 0 for x in grad_at):
        raise PointSingular(f"{pt} is a singular point of the quadric")
    n1 = Q.ambient_dim + 1
    dropped = next(i for i, x in enumerate(pt) if x != 0)
    nparams = n1 - 1
    # embed parameters: w_j = v_(index among coordinates != dropped), w_dropped = 0
    w_rows = []
    idx = 0
    for j in range(n1):
        row = [field.zero] * nparams
        if j != dropped:
            row[idx] = field.one
            idx += 1
        w_rows.append(row)
    w_forms = [HomogeneousForm.linear(field, row) for row in w_rows]
    q_of_w = poly_substitute(Q.form, w_forms)  # quadratic in v
    # polar pairing of pt with w: sum_j dQ/dx_j(pt) * w_j, linear in v
    pair = HomogeneousForm.zero(field, nparams, 1)
    for gj, wj in zip(grad_at, w_forms):
        if gj != 0:
            pair = pair + wj.scale(gj)
    components = []
    for j in range(n1):
        comp = HomogeneousForm.zero(field, nparams, 2)
        if pt[j] != 0:
            comp = comp + (-q_of_w).scale(pt[j])
        if not w_forms[j].is_zero:
            comp = comp + pair * w_forms[j]
        components.append(comp)
    if not poly_substitute(Q.form, components).is_zero:
        raise InternalInvariantViolation("parameterization identity Q(p(v)) = 0 failed")
    return QuadricParam(Q, pt, dropped, tuple(components))


def conic_on_quadric(param: QuadricParam, rng: random.Random, tries: int = 32):
    """Restrict a quadric parameterization along a random parameter line,
    producing a degree-2 rational curve on the quadric."""
    from .curves import RationalCurve

    field = param.quadric.field
    n = param.param_vars
    for _ in range(tries):
        u = [field.random_element(rng) for _ in range(n)]
        w = [field.random_element(rng) for _ in range(n)]
        if rank([u, w], field) != 2:
            continue
        images = [
            HomogeneousForm.from_terms(field, 2, 1, [((1, 0), a), ((0, 1), b)])
            for a, b in zip(u, w)
        ]
        comps = [poly_substitute(g, images) for g in param.components]
        try:
            return RationalCurve(param.quadric, comps)
        except InputError:
            continue  # degenerate line (base point or collapsed image); resample
    raise RetryBudgetExhausted(f"no smooth conic found in {tries} parameter lines")


# -- degree reduction and the sampler -------------------------------------------------


class ReductionStep:
    """Outcome of one residual step: the datum, the next marked plane inside
    the residual (in enveloping-plane coordinates), and evidence notes."""

    __slots__ = ("datum", "next_plane", "residual_smooth_evidence", "tally")

    def __init__(self, datum, next_plane, residual_smooth_evidence, tally):
        self.datum = datum
        self.next_plane = next_plane
        self.residual_smooth_evidence = residual_smooth_evidence
        self.tally = tally


def _required_center_dim(d: int) -> int:
    """Smallest marked-plane dimension the desk-scale tower handles at degree d."""
    if d <= 2:
        return 0
    return 1


def _trace_plane_candidates(trace: HomogeneousForm, r: int, field, budget: int):
    """r-planes inside the vanishing locus of the trace on the marked plane."""
    k = trace.num_vars - 1
    if trace.is_zero:
        raise PhiInsideX("trace vanished identically")
    if r == 0:
        return [
            KPlane.point(field, q)
            for q in projective_points(k, field.p)
            if poly_eval(trace, q) == 0
        ]
    from .fano import enumerate_kplanes

    census = enumerate_kplanes(Hypersurface(trace), r, budget=budget)
    return list(census.planes or [])


def reduction_step(
    X: Hypersurface,
    gamma: KPlane,
    r: int,
    rng: random.Random,
    retry_budget: int = 64,
    budget: int = DEFAULT_POINT_BUDGET,
    expansion: Optional[PlaneExpansion] = None,
) -> ReductionStep:
    """Sample an enveloping plane, take the residual, and find an r-plane in
    its trace on the marked plane (the next level's marked plane).

    Degree 2 is the floor: the residual is a hyperplane of the enveloping
    plane and any of its points serves as the next marked point.  Failures
    (no F_p root, residual singular at the chosen plane, enveloping plane
    inside X) are tallied and retried up to the budget.
    """
    if X.degree < 2:
        raise DegreeZeroResidual("cannot reduce a degree-1 hypersurface")
    field = X.field
    if field.p is None:
        raise Unsupported("the sampler's root extraction needs a prime field")
    if expansion is None:
        if not contains(X, gamma):
            raise PlaneNotInX("marked plane is not contained in X")
        expansion = expand_at_plane(X, gamma)
    tally: dict = {}

    def bump(cause):
        tally[cause] = tally.get(cause, 0) + 1

    nfib = expansion.fiber_vars
    for _ in range(retry_budget):
        at = tuple(field.random_element(rng) for _ in range(nfib))
        if all(x == 0 for x in at):
            continue
        at = normalize_point(field, at)
        values = {I: poly_eval(c, at) for I, c in expansion.coefficients.items()}
        if all(v == 0 for v in values.values()):
            bump("phi_inside_x")
            continue
        datum = _residual_from_values(expansion, at, values)
        if X.degree == 2:
            # the residual is a hyperplane of the enveloping plane; pick any point
            sols = [
                q
                for q in projective_points(gamma.dim + 1, field.p)
                if poly_eval(datum.residual.form, q) == 0
            ]
            if not sols:
                bump("no_root")
                continue
            return ReductionStep(
                datum, KPlane.point(field, rng.choice(sols)), None, tally
            )
        if datum.trace.is_zero:
            # every trace row vanished: the enveloping plane is tangent along
            # the marked plane; the next plane search is unconstrained, skip
            bump("degenerate_trace")
            continue
        try:
            candidates = _trace_plane_candidates(datum.trace, r, field, budget)
        except SearchSpaceTooLarge:
            raise
        if not candidates:
            bump("no_root" if r == 0 else "no_plane_in_trace")
            continue
        plane_in_gamma = rng.choice(candidates)
        # lift into enveloping-plane coordinates (append t = 0)
        rows = [list(row) + [field.zero] for row in plane_in_gamma.basis]
        next_plane = KPlane.from_rows(field, rows)
        resid = datum.residual
        if not contains(resid, next_plane):
            raise InternalInvariantViolation("trace plane escaped the residual")
        # the next step needs the residual smooth at the new center; global
        # smoothness is recorded as evidence either way
        report = singular_search(resid, 1, budget)
        grads = partial_derivatives(resid.form)
        singular_at_plane = False
        for q in next_plane.points():
            if all(poly_eval(g, q) == 0 for g in grads):
                singular_at_plane = True
                break
        if singular_at_plane:
            bump("residual_singular_at_plane")
            continue
        if report.is_certified_singular:
            bump("residual_singular_evidence")  # non-fatal; recorded
        return ReductionStep(datum, next_plane, report, tally)
    raise RetryBudgetExhausted(
        f"reduction failed after {retry_budget} enveloping planes", tally
    )


class TowerSampleReport:
    """Outcome of a sampling run: verified points, coverage, failure tally."""

    __slots__ = (
        "requested",
        "produced",
        "all_on_x",
        "distinct_points",
        "total_on_x",
        "hit_fraction",
        "tally",
        "seed",
        "residual_smoothness_notes",
    )

    def __init__(
        self,
        requested,
        produced,
        all_on_x,
        distinct_points,
        total_on_x,
        hit_fraction,
        tally,
        seed,
        residual_smoothness_notes,
    ):
        self.requested = requested
        self.produced = produced
        self.all_on_x = all_on_x
        self.distinct_points = distinct_points
        self.total_on_x = total_on_x
        self.hit_fraction = hit_fraction
        self.tally = tally
        self.seed = seed
        self.residual_smoothness_notes = residual_smoothness_notes

    def to_dict(self):
        return {
            "requested": self.requested,
            "produced": self.produced,
            "all_on_x": self.all_on_x,
            "distinct_points": self.distinct_points,
            "total_on_x": self.total_on_x,
            "hit_fraction": self.hit_fraction,
            "failures": {k: self.tally[k] for k in sorted(self.tally)},
            "seed": self.seed,
            "notes": list(self.residual_smoothness_notes),
        }


class _TowerSampler:
    """Caches per-enveloping-plane residual data keyed by the fiber point."""

    def __init__(self, X, gamma, rng, budget):
        self.X = X
        self.gamma = gamma
        self.rng = rng
        self.budget = budget
        self.field = X.field
        self.expansion = expand_at_plane(X, gamma)
        self.cache: dict = {}
        self.tally: dict = {}
        self.notes: set = set()

    def bump(self, cause):
        self.tally[cause] = self.tally.get(cause, 0) + 1

    def sample_point(self):
        if self.X.degree == 2:
            return self._sample_quadric(self.X, self.gamma.basis[0], None)
        return self._sample_reduce()

    def _sample_quadric(self, Q, base_point, embedding):
        key = ("qp", Q.form if embedding is None else tuple(embedding), tuple(base_point))
        param = self.cache.get(key)
        if param is None:
            param = quadric_param(Q, base_point)
            self.cache[key] = param
        v = tuple(self.field.random_element(self.rng) for _ in range(param.param_vars))
        if all(x == 0 for x in v):
            self.bump("zero_parameter")
            return None
        y = param.point_at(v)
        if y is None:
            self.bump("degenerate_parameter")
            return None
        return y

    def _sample_reduce(self):
        field = self.field
        nfib = self.expansion.fiber_vars
        at = tuple(field.random_element(self.rng) for _ in range(nfib))
        if all(x == 0 for x in at):
            self.bump("zero_parameter")
            return None
        at = normalize_point(field, at)
        entry = self.cache.get(at)
        if entry is None:
            entry = self._prepare_level(at)
            self.cache[at] = entry
        if entry == "phi_inside_x":
            self.bump("phi_inside_x")
            return None
        if entry == "no_root":
            self.bump("no_root")
            return None
        datum, roots, params = entry
        lam = self.rng.choice(roots)
        param = params.get(lam)
        if param is None:
            self.bump("residual_singular_at_point")
            return None
        v = tuple(field.random_element(self.rng) for _ in range(param.param_vars))
        if all(x == 0 for x in v):
            self.bump("zero_parameter")
            return None
        y_phi = param.point_at(v)
        if y_phi is None:
            self.bump("degenerate_parameter")
            return None
        y = datum.to_ambient(y_phi)
        return normalize_point(field, y)

    def _prepare_level(self, at):
        """Residual + trace roots + per-root conic parameterizations at one
        enveloping plane (degree-3 tower level)."""
        field = self.field
        values = {I: poly_eval(c, at) for I, c in self.expansion.coefficients.items()}
        if all(v == 0 for v in values.values()):
            return "phi_inside_x"
        datum = _residual_from_values(self.expansion, at, values)
        if self.X.degree != 3:
            raise Unsupported(
                "cached tower levels only implemented for degree 3; "
                "use reduction_step directly for deeper towers"
            )
        if datum.trace.is_zero:
            return "no_root"
        k = self.gamma.dim
        roots = [
            q for q in projective_points(k, field.p) if poly_eval(datum.trace, q) == 0
        ]
        if not roots:
            return "no_root"
        if singular_search(datum.residual, 1, self.budget).is_certified_singular:
            self.notes.add(
                "some residual hypersurfaces are singular over F_p; sampling "
                "continues from their smooth points"
            )
        params = {}
        grads = partial_derivatives(datum.residual.form)
        for q in roots:
            q_phi = tuple(q) + (field.zero,)
            if all(poly_eval(g, q_phi) == 0 for g in grads):
                params[tuple(q)] = None  # singular at the root; unusable
                continue
            params[tuple(q)] = quadric_param(datum.residual, q_phi)
        usable = [q for q in roots if params[tuple(q)] is not None]
        if not usable:
            return "no_root"
        return (datum, [tuple(q) for q in usable], params)


def unirational_sample(
    X: Hypersurface,
    gamma: KPlane,
    samples: int,
    seed: int = 0,
    budget: int = DEFAULT_POINT_BUDGET,
    enumerate_x: bool = True,
) -> TowerSampleReport:
    """Produce up to `samples` points of X through the residual tower and
    verify each on X exactly; coverage is measured against the full F_p point
    enumeration when it fits the budget."""
    if X.degree > 3:
        raise Unsupported(
            "desk-scale sampling covers degrees 2 and 3; deeper towers are "
            "budget-gated through reduction_step"
        )
    if not contains(X, gamma):
        raise NotNested("marked plane is not contained in X")
    if gamma.dim < _required_center_dim(X.degree):
        raise DimensionMismatch(
            f"degree {X.degree} sampling needs a marked plane of dimension "
            f">= {_required_center_dim(X.degree)}"
        )
    rng = random.Random(seed)
    sampler = _TowerSampler(X, gamma, rng, budget)
    produced = 0
    points = set()
    all_on_x = True
    for _ in range(samples):
        pt = sampler.sample_point()
        if pt is None:
            continue
        if poly_eval(X.form, pt) != 0:
            raise InternalInvariantViolation(f"sampler emitted {pt} off the hypersurface")
        produced += 1
        points.add(pt)
    total = None
    fraction = None
    if enumerate_x:
        try:
            total = len(X.points(budget))
            fraction = len(points) / total if total else None
        except SearchSpaceTooLarge:
            total = None
    return TowerSampleReport(
        samples,
        produced,
        all_on_x,
        len(points),
        total,
        fraction,
        sampler.tally,
        seed,
        sorted(sampler.notes),
    )
