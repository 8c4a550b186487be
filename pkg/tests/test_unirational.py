import random

import pytest

from fano_workbench.errors import (
    DegreeZeroResidual,
    DimensionMismatch,
    InputError,
    NotNested,
    PhiInsideX,
    PointNotOnQ,
    PointSingular,
    Unsupported,
)
from fano_workbench.fields import GF, QQ
from fano_workbench.poly import (
    HomogeneousForm,
    poly_eval,
    poly_parse,
    poly_substitute,
)
from fano_workbench.unirational import (
    basepoint_free_check,
    bertini_strata,
    boundary_series,
    quadric_param,
    reduction_step,
    residual,
    residual_family,
    unirational_sample,
)
from fano_workbench.varieties import (
    Hypersurface,
    KPlane,
    contains,
    projective_points,
    random_form,
)


def phi_through(field, a2, a3):
    return KPlane.from_rows(field, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, a2, a3]])


# -- residuals ------------------------------------------------------------------


def test_residual_quadric_worked(quadric_surface, line_v23, f7):
    rd = residual(quadric_surface, line_v23, phi_through(f7, 1, 2))
    # Y = a3*x0 - a2*x1 with (a2,a3) = (1,2)
    assert rd.residual.form == poly_parse("2*x0 - x1", 3, f7)
    assert rd.trace == poly_parse("2*x0 - x1", 2, f7)


def test_residual_cubic_worked(worked_cubic, line_v23, f7):
    rd = residual(worked_cubic, line_v23, phi_through(f7, 1, 2))
    # Y = a2 x0^2 + a3 x1^2 + (a2^3+a3^3) t^2 at (a2,a3) = (1,2)
    assert rd.residual.form == poly_parse("x0^2 + 2*x1^2 + 2*x2^2", 3, f7)
    assert rd.trace == poly_parse("x0^2 + 2*x1^2", 2, f7)


def test_residual_division_identity(worked_cubic, line_v23, f7, rng):
    # the restriction of f to the enveloping plane equals t * (residual form)
    for a in ((1, 2), (1, 0), (0, 1), (1, 6)):
        phi = phi_through(f7, *a)
        rd = residual(worked_cubic, line_v23, phi)
        # restrict f to phi coordinates via the embedding rows
        images = [
            HomogeneousForm.linear(f7, [row[j] for row in rd.embedding])
            for j in range(4)
        ]
        restricted = poly_substitute(worked_cubic.form, images)
        t = HomogeneousForm.variable(f7, 3, 2)
        assert restricted == t * rd.residual.form


def test_residual_errors(quadric_surface, worked_cubic, line_v23, f7):
    with pytest.raises(DegreeZeroResidual):
        residual(Hypersurface(poly_parse("x3", 4, f7)), line_v23, phi_through(f7, 1, 0))
    with pytest.raises(NotNested):
        residual(
            worked_cubic,
            line_v23,
            KPlane.from_rows(f7, [[1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
        )
    # a plane inside X: the quadric contains span(e0, e1, ...)? use a hypersurface
    # with a 2-plane: x3 * x0^2-ish; simplest: V(x3) restricted... construct directly
    X = Hypersurface(poly_parse("x3*x0^2 + x3^2*x1 - x3^3", 4, f7, degree=3))
    G = KPlane.from_rows(f7, [[1, 0, 0, 0], [0, 1, 0, 0]])
    phi = KPlane.from_rows(f7, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])
    assert contains(X, phi)
    with pytest.raises(PhiInsideX):
        residual(X, G, phi)


# -- boundary series ---------------------------------------------------------------


def test_boundary_series_rows_linear(worked_cubic, quadric_surface, line_v23):
    bs = boundary_series(worked_cubic, line_v23)
    assert {I for I, _ in bs.rows} == {(2, 0), (1, 1), (0, 2)}
    for _, linear in bs.rows:
        assert linear.is_zero or linear.degree == 1
    # member specialization matches the residual trace
    member = bs.member((1, 2))
    assert member == poly_parse("x0^2 + 2*x1^2", 2, worked_cubic.field)
    bsq = boundary_series(quadric_surface, line_v23)
    member = bsq.member((1, 2))
    assert member == poly_parse("2*x0 - x1", 2, quadric_surface.field)


def test_boundary_series_empty_for_degree_one(f7, line_v23):
    X = Hypersurface(poly_parse("x3", 4, f7))
    bs = boundary_series(X, line_v23)
    assert bs.rows == []
    with pytest.raises(InputError):
        basepoint_free_check(bs)


def test_basepoint_free_worked_examples(worked_cubic, quadric_surface, line_v23):
    rep = basepoint_free_check(boundary_series(worked_cubic, line_v23), second_prime=11)
    assert rep.basepoint_free and rep.primes_checked == [7, 11]
    rep = basepoint_free_check(boundary_series(quadric_surface, line_v23))
    assert rep.basepoint_free


def test_basepoint_witness_on_singular_control(f7, line_v23):
    # no x1^2*(linear) term: every member vanishes at [0,1] on the marked line,
    # and that point is a singular point of X
    X = Hypersurface(poly_parse("x0^2*x2 + x0*x1*x3 + x2^3 + x3^3", 4, f7))
    from fano_workbench.varieties import singular_search

    assert singular_search(X).witness == (0, 1, 0, 0)
    rep = basepoint_free_check(boundary_series(X, line_v23))
    assert not rep.basepoint_free
    assert rep.witness == (0, 1, 0, 0)


def test_artificial_series_rows_divisible_by_x0(f7, line_v23):
    # construct a hypersurface whose boundary rows all carry x0: basepoint [0,1]
    X = Hypersurface(
        poly_parse("x0^2*x2 + x0*x1*x2 + x0*x1*x3 + x2^3 + x3^3", 4, f7)
    )
    rep = basepoint_free_check(boundary_series(X, line_v23))
    assert not rep.basepoint_free
    assert rep.witness == (0, 1, 0, 0)


# -- Bertini strata -----------------------------------------------------------------


def test_bertini_full_system_of_lines_in_p2():
    f5 = GF(5)

    def member(a):
        return HomogeneousForm.linear(f5, list(a))

    strata = bertini_strata(member, 2, 2, f5)
    assert strata.base_count == 0 and strata.base_dim == -1
    # every line is smooth: S_0 counts sing_dim >= -1, i.e. everything
    assert strata.strata[0] == len(list(projective_points(2, 5)))
    assert strata.strata[1] == 0
    assert strata.violations == []


def test_bertini_conic_pencil(worked_cubic, line_v23, f7):
    member, m, k = residual_family(worked_cubic, line_v23)
    assert (m, k) == (1, 2)
    strata = bertini_strata(member, m, k, f7)
    # base locus: common zeros of all residuals inside the enveloping plane
    # coordinates; the two points of the marked line where x0 = x1 = 0... none
    assert strata.base_dim == -1
    # singular members are the degenerate conics: discriminant a2*a3*(a2^3+a3^3)
    singular_params = [
        a
        for a in projective_points(1, 7)
        if (a[0] * a[1] * (pow(a[0], 3, 7) + pow(a[1], 3, 7))) % 7 == 0
    ]
    assert strata.strata[1] == len(singular_params)
    assert strata.violations == []


def test_bertini_negative_control(f7):
    # double planes: every member is singular along a whole line while the
    # base locus is empty, so the singular strata overflow their codimension
    def member(a):
        linear = HomogeneousForm.linear(f7, list(a))
        return linear * linear

    strata = bertini_strata(member, 2, 2, f7)
    assert strata.base_count == 0
    assert strata.violations


# -- quadric parameterization --------------------------------------------------------


def test_quadric_param_worked_example(quadric_surface):
    qp = quadric_param(quadric_surface, (1, 0, 0, 0))
    from fano_workbench.poly import poly_render

    assert [poly_render(g) for g in qp.components] == [
        "x0*x1",
        "x0*x2",
        "x1*x2",
        "x2^2",
    ]


def test_quadric_param_identity_random(rng):
    # Q(p(v)) = 0 as polynomial identity for random smooth quadrics, N <= 5
    count = 0
    while count < 10:
        N = rng.choice((2, 3, 4, 5))
        p = rng.choice((5, 7, 11))
        field = GF(p)
        Q = Hypersurface(random_form(field, N + 1, 2, rng))
        pts = [q for q in projective_points(N, p) if poly_eval(Q.form, q) == 0]
        if not pts:
            continue
        pt = rng.choice(pts)
        from fano_workbench.poly import partial_derivatives

        if all(poly_eval(g, pt) == 0 for g in partial_derivatives(Q.form)):
            continue
        qp = quadric_param(Q, pt)
        # constructor asserts the identity; double-check independently
        assert poly_substitute(Q.form, qp.components).is_zero
        assert qp.dominance_evidence(rng)
        count += 1


def test_quadric_param_errors(quadric_surface, f7):
    with pytest.raises(PointNotOnQ):
        quadric_param(quadric_surface, (1, 1, 1, 0))
    cone = Hypersurface(poly_parse("x0*x2 - x1^2", 4, f7))
    with pytest.raises(PointSingular):
        quadric_param(cone, (0, 0, 0, 1))
    with pytest.raises(DimensionMismatch):
        quadric_param(Hypersurface(poly_parse("x0^3+x1^3+x2^3", 3, f7)), (1, -1, 0))


# -- reduction and sampling -----------------------------------------------------------


def test_reduction_step_worked_cubic(worked_cubic, line_v23):
    rng = random.Random(11)
    step = reduction_step(worked_cubic, line_v23, 0, rng)
    assert step.datum.residual.degree == 2
    assert step.next_plane.dim == 0
    # the found point lies on the residual conic and on the marked line's trace
    q = step.next_plane.basis[0]
    assert poly_eval(step.datum.residual.form, q) == 0
    assert q[2] == 0  # inside the marked plane (t = 0)
    assert poly_eval(step.datum.trace, q[:2]) == 0
    # lifted to the ambient space the point lies on X
    amb = step.datum.to_ambient(q)
    assert poly_eval(worked_cubic.form, amb) == 0


def test_reduction_step_quadric_always_succeeds(quadric_surface, f7):
    gamma = KPlane.point(f7, (1, 0, 0, 0))
    for seed in range(5):
        step = reduction_step(quadric_surface, gamma, 0, random.Random(seed))
        q = step.next_plane.basis[0]
        assert poly_eval(step.datum.residual.form, q) == 0
        amb = step.datum.to_ambient(q)
        assert poly_eval(quadric_surface.form, amb) == 0


def test_unirational_sample_cubic(worked_cubic, line_v23):
    rep = unirational_sample(worked_cubic, line_v23, 2000, seed=42)
    assert rep.all_on_x
    assert rep.produced > 0
    assert rep.total_on_x == 71
    assert rep.hit_fraction >= 0.5
    assert "no_root" in rep.tally  # quadratic-residue obstruction is visible


def test_unirational_sample_quadric_surface_coverage():
    # stereographic sampling misses exactly the tangent-plane section (cut by
    # the two rulings through the base point) and recovers the base point
    X = Hypersurface(poly_parse("x0*x3-x1*x2", 4, GF(11)))
    gamma = KPlane.point(GF(11), (1, 0, 0, 0))
    rep = unirational_sample(X, gamma, 4000, seed=7)
    assert rep.all_on_x
    assert rep.total_on_x == 144  # (q+1)^2
    # image = X minus the two tangent lines plus the base point: 144 - 23 + 1
    assert rep.distinct_points == 122
    assert rep.hit_fraction == 122 / 144


def test_unirational_sample_quadric_threefold_coverage():
    # exact reachable set: X minus the tangent-hyperplane section (a cone of
    # 1 + q(q+1) = 133 points) plus the base point: 1464 - 133 + 1 = 1332
    X = Hypersurface(poly_parse("x0*x4-x1*x2+x3^2", 5, GF(11)))
    gamma = KPlane.point(GF(11), (1, 0, 0, 0, 0))
    from fano_workbench.unirational import quadric_param

    param = quadric_param(X, (1, 0, 0, 0, 0))
    image = set()
    for v in projective_points(3, 11):
        pt = param.point_at(v)
        if pt is not None:
            image.add(pt)
    assert len(image) == 1332
    rep = unirational_sample(X, gamma, 20000, seed=3)
    assert rep.all_on_x
    assert rep.total_on_x == 1464
    assert rep.hit_fraction >= 0.9


def test_unirational_sample_errors(worked_cubic, quadric_surface, f7):
    with pytest.raises(NotNested):
        unirational_sample(
            worked_cubic, KPlane.from_rows(f7, [[1, 0, 0, 0], [0, 0, 1, 0]]), 10
        )
    with pytest.raises(Unsupported):
        unirational_sample(
            Hypersurface(random_form(GF(7), 5, 4, random.Random(0))),
            KPlane.point(GF(7), (1, 0, 0, 0, 0)),
            10,
        )
