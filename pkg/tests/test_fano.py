import math
import random
from itertools import combinations

import pytest

from fano_workbench.errors import DimensionMismatch, NotAFanoPoint, SearchSpaceTooLarge
from fano_workbench.fields import GF, QQ
from fano_workbench.poly import poly_eval, poly_parse
from fano_workbench.fano import (
    FanoFiber,
    dimension_estimate,
    enumerate_kplanes,
    expected_dims,
    fano_fiber,
    gaussian_binomial,
    tangent_dim,
)
from fano_workbench.varieties import (
    Hypersurface,
    KPlane,
    contains,
    example_hypersurface,
    fermat,
    projective_points,
)


def classical_fermat_lines(p):
    """Independent construction: for each pairing of the four coordinates into
    two pairs, span (e_a + w*e_b, e_c + w'*e_d) over cube roots of -1."""
    field = GF(p)
    roots = [z for z in range(p) if pow(z, 3, p) == p - 1]
    assert len(roots) == 3, "needs p = 1 mod 3"
    lines = set()
    for (a, b), (c, d) in (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))):
        for w in roots:
            for w2 in roots:
                r1 = [0] * 4
                r2 = [0] * 4
                r1[a], r1[b] = 1, w
                r2[c], r2[d] = 1, w2
                lines.add(KPlane.from_rows(field, [r1, r2]))
    return lines


def quadric_ruling_lines(p):
    """The two explicit rulings of x0*x3 = x1*x2, q+1 lines each."""
    field = GF(p)
    lines = set()
    for a in list(range(p)) + [None]:
        if a is None:
            lines.add(KPlane.from_rows(field, [[0, 0, 1, 0], [0, 0, 0, 1]]))
            lines.add(KPlane.from_rows(field, [[0, 1, 0, 0], [0, 0, 0, 1]]))
        else:
            lines.add(KPlane.from_rows(field, [[1, 0, a, 0], [0, 1, 0, a]]))
            lines.add(KPlane.from_rows(field, [[1, a, 0, 0], [0, 0, 1, a]]))
    return lines


def brute_force_lines(X):
    """Second census route: spans of pairs of F_p points of X."""
    pts = X.points()
    found = set()
    for u, v in combinations(pts, 2):
        from fano_workbench.linalg import rank

        if rank([list(u), list(v)], X.field) != 2:
            continue
        L = KPlane.from_rows(X.field, [list(u), list(v)])
        if L in found:
            continue
        if all(poly_eval(X.form, q) == 0 for q in L.points()):
            found.add(L)
    return found


def test_quadric_ruling_counts():
    for q in (3, 5, 7, 11):
        X = Hypersurface(poly_parse("x0*x3-x1*x2", 4, GF(q)))
        census = enumerate_kplanes(X, 1)
        assert census.count == 2 * (q + 1)
        assert set(census.planes) == quadric_ruling_lines(q)


def test_fermat_cubic_27_lines():
    for p in (7, 13):
        X = fermat(3, 3, GF(p))
        census = enumerate_kplanes(X, 1)
        assert census.count == 27
        assert set(census.planes) == classical_fermat_lines(p)
        assert all(contains(X, L) for L in census.planes)


def test_census_agrees_with_pair_span_route():
    X = Hypersurface(poly_parse("x0*x3-x1*x2", 4, GF(3)))
    assert set(enumerate_kplanes(X, 1).planes) == brute_force_lines(X)


def test_conic_contains_no_line():
    X = Hypersurface(poly_parse("x0^2+x1^2+x2^2", 3, GF(5)))
    assert enumerate_kplanes(X, 1).count == 0


def test_census_chart_partition_is_exhaustive():
    # sum of chart sizes equals the Gaussian binomial
    from fano_workbench.fano import _chart_chunks

    for n, k, p in ((3, 1, 3), (4, 2, 3), (3, 2, 5)):
        chunks = _chart_chunks(n, k, p, 7)
        assert sum(stop - start for _, start, stop in chunks) == gaussian_binomial(
            n + 1, k + 1, p
        )


def test_jobs_produce_identical_census(quadric_surface):
    a = enumerate_kplanes(quadric_surface, 1, jobs=1)
    b = enumerate_kplanes(quadric_surface, 1, jobs=3)
    assert a.count == b.count and a.planes == b.planes


def test_expected_dims_examples():
    assert expected_dims(3, 3, 1)["fano"] == 0
    assert expected_dims(4, 3, 1)["fano"] == 2
    assert expected_dims(3, 2, 1) == {"fano": 1, "fiber": 0, "point_fiber": 0}
    # negative means expected-empty
    assert expected_dims(2, 2, 1)["fano"] == -1


def test_fano_fiber_quadric(quadric_surface, f7):
    fib = fano_fiber(quadric_surface, KPlane.point(f7, (1, 0, 0, 0)))
    sols = fib.solutions()
    assert len(sols) == 2
    for at in sols:
        assert contains(quadric_surface, fib.plane_at(at))
        assert tangent_dim(fib, at) == 0
    with pytest.raises(NotAFanoPoint):
        tangent_dim(fib, (1, 1, 1))


def test_fiber_roundtrip_exhaustive_small(worked_cubic, line_v23, f7):
    # every fiber solution lifts to a contained plane; every plane through the
    # center inside X appears among the fiber solutions
    for X, center in (
        (worked_cubic, KPlane.point(f7, (1, 0, 1, 3))),
        (worked_cubic, KPlane.point(f7, (0, 1, 0, 0))),
    ):
        if poly_eval(X.form, center.basis[0]) != 0:
            continue
        fib = fano_fiber(X, center)
        sols = set(fib.solutions())
        census = enumerate_kplanes(X, 1, through=center)
        assert census.count == len(sols)
        lifted = {fib.plane_at(at) for at in sols}
        assert lifted == set(census.planes)
        for L in lifted:
            assert contains(X, L)


def test_fiber_of_hyperplane_is_linear(f7):
    # one linear equation: the solutions form a P^(n-k-1), all planes contained
    X = Hypersurface(poly_parse("x0+x1+x2+x3", 4, f7))
    pt = KPlane.point(f7, (1, -1, 0, 0))
    fib = fano_fiber(X, pt)
    sols = fib.solutions()
    assert len(sols) == len(list(projective_points(fib.fiber_dim - 1, 7)))
    assert all(contains(X, fib.plane_at(at)) for at in sols)


def test_tangent_dim_at_least_expected(rng):
    # tangent spaces can only be too big
    X, marked = example_hypersurface("planed", n=4, d=2, p=5, m=1, seed=2)
    center = marked.random_subplane(0, rng)
    fib = fano_fiber(X, center)
    for at in fib.solutions():
        assert tangent_dim(fib, at) >= fib.expected_dim


def test_through_center_conical_growth():
    X, vertex = example_hypersurface("conical", n=4, d=5, p=7, seed=1, attempts=200)
    census = enumerate_kplanes(X, 1, through=vertex)
    # the vertex cone carries a family of dimension >= n-3 = 1: about p lines
    assert census.count >= 7
    for L in census.planes:
        assert contains(X, L)


def test_dimension_estimate_quadric_and_fermat():
    est = dimension_estimate(poly_parse("x0*x3-x1*x2", 4, QQ), 1, (5, 13))
    assert est.counts == [12, 28]
    assert est.estimate == 1 == est.claimed
    est = dimension_estimate(fermat(3, 3, QQ).form, 1, (7, 13))
    assert est.counts == [27, 27]
    assert est.estimate == 0 == est.claimed
    est = dimension_estimate(poly_parse("x0^2+x1^2+x2^2", 3, QQ), 1, (5, 7))
    assert est.counts == [0, 0]
    assert est.estimate == -1
    assert est.claimed == -1


def test_census_budget_guard(quadric_surface):
    with pytest.raises(SearchSpaceTooLarge):
        enumerate_kplanes(quadric_surface, 1, budget=10)


def test_gaussian_binomial_values():
    assert gaussian_binomial(4, 2, 3) == 130  # lines in P^3 over F_3
    assert gaussian_binomial(4, 2, 7) == (49 + 1) * (49 + 7 + 1)
