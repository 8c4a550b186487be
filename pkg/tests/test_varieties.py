import json
import random

import pytest

from fano_workbench.errors import (
    CharacteristicTooSmall,
    DimensionMismatch,
    InputError,
    Unsupported,
)
from fano_workbench.fields import GF, QQ
from fano_workbench.linalg import rank
from fano_workbench.poly import poly_eval, poly_parse, poly_substitute
from fano_workbench.varieties import (
    Hypersurface,
    KPlane,
    contains,
    example_hypersurface,
    fermat,
    hypersurface_from_json,
    hypersurface_to_json,
    projective_point_count,
    projective_points,
    random_form,
    random_kplane,
    random_smooth,
    singular_search,
)


def test_projective_points_count_and_uniqueness():
    for n, p in ((2, 3), (3, 5), (1, 7)):
        pts = list(projective_points(n, p))
        assert len(pts) == projective_point_count(n, p)
        assert len(set(pts)) == len(pts)
        # canonical: first nonzero coordinate is 1
        for pt in pts:
            lead = next(x for x in pt if x != 0)
            assert lead == 1


def test_kplane_rref_canonicalization(rng):
    f7 = GF(7)
    for _ in range(40):
        P = random_kplane(f7, 4, rng.randrange(0, 3), rng)
        # random invertible change of spanning rows gives the same object
        k1 = P.dim + 1
        while True:
            coeffs = [[f7.random_element(rng) for _ in range(k1)] for _ in range(k1)]
            if rank(coeffs, f7) == k1:
                break
        new_rows = [
            [
                sum(c * x for c, x in zip(crow, col)) % 7
                for col in zip(*P.basis)
            ]
            for crow in coeffs
        ]
        assert KPlane.from_rows(f7, new_rows) == P


def test_contains_examples(quadric_surface, f7):
    assert contains(quadric_surface, KPlane.from_rows(f7, [[1, 0, 0, 0], [0, 1, 0, 0]]))
    # V(x1,x2) = span(e0, e3): restriction is x0*x3, not contained
    assert not contains(quadric_surface, KPlane.from_rows(f7, [[1, 0, 0, 0], [0, 0, 0, 1]]))
    Xf = fermat(3, 3, f7)
    assert contains(Xf, KPlane.from_rows(f7, [[1, -1, 0, 0], [0, 0, 1, -1]]))
    with pytest.raises(DimensionMismatch):
        contains(Xf, KPlane.point(f7, (1, 0, 0)))


def test_contains_agrees_with_pointwise_vanishing(rng):
    # symbolic containment (zero restriction) vs evaluation at every F_p point
    f7 = GF(7)
    checked = 0
    for _ in range(100):
        X = Hypersurface(random_form(f7, 4, rng.randrange(1, 4), rng))
        P = random_kplane(f7, 3, 1, rng)
        sym = contains(X, P)
        pointwise = all(poly_eval(X.form, pt) == 0 for pt in P.points())
        assert sym == pointwise
        checked += 1
    assert checked == 100


def test_singular_search_examples(f7):
    rep = singular_search(fermat(3, 3, f7))
    assert rep.status == "no_singular_point_found"
    assert rep.searched_primes == [7]
    rep = singular_search(Hypersurface(poly_parse("x0^2*x2 + x1^2*x3", 4, f7)))
    assert rep.status == "singular"
    assert rep.witness == (0, 0, 1, 0)
    rep = singular_search(Hypersurface(poly_parse("x0*x1", 3, GF(5))))
    assert rep.status == "singular"
    assert rep.witness == (0, 0, 1)


def test_singular_search_levels(f7):
    rep = singular_search(fermat(2, 2, f7), max_extension=3)
    assert rep.status == "no_singular_point_found"
    assert len(rep.searched_primes) == 3
    assert rep.searched_primes[0] == 7
    with pytest.raises(Unsupported):
        singular_search(Hypersurface(poly_parse("x0*x3-x1*x2", 4, QQ)))


def test_hypersurface_characteristic_guard():
    with pytest.raises(CharacteristicTooSmall):
        Hypersurface(poly_parse("x0^3+x1^3+x2^3", 3, GF(3)))


def test_example_fermat(f7):
    X, marked = example_hypersurface("fermat", n=3, d=3, p=7)
    assert marked is None
    assert X.form == fermat(3, 3, f7).form


def test_example_planed(f7):
    X, marked = example_hypersurface("planed", n=3, d=3, p=7, m=1, seed=11)
    assert marked.dim == 1
    assert contains(X, marked)
    assert not singular_search(X).is_certified_singular
    with pytest.raises(InputError):
        example_hypersurface("planed", n=3, d=3, p=7, m=2, seed=1)


def test_example_conical():
    X, marked = example_hypersurface("conical", n=3, d=5, p=11, seed=3)
    assert marked.dim == 0
    vertex = marked.basis[0]
    assert vertex == (0, 1, 0, 0)
    assert poly_eval(X.form, vertex) == 0
    # the x0 = 0 section is a cone: terms without x0 involve only x2..xn
    for exps in X.form.terms:
        if exps[0] == 0:
            assert exps[1] == 0


def test_random_smooth_records_seed():
    X, report, seed_used = random_smooth(3, 2, 5, attempts=50, seed=9)
    assert not report.is_certified_singular
    assert X.degree == 2 and X.ambient_dim == 3
    # reproducible from the recorded integer seed
    assert isinstance(seed_used, int)
    X2 = Hypersurface(random_form(GF(5), 4, 2, random.Random(seed_used)))
    assert X2.form == X.form


def test_json_roundtrip(worked_cubic, line_v23):
    X = Hypersurface(worked_cubic.form, [line_v23])
    doc = hypersurface_to_json(X)
    text = json.dumps(doc)
    X2 = hypersurface_from_json(json.loads(text))
    assert X2.form == X.form
    assert X2.marked_planes == (line_v23,)
    # rationals mode
    Xq = Hypersurface(poly_parse("x0*x3 - 1/2*x1*x2", 4, QQ))
    doc = hypersurface_to_json(Xq)
    assert hypersurface_from_json(doc).form == Xq.form


def test_marked_plane_restriction_is_zero_form(worked_cubic, line_v23):
    restricted = poly_substitute(worked_cubic.form, line_v23.parametrization_forms())
    assert restricted.is_zero and restricted.degree == worked_cubic.degree
