import random

import pytest

from fano_workbench.errors import (
    CharacteristicTooSmall,
    DegreeMismatch,
    NonHomogeneous,
    UnknownVariable,
    ZeroPolynomial,
)
from fano_workbench.fields import GF, QQ
from fano_workbench.poly import (
    HomogeneousForm,
    binary_forms_have_common_zero,
    partial_derivatives,
    poly_eval,
    poly_parse,
    poly_render,
    poly_substitute,
    reduce_mod,
)
from fano_workbench.varieties import random_form


def test_parse_fermat_cubic():
    f = poly_parse("x0^3+x1^3+x2^3+x3^3", 4, GF(7))
    assert f.degree == 3 and len(f.terms) == 4


def test_parse_quadric_over_q():
    f = poly_parse("x0*x3 - x1*x2", 4, QQ)
    assert f.degree == 2 and len(f.terms) == 2


def test_parse_unicode_minus_and_fractions():
    f = poly_parse("1/2*x0 − x1", 2, QQ)
    assert poly_eval(f, (2, 1)) == 0


def test_parse_errors():
    with pytest.raises(NonHomogeneous):
        poly_parse("x0^2 + x1", 2, QQ)
    with pytest.raises(UnknownVariable):
        poly_parse("x5", 2, QQ)
    with pytest.raises(ZeroPolynomial):
        poly_parse("x0 - x0", 2, QQ)
    z = poly_parse("x0 - x0", 2, QQ, degree=1)
    assert z.is_zero and z.degree == 1


def test_render_parse_roundtrip_random():
    rng = random.Random(2)
    for field in (GF(7), QQ):
        for _ in range(25):
            f = random_form(field, 3, rng.randrange(1, 5), rng)
            assert poly_parse(poly_render(f), 3, field) == f


def test_eval_examples():
    fermat = poly_parse("x0^3+x1^3+x2^3+x3^3", 4, GF(7))
    assert poly_eval(fermat, (1, -1, 0, 0)) == 0
    quad = poly_parse("x0*x3-x1*x2", 4, QQ)
    assert poly_eval(quad, (1, 2, 3, 6)) == 0
    sq = poly_parse("x0^2", 1, GF(5))
    assert poly_eval(sq, (3,)) == 4
    assert poly_eval(sq, (0,)) == 0


def test_substitute_identity_and_square():
    f = poly_parse("x0*x3-x1*x2", 4, QQ)
    eye = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    from fano_workbench.poly import linear_substitute

    assert linear_substitute(f, eye) == f
    g = poly_substitute(poly_parse("x0^2", 1, QQ), [poly_parse("x0+x1", 2, QQ)])
    assert g == poly_parse("x0^2 + 2*x0*x1 + x1^2", 2, QQ)


def test_substitute_bilinear_plane_image():
    # x0*x3 - x1*x2 restricted to the plane [x0, x1, a2*t, a3*t]:
    # every surviving term is divisible by t
    f = poly_parse("x0*x3-x1*x2", 4, QQ)
    # fresh variables (x0, x1, a2, a3, t); every ambient coordinate picks up t
    restricted = poly_substitute(
        f,
        [
            poly_parse("x0*x4", 5, QQ),
            poly_parse("x1*x4", 5, QQ),
            poly_parse("x2*x4", 5, QQ),
            poly_parse("x3*x4", 5, QQ),
        ],
    )
    for exps in restricted.terms:
        assert exps[4] >= 1


def test_substitute_commutes_with_eval():
    rng = random.Random(3)
    field = GF(11)
    for _ in range(5):
        f = random_form(field, 3, 3, rng)
        images = [random_form(field, 2, 2, rng) for _ in range(3)]
        g = poly_substitute(f, images)
        for _ in range(100):
            t = tuple(field.random_element(rng) for _ in range(2))
            inner = tuple(poly_eval(img, t) for img in images)
            assert poly_eval(g, t) == poly_eval(f, inner)


def test_substitute_degree_mismatch():
    f = poly_parse("x0*x1", 2, QQ)
    with pytest.raises(DegreeMismatch):
        poly_substitute(f, [poly_parse("x0", 2, QQ), poly_parse("x0^2", 2, QQ)])


def test_partial_derivatives_examples():
    quad = poly_parse("x0*x3-x1*x2", 4, QQ)
    parts = partial_derivatives(quad)
    assert [poly_render(g) for g in parts] == ["x3", "-x2", "-x1", "x0"]
    fermat = poly_parse("x0^3+x1^3+x2^3+x3^3", 4, GF(7))
    parts = partial_derivatives(fermat)
    assert parts[0] == poly_parse("3*x0^2", 4, GF(7))


def test_euler_relation_random():
    rng = random.Random(4)
    field = GF(7)
    for _ in range(10):
        f = random_form(field, 4, 3, rng)
        total = HomogeneousForm.zero(field, 4, 3)
        for i, g in enumerate(partial_derivatives(f)):
            total = total + HomogeneousForm.variable(field, 4, i) * g
        assert total == f.scale(3)


def test_characteristic_too_small():
    f = poly_parse("x0^3+x1^3", 2, GF(3))
    with pytest.raises(CharacteristicTooSmall):
        partial_derivatives(f)


def test_reduce_mod():
    f = poly_parse("3*x0^2 - 1/2*x1^2", 2, QQ)
    g = reduce_mod(f, 7)
    assert g.field.p == 7
    assert g.coefficient((2, 0)) == 3
    assert g.coefficient((0, 2)) == 3  # -1/2 mod 7 = 6*4 = 24 = 3


def test_binary_common_zero():
    f7 = GF(7)
    a = poly_parse("x0^2+x1^2", 2, f7)
    b = poly_parse("x0*x1", 2, f7)
    assert not binary_forms_have_common_zero([a, b])
    # x0 divides both
    c = poly_parse("x0*x1", 2, f7)
    d = poly_parse("x0^2", 2, f7)
    assert binary_forms_have_common_zero([c, d])
    # shared root at [1,1] over QQ
    e = poly_parse("x0-x1", 2, QQ)
    f = poly_parse("x0^2-x1^2", 2, QQ)
    assert binary_forms_have_common_zero([e, f])
    # common root only over an extension (x0^2+x1^2 and its double)
    g = poly_parse("x0^2+x1^2", 2, QQ)
    h = poly_parse("x0^3+x0*x1^2", 2, QQ, degree=3)
    assert binary_forms_have_common_zero([g, h])
