import random
from fractions import Fraction

import pytest

from hznf.algebra import THETA, AlgebraElement, ContractError, E
from hznf.engine import normalize_orbital, normalize_parametric, normalize_state
from hznf.verify import (
    XyzPoly,
    components,
    cone_identity,
    cone_invariance_check,
    example_field,
    first_integral_obstruction,
    reproduce_paper_example,
    zero_curve_coefficients,
)

from helpers import random_field, random_parametric_field

F = Fraction


def test_xyzpoly_arithmetic():
    x = XyzPoly({(1, 0, 0, ()): 1})
    y = XyzPoly({(0, 1, 0, ()): 1})
    p = (x + y) * (x - y)
    assert p == x * x - y * y
    assert p.diff(0) == x * 2
    assert (p - p).is_zero()


def test_components_of_quadratic_field():
    xd, yd, zd = components(THETA() + E(1, 1))
    assert xd == XyzPoly({(2, 0, 0, ()): 1})
    assert yd == XyzPoly({(1, 1, 0, ()): F(1, 2), (0, 0, 1, ()): 1})
    assert zd == XyzPoly({(1, 0, 1, ()): F(1, 2), (0, 1, 0, ()): -1})


@pytest.mark.parametrize("v,deg", [(E(1, 1), 8), (E(0, 1), 6), (E(0, 2) + E(1, 2, 3), 6)])
def test_no_first_integrals(v, deg):
    assert first_integral_obstruction(v, deg) == 0


def test_rotation_alone_has_first_integrals():
    # control: the system x' = 0, y' = z, z' = -y keeps x and y^2 + z^2
    from hznf.linalg import Echelon
    xd, yd, zd = components(THETA())
    ech = Echelon()
    unknowns = [(1, 0, 0), (0, 2, 0), (0, 0, 2), (0, 1, 1)]
    for (i, j, k) in unknowns:
        Fp = XyzPoly({(i, j, k, ()): 1})
        ech.insert((Fp.diff(0) * xd + Fp.diff(1) * yd + Fp.diff(2) * zd).terms)
    assert len(unknowns) - len(ech) == 2


def test_first_integral_contract():
    with pytest.raises(ContractError):
        first_integral_obstruction(AlgebraElement(), 4)
    with pytest.raises(ContractError):
        first_integral_obstruction(THETA() + E(1, 1), 4)


def test_cone_identity():
    assert cone_invariance_check(THETA() + E(1, 1))
    rng = random.Random(41)
    assert cone_invariance_check(random_parametric_field(rng))
    xd, yd, zd = components(THETA() + E(1, 1))
    perturbed = yd + XyzPoly({(0, 1, 0, ()): 1})
    assert not cone_identity(xd, perturbed, zd)


def test_cone_identity_on_pipeline_outputs():
    rng = random.Random(42)
    v = random_field(rng, 10)
    for fn in (normalize_state, normalize_orbital):
        assert cone_invariance_check(fn(v, 10).normalized)
    assert cone_invariance_check(normalize_parametric(example_field(2, 3, 1, 1, 5), 12, 3).normalized)


def test_zero_curve_of_normal_form():
    v = E(1, 1) + E(0, 1, F(1, 2)) + E(0, 2, F(3, 8))
    assert zero_curve_coefficients(v, 2) == [F(-1, 2), F(-3, 8), 0]


def test_zero_curve_is_invariant():
    from hznf import algebra as alg
    from helpers import random_state_generator, random_time
    rng = random.Random(43)
    for _ in range(5):
        v = random_field(rng, 8)
        u = alg.apply_state_transform(random_state_generator(rng), v.without_rotation(), 8)
        u = alg.apply_time_rescaling(random_time(rng), u, 8)
        assert zero_curve_coefficients(u, 1) == zero_curve_coefficients(v, 1)


def test_example_field_in_cartesian_form():
    a, b, c, d, e = 2, 3, 1, 1, 5
    xd, yd, zd = components(example_field(a, b, c, d, e))
    x3 = XyzPoly({(3, 0, 0, (0, 0, 0)): 1})
    # x' carries 2 x^3 (c + mu1^2 + mu2^2)
    assert xd.terms[(3, 0, 0, (0, 0, 0))] == 2 * c
    assert xd.terms[(3, 0, 0, (2, 0, 0))] == 2
    assert xd.terms[(4, 0, 0, (0, 0, 0))] == 2 * e
    # y' carries x y (a + mu1 + mu2) and the rotation z
    assert yd.terms[(1, 1, 0, (0, 0, 0))] == a
    assert yd.terms[(0, 0, 1, (0, 0, 0))] == 1
    del x3


def test_example_readings_agree():
    for t in [(2, 3, 1, 1, 5), (-1, 2, 3, 1, 1)]:
        a = normalize_parametric(example_field(*t), 12, 3).normalized
        b = normalize_parametric(example_field(*t, x_line=False), 12, 3).normalized
        assert a == b


def test_example_precondition():
    with pytest.raises(ContractError):
        reproduce_paper_example(1, 1, 1, 1, 0)
    with pytest.raises(ContractError):
        reproduce_paper_example(0, 1, 1, 1, 0)


def test_example_equal_a_b_is_degenerate():
    rep = reproduce_paper_example(1, 1, 1, 2, 1)
    assert rep.error == "degenerate perturbation"
    assert not rep.passed


def test_example_report_values():
    rep = reproduce_paper_example(2, 3, 1, 1, 5)
    assert rep.r == 2
    assert rep.unit_quadratic and rep.unit_unfolding
    assert rep.beta1 == F(3, 2) and rep.beta1_ok
    assert rep.expected_beta2 == F(-3, 8)
    d = rep.as_dict()
    assert d["beta1"] == "3/2" and d["expected_beta2"] == "-3/8"


def test_example_second_coefficient_matches_zero_curve():
    # the R^2 coefficient is minus the invariant slope coefficient of the
    # equilibrium curve of the parameter-free field
    rng = random.Random(44)
    for _ in range(5):
        a, b, c, d, e = (F(rng.choice([-1, 1]) * rng.randint(1, 6), rng.randint(1, 3)) for _ in range(5))
        if a * b * (d * a - c * b) == 0 or a == b:
            continue
        rep = reproduce_paper_example(a, b, c, d, e)
        slope = zero_curve_coefficients(example_field(a, b, c, d, e).mu_free(), 1)
        assert rep.beta1 == -slope[0] == b / a
        assert rep.beta2 == -slope[1] == -b * (d * a - c * b) / a ** 3
