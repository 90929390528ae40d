import math

import numpy as np
import pytest

from ias import holo
from ias.cnum import CEps, J
from ias.errors import ParameterError, PathSingularityError
from ias.gallery import get_example
from ias.weier import (DomainSpec, WeierstrassData, curve_positions, detect_period, eval_surface,
                       extract_singular_curves, integrate_FdG)


def data(G, F, eps=1, domain=None):
    return WeierstrassData(holo.parse(G, eps), holo.parse(F, eps), eps,
                           domain or DomainSpec.rectangle(-1, 1, -1, 1, (16, 16)))


def test_integrate_trivial_cases():
    d = data("z", "0")
    assert integrate_FdG(d, [0j, 1 + 1j]) == CEps(0.0, 0.0, 1)
    d = data("z", "1")
    assert integrate_FdG(d, [0j, 1 + 1j]).isclose(CEps(1.0, 1.0, 1), 1e-14)


def test_integrate_residue_loop():
    d = data("z", "1j/z", domain=DomainSpec.annulus(0.5, 2))
    th = np.linspace(0, 2 * np.pi, 65)
    loop = [complex(math.cos(a), math.sin(a)) for a in th]
    assert integrate_FdG(d, loop).isclose(CEps(-2 * math.pi, 0.0, 1), 1e-8)


def test_integrate_additive_and_path_independent():
    d = data("exp(z) + z^2", "z^3 - z")
    a = integrate_FdG(d, [0j, 0.5 + 0.2j])
    b = integrate_FdG(d, [0.5 + 0.2j, 1 - 0.7j])
    c = integrate_FdG(d, [0j, 0.5 + 0.2j, 1 - 0.7j])
    other = integrate_FdG(d, [0j, -0.3 + 0.9j, 1 - 0.7j])
    assert (a + b).isclose(c, 1e-13)
    assert c.isclose(other, 1e-8)


def test_integrate_through_pole():
    # declared puncture on the path
    with pytest.raises(PathSingularityError):
        integrate_FdG(get_example("rotational"), [-1 + 0j, 1 + 0j])
    # undeclared pole hit by a quadrature node
    d = data("z", "1/(z - 0.5)")
    with pytest.raises(PathSingularityError):
        integrate_FdG(d, [0j, 1 + 0j])
    # pole strictly between nodes
    d = data("z", "1/(z - 0.3)")
    with pytest.raises(PathSingularityError):
        integrate_FdG(d, [0j, 1 + 0j])


def test_zero_F_paraboloid_point():
    d = data("z", "0", domain=DomainSpec.rectangle(1, 2, 0, 1, (8, 8), base=(1, 0)))
    m = eval_surface(d)
    assert np.allclose(m.psi[0, 0], [1.0, 0.0, 0.5])
    assert np.allclose(m.N[0, 0], [-1.0, 0.0, 1.0])


@pytest.mark.parametrize("eps", [1, -1])
def test_paraboloid_height(eps):
    m = eval_surface(data("z", "0", eps, DomainSpec.rectangle(-1, 1, -1, 1, (17, 17))))
    x, y, u = (m.psi[..., i] for i in range(3))
    assert np.max(np.abs(u - (x * x + eps * y * y) / 2)) <= 1e-14
    assert np.all(m.N[..., 2] == 1.0)


def test_rotational_singular_circle():
    m = eval_surface(get_example("rotational", domain=DomainSpec.annulus(0.25, 2.0, (64, 64))))
    on = np.abs(np.hypot(m.z[..., 0], m.z[..., 1]) - 1) < 1e-12
    assert np.all(np.abs(m.h_degeneracy[on]) <= 1e-12)
    curves = extract_singular_curves(m)
    assert len(curves) == 1 and curves[0].closed
    r = np.hypot(curves[0].z[:, 0], curves[0].z[:, 1])
    assert np.max(np.abs(r - 1)) <= 1e-6
    assert curves[0].max_residual <= 1e-9
    pos = curve_positions(m, curves[0])
    assert pos.shape == (len(curves[0]), 3)


def test_paraboloid_has_no_singular_curve():
    m = eval_surface(get_example("paraboloid", domain=DomainSpec.rectangle(-1, 1, -1, 1, (32, 32))))
    assert extract_singular_curves(m) == []
    assert not m.singular.any()


def test_punctured_split_singular_point():
    m = eval_surface(get_example("punctured_split", domain=DomainSpec.rectangle(-1, 1, -1, 1, (33, 33))))
    # |dG|^2 - |dF|^2 = s^2 + t^2 for this data: one isolated zero at the origin
    S, T = m.z[..., 0], m.z[..., 1]
    assert np.allclose(m.h_degeneracy, S * S + T * T, atol=1e-14)
    assert m.singular.sum() == 1 and m.singular[16, 16]


def test_periods():
    assert abs(detect_period(get_example("rotational"))) <= 1e-12
    d = WeierstrassData(holo.var(1), holo.const(0.0), 1, DomainSpec.annulus(0.5, 2))
    assert detect_period(d) == 0.0
    assert detect_period(data("z", "0")) is None
    p = detect_period(get_example("multivalued"))
    assert abs(abs(p) - 4 * math.pi) <= 1e-8


def test_multivalued_mesh_carries_period():
    m = eval_surface(get_example("multivalued", domain=DomainSpec.annulus(0.25, 2.0, (32, 32))))
    assert m.vertical_period == pytest.approx(detect_period(m.data), abs=1e-8)


def test_domain_validation():
    with pytest.raises(ParameterError):
        DomainSpec.rectangle(1, 0, 0, 1)
    with pytest.raises(ParameterError):
        DomainSpec.rectangle(0, 1, 0, 1, base=(2, 0))
    with pytest.raises(ParameterError):
        WeierstrassData(holo.var(-1), holo.var(-1), -1, DomainSpec.annulus(0.5, 1))
    with pytest.raises(ParameterError):
        eval_surface(get_example("rotational", domain=DomainSpec.annulus(0.5, 1, (4, 4))))
    assert DomainSpec.annulus(0.0, 2.0).radii[0] == pytest.approx(2e-3)


def test_eval_is_deterministic():
    d = get_example("two_end", domain=DomainSpec.annulus(0.25, 3, (24, 24)))
    a, b = eval_surface(d), eval_surface(d)
    assert np.array_equal(a.psi, b.psi) and a.vertical_period == b.vertical_period


def test_height_matches_pointwise_integral():
    d = get_example("one_end", domain=DomainSpec.rectangle(-1, 1, -1, 1, (9, 9)))
    m = eval_surface(d)
    i, k = 7, 3
    z = CEps(*m.z[i, k], 1)
    I = integrate_FdG(d, [complex(-1, -1), complex(*m.z[i, k])])
    G, F = d.G.eval(z), d.F.eval(z)
    h = 0.5 * G.mod_sq() - 0.5 * F.mod_sq() + (G * F).re - 2 * I.re
    assert m.psi[i, k, 2] == pytest.approx(h, abs=1e-12)
    _ = J
