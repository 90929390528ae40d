import math

import numpy as np
import pytest

from ias.cauchy import (AdmissiblePair, CharacteristicData, build_characteristic_family,
                        check_admissible, interpolation_error, parse_curve_file, solve_bjorling)
from ias.errors import CharacteristicDataError, CurveFileError, InvalidPairError
from ias.series import PowerSeries
from ias.verify import hessian_residual, structure_residuals


def poly(rows):
    return PowerSeries(np.array(rows, dtype=float))


def paraboloid_pair(eps=1):
    return AdmissiblePair(poly([[0, 0, 0], [1, 0, 0], [0, 0, 0.5], [0, 0, 0]]),
                          poly([[0, 0, 1], [-1, 0, 0], [0, 0, 0], [0, 0, 0]]), eps, (-1, 1))


def xy_pair():
    return AdmissiblePair(poly([[0, 0, 0], [1, 1, 0], [0, 0, 1], [0, 0, 0]]),
                          poly([[0, 0, 1], [-1, -1, 0], [0, 0, 0], [0, 0, 0]]), -1, (-1, 1))


def circle_pair(eps, r=1.3, order=24):
    cos = [(-1) ** (k // 2) / math.factorial(k) if k % 2 == 0 else 0.0 for k in range(order)]
    sin = [(-1) ** (k // 2) / math.factorial(k) if k % 2 == 1 else 0.0 for k in range(order)]
    a = PowerSeries(np.array([[r * c, r * s, 0.0] for c, s in zip(cos, sin)]))
    U = PowerSeries(np.array([[-r * c, -r * s, 1.0 if k == 0 else 0.0]
                              for k, (c, s) in enumerate(zip(cos, sin))]))
    return AdmissiblePair(a, U, eps, (-1, 1))


def test_lambda_both_ways():
    rep = check_admissible(paraboloid_pair())
    assert np.allclose(rep.lambda_second, 1.0) and rep.lambda_agreement <= 1e-14
    assert rep.non_characteristic


def test_characteristic_pair_flagged():
    pair = AdmissiblePair(poly([[0, 0, 0], [1, 0, 0], [0, 0, 0], [0, 0, 0]]),
                          poly([[0, 0, 1], [0, -1, 0], [0, 0, 0], [0, 0, 0]]), -1, (-1, 1))
    rep = check_admissible(pair)
    assert rep.all_characteristic
    with pytest.raises(CharacteristicDataError):
        solve_bjorling(pair, 0.5)


def test_invalid_pairs():
    with pytest.raises(InvalidPairError):
        check_admissible(AdmissiblePair(poly([[0, 0, 0], [1, 0, 0], [0, 0, 0], [0, 0, 0]]),
                                        poly([[0, 0, 2], [0, 0, 0], [0, 0, 0], [0, 0, 0]]), 1, (-1, 1)))
    with pytest.raises(InvalidPairError):
        check_admissible(AdmissiblePair(poly([[0, 0, 0], [1, 0, 0], [0, 0, 0], [0, 0, 0]]),
                                        poly([[0, 0, 1], [0, 0, 0], [0, 0, 0], [1, 0, 0]]), 1, (-1, 1)))
    with pytest.raises(InvalidPairError):
        AdmissiblePair(poly([[0, 0], [1, 0]]), poly([[0, 0, 1]]), 1, (-1, 1))


def test_geodesic_circle_hyperbolic_only():
    assert check_admissible(circle_pair(-1)).geodesic
    rep = check_admissible(circle_pair(1))
    assert rep.lambda_constant and not rep.bracket_holds and not rep.geodesic


def test_bjorling_paraboloid():
    pair = paraboloid_pair()
    m = solve_bjorling(pair, 0.5, (65, 33))
    x, y, u = (m.psi[..., i] for i in range(3))
    assert np.max(np.abs(u - (x * x + y * y) / 2)) <= 1e-8
    assert max(interpolation_error(m, pair)) <= 1e-12


def test_bjorling_xy():
    pair = xy_pair()
    m = solve_bjorling(pair, 0.5, (65, 33))
    x, y, u = (m.psi[..., i] for i in range(3))
    assert np.max(np.abs(u - x * y)) <= 1e-8
    assert hessian_residual(m).passed


def test_bjorling_reflection():
    pair = circle_pair(-1)
    a = solve_bjorling(pair, 0.3, (33, 17))
    b = solve_bjorling(pair.reflected(), 0.3, (33, 17))
    assert np.max(np.abs(b.psi - a.psi[::-1, ::-1])) <= 1e-8


def test_bjorling_circle_structure():
    pair = circle_pair(-1)
    m = solve_bjorling(pair, 0.3, (65, 33))
    assert max(interpolation_error(m, pair)) <= 1e-12
    assert structure_residuals(m).passed


def test_characteristic_trivial_family():
    data = CharacteristicData(poly([[0, 0], [-1, 0], [0, 0]]), poly([[0, 0], [0, -1], [0, 0]]))
    m = build_characteristic_family(data, (33, 33))
    x, y, u = (m.psi[..., i] for i in range(3))
    assert np.max(np.abs(u + x * y)) <= 1e-14
    assert hessian_residual(m).passed


def test_characteristic_non_uniqueness():
    a = poly([[0, 0], [-1, 0.2], [0.3, 0], [0, 0.1]])
    b1 = poly([[0, 0], [0.1, -1], [0, 0.2]])
    b2 = poly([[0, 0], [0.3, -1], [0.5, 0.1]])
    kw = dict(u_range=(-0.5, 0.5), v_range=(-0.5, 0.5))
    m1 = build_characteristic_family(CharacteristicData(a, b1, **kw), (65, 65))
    m2 = build_characteristic_family(CharacteristicData(a, b2, **kw), (65, 65))
    assert np.max(np.abs(m1.psi[:, 32] - m2.psi[:, 32])) <= 1e-8
    off = np.abs(m1.psi - m2.psi).max(axis=-1)
    assert off[:, 40:].max() >= 1e-2


CURVE = """\
# paraboloid pair
eps = 1
interval = -1 1
[alpha]
center = 0
order = 3
0 0 0
1 0 0
0 0 0.5
0 0 0
[U]
order = 3
0 0 1
-1 0 0
0 0 0
0 0 0
"""


def test_curve_file_roundtrip(tmp_path):
    f = tmp_path / "p.curve"
    f.write_text(CURVE)
    pair = parse_curve_file(f)
    assert isinstance(pair, AdmissiblePair) and pair.eps == 1
    assert pair.alpha(0.5).tolist() == [0.5, 0.0, 0.125]


@pytest.mark.parametrize("text,line", [
    (CURVE.replace("1 0 0\n0 0 0.5", "1 0\n0 0 0.5"), 8),
    (CURVE.replace("[U]", "[V]"), 11),
    (CURVE.replace("eps = 1", "eps = 3"), 2),
    (CURVE.replace("order = 3\n0 0 1", "order = 4\n0 0 1"), 11),
    (CURVE.replace("center = 0", "centre = 0"), 5),
    (CURVE.replace("0 0 0.5", "0 0 x"), 9),
])
def test_curve_file_errors_name_line(text, line):
    with pytest.raises(CurveFileError, match=rf"f\.curve:{line}\b"):
        parse_curve_file("f.curve", text)


def test_curve_file_characteristic():
    text = "u_range = -1 1\nbase = 0 0\n[a_curve]\norder = 1\n0 0\n-1 0\n[b_curve]\norder = 1\n0 0\n0 -1\n"
    data = parse_curve_file("c.curve", text)
    assert isinstance(data, CharacteristicData)
    with pytest.raises(CurveFileError):
        parse_curve_file("c.curve", "eps = 1\n" + text)
