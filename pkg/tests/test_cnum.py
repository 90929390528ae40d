import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ias.cnum import CEps, J, arith, as_ceps, elementary
from ias.errors import AlgebraMismatchError, SingularDivisorError

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
eps_s = st.sampled_from([1, -1])


@st.composite
def triples(draw):
    e = draw(eps_s)
    return [CEps(draw(finite), draw(finite), e) for _ in range(3)]


def close(a, b, tol=1e-9):
    scale = 1.0 + max(abs(a.re), abs(a.im), abs(b.re), abs(b.im))
    return abs(a.re - b.re) <= tol * scale and abs(a.im - b.im) <= tol * scale


@pytest.mark.parametrize("eps,expected", [(1, -1.0), (-1, 1.0)])
def test_j_squared(eps, expected):
    assert J(eps) * J(eps) == CEps(expected, 0.0, eps)


def test_null_cone_division():
    with pytest.raises(SingularDivisorError):
        arith(CEps(1.0, 0.0, -1), CEps(1.0, 1.0, -1), "div")
    assert CEps(1.0, 1.0, -1).mod_sq() == 0.0


def test_mixing_eps_rejected():
    with pytest.raises(AlgebraMismatchError):
        CEps(1, 2, 1) + CEps(1, 2, -1)
    with pytest.raises(AlgebraMismatchError):
        CEps(0, 0, 2)


def test_exp_values():
    for e in (1, -1):
        assert CEps(0.0, 0.0, e).exp() == CEps(1.0, 0.0, e)
    w = CEps(0.0, math.pi, 1).exp()
    assert abs(w.re + 1) <= 1e-14 and abs(w.im) <= 1e-14
    w = CEps(0.5, 0.7, -1).exp()
    assert math.isclose(w.re, math.exp(0.5) * math.cosh(0.7))
    assert math.isclose(w.im, math.exp(0.5) * math.sinh(0.7))


def test_elementary_dispatch():
    z = CEps(2.0, 3.0, -1)
    assert elementary(z, "mod_sq") == 4.0 - 9.0
    assert elementary(z, "conj") == CEps(2.0, -3.0, -1)
    assert elementary(z, "re_part") == 2.0
    assert elementary(z, "im_part") == 3.0


@given(triples())
def test_ring_laws(t):
    a, b, c = t
    assert close(a * b, b * a)
    assert close((a * b) * c, a * (b * c), 1e-8)
    assert close(a * (b + c), a * b + a * c, 1e-8)
    assert close((a * b).conj(), a.conj() * b.conj())


@given(triples())
def test_division_inverts_multiplication(t):
    a, b, _ = t
    if abs(b.mod_sq()) < 1e-3:
        return
    q = arith(arith(a, b, "mul"), b, "div")
    assert close(q, a, 1e-7)


@given(eps_s, finite, finite)
def test_mod_sq_formula(e, s, t):
    z = CEps(s, t, e)
    assert z.mod_sq() == pytest.approx(s * s + e * t * t, rel=1e-15, abs=1e-300)
    assert (z * z.conj()).im == 0.0
    if e == 1:
        assert z.mod_sq() >= 0


@given(eps_s, st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5))
def test_exp_homomorphism(e, s1, t1, s2, t2):
    a, b = CEps(s1, t1, e), CEps(s2, t2, e)
    lhs, rhs = (a + b).exp(), a.exp() * b.exp()
    scale = max(abs(lhs.re), abs(lhs.im), 1e-300)
    assert abs(lhs.re - rhs.re) <= 1e-12 * scale and abs(lhs.im - rhs.im) <= 1e-12 * scale


def test_array_parts_and_powers():
    z = CEps(np.array([1.0, 2.0]), np.array([0.5, -1.0]), 1)
    w = z ** 3
    ref = np.array([1 + 0.5j, 2 - 1j]) ** 3
    assert np.allclose(w.to_complex(), ref)
    assert np.allclose((z ** -2).to_complex(), np.array([1 + 0.5j, 2 - 1j]) ** -2.0)
    assert as_ceps(2 + 1j, -1) == CEps(2.0, 1.0, -1)
