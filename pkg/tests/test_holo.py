import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ias import holo
from ias.cnum import CEps, J
from ias.errors import ExpressionSyntaxError, SingularDivisorError
from ias.gallery import EXAMPLES, get_example


def test_eval_examples():
    z = holo.var(1)
    assert (z ** 2).eval(CEps(1.0, 1.0, 1)) == CEps(0.0, 2.0, 1)
    assert (holo.const(1.0) / z).eval(J(1)) == CEps(0.0, -1.0, 1)
    assert (z + z ** 2).eval(CEps(0.0, 0.0, 1)) == CEps(0.0, 0.0, 1)


def test_derivative_rules():
    z = holo.var(1)
    assert str((z ** 2).derive()) == "2.0 * z"
    d = (holo.const(4.0) / z).derive()
    w = CEps(0.3, -1.2, 1)
    assert d.eval(w).isclose(CEps(-4.0, 0.0, 1) / (w * w))


def test_exp_derivative_fd():
    b = 1.0 / 3.0
    f = holo.exp(holo.const(b) * holo.var(1))
    assert abs(f.derive().eval(CEps(0.0, 0.0, 1)).re - b) <= 1e-10


def test_singular_divisor_names_subexpression():
    f = holo.parse("1/(z - 1)", 1)
    with pytest.raises(SingularDivisorError, match="z - 1"):
        f.eval(CEps(1.0, 0.0, 1))


@pytest.mark.parametrize("text", ["z +", "exp(z", "z ^ 1.5", "q * z", "z $ 2", ""])
def test_parse_errors(text):
    with pytest.raises(ExpressionSyntaxError):
        holo.parse(text, 1)


def test_parse_literal_forms():
    assert holo.parse("2+3j", 1).eval(CEps(0.0, 0.0, 1)) == CEps(2.0, 3.0, 1)
    e = holo.parse("(1-2j)*z^2 + exp(-z)/3", -1)
    w = CEps(0.4, 0.1, -1)
    ref = CEps(1.0, -2.0, -1) * w * w + (-w).exp() / 3.0
    assert e.eval(w).isclose(ref, 1e-14)


def _fd(f, w, h=1e-5):
    e = w.eps
    dre = (f.eval(w + CEps(h, 0, e)) - f.eval(w - CEps(h, 0, e))) * (1 / (2 * h))
    dim = (f.eval(w + CEps(0, h, e)) - f.eval(w - CEps(0, h, e))) * (1 / (2 * h))
    # along j: d/dt f(z + jt) = j f'(z)
    return dre, dim * (CEps(1.0, 0.0, e) / J(e))


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_gallery_derivatives_match_fd(name, rng):
    data = get_example(name)
    e = data.eps
    for f in (data.G, data.F):
        d = f.derive()
        for _ in range(100):
            s, t = rng.uniform(0.4, 1.5), rng.uniform(-1.5, 1.5)
            w = CEps(s, t, e)
            exact = d.eval(w)
            for fd in _fd(f, w):
                mag = math.hypot(fd.re, fd.im)
                assert math.hypot(exact.re - fd.re, exact.im - fd.im) <= 1e-6 * (1 + mag)


atoms = st.one_of(
    st.just("z"),
    st.floats(0.01, 100, allow_nan=False).map(repr),
    st.tuples(st.floats(-9, 9), st.floats(-9, 9)).map(lambda p: f"({p[0]!r}{p[1]:+.17g}j)"),
)


def _exprs():
    return st.recursive(
        atoms,
        lambda kids: st.one_of(
            st.tuples(kids, st.sampled_from("+-*/"), kids).map(lambda t: f"({t[0]}) {t[1]} ({t[2]})"),
            st.tuples(kids, st.integers(0, 4)).map(lambda t: f"({t[0]})^{t[1]}"),
            kids.map(lambda k: f"exp({k})"),
            kids.map(lambda k: f"-({k})"),
        ),
        max_leaves=8,
    )


@given(_exprs(), st.sampled_from([1, -1]))
def test_parse_print_roundtrip(text, eps):
    e1 = holo.parse(text, eps)
    s1 = str(e1)
    e2 = holo.parse(s1, eps)
    assert str(e2) == s1
    assert e1 == e2


def test_evaluation_is_vectorised():
    f = holo.parse("z^3 - 2*z + exp(z)", 1)
    s = np.linspace(-1, 1, 7)
    w = CEps(s, 0.5 * s, 1)
    vec = f.eval(w)
    for i in range(7):
        pt = f.eval(CEps(float(s[i]), float(0.5 * s[i]), 1))
        assert vec.re[i] == pt.re and vec.im[i] == pt.im
