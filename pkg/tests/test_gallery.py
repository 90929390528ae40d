import pytest

from ias.cnum import CEps
from ias.errors import ParameterError
from ias.gallery import EXAMPLES, example_names, get_example, parse_param

W = CEps(0.7, -0.4, 1)


def test_names_are_the_cli_contract():
    assert example_names() == sorted(["paraboloid", "rotational", "two_end", "multivalued",
                                      "one_end", "helicoidal", "punctured_split"])


def test_paraboloid_k0_has_zero_F():
    d = get_example("paraboloid", {"k": 0})
    assert d.F.eval(W) == CEps(0.0, 0.0, 1)
    assert d.G.eval(W) == W


def test_rotational_is_z_over_one():
    d = get_example("rotational", {"r": 1, "sign": "+"})
    assert d.F.eval(W).isclose(CEps(1.0, 0.0, 1) / W, 1e-15)
    assert d.domain.kind == "annulus"
    neg = get_example("rotational", {"r": 2, "sign": "-"})
    assert neg.F.eval(W).isclose(CEps(-4.0, 0.0, 1) / W, 1e-15)


def test_one_end():
    d = get_example("one_end")
    assert d.F.eval(W).isclose(W + W * W, 1e-15)


@pytest.mark.parametrize("a", [1, -1, "1+0j", "0.6+0.8j"])
def test_two_end_rejects_unit_a(a):
    with pytest.raises(ParameterError):
        get_example("two_end", {"a": a})


@pytest.mark.parametrize("a", [0.5, 2.0])
def test_two_end_both_sides_build(a):
    get_example("two_end", {"a": a})


@pytest.mark.parametrize("name", ["rotational", "multivalued"])
def test_zero_radius_rejected(name):
    with pytest.raises(ParameterError):
        get_example(name, {"r": 0})


def test_unknown_inputs_rejected():
    with pytest.raises(ParameterError):
        get_example("nope")
    with pytest.raises(ParameterError):
        get_example("paraboloid", {"r": 1})
    with pytest.raises(ParameterError):
        get_example("punctured_split", eps=1)
    with pytest.raises(ParameterError):
        parse_param("2*z", 1)


def test_eps_choices():
    for name, spec in EXAMPLES.items():
        for e in spec.eps_allowed:
            assert get_example(name, eps=e).eps == e
    assert parse_param("1+2j", -1) == CEps(1.0, 2.0, -1)
