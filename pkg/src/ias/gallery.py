"""Canonical Weierstrass data for the standard examples."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import holo
from .cnum import CEps, J, as_ceps
from .errors import ParameterError
from .weier import DomainSpec, WeierstrassData

__all__ = ["ExampleSpec", "EXAMPLES", "get_example", "parse_param", "example_names"]


def parse_param(value, eps: int) -> CEps:
    """Accept a number, a ``complex``, a CEps or a constant expression string."""
    if isinstance(value, str):
        try:
            expr = holo.parse(value, eps)
        except Exception as exc:
            raise ParameterError(f"cannot parse parameter {value!r}: {exc}") from None
        if any(isinstance(n, holo.Var) for n in _walk(expr)):
            raise ParameterError(f"parameter {value!r} must not depend on z")
        out = expr.eval(CEps(0.0, 0.0, eps))
        return CEps(float(out.re), float(out.im), eps)
    try:
        return as_ceps(value, eps)
    except Exception as exc:
        raise ParameterError(f"bad parameter value {value!r}: {exc}") from None


def _walk(e):
    yield e
    for c in e.children:
        yield from _walk(c)


def _real(value, name) -> float:
    if isinstance(value, CEps):
        if value.im != 0:
            raise ParameterError(f"{name} must be real")
        return float(value.re)
    return float(value)


@dataclass(frozen=True)
class ExampleSpec:
    name: str
    eps: int
    defaults: dict
    domain: DomainSpec
    build: Callable = field(repr=False)
    eps_allowed: tuple = (1,)
    punctures: tuple = ()
    summary: str = ""


def _paraboloid(p, eps):
    z = holo.var(eps)
    k = parse_param(p["k"], eps)
    return z, holo.Const(k) * z if not (k.re == 0 and k.im == 0) else holo.const(0.0, eps)


def _signed(p):
    sign = p.get("sign", 1)
    if str(sign) in ("+", "1", "+1"):
        return 1.0
    if str(sign) in ("-", "-1"):
        return -1.0
    raise ParameterError(f"sign must be + or -, got {sign!r}")


def _radius(p):
    r = _real(p["r"], "r")
    if r == 0 or not math.isfinite(r):
        raise ParameterError("r must be a nonzero real number")
    return r


def _rotational(p, eps):
    z = holo.var(eps)
    r = _radius(p)
    return z, holo.const(_signed(p) * r * r, eps) / z


def _multivalued(p, eps):
    z = holo.var(eps)
    r = _radius(p)
    return z, holo.Const(J(eps) * (_signed(p) * r * r)) / z


def _two_end(p, eps):
    z = holo.var(eps)
    a, b, c = (parse_param(p[k], eps) for k in ("a", "b", "c"))
    if abs(a.mod_sq() - 1.0) <= 1e-14:
        raise ParameterError("two_end requires |a| != 1")
    F = holo.Const(a) * z + holo.Const(b) / z
    if not (c.re == 0 and c.im == 0):
        F = F + holo.Const(c)
    return z, F


def _one_end(p, eps):
    z = holo.var(eps)
    return z, z + z ** 2


def _helicoidal(p, eps):
    z = holo.var(eps)
    a = _real(parse_param(p["a"], eps), "a")
    if a == 0:
        raise ParameterError("helicoidal data needs a != 0")
    return holo.const(a, eps) * holo.exp(z), holo.const(-a, eps) * holo.exp(-z)


def _punctured_split(p, eps):
    # Phi = (j z, A, 1) with A' = H^2, H = z; (-B, A) read from Phi
    z = holo.var(eps)
    jj = holo.Const(J(eps))
    A = z ** 3 / 3.0
    B = -(jj * z)
    epsj = holo.Const(J(eps) * float(eps))
    G = (B - epsj * A) / 2.0
    F = (-B - epsj * A) / 2.0
    return G, F


EXAMPLES = {
    "paraboloid": ExampleSpec(
        "paraboloid", 1, {"k": 0.5}, DomainSpec.rectangle(-1, 1, -1, 1), _paraboloid,
        eps_allowed=(1, -1), summary="(z, k z)"),
    "rotational": ExampleSpec(
        "rotational", 1, {"r": 1.0, "sign": "+"}, DomainSpec.annulus(0.25, 2.0), _rotational,
        punctures=(0j,), summary="(z, +-r^2/z)"),
    "two_end": ExampleSpec(
        "two_end", 1, {"a": 2.0, "b": 1.0, "c": 0.0}, DomainSpec.annulus(0.25, 3.0), _two_end,
        punctures=(0j,), summary="(z, a z + b/z + c), |a| != 1"),
    "multivalued": ExampleSpec(
        "multivalued", 1, {"r": 1.0, "sign": "+"}, DomainSpec.annulus(0.25, 2.0), _multivalued,
        punctures=(0j,), summary="(z, +-j r^2/z)"),
    "one_end": ExampleSpec(
        "one_end", 1, {}, DomainSpec.rectangle(-1.5, 1.5, -1.5, 1.5), _one_end,
        summary="(z, z + z^2)"),
    "helicoidal": ExampleSpec(
        "helicoidal", 1, {"a": 1.0}, DomainSpec.rectangle(-2, 2, -math.pi, math.pi), _helicoidal,
        summary="(a exp(z), -a exp(-z))"),
    "punctured_split": ExampleSpec(
        "punctured_split", -1, {}, DomainSpec.rectangle(-1, 1, -1, 1), _punctured_split,
        eps_allowed=(-1,), summary="split data from A' = H^2, H = z"),
}


def example_names():
    return sorted(EXAMPLES)


def get_example(name: str, params: Optional[dict] = None, eps: Optional[int] = None,
                domain: Optional[DomainSpec] = None) -> WeierstrassData:
    """Weierstrass data of a named example; unknown parameter keys are rejected."""
    try:
        spec = EXAMPLES[name]
    except KeyError:
        raise ParameterError(f"unknown example {name!r}; choose from {', '.join(example_names())}") from None
    eps = spec.eps if eps is None else int(eps)
    if eps not in spec.eps_allowed:
        raise ParameterError(f"example {name!r} is defined for eps in {spec.eps_allowed}")
    params = dict(params or {})
    unknown = set(params) - set(spec.defaults)
    if unknown:
        raise ParameterError(f"unknown parameter(s) for {name}: {', '.join(sorted(unknown))}")
    merged = {**spec.defaults, **params}
    G, F = spec.build(merged, eps)
    return WeierstrassData(G=G, F=F, eps=eps, domain=domain or spec.domain,
                           punctures=spec.punctures, name=name)
