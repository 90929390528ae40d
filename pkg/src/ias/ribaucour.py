"""R-associated maps: Riccati solutions, transformed data and their diagnostics.

Given data (G, F) and a solution R of ``R' + G' = c R^2 F'``, the pair
``(G + R, F + 1/(c R))`` is again Weierstrass data.  For helicoidal data
``G = a exp(z)``, ``F = -a exp(-z)`` the Riccati equation has the closed form
solution implemented in :func:`closed_form_expr`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.spatial.distance import directed_hausdorff

from . import holo, kernels
from .cnum import CEps, as_ceps
from .errors import (
    BlowUpError,
    ParameterError,
    PoleError,
    RiccatiResidualError,
    SingularDivisorError,
)
from .gallery import get_example
from .holo import HoloExpr
from .weier import (
    DomainSpec,
    SurfaceMesh,
    WeierstrassData,
    extract_singular_curves,
    integrate_FdG,
    pointwise_terms,
)

__all__ = [
    "HelicoidalClosedForm", "RiccatiParams", "RiccatiPath", "RiccatiSolution",
    "closed_form_expr", "closed_form_R", "riccati_residual", "riccati_integrate",
    "transform_data", "g_function", "product_identity_residual", "nodal_function",
    "pole_zero_locations", "punctures_per_strip", "translation_vectors",
    "analyze_transform", "TransformDiagnostics", "default_strip_domain",
]

BLOWUP_CAP = 1e8
IDENTITY_TOL = 1e-8
TRANSLATION_TOL = 1e-6


@dataclass(frozen=True)
class HelicoidalClosedForm:
    """Constants of the closed-form solution; ``b = sqrt(1 + 4 a^2 c)``."""

    a: float
    c: float
    k: CEps
    b: float

    def __post_init__(self):
        if self.a == 0:
            raise ParameterError("a must be nonzero")
        if self.c == 0:
            raise ParameterError("c must be nonzero (equivalently b != 1)")
        if self.b <= 0 or not math.isfinite(self.b):
            raise ParameterError("b = sqrt(1 + 4 a^2 c) must be a positive real")
        if abs(self.b * self.b - (1 + 4 * self.a ** 2 * self.c)) > 1e-12 * (1 + self.b * self.b):
            raise ParameterError("b, a and c are inconsistent")

    @classmethod
    def from_c(cls, a, c, k=0.0):
        disc = 1.0 + 4.0 * a * a * c
        if disc <= 0:
            raise ParameterError("need 1 + 4 a^2 c > 0")
        return cls(float(a), float(c), as_ceps(k, 1), math.sqrt(disc))

    @classmethod
    def from_b(cls, a, b, k=0.0):
        b = float(b)
        if b <= 0:
            raise ParameterError("b must be positive")
        return cls(float(a), (b * b - 1.0) / (4.0 * a * a), as_ceps(k, 1), b)

    @property
    def k_is_zero(self) -> bool:
        return self.k.re == 0 and self.k.im == 0

    def base_data(self, domain: Optional[DomainSpec] = None) -> WeierstrassData:
        return get_example("helicoidal", {"a": self.a}, domain=domain)


def closed_form_expr(p: HelicoidalClosedForm) -> HoloExpr:
    """R = exp(z)/(2ac) * (1 + b + (1-b) k exp(bz)) / (1 + k exp(bz))."""
    z = holo.var(1)
    scale = 1.0 / (2.0 * p.a * p.c)
    if p.k_is_zero:
        return holo.const((1.0 + p.b) * scale) * holo.exp(z)
    ebz = holo.exp(holo.const(p.b) * z)
    num = holo.const(1.0 + p.b) + holo.Const(p.k * (1.0 - p.b)) * ebz
    den = holo.const(1.0) + holo.Const(p.k) * ebz
    return holo.const(scale) * holo.exp(z) * num / den


POLE_TOL = 1e-12
MAX_RK4_STEPS = 1 << 14


def closed_form_R(p: HelicoidalClosedForm, z: CEps) -> CEps:
    """Closed-form R at ``z``; within POLE_TOL (relative) of a pole raises PoleError."""
    if not p.k_is_zero:
        kebz = p.k * (holo.const(p.b) * holo.var(1)).eval(z).exp()
        den = kebz + 1.0
        near = np.hypot(den.re, den.im) <= POLE_TOL * (1.0 + np.hypot(kebz.re, kebz.im))
        if np.any(near):
            raise PoleError(f"R has a pole at {z!r} (1 + k exp(bz) = 0)")
    try:
        return closed_form_expr(p).eval(z)
    except SingularDivisorError:
        raise PoleError(f"R has a pole at {z!r} (1 + k exp(bz) = 0)") from None


def riccati_residual(R, F, G, c: float, z: CEps) -> CEps:
    """R' + G' - c R^2 F' at ``z``."""
    Rz = R.eval(z)
    return R.derive().eval(z) + G.derive().eval(z) - c * Rz * Rz * F.derive().eval(z)


# numerical integration

@dataclass
class RiccatiParams:
    c: float
    F: HoloExpr
    G: HoloExpr
    z_init: CEps
    R_init: CEps

    def __post_init__(self):
        if self.c == 0:
            raise ParameterError("c must be nonzero")
        eps = self.F.eps
        self.z_init = as_ceps(self.z_init, eps)
        self.R_init = as_ceps(self.R_init, eps)
        if self.R_init.re == 0 and self.R_init.im == 0:
            raise ParameterError("R_init must be nonzero")


@dataclass
class RiccatiPath:
    z: CEps
    R: CEps


def _rk4_lines(p: RiccatiParams, z0: CEps, r0: CEps, z1: CEps, steps: int, cap: float,
               keep: bool):
    """RK4 along straight segments z0[i] -> z1[i] (flat arrays) with ``steps`` steps."""
    eps = p.F.eps
    dF, dG = p.F.derive(), p.G.derive()
    h = (z1 - z0) * (1.0 / steps)
    q = np.arange(2 * steps + 1) * 0.5
    zq = CEps(z0.re[:, None] + q[None, :] * h.re[:, None],
              z0.im[:, None] + q[None, :] * h.im[:, None], eps)
    fp, gp = dF.eval(zq), dG.eval(zq)
    H_re = np.repeat(h.re[:, None], steps, axis=1)
    H_im = np.repeat(h.im[:, None], steps, axis=1)
    out_re, out_im, status = kernels.rk4_riccati(
        np.ascontiguousarray(fp.re), np.ascontiguousarray(fp.im),
        np.ascontiguousarray(gp.re), np.ascontiguousarray(gp.im),
        H_re, H_im, np.ascontiguousarray(r0.re, dtype=float),
        np.ascontiguousarray(r0.im, dtype=float), float(p.c), eps, float(cap), keep)
    return out_re, out_im, status, zq


def riccati_integrate(p: RiccatiParams, path: Sequence, steps: int = 256,
                      cap: float = BLOWUP_CAP) -> RiccatiPath:
    """Classical RK4 for ``R' = c R^2 F' - G'`` along a polyline starting at ``z_init``."""
    if steps < 64:
        raise ParameterError("riccati_integrate needs at least 64 steps")
    eps = p.F.eps
    pts = [as_ceps(q if not isinstance(q, tuple) else complex(*q), eps) for q in path]
    if not pts[0].isclose(p.z_init, 1e-12):
        pts = [p.z_init] + pts
    lengths = np.array([math.hypot((b - a).re, (b - a).im) for a, b in zip(pts[:-1], pts[1:])])
    if lengths.sum() == 0:
        raise ParameterError("path has zero length")
    share = lengths / lengths.sum() * steps
    alloc = np.maximum(np.floor(share).astype(int), 1)
    while alloc.sum() < steps:
        alloc[np.argmax(share - alloc)] += 1
    zs_re, zs_im, rs_re, rs_im = [p.z_init.re], [p.z_init.im], [p.R_init.re], [p.R_init.im]
    r = p.R_init
    for (a, b), n in zip(zip(pts[:-1], pts[1:]), alloc):
        ore, oim, status, zq = _rk4_lines(
            p, CEps(np.array([a.re]), np.array([a.im]), eps),
            CEps(np.array([float(r.re)]), np.array([float(r.im)]), eps),
            CEps(np.array([b.re]), np.array([b.im]), eps), int(n), cap, True)
        if status[0]:
            bad = int(np.argmax(~np.isfinite(ore[0])))
            where = complex(zq.re[0, 2 * max(bad - 1, 0)], zq.im[0, 2 * max(bad - 1, 0)])
            raise BlowUpError(f"|R| exceeded {cap:g} near z = {where}")
        zs_re.extend(zq.re[0, 2::2])
        zs_im.extend(zq.im[0, 2::2])
        rs_re.extend(ore[0, 1:])
        rs_im.extend(oim[0, 1:])
        r = CEps(float(ore[0, -1]), float(oim[0, -1]), eps)
    return RiccatiPath(CEps(np.array(zs_re), np.array(zs_im), eps),
                       CEps(np.array(rs_re), np.array(rs_im), eps))


class RiccatiSolution(HoloExpr):
    """R as an expression leaf: values by RK4 along straight lines from ``z_init``.

    The derivative is the Riccati right-hand side, so trees built on this
    leaf differentiate exactly.
    """

    kind = "riccati"
    __slots__ = ("params", "steps", "cap", "chunk")

    def __init__(self, params: RiccatiParams, steps: int = 256, cap: float = BLOWUP_CAP,
                 chunk: int = 2048):
        self.params = params
        self.steps = int(steps)
        self.cap = float(cap)
        self.chunk = int(chunk)
        self.children = ()
        self.eps = params.F.eps

    def _key(self):
        return ("riccati", id(self))

    def with_steps(self, steps: int) -> "RiccatiSolution":
        return RiccatiSolution(self.params, steps, self.cap, self.chunk)

    def _eval(self, z):
        p = self.params
        shape = np.shape(z.re)
        zr = np.ravel(np.asarray(z.re, dtype=float))
        zi = np.ravel(np.broadcast_to(np.asarray(z.im, dtype=float), shape))
        out_re = np.empty(zr.size)
        out_im = np.empty(zr.size)
        for lo in range(0, zr.size, self.chunk):
            hi = min(lo + self.chunk, zr.size)
            n = hi - lo
            z0 = CEps(np.full(n, p.z_init.re), np.full(n, p.z_init.im), self.eps)
            r0 = CEps(np.full(n, p.R_init.re), np.full(n, p.R_init.im), self.eps)
            ore, oim, status, _ = _rk4_lines(p, z0, r0, CEps(zr[lo:hi], zi[lo:hi], self.eps),
                                             self.steps, self.cap, False)
            if np.any(status):
                i = lo + int(np.argmax(status))
                raise BlowUpError(f"|R| exceeded {self.cap:g} on the way to z = "
                                  f"{complex(zr[i], zi[i])}")
            out_re[lo:hi] = ore[:, 0]
            out_im[lo:hi] = oim[:, 0]
        if shape == ():
            return CEps(float(out_re[0]), float(out_im[0]), self.eps)
        return CEps(out_re.reshape(shape), out_im.reshape(shape), self.eps)

    def derive(self):
        p = self.params
        return holo.const(p.c, self.eps) * self * self * p.F.derive() - p.G.derive()

    def __str__(self):
        return "R"


# transformed data

def _check_points(domain: DomainSpec, eps: int, n: int = 9) -> CEps:
    d = domain.with_resolution(n, n)
    return d.z_grid(eps)


def transform_data(data: WeierstrassData, R: HoloExpr, c: float, tol: float = 1e-9,
                   punctures: tuple = ()) -> WeierstrassData:
    """The R-associated data ``(G + R, F + 1/(c R))`` after checking that R solves the Riccati equation."""
    if c == 0:
        raise ParameterError("c must be nonzero")
    if R.eps != data.eps:
        raise ParameterError("R and the data must share eps")
    Z = _check_points(data.domain, data.eps)
    if isinstance(R, RiccatiSolution):
        if R.params.c != c or R.params.F != data.F or R.params.G != data.G:
            raise RiccatiResidualError("R was integrated for different data or c")
        # double the step count until halving the step no longer matters
        a = R.eval(Z)
        while True:
            finer = R.with_steps(2 * R.steps)
            b = finer.eval(Z)
            err = np.hypot(a.re - b.re, a.im - b.im) / (1.0 + np.hypot(b.re, b.im))
            worst = float(np.max(err))
            if worst <= tol or finer.steps > MAX_RK4_STEPS:
                break
            R, a = finer, b
        what = "step-halving change"
    else:
        try:
            res = riccati_residual(R, data.F, data.G, c, Z)
            Rz = R.eval(Z)
        except SingularDivisorError:
            raise PoleError("R has a pole on the residual check grid; shift the domain") from None
        scale = (1.0 + np.hypot(*_parts(R.derive().eval(Z))) + np.hypot(*_parts(data.G.derive().eval(Z)))
                 + abs(c) * np.hypot(*_parts(Rz * Rz * data.F.derive().eval(Z))))
        worst = float(np.max(np.hypot(res.re, res.im) / scale))
        what = "relative residual"
    if not worst <= tol:
        raise RiccatiResidualError(f"R does not solve the Riccati equation ({what} {worst:.3g} > {tol:g})")
    G_new = data.G + R
    F_new = data.F + holo.const(1.0 / c, data.eps) / R
    return WeierstrassData(G=G_new, F=F_new, eps=data.eps, domain=data.domain,
                           punctures=tuple(data.punctures) + tuple(punctures),
                           name=f"{data.name or 'data'}~R")


def _parts(w: CEps):
    return np.asarray(w.re, dtype=float), np.asarray(w.im, dtype=float)


def product_identity_residual(base: WeierstrassData, new: WeierstrassData, z: CEps) -> np.ndarray:
    """|G~' F~' - G' F'| / (1 + |G' F'|) at ``z``."""
    before = base.G.derive().eval(z) * base.F.derive().eval(z)
    after = new.G.derive().eval(z) * new.F.derive().eval(z)
    d = after - before
    return np.hypot(d.re, d.im) / (1.0 + np.hypot(before.re, before.im))


@dataclass
class GFunction:
    g: np.ndarray            # from the C_eps quotient (real part)
    imag: np.ndarray         # imaginary part of that quotient
    component_gap: np.ndarray
    formula_gap: Optional[np.ndarray]
    mask: np.ndarray


def g_function(base: SurfaceMesh, new: SurfaceMesh, R: Optional[HoloExpr] = None,
               c: Optional[float] = None, min_denominator: float = 1e-6) -> GFunction:
    """Solve (psi + g N) x xi = (psi~ + g N~) x xi for g at every sample.

    With R and c given, g is also compared with (t + 1)/(t - 1), t = c |R|^2.
    """
    dpx = new.psi[..., 0] - base.psi[..., 0]
    dpy = new.psi[..., 1] - base.psi[..., 1]
    dnx = base.N[..., 0] - new.N[..., 0]
    dny = base.N[..., 1] - new.N[..., 1]
    eps = base.eps
    num = CEps(dpx, dpy, eps)
    den = CEps(dnx, dny, eps)
    dd = den.mod_sq()
    ok = (np.abs(dnx) > min_denominator) & (np.abs(dny) > min_denominator) & (np.abs(dd) > min_denominator ** 2)
    safe = CEps(np.where(ok, dnx, 1.0), np.where(ok, dny, 0.0), eps)
    q = num / safe
    g1 = np.where(ok, dpx / np.where(ok, dnx, 1.0), np.nan)
    g2 = np.where(ok, dpy / np.where(ok, dny, 1.0), np.nan)
    gap = np.abs(g1 - g2) / (1.0 + np.abs(g1))
    formula = None
    if R is not None and c is not None:
        Z = CEps(base.z[..., 0], base.z[..., 1], eps)
        t = c * R.eval(Z).mod_sq()
        with np.errstate(divide="ignore", invalid="ignore"):
            expected = (t + 1.0) / (t - 1.0)
        formula = np.abs(q.re - expected) / (1.0 + np.abs(expected))
    g = np.where(ok, q.re, np.nan)
    imag = np.where(ok, q.im / (1.0 + np.abs(q.re)), np.nan)
    return GFunction(g=g, imag=imag, component_gap=gap, formula_gap=formula, mask=ok)


def nodal_function(base: WeierstrassData, R: HoloExpr, c: float, z: CEps) -> np.ndarray:
    """log|G'| - log(c^2 |R|^4 |F'|) for the base data."""
    gp = base.G.derive().eval(z).mod_sq()
    fp = base.F.derive().eval(z).mod_sq()
    r2 = R.eval(z).mod_sq()
    return 0.5 * np.log(gp) - (np.log(c * c) + 2.0 * np.log(r2) + 0.5 * np.log(fp))


# helicoidal bookkeeping

def _log_roots(w: complex, b: float, t_range) -> list:
    """Solutions of exp(b z) = w with Im z in ``t_range``."""
    if w == 0:
        return []
    base = complex(math.log(abs(w)), math.atan2(w.imag, w.real))
    t0, t1 = t_range
    lo = math.floor((b * t0 - base.imag) / (2 * math.pi)) - 1
    hi = math.ceil((b * t1 - base.imag) / (2 * math.pi)) + 1
    out = []
    for ell in range(lo, hi + 1):
        zz = complex(base.real, base.imag + 2 * math.pi * ell) / b
        if t0 <= zz.imag <= t1:
            out.append(zz)
    return out


def pole_zero_locations(p: HelicoidalClosedForm, domain: DomainSpec):
    """(poles, zeros) of the closed-form R inside a rectangle domain."""
    if domain.kind != "rectangle":
        raise ParameterError("pole/zero search needs a rectangle domain")
    if p.k_is_zero:
        return [], []
    s0, s1, t0, t1 = domain.bounds
    k = p.k.to_complex()
    poles = [w for w in _log_roots(-1.0 / k, p.b, (t0, t1)) if s0 <= w.real <= s1]
    zeros = [w for w in _log_roots(-(1.0 + p.b) / ((1.0 - p.b) * k), p.b, (t0, t1))
             if s0 <= w.real <= s1]
    return sorted(poles, key=lambda w: (w.imag, w.real)), sorted(zeros, key=lambda w: (w.imag, w.real))


def _winding(f, s0, s1, t0, t1, m=4096) -> float:
    """Argument-principle count of zeros of ``f`` (vectorised on complex arrays)."""
    u = np.linspace(0.0, 1.0, m, endpoint=False)
    edges = [s0 + (s1 - s0) * u + 1j * t0, s1 + 1j * (t0 + (t1 - t0) * u),
             s1 - (s1 - s0) * u + 1j * t1, s0 + 1j * (t1 - (t1 - t0) * u)]
    zz = np.concatenate(edges + [np.array([s0 + 1j * t0])])
    w = f(zz)
    return float(np.sum(np.angle(w[1:] / w[:-1])) / (2 * math.pi)), float(np.min(np.abs(w)))


def punctures_per_strip(p: HelicoidalClosedForm, m: int, s_range, t_start: float = 0.0) -> dict:
    """Zeros and poles of R in one strip ``Im z in [t0, t0 + 2 m pi)`` by the argument principle."""
    if p.k_is_zero:
        return {"poles": 0, "zeros": 0, "total": 0, "t0": t_start}
    k = p.k.to_complex()
    den = lambda z: 1.0 + k * np.exp(p.b * z)  # noqa: E731
    num = lambda z: (1.0 + p.b) + (1.0 - p.b) * k * np.exp(p.b * z)  # noqa: E731
    s0, s1 = s_range
    height = 2.0 * math.pi * m
    best = None
    # pick the strip offset whose boundary stays farthest from every root
    for off in np.linspace(0.0, 2.0 * math.pi / p.b, 33)[:-1]:
        t0 = t_start + off
        wd, md = _winding(den, s0, s1, t0, t0 + height, 256)
        wn, mn = _winding(num, s0, s1, t0, t0 + height, 256)
        margin = min(md, mn)
        if best is None or margin > best[0]:
            best = (margin, t0)
    t0 = best[1]
    wd, _ = _winding(den, s0, s1, t0, t0 + height)
    wn, _ = _winding(num, s0, s1, t0, t0 + height)
    poles, zeros = int(round(wd)), int(round(wn))
    return {"poles": poles, "zeros": zeros, "total": poles + zeros, "t0": t0}


def default_strip_domain(p: HelicoidalClosedForm, m: int = 1, resolution=(64, 64),
                         pad: float = 1.0) -> DomainSpec:
    """Rectangle covering one period strip and every pole/zero abscissa."""
    xs = [0.0]
    if not p.k_is_zero:
        k = p.k.to_complex()
        xs += [math.log(abs(1.0 / k)) / p.b,
               math.log(abs((1.0 + p.b) / ((1.0 - p.b) * k))) / p.b]
    s0, s1 = min(xs) - pad, max(xs) + pad
    return DomainSpec.rectangle(s0, s1, 0.0, 2.0 * math.pi * m, resolution)


def rational_b(p: HelicoidalClosedForm, n: Optional[int] = None, m: Optional[int] = None):
    if n is not None and m is not None:
        fr = Fraction(int(n), int(m))
        if abs(float(fr) - p.b) > 1e-12:
            raise ParameterError("n/m does not match b")
        return fr
    fr = Fraction(p.b).limit_denominator(64)
    return fr if abs(float(fr) - p.b) <= 1e-12 else None


def _psi_at(data: WeierstrassData, z: CEps, height_integral: CEps):
    Fz, Gz = data.F.eval(z), data.G.eval(z)
    planar, h0 = pointwise_terms(Fz, Gz)
    return np.array([planar.re, planar.im, h0 - 2.0 * height_integral.re])


def translation_vectors(data: WeierstrassData, period: float, points: Sequence[complex]) -> np.ndarray:
    """psi(z + j period) - psi(z) along vertical paths, one row per point."""
    out = []
    for w in points:
        z0 = CEps(w.real, w.imag, data.eps)
        z1 = CEps(w.real, w.imag + period, data.eps)
        I = integrate_FdG(data, [z0, z1])
        a = _psi_at(data, z0, CEps(0.0, 0.0, data.eps))
        b = _psi_at(data, z1, I)
        out.append(b - a)
    return np.array(out)


@dataclass
class TransformDiagnostics:
    poles: list
    zeros: list
    product_identity_max: float
    g_imag_max: float
    g_component_gap_max: float
    g_formula_gap_max: Optional[float]
    nodal_hausdorff: float
    grid_step: float
    singular_curves: int
    closed_curves: int
    b_fraction: Optional[Fraction] = None
    translation_mean: Optional[np.ndarray] = None
    translation_std: Optional[float] = None
    strip_counts: Optional[dict] = None
    notices: list = field(default_factory=list)
    k_is_zero: bool = False

    @property
    def nodal_ok(self) -> bool:
        return self.nodal_hausdorff <= 2.0 * self.grid_step

    @property
    def expected_punctures(self) -> Optional[int]:
        if self.b_fraction is None:
            return None
        # with k = 0, R = const * exp(z) has neither zeros nor poles
        return 0 if self.k_is_zero else 2 * self.b_fraction.numerator

    def checks(self):
        """(name, value, tol, ok) for each asserted property."""
        out = [
            ("product_identity", self.product_identity_max, IDENTITY_TOL,
             self.product_identity_max <= IDENTITY_TOL),
            ("g_real", self.g_imag_max, IDENTITY_TOL, self.g_imag_max <= IDENTITY_TOL),
            ("g_components", self.g_component_gap_max, IDENTITY_TOL,
             self.g_component_gap_max <= IDENTITY_TOL),
            ("nodal_vs_fold", self.nodal_hausdorff, 2.0 * self.grid_step, self.nodal_ok),
        ]
        if self.translation_std is not None:
            out.append(("translation_constant", self.translation_std, TRANSLATION_TOL,
                        self.translation_std <= TRANSLATION_TOL))
        if self.strip_counts is not None:
            got = self.strip_counts["total"]
            out.append(("punctures_per_strip", float(got), float(self.expected_punctures),
                        got == self.expected_punctures))
        return out

    @property
    def passed(self) -> bool:
        return all(ok for *_, ok in self.checks())

    def rows(self):
        yield "poles_in_domain", len(self.poles)
        yield "zeros_in_domain", len(self.zeros)
        yield "product_identity_max", self.product_identity_max
        yield "g_imag_max", self.g_imag_max
        yield "g_component_gap_max", self.g_component_gap_max
        if self.g_formula_gap_max is not None:
            yield "g_formula_gap_max", self.g_formula_gap_max
        yield "nodal_hausdorff", self.nodal_hausdorff
        yield "grid_step", self.grid_step
        yield "singular_curves", self.singular_curves
        yield "closed_singular_curves", self.closed_curves
        if self.b_fraction is not None:
            yield "n", self.b_fraction.numerator
            yield "m", self.b_fraction.denominator
        if self.translation_mean is not None:
            for i, v in enumerate(self.translation_mean):
                yield f"translation_{'xyu'[i]}", float(v)
            yield "translation_std", self.translation_std
        if self.strip_counts is not None:
            yield "strip_poles", self.strip_counts["poles"]
            yield "strip_zeros", self.strip_counts["zeros"]
            yield "punctures_per_strip", self.strip_counts["total"]
            yield "expected_punctures_per_strip", self.expected_punctures

    def to_csv(self) -> str:
        lines = ["quantity,value"]
        for k, v in self.rows():
            lines.append(f"{k},{v!r}" if isinstance(v, float) else f"{k},{v}")
        for w in self.poles:
            lines.append(f"pole,{w.real!r}{w.imag:+.17g}j")
        for w in self.zeros:
            lines.append(f"zero,{w.real!r}{w.imag:+.17g}j")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        out = [f"{k:30s} {v}" for k, v in self.rows()]
        out += [f"{'PASS' if ok else 'FAIL'} {name:26s} value={v:.3g} tol={tol:.3g}"
                for name, v, tol, ok in self.checks()]
        out += [f"notice: {n}" for n in self.notices]
        return "\n".join(out)


def _curve_points(curves):
    pts = [c.z for c in curves if len(c.z)]
    return np.concatenate(pts) if pts else np.empty((0, 2))


def analyze_transform(base_mesh: SurfaceMesh, new_mesh: SurfaceMesh, p: HelicoidalClosedForm,
                      n: Optional[int] = None, m: Optional[int] = None,
                      translation_samples: int = 6) -> TransformDiagnostics:
    """Ends, singular set, g-function and periodicity of a helicoidal transform."""
    base, new = base_mesh.data, new_mesh.data
    if base is None or new is None:
        raise ParameterError("analyze_transform needs meshes built from Weierstrass data")
    R = closed_form_expr(p)
    dom = base.domain
    poles, zeros = pole_zero_locations(p, dom)
    Z = CEps(base_mesh.z[..., 0], base_mesh.z[..., 1], 1)

    prod = product_identity_residual(base, new, Z)
    gf = g_function(base_mesh, new_mesh, R, p.c)

    # nodal set of the harmonic function versus the transformed fold
    L = nodal_function(base, R, p.c, Z)
    proxy = SurfaceMesh(eps=1, kind=new_mesh.kind, p1=new_mesh.p1, p2=new_mesh.p2, z=new_mesh.z,
                        psi=new_mesh.psi, N=new_mesh.N, h_coeffs=new_mesh.h_coeffs,
                        h_degeneracy=L, singular=np.zeros(L.shape, bool))
    nodal = _curve_points(extract_singular_curves(proxy, refine=False))
    curves = extract_singular_curves(new_mesh)
    sing = _curve_points(curves)
    if len(nodal) and len(sing):
        haus = max(directed_hausdorff(nodal, sing)[0], directed_hausdorff(sing, nodal)[0])
    elif len(nodal) == 0 and len(sing) == 0:
        haus = 0.0
    else:
        haus = float("inf")
    step = max(abs(h) for h in new_mesh.steps)

    diag = TransformDiagnostics(
        poles=poles, zeros=zeros, k_is_zero=p.k_is_zero,
        product_identity_max=float(np.nanmax(prod)),
        g_imag_max=float(np.nanmax(np.abs(gf.imag))),
        g_component_gap_max=float(np.nanmax(gf.component_gap)),
        g_formula_gap_max=None if gf.formula_gap is None else float(np.nanmax(gf.formula_gap[gf.mask])),
        nodal_hausdorff=float(haus), grid_step=step,
        singular_curves=len(curves), closed_curves=sum(c.closed for c in curves),
    )
    fr = rational_b(p, n, m)
    if fr is None:
        diag.notices.append(f"b = {p.b!r} is not a small rational; periodicity analysis skipped")
        return diag
    diag.b_fraction = fr
    period = 2.0 * math.pi * fr.denominator
    s0, s1, t0, t1 = dom.bounds
    pole_s = [w.real for w in poles]
    ss = [s for s in np.linspace(s0, s1, translation_samples + 2)[1:-1]
          if all(abs(s - q) > 0.05 * (s1 - s0) for q in pole_s)]
    ts = np.linspace(t0, t0 + period, 4, endpoint=False)
    pts = [complex(s, t) for s in ss for t in ts]
    T = translation_vectors(new, period, pts)
    diag.translation_mean = T.mean(axis=0)
    diag.translation_std = float(np.max(T.std(axis=0)))
    diag.strip_counts = punctures_per_strip(p, fr.denominator, (s0, s1), t0)
    return diag
