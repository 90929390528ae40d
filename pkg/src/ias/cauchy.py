"""The geometric Cauchy problem: admissible pairs, Bjoerling strips, characteristic data."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .cnum import CEps
from .errors import (
    CharacteristicDataError,
    CurveFileError,
    InconsistentDataError,
    InvalidPairError,
    ParameterError,
)
from .series import PowerSeries, SeriesFunction
from .weier import DomainSpec, SurfaceMesh, WeierstrassData, eval_surface

__all__ = [
    "AdmissiblePair", "AdmissibilityReport", "CharacteristicData", "check_admissible",
    "solve_bjorling", "bjorling_data", "interpolation_error", "build_characteristic_family",
    "parse_curve_file", "SERIES_TOL",
]

SERIES_TOL = 1e-8


@dataclass
class AdmissiblePair:
    """Curve alpha(s) in R^3 and conormal U(s) along it, as truncated series."""

    alpha: PowerSeries
    U: PowerSeries
    eps: int
    interval: tuple

    def __post_init__(self):
        if self.alpha.dim != 3 or self.U.dim != 3:
            raise InvalidPairError("alpha and U must be R^3-valued series")
        if self.eps not in (1, -1):
            raise InvalidPairError("eps must be +1 or -1")
        lo, hi = map(float, self.interval)
        if not hi > lo:
            raise InvalidPairError("interval must satisfy lo < hi")
        self.interval = (lo, hi)

    def reflected(self) -> "AdmissiblePair":
        """The pair s -> (alpha(-s), U(-s))."""
        lo, hi = self.interval
        return AdmissiblePair(self.alpha.reflected(), self.U.reflected(), self.eps, (-hi, -lo))

    def samples(self, n: int = 65) -> np.ndarray:
        return np.linspace(self.interval[0], self.interval[1], n)


@dataclass
class AdmissibilityReport:
    s: np.ndarray
    lambda_second: np.ndarray      # <alpha'', U>
    lambda_conormal: np.ndarray    # -<alpha', U'>
    characteristic: np.ndarray     # flags where lambda vanishes
    bracket_residual: float        # max |[a', a'', xi] + eps [U', U'', xi]|
    lambda_constant: bool
    scale: float
    tol: float

    @property
    def lambda_agreement(self) -> float:
        return float(np.max(np.abs(self.lambda_second - self.lambda_conormal)))

    @property
    def all_characteristic(self) -> bool:
        return bool(np.all(self.characteristic))

    @property
    def non_characteristic(self) -> bool:
        return not np.any(self.characteristic)

    @property
    def bracket_holds(self) -> bool:
        return self.bracket_residual <= self.tol

    @property
    def geodesic(self) -> bool:
        return self.bracket_holds and self.lambda_constant and self.non_characteristic


def check_admissible(pair: AdmissiblePair, n: int = 65, tol: Optional[float] = None) -> AdmissibilityReport:
    """Check normalisation and tangency, and report lambda by both formulas."""
    if pair.alpha.order < 3 or pair.U.order < 3:
        raise InvalidPairError("series orders must be at least 3")
    s = pair.samples(n)
    a, a1, a2 = pair.alpha(s), pair.alpha.derivative()(s), pair.alpha.derivative().derivative()(s)
    U, U1, U2 = pair.U(s), pair.U.derivative()(s), pair.U.derivative().derivative()(s)
    scale = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(U))))
    tol = SERIES_TOL * scale if tol is None else tol

    norm = np.max(np.abs(U[:, 2] - 1.0))
    if norm > tol:
        raise InvalidPairError(f"<xi, U> deviates from 1 by {norm:.3g}")
    tang = np.max(np.abs(np.sum(a1 * U, axis=1)))
    if tang > tol:
        raise InvalidPairError(f"<alpha', U> deviates from 0 by {tang:.3g}")

    lam2 = np.sum(a2 * U, axis=1)
    lam1 = -np.sum(a1 * U1, axis=1)
    charac = np.abs(lam2) <= tol
    bra_a = a1[:, 0] * a2[:, 1] - a1[:, 1] * a2[:, 0]
    bra_U = U1[:, 0] * U2[:, 1] - U1[:, 1] * U2[:, 0]
    bracket = float(np.max(np.abs(bra_a + pair.eps * bra_U)))
    const = bool(np.ptp(lam2) <= tol)
    return AdmissibilityReport(s, lam2, lam1, charac, bracket, const, scale, tol)


def _combine(x: PowerSeries, y: PowerSeries, cx: float, cy: float) -> PowerSeries:
    if x.center != y.center:
        raise InvalidPairError("alpha and U must share the expansion point")
    n = max(x.order, y.order) + 1
    c = np.zeros(n)
    c[: x.order + 1] += cx * x.coeffs
    c[: y.order + 1] += cy * y.coeffs
    return PowerSeries(c, x.center, min(x.trust_radius, y.trust_radius))


def bjorling_data(pair: AdmissiblePair):
    """(G, F) whose surface contains alpha with conormal U along t = 0."""
    e = pair.eps
    a1, a2 = pair.alpha.component(0), pair.alpha.component(1)
    u1, u2 = pair.U.component(0), pair.U.component(1)
    F = SeriesFunction(_combine(u1, a1, 0.5, 0.5), _combine(a2, u2, -0.5, -0.5 * e), e)
    G = SeriesFunction(_combine(a1, u1, 0.5, -0.5), _combine(a2, u2, 0.5, -0.5 * e), e)
    return G, F


def solve_bjorling(pair: AdmissiblePair, strip: float, grid=(65, 33), anchor: Optional[float] = None,
                   check: bool = True) -> SurfaceMesh:
    """Surface on ``interval x [-strip, strip]`` through alpha with conormal U.

    The height is fixed so that psi(anchor, 0) = alpha(anchor); the default
    anchor is the interval midpoint.
    """
    if strip <= 0:
        raise ParameterError("strip half-width must be positive")
    if check:
        rep = check_admissible(pair)
        if not rep.non_characteristic:
            bad = rep.s[rep.characteristic]
            raise CharacteristicDataError(
                f"lambda vanishes at s = {bad[0]:.6g} (and {len(bad) - 1} more samples); "
                "the strip problem is not well posed there")
        if np.any(np.sign(rep.lambda_second) != np.sign(rep.lambda_second[0])):
            raise CharacteristicDataError("lambda changes sign on the interval")
    lo, hi = pair.interval
    s0 = 0.5 * (lo + hi) if anchor is None else float(anchor)
    if not lo <= s0 <= hi:
        raise ParameterError("anchor must lie in the interval")
    G, F = bjorling_data(pair)
    domain = DomainSpec.rectangle(lo, hi, -strip, strip, grid, base=(s0, 0.0))
    data = WeierstrassData(G=G, F=F, eps=pair.eps, domain=domain, name="bjorling")
    mesh = eval_surface(data)
    z0 = CEps(s0, 0.0, pair.eps)
    Gz, Fz = G.eval(z0), F.eval(z0)
    h0 = 0.5 * Gz.mod_sq() - 0.5 * Fz.mod_sq() + (Gz * Fz).re
    psi = mesh.psi.copy()
    psi[..., 2] += float(pair.alpha(s0)[2]) - float(h0)
    return dataclasses.replace(mesh, psi=psi, provenance=f"bjorling eps={pair.eps} anchor={s0!r}")


def interpolation_error(mesh: SurfaceMesh, pair: AdmissiblePair):
    """max |psi(s,0) - alpha(s)| and max |N(s,0) - U(s)| on the t = 0 row."""
    k = np.flatnonzero(np.abs(mesh.p2) <= 1e-14)
    if k.size == 0:
        raise ParameterError("mesh has no t = 0 row; use an odd number of t samples")
    s = mesh.p1
    return (float(np.max(np.abs(mesh.psi[:, k[0]] - pair.alpha(s)))),
            float(np.max(np.abs(mesh.N[:, k[0]] - pair.U(s)))))


# characteristic data

@dataclass
class CharacteristicData:
    """Planar curves a(u) and b(v) (R^2-valued series) in asymptotic coordinates."""

    a_curve: PowerSeries
    b_curve: PowerSeries
    base_height: float = 0.0
    u_range: tuple = (-1.0, 1.0)
    v_range: tuple = (-1.0, 1.0)
    base: tuple = (0.0, 0.0)

    def __post_init__(self):
        if self.a_curve.dim != 2 or self.b_curve.dim != 2:
            raise InvalidPairError("a_curve and b_curve must be planar (2 components)")
        u0, v0 = self.base
        if not (self.u_range[0] <= u0 <= self.u_range[1] and self.v_range[0] <= v0 <= self.v_range[1]):
            raise ParameterError("base point must lie in the (u, v) rectangle")


def _rot(v):
    # J(v1, v2) = (-v2, v1)
    return np.stack([-v[..., 1], v[..., 0]], axis=-1)


def _cumulative_gl(f, nodes, base, n_gl=8):
    """Cumulative integral of f over ``nodes`` (1-D, increasing), zero at ``base``."""
    x, w = np.polynomial.legendre.leggauss(n_gl)
    pts = np.union1d(nodes, [base])
    lo, hi = pts[:-1], pts[1:]
    half = 0.5 * (hi - lo)
    q = lo[:, None] + half[:, None] * (x[None, :] + 1.0)
    vals = f(q)
    seg = np.einsum("...mq,q->...m", vals, w) * half
    cum = np.concatenate([np.zeros(seg.shape[:-1] + (1,)), np.cumsum(seg, axis=-1)], axis=-1)
    cum = cum - cum[..., [int(np.searchsorted(pts, base))]]
    return cum[..., np.searchsorted(pts, nodes)]


def build_characteristic_family(data: CharacteristicData, grid=(65, 65), tol: float = 1e-10) -> SurfaceMesh:
    """Hyperbolic surface with N = (a + b, 1) and planar part J(a - b), in (u, v) coordinates."""
    nu, nv = grid
    u = np.linspace(*data.u_range, nu)
    v = np.linspace(*data.v_range, nv)
    u0, v0 = data.base
    A, B = data.a_curve, data.b_curve
    dA, dB = A.derivative(), B.derivative()

    # w_u = -<a + b, J a'>,  w_v = <a + b, J b'>
    def wu(uu, vv):
        return -np.sum((A(uu) + B(vv)) * _rot(dA(uu)), axis=-1)

    def wv(uu, vv):
        return np.sum((A(uu) + B(vv)) * _rot(dB(vv)), axis=-1)

    # u first along v = v0, then each column in v; and the other order for the closedness check
    row = _cumulative_gl(lambda q: wu(q, np.full_like(q, v0)), u, u0)
    cols = _cumulative_gl(lambda q: wv(np.broadcast_to(u[:, None, None], (nu,) + q.shape), q[None]),
                          v, v0)
    w1 = row[:, None] + cols
    col0 = _cumulative_gl(lambda q: wv(np.full_like(q, u0), q), v, v0)
    rows = _cumulative_gl(lambda q: wu(q[None], np.broadcast_to(v[:, None, None], (nv,) + q.shape)),
                          u, u0)
    w2 = col0[None, :] + rows.T
    gap = float(np.max(np.abs(w1 - w2)))
    if gap > tol * (1.0 + float(np.max(np.abs(w1)))):
        raise InconsistentDataError(f"height form is not closed (path gap {gap:.3g})")

    U_, V_ = np.meshgrid(u, v, indexing="ij")
    a, b = A(U_), B(V_)
    planar = _rot(a - b)
    height = data.base_height + w1
    psi = np.concatenate([planar, height[..., None]], axis=-1)
    N = np.concatenate([a + b, np.ones(height.shape + (1,))], axis=-1)
    Fc = np.sum(dA(U_) * _rot(dB(V_)), axis=-1)
    h = np.stack([np.zeros_like(Fc), Fc, np.zeros_like(Fc)], axis=-1)
    scale = np.max(np.abs(Fc)) if Fc.size else 1.0
    singular = np.abs(Fc) <= 1e-12 * max(scale, 1e-300)
    return SurfaceMesh(eps=-1, kind="rectangle", p1=u, p2=v, z=np.stack([U_, V_], axis=-1),
                       psi=psi, N=N, h_coeffs=h, h_degeneracy=Fc, singular=singular,
                       provenance="characteristic family (u, v asymptotic coordinates)")


# curve files

_SECTIONS = {"alpha": 3, "U": 3, "a_curve": 2, "b_curve": 2}


def parse_curve_file(source: Union[str, Path], text: Optional[str] = None):
    """Read an admissible pair or characteristic data from the curve file format.

    ::

        # comment
        eps = 1
        interval = -1 1
        [alpha]
        center = 0
        order = 3
        0 0 0          # one row per coefficient c_0 .. c_order
        1 0 0
        0 0 0.5
        0 0 0
        [U]
        ...

    Characteristic files use sections ``[a_curve]`` and ``[b_curve]`` with two
    numbers per row and top-level keys ``u_range``, ``v_range``, ``base``,
    ``base_height``.
    """
    name = str(source)
    if text is None:
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise CurveFileError(f"{name}: cannot read curve file: {exc.strerror}") from None
    top: dict = {}
    sections: dict = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{name}:{lineno}"
        if line.startswith("["):
            if not line.endswith("]"):
                raise CurveFileError(f"{where}: malformed section header {line!r}")
            sec = line[1:-1].strip()
            if sec not in _SECTIONS:
                raise CurveFileError(f"{where}: unknown section [{sec}]")
            if sec in sections:
                raise CurveFileError(f"{where}: duplicate section [{sec}]")
            current = sections[sec] = {"rows": [], "line": lineno}
            continue
        if "=" in line:
            key, _, val = (p.strip() for p in line.partition("="))
            target = top if current is None else current
            if key in target:
                raise CurveFileError(f"{where}: duplicate key {key!r}")
            target[key] = (val, where)
            continue
        if current is None:
            raise CurveFileError(f"{where}: coefficient row outside a section")
        try:
            row = [float(x) for x in line.split()]
        except ValueError:
            raise CurveFileError(f"{where}: coefficient row must be numbers, got {line!r}") from None
        sec_name = next(k for k, v in sections.items() if v is current)
        if len(row) != _SECTIONS[sec_name]:
            raise CurveFileError(f"{where}: expected {_SECTIONS[sec_name]} numbers per row, got {len(row)}")
        current["rows"].append((row, where))

    def num(d, key, cast=float, default=None, count=1):
        if key not in d:
            if default is not None:
                return default
            raise CurveFileError(f"{name}: missing key {key!r}")
        val, where = d[key]
        parts = val.split()
        if len(parts) != count:
            raise CurveFileError(f"{where}: {key} needs {count} value(s)")
        try:
            out = [cast(p) for p in parts]
        except ValueError:
            raise CurveFileError(f"{where}: bad value for {key}: {val!r}") from None
        return out[0] if count == 1 else tuple(out)

    def series(sec):
        d = sections[sec]
        allowed = {"center", "order", "trust_radius", "rows", "line"}
        for key in d:
            if key not in allowed:
                raise CurveFileError(f"{d[key][1]}: unknown key {key!r} in [{sec}]")
        order = num(d, "order", int)
        rows = d["rows"]
        if len(rows) != order + 1:
            raise CurveFileError(f"{name}:{d['line']}: [{sec}] has order {order} but {len(rows)} coefficient rows")
        tr = num(d, "trust_radius", float, default=-1.0)
        return PowerSeries([r for r, _ in rows], num(d, "center", float, default=0.0),
                           None if tr < 0 else tr)

    kinds = set(sections)
    if kinds == {"alpha", "U"}:
        for key in top:
            if key not in ("eps", "interval"):
                raise CurveFileError(f"{top[key][1]}: unknown key {key!r}")
        eps = num(top, "eps", int)
        if eps not in (1, -1):
            raise CurveFileError(f"{top['eps'][1]}: eps must be 1 or -1")
        return AdmissiblePair(series("alpha"), series("U"), eps, num(top, "interval", float, count=2))
    if kinds == {"a_curve", "b_curve"}:
        for key in top:
            if key not in ("eps", "u_range", "v_range", "base", "base_height"):
                raise CurveFileError(f"{top[key][1]}: unknown key {key!r}")
        if "eps" in top and num(top, "eps", int) != -1:
            raise CurveFileError(f"{top['eps'][1]}: characteristic data needs eps = -1")
        return CharacteristicData(series("a_curve"), series("b_curve"),
                                  num(top, "base_height", float, default=0.0),
                                  num(top, "u_range", float, default=(-1.0, 1.0), count=2),
                                  num(top, "v_range", float, default=(-1.0, 1.0), count=2),
                                  num(top, "base", float, default=(0.0, 0.0), count=2))
    raise CurveFileError(f"{name}: expected sections [alpha]+[U] or [a_curve]+[b_curve], "
                         f"found {sorted(kinds) or 'none'}")

