"""Surfaces from Weierstrass data (G, F).

The immersion is

    psi = (G + conj(F),  |G|^2/2 - |F|^2/2 + Re(G F) - 2 Re int F dG)

with conormal planar part conj(F) - G and affine metric |dG|^2 - |dF|^2.
For eps = -1 the conormal's planar part is stored as conj(conj(F) - G) so that
``N = (-u_x, -u_y, 1)`` under the Euclidean inner product of R^3; for eps = +1
the two readings coincide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from . import kernels
from .cnum import CEps, J
from .errors import (
    InconsistentPeriodError,
    ParameterError,
    PathSingularityError,
    QuadratureError,
    SingularDivisorError,
)

__all__ = [
    "DomainSpec", "WeierstrassData", "SurfaceMesh", "SingularCurve",
    "integrate_FdG", "eval_surface", "detect_period", "extract_singular_curves",
    "pointwise_terms", "conormal_planar", "curve_positions",
]

GUARD_FRACTION = 1e-3
SINGULAR_REL_TOL = 1e-12


@dataclass(frozen=True)
class DomainSpec:
    """A rectangle ``[s0,s1] x [t0,t1]`` or an annulus ``r_in < |z| < r_out``.

    For annuli the angular samples start at the base point's argument and are
    periodic; the radial range is clipped to the puncture guard radius.
    """

    kind: str
    bounds: tuple
    resolution: tuple = (64, 64)
    base: Optional[tuple] = None

    def __post_init__(self):
        if self.kind not in ("rectangle", "annulus"):
            raise ParameterError(f"unknown domain kind {self.kind!r}")
        n1, n2 = self.resolution
        if n1 < 2 or n2 < 2:
            raise ParameterError("grid resolution must be at least 2 per axis")
        if self.kind == "rectangle":
            s0, s1, t0, t1 = self.bounds
            if not (s1 > s0 and t1 > t0):
                raise ParameterError("rectangle bounds must satisfy s0 < s1 and t0 < t1")
            if self.base is not None:
                bs, bt = self.base
                if not (s0 <= bs <= s1 and t0 <= bt <= t1):
                    raise ParameterError("base point must lie in the domain")
        else:
            r_in, r_out = self.bounds
            if not (0 <= r_in < r_out):
                raise ParameterError("annulus needs 0 <= r_in < r_out")
            if self.base is not None:
                rb = math.hypot(*self.base)
                if not (self.radii[0] - 1e-12 <= rb <= r_out + 1e-12):
                    raise ParameterError("base point must lie in the annulus")

    @classmethod
    def rectangle(cls, s0, s1, t0, t1, resolution=(64, 64), base=None):
        return cls("rectangle", (float(s0), float(s1), float(t0), float(t1)),
                   tuple(resolution), None if base is None else tuple(map(float, base)))

    @classmethod
    def annulus(cls, r_in, r_out, resolution=(64, 64), base=None):
        return cls("annulus", (float(r_in), float(r_out)), tuple(resolution),
                   None if base is None else tuple(map(float, base)))

    def with_resolution(self, n1, n2) -> "DomainSpec":
        return DomainSpec(self.kind, self.bounds, (n1, n2), self.base)

    @property
    def radii(self):
        r_in, r_out = self.bounds
        return max(r_in, GUARD_FRACTION * r_out), r_out

    @property
    def periodic(self) -> bool:
        return self.kind == "annulus"

    @property
    def base_point(self) -> tuple:
        if self.base is not None:
            return self.base
        if self.kind == "rectangle":
            return self.bounds[0], self.bounds[2]
        return self.radii[0], 0.0

    def axes(self):
        """1-D parameter vectors (s, t) or (r, theta)."""
        n1, n2 = self.resolution
        if self.kind == "rectangle":
            s0, s1, t0, t1 = self.bounds
            return np.linspace(s0, s1, n1), np.linspace(t0, t1, n2)
        r_in, r_out = self.radii
        theta_b = math.atan2(self.base_point[1], self.base_point[0])
        return np.linspace(r_in, r_out, n1), theta_b + 2.0 * np.pi * np.arange(n2) / n2

    def z_grid(self, eps: int) -> CEps:
        a, b = self.axes()
        A, B = np.meshgrid(a, b, indexing="ij")
        if self.kind == "rectangle":
            return CEps(A, B, eps)
        if eps != 1:
            raise ParameterError("annulus domains are only defined for eps = +1")
        return CEps(A * np.cos(B), A * np.sin(B), 1)


@dataclass
class WeierstrassData:
    """Weierstrass data ``(G, F)``; G and F need ``eval`` and ``derive``."""

    G: Any
    F: Any
    eps: int
    domain: DomainSpec
    punctures: tuple = ()
    name: str = ""

    def __post_init__(self):
        for f in (self.G, self.F):
            if getattr(f, "eps", self.eps) != self.eps:
                raise ParameterError("G, F and the data must share eps")
        if self.domain.kind == "annulus" and self.eps != 1:
            raise ParameterError("annulus domains are only defined for eps = +1")


@dataclass
class SingularCurve:
    """Polyline in the parameter plane where the metric degenerates."""

    z: np.ndarray            # (n, 2) parameter-plane points (s, t)
    grid_params: np.ndarray  # (n, 2) grid coordinates (s, t) or (r, theta)
    closed: bool
    max_residual: float

    def __len__(self):
        return len(self.z)


@dataclass
class SurfaceMesh:
    """Samples of an improper affine map on a structured parameter grid.

    Arrays are indexed ``[i, k]`` with ``i`` along the first grid parameter.
    ``h_coeffs[..., :]`` are (E, F, G) of the affine metric in grid parameters.
    """

    eps: int
    kind: str
    p1: np.ndarray
    p2: np.ndarray
    z: np.ndarray
    psi: np.ndarray
    N: np.ndarray
    h_coeffs: np.ndarray
    h_degeneracy: np.ndarray
    singular: np.ndarray
    vertical_period: Optional[float] = None
    provenance: str = ""
    data: Any = field(default=None, repr=False, compare=False)

    @property
    def shape(self):
        return self.h_degeneracy.shape

    @property
    def periodic(self) -> bool:
        return self.kind == "annulus"

    @property
    def steps(self):
        return float(np.mean(np.diff(self.p1))), float(np.mean(np.diff(self.p2)))

    @property
    def height(self):
        return self.psi[..., 2]


# pointwise pieces of the representation

def conormal_planar(F: CEps, G: CEps) -> CEps:
    """Euclidean (N1, N2) packed as CEps parts."""
    n = F.conj() - G
    return n if n.eps == 1 else n.conj()


def pointwise_terms(Fz: CEps, Gz: CEps):
    """Planar part and the integral-free part of the height."""
    planar = Gz + Fz.conj()
    h0 = 0.5 * Gz.mod_sq() - 0.5 * Fz.mod_sq() + (Gz * Fz).re
    return planar, h0


# quadrature

_GL_CACHE: dict = {}


def _gauss(n):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def _integrand(data: WeierstrassData, z: CEps, dG=None) -> CEps:
    dG = data.G.derive() if dG is None else dG
    try:
        f = data.F.eval(z) * dG.eval(z)
    except SingularDivisorError as exc:
        raise PathSingularityError(f"integration path meets a singularity: {exc}") from None
    if not (np.all(np.isfinite(f.re)) and np.all(np.isfinite(f.im))):
        raise PathSingularityError("integrand is not finite on the integration path")
    return f


def _as_point(p, eps) -> CEps:
    if isinstance(p, CEps):
        return CEps(float(p.re), float(p.im), eps)
    if isinstance(p, complex):
        return CEps(p.real, p.imag, eps)
    s, t = p
    return CEps(float(s), float(t), eps)


def _segment_rule(data, dG, a: CEps, b: CEps, n: int) -> CEps:
    x, w = _gauss(n)
    d = b - a
    z = CEps(a.re + 0.5 * (x + 1) * d.re, a.im + 0.5 * (x + 1) * d.im, a.eps)
    f = _integrand(data, z, dG)
    acc = CEps(0.5 * float(np.dot(w, f.re)), 0.5 * float(np.dot(w, f.im)), a.eps)
    return acc * d


def _segment_distance(a: CEps, b: CEps, w: complex) -> float:
    pa, pb = complex(a.re, a.im), complex(b.re, b.im)
    d = pb - pa
    lam = 0.0 if d == 0 else min(1.0, max(0.0, ((w - pa) * d.conjugate()).real / abs(d) ** 2))
    return abs(pa + lam * d - w)


def integrate_FdG(data: WeierstrassData, path: Sequence, tol: float = 1e-13,
                  order: int = 16, max_depth: int = 40) -> CEps:
    """Adaptive composite Gauss-Legendre value of ``int F G'(z) dz`` along a polyline."""
    eps = data.eps
    pts = [_as_point(p, eps) for p in path]
    dG = data.G.derive()
    total = CEps(0.0, 0.0, eps)
    for a, b in zip(pts[:-1], pts[1:]):
        for w in data.punctures:
            if _segment_distance(a, b, complex(w)) <= 1e-12 * (1.0 + abs(complex(w))):
                raise PathSingularityError(f"integration path passes through the puncture {complex(w)}")
        stack = [(a, b, 0)]
        while stack:
            lo, hi, depth = stack.pop()
            mid = CEps(0.5 * (lo.re + hi.re), 0.5 * (lo.im + hi.im), eps)
            _integrand(data, mid, dG)  # catches poles sitting on a split point
            whole = _segment_rule(data, dG, lo, hi, order)
            halves = _segment_rule(data, dG, lo, mid, order) + _segment_rule(data, dG, mid, hi, order)
            err = math.hypot(whole.re - halves.re, whole.im - halves.im)
            scale = 1.0 + math.hypot(halves.re, halves.im)
            if err <= tol * scale:
                total = total + halves
            elif depth >= max_depth:
                f = _integrand(data, CEps(np.array([lo.re, mid.re, hi.re]),
                                          np.array([lo.im, mid.im, hi.im]), eps), dG)
                if np.max(np.hypot(f.re, f.im)) > 1e8 * scale:
                    raise PathSingularityError(f"integrand blows up near {complex(mid.re, mid.im)}")
                raise QuadratureError(f"quadrature did not converge near {lo!r}")
            else:
                stack.append((mid, hi, depth + 1))
                stack.append((lo, mid, depth + 1))
    return total


def _cumulative(data, dG, zfun, dzfun, lines, taus, base_index, n_gl):
    """Cumulative ``int F dG`` along a family of curves sharing node values ``taus``.

    ``zfun(line, tau)`` and ``dzfun(line, tau)`` return CEps; the result has
    shape (len(lines), len(taus)) and vanishes at ``taus[base_index]``.
    """
    x, w = _gauss(n_gl)
    lo, hi = taus[:-1], taus[1:]
    half = 0.5 * (hi - lo)
    tq = lo[:, None] + half[:, None] * (x[None, :] + 1.0)
    L = np.asarray(lines, dtype=float)[:, None, None]
    T = tq[None, :, :]
    f = _integrand(data, zfun(L, T), dG) * dzfun(L, T)
    seg_re = np.einsum("lmq,q->lm", f.re, w) * half[None, :]
    seg_im = np.einsum("lmq,q->lm", f.im, w) * half[None, :]
    cre = np.concatenate([np.zeros((len(lines), 1)), np.cumsum(seg_re, axis=1)], axis=1)
    cim = np.concatenate([np.zeros((len(lines), 1)), np.cumsum(seg_im, axis=1)], axis=1)
    cre -= cre[:, base_index:base_index + 1]
    cim -= cim[:, base_index:base_index + 1]
    return cre, cim


def _augment(nodes, base):
    merged = np.union1d(nodes, [base])
    return merged, int(np.searchsorted(merged, base)), np.searchsorted(merged, nodes)


def _accumulate_rectangle(data, dG, n_gl):
    dom = data.domain
    eps = data.eps
    s, t = dom.axes()
    sb, tb = dom.base_point
    one = CEps(1.0, 0.0, eps)
    jj = J(eps)

    ss, ib, pick = _augment(s, sb)
    row_re, row_im = _cumulative(
        data, dG,
        lambda L, T: CEps(T + 0.0 * L, tb + 0.0 * T + 0.0 * L, eps),
        lambda L, T: CEps(one.re + 0.0 * T + 0.0 * L, 0.0 * T + 0.0 * L, eps),
        [0.0], ss, ib, n_gl)
    row_re, row_im = row_re[0, pick], row_im[0, pick]

    tt, kb, pick_t = _augment(t, tb)
    col_re, col_im = _cumulative(
        data, dG,
        lambda L, T: CEps(L + 0.0 * T, T + 0.0 * L, eps),
        lambda L, T: CEps(jj.re + 0.0 * T + 0.0 * L, jj.im + 0.0 * T + 0.0 * L, eps),
        s, tt, kb, n_gl)
    col_re, col_im = col_re[:, pick_t], col_im[:, pick_t]
    return CEps(row_re[:, None] + col_re, row_im[:, None] + col_im, eps)


def _accumulate_annulus(data, dG, n_gl, tol):
    dom = data.domain
    r, theta = dom.axes()
    bx, by = dom.base_point
    rb = math.hypot(bx, by)
    tb = theta[0]
    c, s_ = math.cos(tb), math.sin(tb)

    rr, ib, pick = _augment(r, rb)
    sp_re, sp_im = _cumulative(
        data, dG,
        lambda L, T: CEps(T * c + 0.0 * L, T * s_ + 0.0 * L, 1),
        lambda L, T: CEps(c + 0.0 * T + 0.0 * L, s_ + 0.0 * T + 0.0 * L, 1),
        [0.0], rr, ib, n_gl)
    sp_re, sp_im = sp_re[0, pick], sp_im[0, pick]

    nodes = np.concatenate([theta, [tb + 2.0 * np.pi]])
    ci_re, ci_im = _cumulative(
        data, dG,
        lambda L, T: CEps(L * np.cos(T), L * np.sin(T), 1),
        lambda L, T: CEps(-L * np.sin(T), L * np.cos(T), 1),
        r, nodes, 0, n_gl)
    loop_re, loop_im = ci_re[:, -1], ci_im[:, -1]
    scale = 1.0 + np.max(np.hypot(loop_re, loop_im))
    spread = max(np.ptp(loop_re), np.ptp(loop_im))
    if spread > tol * scale:
        raise InconsistentPeriodError(
            f"loop integrals of F dG differ by {spread:.3g} across radii; "
            "the annulus contains an undeclared singularity"
        )
    total = CEps(sp_re[:, None] + ci_re[:, :-1], sp_im[:, None] + ci_im[:, :-1], 1)
    period = -2.0 * float(np.mean(loop_re))
    return total, period


def eval_surface(data: WeierstrassData, n_gl: int = 8, singular_tol: float = SINGULAR_REL_TOL,
                 period_tol: float = 1e-8) -> SurfaceMesh:
    """Sample psi, N, h on the data's parameter grid."""
    dom = data.domain
    n1, n2 = dom.resolution
    if min(n1, n2) < (8 if dom.kind == "annulus" else 2):
        raise ParameterError("eval_surface needs at least 2 samples per axis (8 for annuli)")
    eps = data.eps
    Z = dom.z_grid(eps)
    dG, dF = data.G.derive(), data.F.derive()
    Gz, Fz = data.G.eval(Z), data.F.eval(Z)
    Gp, Fp = dG.eval(Z), dF.eval(Z)

    planar, h0 = pointwise_terms(Fz, Gz)
    if dom.kind == "rectangle":
        integral = _accumulate_rectangle(data, dG, n_gl)
        period = None
    else:
        integral, period = _accumulate_annulus(data, dG, n_gl, period_tol)
    height = h0 - 2.0 * integral.re
    n = conormal_planar(Fz, Gz)

    psi = np.stack([planar.re, planar.im, height], axis=-1)
    N = np.stack([n.re, n.im, np.ones_like(height)], axis=-1)

    D = Gp.mod_sq() - Fp.mod_sq()
    scale = Gp.re ** 2 + Gp.im ** 2 + Fp.re ** 2 + Fp.im ** 2
    singular = np.abs(D) <= singular_tol * scale
    p1, p2 = dom.axes()
    if dom.kind == "rectangle":
        h = np.stack([D, np.zeros_like(D), eps * D], axis=-1)
    else:
        R = np.meshgrid(p1, p2, indexing="ij")[0]
        h = np.stack([D, np.zeros_like(D), R * R * D], axis=-1)

    return SurfaceMesh(
        eps=eps, kind=dom.kind, p1=p1, p2=p2,
        z=np.stack([Z.re, Z.im], axis=-1), psi=psi, N=N, h_coeffs=h,
        h_degeneracy=D, singular=singular, vertical_period=period,
        provenance=f"weierstrass {data.name or ''} G={data.G} F={data.F} eps={eps}".strip(),
        data=data,
    )


def detect_period(data: WeierstrassData, n: int = 256, tol: float = 1e-11) -> Optional[float]:
    """Height jump per counter-clockwise turn around the puncture, ``-2 Re oint F dG``."""
    if data.domain.kind != "annulus":
        return None
    dG = data.G.derive()

    def loop(radius, m):
        th = 2.0 * np.pi * np.arange(m) / m
        z = CEps(radius * np.cos(th), radius * np.sin(th), 1)
        f = _integrand(data, z, dG) * CEps(-radius * np.sin(th), radius * np.cos(th), 1)
        return complex(f.re.mean(), f.im.mean()) * 2.0 * np.pi

    values = []
    for radius in data.domain.radii:
        coarse, fine = loop(radius, n), loop(radius, 2 * n)
        if abs(coarse - fine) > tol * (1.0 + abs(fine)):
            raise QuadratureError(f"loop quadrature did not converge at radius {radius}")
        values.append(fine)
    if abs(values[0] - values[1]) > 1e3 * tol * (1.0 + abs(values[1])):
        raise InconsistentPeriodError("loop integrals disagree between inner and outer radius")
    return -2.0 * values[1].real


# singular set

def _degeneracy_and_gradient(data, dG2, dF2, dG, dF, s, t):
    z = CEps(s, t, data.eps)
    jj = J(data.eps)
    g1, f1 = dG.eval(z), dF.eval(z)
    g2, f2 = dG2.eval(z), dF2.eval(z)
    D = g1.mod_sq() - f1.mod_sq()
    Ds = 2.0 * ((g2 * g1.conj()).re - (f2 * f1.conj()).re)
    Dt = 2.0 * ((jj * g2 * g1.conj()).re - (jj * f2 * f1.conj()).re)
    return D, Ds, Dt


def _newton(data, pts, tol, max_iter=12):
    dG, dF = data.G.derive(), data.F.derive()
    dG2, dF2 = dG.derive(), dF.derive()
    s, t = pts[:, 0].copy(), pts[:, 1].copy()
    for _ in range(max_iter):
        D, Ds, Dt = _degeneracy_and_gradient(data, dG2, dF2, dG, dF, s, t)
        g2 = Ds * Ds + Dt * Dt
        move = (np.abs(D) > tol) & (g2 > 0)
        if not np.any(move):
            break
        step = np.where(move, D / np.where(g2 > 0, g2, 1.0), 0.0)
        s = s - step * Ds
        t = t - step * Dt
    D, _, _ = _degeneracy_and_gradient(data, dG2, dF2, dG, dF, s, t)
    return np.stack([s, t], axis=1), np.abs(D)


def _chain(segments):
    """Join edge-pair segments into ordered chains of edge ids."""
    adj: dict = {}
    for idx, (a, b) in enumerate(segments):
        adj.setdefault(int(a), []).append(idx)
        adj.setdefault(int(b), []).append(idx)
    used = np.zeros(len(segments), dtype=bool)
    chains = []

    def walk(start):
        chain = [start]
        cur = start
        while True:
            nxt = [i for i in adj[cur] if not used[i]]
            if not nxt:
                return chain
            i = nxt[0]
            used[i] = True
            a, b = int(segments[i][0]), int(segments[i][1])
            cur = b if a == cur else a
            chain.append(cur)

    for e in sorted(k for k, v in adj.items() if len(v) == 1):
        if any(not used[i] for i in adj[e]):
            chains.append((walk(e), False))
    for e in sorted(adj):
        if any(not used[i] for i in adj[e]):
            chains.append((walk(e), True))
    return chains


def extract_singular_curves(mesh: SurfaceMesh, refine: bool = True,
                            tol: float = 1e-9) -> list:
    """Zero set of the metric degeneracy as polylines in the parameter plane."""
    D = mesh.h_degeneracy
    ns, nt = D.shape
    periodic = mesh.periodic
    segs = kernels.marching_segments(np.ascontiguousarray(D, dtype=float), periodic)
    if len(segs) == 0:
        return []
    n_s_edges = (ns - 1) * nt
    dp2 = (mesh.p2[1] - mesh.p2[0]) if nt > 1 else 0.0

    def edge_point(e):
        if e < n_s_edges:
            i, k = divmod(e, nt)
            i2, k2, wrap = i + 1, k, 0.0
        else:
            i, k = divmod(e - n_s_edges, nt)
            i2, k2 = i, (k + 1) % nt
            wrap = 1.0 if k + 1 == nt else 0.0
        d0, d1 = D[i, k], D[i2, k2]
        frac = d0 / (d0 - d1)
        a1 = mesh.p1[i] + frac * (mesh.p1[i2] - mesh.p1[i])
        b2 = mesh.p2[k2] + (wrap * nt * dp2 if wrap else 0.0)
        a2 = mesh.p2[k] + frac * (b2 - mesh.p2[k])
        return a1, a2

    curves = []
    for chain, closed in _chain(segs):
        gp = np.array([edge_point(e) for e in chain], dtype=float)
        if closed and len(gp) > 1 and np.allclose(gp[0], gp[-1]):
            gp = gp[:-1]
        if mesh.kind == "annulus":
            zp = np.stack([gp[:, 0] * np.cos(gp[:, 1]), gp[:, 0] * np.sin(gp[:, 1])], axis=1)
        else:
            zp = gp.copy()
        residual = np.abs(_interp_grid(mesh, D, gp))
        if refine and mesh.data is not None:
            zp, residual = _newton(mesh.data, zp, tol)
            if mesh.kind == "annulus":
                theta = np.unwrap(np.arctan2(zp[:, 1], zp[:, 0]))
                theta += 2 * np.pi * np.round((gp[0, 1] - theta[0]) / (2 * np.pi))
                gp = np.stack([np.hypot(zp[:, 0], zp[:, 1]), theta], axis=1)
            else:
                gp = zp.copy()
        keep = np.ones(len(zp), dtype=bool)
        keep[1:] = np.any(np.abs(np.diff(zp, axis=0)) > 1e-14, axis=1)
        curves.append(SingularCurve(z=zp[keep], grid_params=gp[keep], closed=bool(closed),
                                    max_residual=float(np.max(residual)) if len(residual) else 0.0))
    return curves


def _interp_grid(mesh: SurfaceMesh, values, gp, seam_shift=None):
    """Bilinear interpolation of grid ``values`` at grid-parameter points ``gp``.

    ``seam_shift`` is added to samples fetched across the angular seam.
    """
    ns, nt = mesh.shape
    p1, p2 = mesh.p1, mesh.p2
    d2 = p2[1] - p2[0]
    fi = np.clip(np.interp(gp[:, 0], p1, np.arange(ns)), 0, ns - 1 - 1e-12)
    if mesh.periodic:
        fk = np.mod((gp[:, 1] - p2[0]) / d2, nt)
    else:
        fk = np.clip(np.interp(gp[:, 1], p2, np.arange(nt)), 0, nt - 1 - 1e-12)
    i0 = np.floor(fi).astype(int)
    k0 = np.minimum(np.floor(fk).astype(int), nt - 1)
    a = fi - i0
    b = fk - k0
    i1 = np.minimum(i0 + 1, ns - 1)
    if mesh.periodic:
        k1 = (k0 + 1) % nt
        wrapped = k1 < k0
    else:
        k1 = np.minimum(k0 + 1, nt - 1)
        wrapped = np.zeros_like(k0, dtype=bool)
    v00, v10, v01, v11 = values[i0, k0], values[i1, k0], values[i0, k1], values[i1, k1]
    if seam_shift is not None and np.any(wrapped):
        v01 = v01 + np.where(wrapped[:, None] if values.ndim == 3 else wrapped, seam_shift, 0.0)
        v11 = v11 + np.where(wrapped[:, None] if values.ndim == 3 else wrapped, seam_shift, 0.0)
    if values.ndim == 3:
        a = a[:, None]
        b = b[:, None]
    return (1 - a) * (1 - b) * v00 + a * (1 - b) * v10 + (1 - a) * b * v01 + a * b * v11


def curve_positions(mesh: SurfaceMesh, curve: SingularCurve) -> np.ndarray:
    """3-D positions of a singular curve, interpolated from the mesh samples."""
    shift = None
    if mesh.periodic and mesh.vertical_period:
        shift = np.array([0.0, 0.0, mesh.vertical_period])
    return _interp_grid(mesh, mesh.psi, curve.grid_params, shift)
