"""Independent checks of sampled surfaces: PDE residual, structure relations, ends."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import ndimage

from . import kernels
from .cnum import CEps
from .errors import FitDegenerateError, ParameterError
from .weier import SurfaceMesh, eval_surface

__all__ = [
    "Check", "VerificationReport", "AsymptoticFit", "hessian_residual", "structure_residuals",
    "structure_convergence", "asymptotic_fit", "verify_mesh", "resolution_tolerance",
    "fold_margin_mask", "structure_tolerance",
]

# max |det Hess u - eps| by grid size (n = smaller grid dimension)
TOLERANCE_TABLE = ((64, 1e-3), (128, 2.5e-4), (256, 1e-4))
ROUNDING_FLOOR = 1e-11
FOLD_MARGIN_FRACTION = 0.1
SCALE_FLOOR = 0.1
# structure relations: relative residual <= STRUCTURE_C * (largest parameter step)^2
STRUCTURE_C = 5.0


def resolution_tolerance(shape) -> float:
    n = min(shape)
    for size, tol in TOLERANCE_TABLE:
        if n <= size:
            return tol
    # keep shrinking like step^2 beyond the table
    return TOLERANCE_TABLE[-1][1] * (TOLERANCE_TABLE[-1][0] / n) ** 2


@dataclass
class Check:
    name: str
    max: float
    mean: float
    n: int
    tol: float
    worst: Optional[tuple] = None
    informational: bool = False
    note: str = ""

    @property
    def passed(self) -> bool:
        if self.informational:
            return True
        return bool(np.isfinite(self.max) and self.max <= self.tol)


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __add__(self, other):
        return VerificationReport(self.checks + other.checks)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check", "max", "mean", "n", "tol", "pass"])
        for c in self.checks:
            w.writerow([c.name, repr(float(c.max)), repr(float(c.mean)), c.n,
                        "info" if c.informational else repr(float(c.tol)),
                        "info" if c.informational else int(c.passed)])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            status = "INFO" if c.informational else ("PASS" if c.passed else "FAIL")
            line = f"{status:4s} {c.name:28s} max={c.max:.3e} mean={c.mean:.3e} n={c.n}"
            if not c.informational:
                line += f" tol={c.tol:.1e}"
            if not c.passed and c.worst is not None:
                line += f" worst sample={c.worst}"
            if c.note:
                line += f"  ({c.note})"
            lines.append(line)
        return "\n".join(lines)


def _summary(name, values, mask, tol, informational=False, note=""):
    vals = np.where(mask, np.abs(values), np.nan)
    n = int(np.count_nonzero(mask & np.isfinite(vals)))
    if n == 0:
        return Check(name, np.nan, np.nan, 0, tol, None, informational, note or "no samples")
    worst = np.unravel_index(np.nanargmax(vals), vals.shape)
    return Check(name, float(np.nanmax(vals)), float(np.nanmean(vals)), n, tol,
                 tuple(int(i) for i in worst), informational, note)


# PDE residual

def fold_margin_mask(mesh: SurfaceMesh, margin: int) -> np.ndarray:
    """True where no sheet change of the metric lies within ``margin`` grid cells."""
    if margin <= 0:
        return np.ones(mesh.shape, dtype=bool)
    pos = mesh.h_degeneracy > 0
    size = 2 * margin + 1
    mode = ("nearest", "wrap" if mesh.periodic else "nearest")
    near_pos = ndimage.maximum_filter(pos, size=size, mode=mode)
    near_neg = ndimage.maximum_filter(~pos, size=size, mode=mode)
    return ~(near_pos & near_neg)


def hessian_residual(mesh: SurfaceMesh, k: int = 16, half_window: int = 2, degree: int = 3,
                     margin: Optional[int] = None, tol: Optional[float] = None,
                     cond_max: float = 1e8) -> VerificationReport:
    """|det Hess u - eps| from local least-squares fits in the (x, y) plane.

    Each sample fits its ``k`` nearest same-sheet grid neighbours; samples
    within ``margin`` cells of a fold are left out since u is not a smooth
    graph across it.  The default margin is a fixed share of the grid so the
    excluded band has constant width under refinement.
    """
    if margin is None:
        margin = int(round(FOLD_MARGIN_FRACTION * min(mesh.shape)))
    if degree not in (2, 3):
        raise ParameterError("degree must be 2 or 3")
    need = 6 if degree == 2 else 10
    if not need <= k <= (2 * half_window + 1) ** 2:
        raise ParameterError(f"k must lie in [{need}, {(2 * half_window + 1) ** 2}]")
    x, y, u = (np.ascontiguousarray(mesh.psi[..., i]) for i in range(3))
    usable = ~mesh.singular & np.isfinite(u) & np.isfinite(x) & np.isfinite(y)
    if np.count_nonzero(usable) < 50:
        raise ParameterError("hessian_residual needs at least 50 nonsingular samples")
    sheet = np.sign(mesh.h_degeneracy).astype(np.int8)
    period = float(mesh.vertical_period or 0.0)
    det, status = kernels.local_hessian_det(x, y, u, usable, sheet, half_window, k, cond_max,
                                            mesh.periodic, period, degree)
    tol = resolution_tolerance(mesh.shape) if tol is None else tol
    ok = (status == 0) & fold_margin_mask(mesh, margin)
    skipped = int(np.count_nonzero(status >= 2))
    check = _summary("hessian", det - mesh.eps, ok, tol,
                     note=f"{skipped} samples skipped (ill-conditioned or sparse)")
    return VerificationReport([check])


# structure relations

def _fd(mesh: SurfaceMesh, arr, seam=None):
    """Central differences along both grid directions; NaN on non-periodic borders."""
    h1, h2 = mesh.steps
    d1 = np.full(arr.shape, np.nan)
    d1[1:-1] = (arr[2:] - arr[:-2]) / (2 * h1)
    if mesh.periodic:
        up = np.roll(arr, -1, axis=1)
        dn = np.roll(arr, 1, axis=1)
        if seam is not None:
            up[:, -1] = up[:, -1] + seam
            dn[:, 0] = dn[:, 0] - seam
        d2 = (up - dn) / (2 * h2)
    else:
        d2 = np.full(arr.shape, np.nan)
        d2[:, 1:-1] = (arr[:, 2:] - arr[:, :-2]) / (2 * h2)
    return d1, d2


def _dot(a, b):
    return np.sum(a * b, axis=-1)


def _norm(a):
    return np.sqrt(_dot(a, a))


def structure_tolerance(mesh: SurfaceMesh) -> float:
    return STRUCTURE_C * max(abs(h) for h in mesh.steps) ** 2


def _floor(scale, mask):
    # keeps relative residuals meaningful where the local scale vanishes
    ref = np.nanmedian(np.where(mask, scale, np.nan)) if np.any(mask) else 1.0
    return np.maximum(scale, SCALE_FLOOR * ref)


def _det3(a, b, c):
    return _dot(a, np.cross(b, c))


def structure_residuals(mesh: SurfaceMesh, tol: Optional[float] = None) -> VerificationReport:
    """Finite-difference residuals of the conormal, metric and volume relations.

    Residuals are relative to the size of the terms involved so one tolerance
    serves every example.
    """
    if min(mesh.shape) < 8:
        raise ParameterError("structure_residuals needs at least 8x8 samples")
    tol = structure_tolerance(mesh) if tol is None else tol
    seam = None
    if mesh.periodic and mesh.vertical_period:
        seam = np.array([0.0, 0.0, mesh.vertical_period])
    psi, N = mesh.psi, mesh.N
    p1, p2 = _fd(mesh, psi, seam)
    n1, n2 = _fd(mesh, N)
    mask = ~mesh.singular & np.all(np.isfinite(p1) & np.isfinite(p2), axis=-1)
    xi = np.zeros(3)
    xi[2] = 1.0
    checks = []

    normal_res = (np.maximum(np.abs(_dot(N, p1)), np.abs(_dot(N, p2)))
                  / _floor(_norm(N) * (_norm(p1) + _norm(p2)), mask))
    checks.append(_summary("conormal_tangency", normal_res, mask, tol))
    checks.append(_summary("conormal_normalization", N[..., 2] - 1.0, np.ones(mesh.shape, bool), 0.0))

    E, Fc, Gc = -_dot(n1, p1), -0.5 * (_dot(n1, p2) + _dot(n2, p1)), -_dot(n2, p2)
    scale = _floor((_norm(n1) + _norm(n2)) * (_norm(p1) + _norm(p2)), mask)
    h = mesh.h_coeffs
    metric_res = np.maximum.reduce([np.abs(E - h[..., 0]), np.abs(Fc - h[..., 1]),
                                    np.abs(Gc - h[..., 2])]) / scale
    checks.append(_summary("metric_from_conormal", metric_res, mask, tol))

    lhs = _det3(p1, p2, np.broadcast_to(xi, p1.shape))
    rhs = _det3(n1, n2, N)
    det_scale = _floor(_norm(p1) * _norm(p2) + _norm(n1) * _norm(n2) * _norm(N), mask)
    checks.append(_summary("volume_relation", (lhs - mesh.eps * rhs) / det_scale, mask, tol))
    vol = np.abs(lhs) - np.sqrt(np.abs(h[..., 0] * h[..., 2] - h[..., 1] ** 2))
    checks.append(_summary("volume_vs_metric", vol / det_scale, mask, tol))

    # A = -u_y + j x = N2 + j x, B = u_x + j y = -N1 + j y
    x, y = psi[..., 0], psi[..., 1]
    ax1, ax2 = _fd(mesh, x)
    ay1, ay2 = _fd(mesh, y)
    an1, an2 = _fd(mesh, N[..., 1])
    bn1, bn2 = _fd(mesh, -N[..., 0])

    def im_a_bbar(ar, ai, br, bi):
        # Im((ar + j ai) * conj(br + j bi))
        return ai * br - ar * bi

    cE = im_a_bbar(an1, ax1, bn1, ay1)
    cG = im_a_bbar(an2, ax2, bn2, ay2)
    cF = 0.5 * (im_a_bbar(an1, ax1, bn2, ay2) + im_a_bbar(an2, ax2, bn1, ay1))
    cs = _floor((np.hypot(an1, ax1) + np.hypot(an2, ax2)) * (np.hypot(bn1, ay1) + np.hypot(bn2, ay2)),
                mask)
    complex_res = np.maximum.reduce([np.abs(cE - h[..., 0]), np.abs(cF - h[..., 1]),
                                     np.abs(cG - h[..., 2])]) / cs
    checks.append(_summary("metric_from_A_B", complex_res, mask, tol))

    checks.append(_height_convention_diagnostic(mesh, mask))
    return VerificationReport(checks)


def _height_convention_diagnostic(mesh: SurfaceMesh, mask) -> Check:
    """Gap between the two height 1-forms (G d conj F versus the Re(GF) - F dG form)."""
    data = mesh.data
    if data is None:
        return Check("height_form_convention", np.nan, np.nan, 0, np.inf, informational=True,
                     note="needs the generating data")
    Z = CEps(mesh.z[..., 0], mesh.z[..., 1], mesh.eps)
    G, F = data.G.eval(Z), data.F.eval(Z)
    dG, dF = data.G.derive().eval(Z), data.F.derive().eval(Z)
    alt = 2.0 * (G * dF.conj()).re
    canon = (G * dF).re - (F * dG).re
    scale = np.sqrt(G.re ** 2 + G.im ** 2) * np.sqrt(dF.re ** 2 + dF.im ** 2) + 1e-300
    return _summary("height_form_convention", (alt - canon) / (1.0 + scale), mask, np.inf,
                    informational=True, note="reported, not asserted")


def structure_convergence(data, coarse: int = 128, fine: int = 256,
                          names=("conormal_tangency", "metric_from_conormal", "volume_relation")):
    """Residual ratios between two resolutions for the FD structure relations.

    Returns {name: (coarse_max, fine_max, ratio, ok)}.  A pair of residuals
    both at rounding level counts as exact.
    """
    out = {}
    reps = []
    for n in (coarse, fine):
        d = type(data)(data.G, data.F, data.eps, data.domain.with_resolution(n, n),
                       data.punctures, data.name)
        reps.append(structure_residuals(eval_surface(d)))
    for name in names:
        a, b = reps[0][name].max, reps[1][name].max
        if a <= ROUNDING_FLOOR and b <= ROUNDING_FLOOR:
            out[name] = (a, b, float("nan"), True)
        else:
            ratio = a / b if b > 0 else np.inf
            out[name] = (a, b, ratio, bool(3.0 <= ratio <= 5.0))
    return out


# ends

@dataclass
class AsymptoticFit:
    E: np.ndarray            # coefficients of 1, x, y, x^2, xy, y^2
    a: float                 # coefficient of log(x^2 + y^2)
    residual: float          # relative rms residual
    n: int


def asymptotic_fit(mesh: SurfaceMesh, far_fraction: float = 0.2) -> AsymptoticFit:
    """Least-squares fit of u by a quadratic plus a log(x^2+y^2) term in the outer band."""
    if mesh.kind != "annulus":
        raise ParameterError("asymptotic_fit needs an annulus mesh")
    if not 0 < far_fraction <= 1:
        raise ParameterError("far_fraction must be in (0, 1]")
    if mesh.vertical_period and abs(mesh.vertical_period) > 1e-8:
        raise ParameterError("asymptotic_fit needs a single-valued height (no vertical period)")
    r = mesh.p1
    cut = r[-1] - far_fraction * (r[-1] - r[0])
    band = (r >= cut)[:, None] & np.ones(mesh.shape, bool)
    x, y, u = (mesh.psi[..., i][band] for i in range(3))
    rho2 = x * x + y * y
    if np.any(rho2 <= 0):
        raise FitDegenerateError("far-field samples include the planar origin")
    X = np.stack([np.ones_like(x), x, y, x * x, x * y, y * y, np.log(rho2)], axis=1)
    col = np.linalg.norm(X, axis=0)
    coef, _, rank, sv = np.linalg.lstsq(X / col, u, rcond=None)
    if rank < X.shape[1] or sv[-1] <= 1e-12 * sv[0]:
        raise FitDegenerateError("far-field design matrix is rank deficient")
    coef = coef / col
    res = u - X @ coef
    spread = np.linalg.norm(u - u.mean())
    rel = float(np.linalg.norm(res) / spread) if spread > 0 else float(np.linalg.norm(res))
    return AsymptoticFit(E=coef[:6], a=float(coef[6]), residual=rel, n=int(u.size))


def verify_mesh(mesh: SurfaceMesh, hessian_tol: Optional[float] = None,
                structure_tol: Optional[float] = None) -> VerificationReport:
    return hessian_residual(mesh, tol=hessian_tol) + structure_residuals(mesh, tol=structure_tol)
