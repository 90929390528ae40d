"""Truncated real power series and their holomorphic extension to C_eps."""

from __future__ import annotations

import numpy as np

from .cnum import CEps, J
from .errors import TrustRadiusError

__all__ = ["PowerSeries", "series_compose", "SeriesFunction", "DEFAULT_ORDER"]

DEFAULT_ORDER = 16
TRUST_FRACTION = 0.75


class PowerSeries:
    """``sum_k c_k (s - center)^k`` with real scalar or vector coefficients.

    ``coeffs`` has shape ``(order+1,)`` or ``(order+1, dim)``.  The trust
    radius defaults to 0.75 times the convergence radius estimated from the
    tail of the coefficients.  Series of order below 8, or with fewer than
    four nonzero coefficients, are treated as polynomials (infinite radius).
    """

    def __init__(self, coeffs, center: float = 0.0, trust_radius: float | None = None):
        c = np.array(coeffs, dtype=float)
        if c.ndim not in (1, 2) or c.shape[0] < 1:
            raise ValueError("coeffs must have shape (order+1,) or (order+1, dim)")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        self.coeffs = c
        self.center = float(center)
        self.trust_radius = (TRUST_FRACTION * self.estimate_radius()
                             if trust_radius is None else float(trust_radius))

    @property
    def order(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def dim(self) -> int:
        return 1 if self.coeffs.ndim == 1 else self.coeffs.shape[1]

    def component(self, i: int) -> "PowerSeries":
        return PowerSeries(self.coeffs[:, i], self.center, self.trust_radius)

    def estimate_radius(self) -> float:
        mags = np.abs(self.coeffs) if self.coeffs.ndim == 1 else np.abs(self.coeffs).max(axis=1)
        nz = np.flatnonzero(mags > 0)
        # low-order data is taken to be an exact polynomial
        if self.order < 8 or nz.size < 4 or nz[-1] <= self.order // 2:
            return np.inf
        tail = nz[-4:]
        est = [(mags[a] / mags[b]) ** (1.0 / (b - a)) for a, b in zip(tail[:-1], tail[1:])]
        return float(np.median(est))

    def __call__(self, s):
        """Evaluate at real ``s`` (scalar or array); vector series add a last axis."""
        s = np.asarray(s, dtype=float)
        w = s - self.center
        out = np.zeros(s.shape + self.coeffs.shape[1:])
        for c in self.coeffs[::-1]:
            out = out * (w[..., None] if self.coeffs.ndim == 2 else w) + c
        return out

    def derivative(self) -> "PowerSeries":
        if self.order == 0:
            return PowerSeries(np.zeros_like(self.coeffs[:1]), self.center, self.trust_radius)
        k = np.arange(1, self.order + 1, dtype=float)
        c = self.coeffs[1:] * (k if self.coeffs.ndim == 1 else k[:, None])
        return PowerSeries(c, self.center, self.trust_radius)

    def reflected(self) -> "PowerSeries":
        """The series of ``s -> c(-s)`` (about ``-center``)."""
        sign = (-1.0) ** np.arange(self.order + 1)
        c = self.coeffs * (sign if self.coeffs.ndim == 1 else sign[:, None])
        return PowerSeries(c, -self.center, self.trust_radius)

    def __repr__(self):
        return f"PowerSeries(order={self.order}, dim={self.dim}, center={self.center})"


def _check_radius(curve: PowerSeries, z: CEps):
    if z.eps == 1:
        dist = np.hypot(np.asarray(z.re) - curve.center, z.im)
    else:
        s = np.asarray(z.re) - curve.center
        dist = np.maximum(np.abs(s + z.im), np.abs(s - z.im))
    worst = float(np.max(dist)) if np.size(dist) else 0.0
    if worst > curve.trust_radius:
        raise TrustRadiusError(
            f"point at distance {worst:.6g} exceeds trust radius {curve.trust_radius:.6g}"
        )


def _compose_scalar(curve: PowerSeries, z: CEps) -> CEps:
    if z.eps == 1:
        w = z - curve.center
        acc = CEps(np.zeros(np.shape(z.re)), np.zeros(np.shape(z.re)), 1)
        for c in curve.coeffs[::-1]:
            acc = acc * w + float(c)
        return acc
    # d'Alembert: split-holomorphic extension from real evaluations only
    cu = curve(np.asarray(z.re) + z.im)
    cv = curve(np.asarray(z.re) - z.im)
    return CEps(0.5 * (cu + cv), 0.5 * (cu - cv), -1)


def series_compose(curve: PowerSeries, z: CEps, check: bool = True):
    """Holomorphic (eps=+1) or split-holomorphic (eps=-1) extension of ``curve`` at ``z``.

    Returns a CEps for a scalar series, a tuple of CEps for a vector series.
    """
    if curve.order < 2:
        raise ValueError("series_compose needs truncation order >= 2")
    if check:
        _check_radius(curve, z)
    if curve.coeffs.ndim == 1:
        return _compose_scalar(curve, z)
    return tuple(_compose_scalar(curve.component(i), z) for i in range(curve.dim))


class SeriesFunction:
    """``P(z) + j Q(z)`` where P, Q extend real series; duck-types HoloExpr."""

    def __init__(self, p: PowerSeries, q: PowerSeries, eps: int):
        self.p = p
        self.q = q
        self.eps = eps

    def eval(self, z: CEps) -> CEps:
        _check_radius(self.p, z)
        _check_radius(self.q, z)
        return _compose_scalar(self.p, z) + J(self.eps) * _compose_scalar(self.q, z)

    __call__ = eval

    def derive(self) -> "SeriesFunction":
        return SeriesFunction(self.p.derivative(), self.q.derivative(), self.eps)

    def __str__(self):
        return f"SeriesFunction(order={self.p.order}, center={self.p.center})"
