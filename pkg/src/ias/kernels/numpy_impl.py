"""Vectorised numpy versions of the kernels in :mod:`ias.kernels.numba_impl`."""

import numpy as np


def _cmul(ar, ai, br, bi, eps):
    return ar * br - eps * ai * bi, ar * bi + ai * br


def _rhs(rr, ri, fr, fi, gr, gi, c, eps):
    sr, si = _cmul(rr, ri, rr, ri, eps)
    pr, pi = _cmul(sr, si, fr, fi, eps)
    return c * pr - gr, c * pi - gi


def rk4_riccati(fp_re, fp_im, gp_re, gp_im, h_re, h_im, r0_re, r0_im, c, eps, cap, keep):
    P, N = h_re.shape
    rr = np.array(r0_re, dtype=float)
    ri = np.array(r0_im, dtype=float)
    status = np.zeros(P, dtype=np.int8)
    if keep:
        out_re = np.full((P, N + 1), np.nan)
        out_im = np.full((P, N + 1), np.nan)
        out_re[:, 0] = rr
        out_im[:, 0] = ri
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(N):
            hr, hi = h_re[:, n], h_im[:, n]
            a = 2 * n
            k1r, k1i = _cmul(hr, hi, *_rhs(rr, ri, fp_re[:, a], fp_im[:, a],
                                           gp_re[:, a], gp_im[:, a], c, eps), eps)
            k2r, k2i = _cmul(hr, hi, *_rhs(rr + 0.5 * k1r, ri + 0.5 * k1i, fp_re[:, a + 1],
                                           fp_im[:, a + 1], gp_re[:, a + 1], gp_im[:, a + 1],
                                           c, eps), eps)
            k3r, k3i = _cmul(hr, hi, *_rhs(rr + 0.5 * k2r, ri + 0.5 * k2i, fp_re[:, a + 1],
                                           fp_im[:, a + 1], gp_re[:, a + 1], gp_im[:, a + 1],
                                           c, eps), eps)
            k4r, k4i = _cmul(hr, hi, *_rhs(rr + k3r, ri + k3i, fp_re[:, a + 2], fp_im[:, a + 2],
                                           gp_re[:, a + 2], gp_im[:, a + 2], c, eps), eps)
            rr = rr + (k1r + 2.0 * k2r + 2.0 * k3r + k4r) / 6.0
            ri = ri + (k1i + 2.0 * k2i + 2.0 * k3i + k4i) / 6.0
            bad = ~(np.isfinite(rr) & np.isfinite(ri)) | (np.sqrt(rr * rr + ri * ri) > cap)
            newly = bad & (status == 0)
            status[newly] = 1
            rr = np.where(status == 1, np.nan, rr)
            ri = np.where(status == 1, np.nan, ri)
            if keep:
                out_re[:, n + 1] = rr
                out_im[:, n + 1] = ri
    if not keep:
        return rr[:, None].copy(), ri[:, None].copy(), status
    return out_re, out_im, status


def local_hessian_det(x, y, u, usable, sheet, half_window, k, cond_max, periodic, period,
                      degree=2):
    ns, nt = x.shape
    w = half_window
    det = np.full((ns, nt), np.nan)
    status = np.ones((ns, nt), dtype=np.int8)

    ii, kk = np.meshgrid(np.arange(ns), np.arange(nt), indexing="ij")
    centre = usable & (ii - w >= 0) & (ii + w < ns)
    if not periodic:
        centre &= (kk - w >= 0) & (kk + w < nt)
    ci, ck = ii[centre], kk[centre]
    if ci.size == 0:
        return det, status

    offs = [(di, dk) for di in range(-w, w + 1) for dk in range(-w, w + 1)]
    di = np.array([o[0] for o in offs])
    dk = np.array([o[1] for o in offs])
    ni = ci[:, None] + di[None, :]
    nk_raw = ck[:, None] + dk[None, :]
    shift = np.where(nk_raw < 0, -period, np.where(nk_raw >= nt, period, 0.0))
    nk = np.mod(nk_raw, nt)
    ok_i = (ni >= 0) & (ni < ns)
    ni_c = np.clip(ni, 0, ns - 1)
    ok = ok_i & usable[ni_c, nk] & (sheet[ni_c, nk] == sheet[ci, ck][:, None])
    ddx = x[ni_c, nk] - x[ci, ck][:, None]
    ddy = y[ni_c, nk] - y[ci, ck][:, None]
    du = u[ni_c, nk] + shift - u[ci, ck][:, None]
    dist = np.where(ok, np.sqrt(ddx * ddx + ddy * ddy), np.inf)

    order = np.argsort(dist, axis=1, kind="mergesort")[:, :k]
    rows = np.arange(ci.size)[:, None]
    dsel = dist[rows, order]
    enough = np.isfinite(dsel[:, -1])
    rho = np.where(enough, dsel[:, -1], 1.0)
    positive = rho > 0
    px = ddx[rows, order] / rho[:, None]
    py = ddy[rows, order] / rho[:, None]
    b = du[rows, order]
    cols = [np.ones_like(px), px, py, px * px, px * py, py * py]
    if degree == 3:
        cols += [px * px * px, px * px * py, px * py * py, py * py * py]
    A = np.stack(cols, axis=-1)
    A = np.where(np.isfinite(A), A, 0.0)
    b = np.where(np.isfinite(b), b, 0.0)
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    with np.errstate(divide="ignore", invalid="ignore"):
        well = (s[:, -1] > 0) & (s[:, 0] / s[:, -1] <= cond_max)
        proj = np.einsum("nki,nk->ni", U, b) / s
        coef = np.einsum("nji,nj->ni", Vt, proj)
        d = (4.0 * coef[:, 3] * coef[:, 5] - coef[:, 4] ** 2) / rho ** 4

    st = np.where(~enough, 2, np.where(~positive | ~well, 3, 0)).astype(np.int8)
    status[ci, ck] = st
    det[ci, ck] = np.where(st == 0, d, np.nan)
    return det, status


def marching_segments(D, periodic):
    ns, nt = D.shape
    n_s_edges = (ns - 1) * nt
    ncell_t = nt if periodic else nt - 1
    i, kk = np.meshgrid(np.arange(ns - 1), np.arange(ncell_t), indexing="ij")
    i, kk = i.ravel(), kk.ravel()
    k1 = (kk + 1) % nt
    v0, v1, v2, v3 = D[i, kk], D[i + 1, kk], D[i + 1, k1], D[i, k1]
    finite = np.isfinite(v0) & np.isfinite(v1) & np.isfinite(v2) & np.isfinite(v3)
    b0, b1, b2, b3 = v0 > 0, v1 > 0, v2 > 0, v3 > 0
    edges = np.stack([i * nt + kk, n_s_edges + (i + 1) * nt + kk, i * nt + k1,
                      n_s_edges + i * nt + kk], axis=1)
    crosses = np.stack([b0 != b1, b1 != b2, b3 != b2, b0 != b3], axis=1) & finite[:, None]
    nc = crosses.sum(axis=1)

    cell = np.arange(i.size)
    pieces = []
    two = nc == 2
    if np.any(two):
        idx = np.argsort(~crosses[two], axis=1, kind="mergesort")[:, :2]
        rows = cell[two]
        pieces.append((rows, 0, edges[rows, idx[:, 0]], edges[rows, idx[:, 1]]))
    four = nc == 4
    if np.any(four):
        rows = cell[four]
        centre_pos = (v0 + v1 + v2 + v3)[rows] > 0
        cut13 = b0[rows] == centre_pos
        e = edges[rows]
        pieces.append((rows, 0, e[:, 0], np.where(cut13, e[:, 1], e[:, 3])))
        pieces.append((rows, 1, np.where(cut13, e[:, 2], e[:, 1]), np.where(cut13, e[:, 3], e[:, 2])))
    if not pieces:
        return np.empty((0, 2), dtype=np.int64)
    cells = np.concatenate([p[0] for p in pieces])
    slot = np.concatenate([np.full(p[0].size, p[1]) for p in pieces])
    a = np.concatenate([p[2] for p in pieces])
    b = np.concatenate([p[3] for p in pieces])
    order = np.lexsort((slot, cells))
    return np.stack([a[order], b[order]], axis=1).astype(np.int64)
