"""``@njit`` kernels.  Signatures mirror :mod:`ias.kernels.numpy_impl`."""

import numpy as np
from numba import njit, prange


@njit(cache=True)
def _cmul(ar, ai, br, bi, eps):
    return ar * br - eps * ai * bi, ar * bi + ai * br


@njit(cache=True)
def _rhs(rr, ri, fr, fi, gr, gi, c, eps):
    # c R^2 F' - G'
    sr, si = _cmul(rr, ri, rr, ri, eps)
    pr, pi = _cmul(sr, si, fr, fi, eps)
    return c * pr - gr, c * pi - gi


@njit(cache=True)
def rk4_riccati(fp_re, fp_im, gp_re, gp_im, h_re, h_im, r0_re, r0_im, c, eps, cap, keep):
    """Classical RK4 for R' = c R^2 F'(z) - G'(z) along many paths at once.

    ``fp_*``/``gp_*`` have shape (P, 2N+1): node and midpoint values
    interleaved.  ``h_*`` has shape (P, N).  Returns (R_re, R_im, status)
    where R has shape (P, N+1) if ``keep`` else (P, 1); status is 1 on
    blow-up past ``cap`` (later samples are NaN).
    """
    P, N = h_re.shape
    width = N + 1 if keep else 1
    out_re = np.full((P, width), np.nan)
    out_im = np.full((P, width), np.nan)
    status = np.zeros(P, dtype=np.int8)
    for p in range(P):
        rr = r0_re[p]
        ri = r0_im[p]
        out_re[p, 0] = rr
        out_im[p, 0] = ri
        for n in range(N):
            hr = h_re[p, n]
            hi = h_im[p, n]
            a = 2 * n
            k1r, k1i = _rhs(rr, ri, fp_re[p, a], fp_im[p, a], gp_re[p, a], gp_im[p, a], c, eps)
            k1r, k1i = _cmul(hr, hi, k1r, k1i, eps)
            k2r, k2i = _rhs(rr + 0.5 * k1r, ri + 0.5 * k1i, fp_re[p, a + 1], fp_im[p, a + 1],
                            gp_re[p, a + 1], gp_im[p, a + 1], c, eps)
            k2r, k2i = _cmul(hr, hi, k2r, k2i, eps)
            k3r, k3i = _rhs(rr + 0.5 * k2r, ri + 0.5 * k2i, fp_re[p, a + 1], fp_im[p, a + 1],
                            gp_re[p, a + 1], gp_im[p, a + 1], c, eps)
            k3r, k3i = _cmul(hr, hi, k3r, k3i, eps)
            k4r, k4i = _rhs(rr + k3r, ri + k3i, fp_re[p, a + 2], fp_im[p, a + 2],
                            gp_re[p, a + 2], gp_im[p, a + 2], c, eps)
            k4r, k4i = _cmul(hr, hi, k4r, k4i, eps)
            rr = rr + (k1r + 2.0 * k2r + 2.0 * k3r + k4r) / 6.0
            ri = ri + (k1i + 2.0 * k2i + 2.0 * k3i + k4i) / 6.0
            if not (np.isfinite(rr) and np.isfinite(ri)) or np.sqrt(rr * rr + ri * ri) > cap:
                status[p] = 1
                break
            if keep:
                out_re[p, n + 1] = rr
                out_im[p, n + 1] = ri
        if status[p] == 0 and not keep:
            out_re[p, 0] = rr
            out_im[p, 0] = ri
        elif status[p] == 1 and not keep:
            out_re[p, 0] = np.nan
            out_im[p, 0] = np.nan
    return out_re, out_im, status


@njit(cache=True, parallel=True)
def local_hessian_det(x, y, u, usable, sheet, half_window, k, cond_max, periodic, period,
                      degree=2):
    """det Hess u(x, y) from a local polynomial least-squares fit per sample.

    ``degree`` 2 fits a quadratic; 3 adds the cubic terms, which removes the
    first-order bias of one-sided neighbour sets.

    Candidates are the (2w+1)^2 parameter-grid neighbours on the same sheet;
    the ``k`` nearest in the (x, y) plane are fitted.  Status codes:
    0 ok, 1 masked or boundary, 2 too few neighbours, 3 ill-conditioned.
    """
    ns, nt = x.shape
    w = half_window
    det = np.full((ns, nt), np.nan)
    status = np.ones((ns, nt), dtype=np.int8)
    ncand = (2 * w + 1) * (2 * w + 1)
    for flat in prange(ns * nt):
        i = flat // nt
        kk = flat % nt
        if not usable[i, kk]:
            continue
        if i - w < 0 or i + w >= ns:
            continue
        if not periodic and (kk - w < 0 or kk + w >= nt):
            continue
        xc = x[i, kk]
        yc = y[i, kk]
        uc = u[i, kk]
        dist = np.full(ncand, np.inf)
        cx = np.zeros(ncand)
        cy = np.zeros(ncand)
        cu = np.zeros(ncand)
        m = 0
        for di in range(-w, w + 1):
            for dk in range(-w, w + 1):
                ii = i + di
                kr = kk + dk
                shift = 0.0
                if kr < 0:
                    kr += nt
                    shift = -period
                elif kr >= nt:
                    kr -= nt
                    shift = period
                if usable[ii, kr] and sheet[ii, kr] == sheet[i, kk]:
                    ddx = x[ii, kr] - xc
                    ddy = y[ii, kr] - yc
                    dist[m] = np.sqrt(ddx * ddx + ddy * ddy)
                    cx[m] = ddx
                    cy[m] = ddy
                    cu[m] = u[ii, kr] + shift - uc
                m += 1
        order = np.argsort(dist, kind="mergesort")
        if not np.isfinite(dist[order[k - 1]]):
            status[i, kk] = 2
            continue
        rho = dist[order[k - 1]]
        if rho <= 0.0:
            status[i, kk] = 3
            continue
        ncol = 10 if degree == 3 else 6
        A = np.empty((k, ncol))
        b = np.empty(k)
        for r in range(k):
            q = order[r]
            px = cx[q] / rho
            py = cy[q] / rho
            A[r, 0] = 1.0
            A[r, 1] = px
            A[r, 2] = py
            A[r, 3] = px * px
            A[r, 4] = px * py
            A[r, 5] = py * py
            if degree == 3:
                A[r, 6] = px * px * px
                A[r, 7] = px * px * py
                A[r, 8] = px * py * py
                A[r, 9] = py * py * py
            b[r] = cu[q]
        U, s, Vt = np.linalg.svd(A, full_matrices=False)
        if s[ncol - 1] <= 0.0 or s[0] / s[ncol - 1] > cond_max:
            status[i, kk] = 3
            continue
        coef = Vt.T @ ((U.T @ b) / s)
        det[i, kk] = (4.0 * coef[3] * coef[5] - coef[4] * coef[4]) / rho ** 4
        status[i, kk] = 0
    return det, status


@njit(cache=True)
def marching_segments(D, periodic):
    """Zero-level segments of ``D`` as pairs of global edge ids.

    Edge ids: an s-edge (i,k)-(i+1,k) is ``i*nt + k``; a t-edge
    (i,k)-(i,k+1) is ``(ns-1)*nt + i*nt + k`` (k+1 wraps when periodic).
    Saddles are resolved by the sign of the cell-centre mean.
    """
    ns, nt = D.shape
    n_s_edges = (ns - 1) * nt
    ncell_t = nt if periodic else nt - 1
    out = np.empty(((ns - 1) * ncell_t * 2, 2), dtype=np.int64)
    m = 0
    edges = np.empty(4, dtype=np.int64)
    crosses = np.zeros(4, dtype=np.bool_)
    for i in range(ns - 1):
        for kk in range(ncell_t):
            k1 = kk + 1
            if k1 == nt:
                k1 = 0
            v0 = D[i, kk]
            v1 = D[i + 1, kk]
            v2 = D[i + 1, k1]
            v3 = D[i, k1]
            if not (np.isfinite(v0) and np.isfinite(v1) and np.isfinite(v2) and np.isfinite(v3)):
                continue
            b0 = v0 > 0
            b1 = v1 > 0
            b2 = v2 > 0
            b3 = v3 > 0
            edges[0] = i * nt + kk
            edges[1] = n_s_edges + (i + 1) * nt + kk
            edges[2] = i * nt + k1
            edges[3] = n_s_edges + i * nt + kk
            crosses[0] = b0 != b1
            crosses[1] = b1 != b2
            crosses[2] = b3 != b2
            crosses[3] = b0 != b3
            nc = 0
            for e in range(4):
                if crosses[e]:
                    nc += 1
            if nc == 2:
                first = -1
                for e in range(4):
                    if crosses[e]:
                        if first < 0:
                            first = e
                        else:
                            out[m, 0] = edges[first]
                            out[m, 1] = edges[e]
                            m += 1
            elif nc == 4:
                centre_pos = (v0 + v1 + v2 + v3) > 0
                # b0 and b2 positive (case 5) or b1 and b3 positive (case 10)
                if b0 == centre_pos:
                    # corners 1 and 3 are cut off
                    out[m, 0] = edges[0]
                    out[m, 1] = edges[1]
                    out[m + 1, 0] = edges[2]
                    out[m + 1, 1] = edges[3]
                else:
                    # corners 0 and 2 are cut off
                    out[m, 0] = edges[0]
                    out[m, 1] = edges[3]
                    out[m + 1, 0] = edges[1]
                    out[m + 1, 1] = edges[2]
                m += 2
    return out[:m].copy()
