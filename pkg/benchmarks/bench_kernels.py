"""Time the numba kernels against the numpy fallbacks on gallery-sized inputs.

Run with ``python3 benchmarks/bench_kernels.py [--size 256] [--repeat 3]``.
The first numba call (compilation, or loading the cache) is timed separately.
"""

import argparse
import time

import numpy as np

from ias import eval_surface, get_example
from ias.kernels import HAVE_NUMBA, numba_impl, numpy_impl
from ias.ribaucour import HelicoidalClosedForm, RiccatiParams, _rk4_lines, closed_form_expr
from ias.cnum import CEps


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def hessian_inputs(n):
    data = get_example("two_end")
    mesh = eval_surface(data.__class__(data.G, data.F, data.eps, data.domain.with_resolution(n, n),
                                       data.punctures, data.name))
    x, y, u = (np.ascontiguousarray(mesh.psi[..., i]) for i in range(3))
    usable = ~mesh.singular
    sheet = np.sign(mesh.h_degeneracy).astype(np.int8)
    return (x, y, u, usable, sheet, 2, 16, 1e8, True, float(mesh.vertical_period or 0.0), 3), mesh


def riccati_inputs(n_lines, steps):
    p = HelicoidalClosedForm.from_b(1.0, 1.0 / 3.0, 0.0)
    base = p.base_data()
    R = closed_form_expr(p)
    z0 = CEps(np.zeros(n_lines), np.zeros(n_lines), 1)
    ang = np.linspace(0, 2 * np.pi, n_lines, endpoint=False)
    z1 = CEps(np.cos(ang), np.sin(ang), 1)
    r0 = R.eval(z0)
    return RiccatiParams(p.c, base.F, base.G, CEps(0.0, 0.0, 1), R.eval(CEps(0.0, 0.0, 1))), z0, r0, z1, steps


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=256)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")

    args_h, mesh = hessian_inputs(args.size)
    t0 = time.perf_counter()
    numba_impl.local_hessian_det(*args_h)
    first = time.perf_counter() - t0
    t_nb, (d_nb, s_nb) = _best(lambda: numba_impl.local_hessian_det(*args_h), args.repeat)
    t_np, (d_np, s_np) = _best(lambda: numpy_impl.local_hessian_det(*args_h), args.repeat)
    ok = (s_nb == 0) & (s_np == 0)
    gap = float(np.max(np.abs(d_nb[ok] - d_np[ok]))) if ok.any() else 0.0
    print(f"local_hessian_det {args.size}x{args.size}: numba {t_nb:.3f}s (first call {first:.2f}s) "
          f"numpy {t_np:.3f}s speedup {t_np / t_nb:.1f}x max gap {gap:.2e}")

    D = np.ascontiguousarray(mesh.h_degeneracy)
    numba_impl.marching_segments(D, True)
    t_nb, a = _best(lambda: numba_impl.marching_segments(D, True), args.repeat)
    t_np, b = _best(lambda: numpy_impl.marching_segments(D, True), args.repeat)
    print(f"marching_segments {args.size}x{args.size}: numba {t_nb * 1e3:.2f}ms numpy {t_np * 1e3:.2f}ms "
          f"segments {len(a)} / {len(b)}")

    p, z0, r0, z1, steps = riccati_inputs(args.size * 4, 256)
    import ias.kernels as K

    saved = K.rk4_riccati
    try:
        K.rk4_riccati = numba_impl.rk4_riccati
        _rk4_lines(p, z0, r0, z1, steps, 1e8, False)
        t_nb, a = _best(lambda: _rk4_lines(p, z0, r0, z1, steps, 1e8, False), args.repeat)
        K.rk4_riccati = numpy_impl.rk4_riccati
        t_np, b = _best(lambda: _rk4_lines(p, z0, r0, z1, steps, 1e8, False), args.repeat)
    finally:
        K.rk4_riccati = saved
    gap = float(np.max(np.abs(a[0] - b[0])))
    print(f"rk4_riccati {len(z0.re)} lines x {steps} steps (incl. F', G' sampling): "
          f"numba {t_nb:.3f}s numpy {t_np:.3f}s max gap {gap:.2e}")


if __name__ == "__main__":
    main()
