"""Acceptance suite: one PASS/FAIL line per criterion, at the published tolerances.

Each test prints its verdict with capture disabled so the line shows up in a
plain ``pytest -v`` log, then asserts the same condition.  A criterion that
is not met fails here; nothing is loosened to make it pass.
"""

import math

import numpy as np
import pytest

from ias import eval_surface, get_example
from ias.cauchy import (AdmissiblePair, CharacteristicData, build_characteristic_family,
                        solve_bjorling)
from ias.cnum import CEps
from ias.gallery import example_names
from ias.meshio import export_mesh, import_csv
from ias.ribaucour import (HelicoidalClosedForm, RiccatiParams, analyze_transform, closed_form_expr,
                           default_strip_domain, riccati_integrate, riccati_residual, transform_data)
from ias.series import PowerSeries
from ias.verify import hessian_residual, structure_convergence, structure_residuals, verify_mesh
from ias.weier import DomainSpec, detect_period, extract_singular_curves


@pytest.fixture
def verdict(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {number:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
        assert ok, f"criterion {number} ({title}) not met: {detail}"
    return emit


def at(name, n, eps=None, params=None):
    d = get_example(name, params, eps=eps)
    return get_example(name, params, eps=eps, domain=d.domain.with_resolution(n, n))


def poly(rows):
    return PowerSeries(np.array(rows, dtype=float))


def test_01_pde_residual(verdict):
    worst = {}
    for eps in (1, -1):
        rep = hessian_residual(eval_surface(at("paraboloid", 128, eps=eps)), tol=1e-6)["hessian"]
        worst[eps] = rep.max if rep.n else float("inf")
    ok = all(v <= 1e-6 for v in worst.values())
    verdict(1, "PDE residual", ok,
            f"max |det Hess u - eps| = {worst[1]:.2e} (eps=+1), {worst[-1]:.2e} (eps=-1), tol 1e-6")


def test_02_structure_equations(verdict):
    failures, ratios = [], []
    for name in example_names():
        data = at(name, 128)
        if not structure_residuals(eval_surface(data)).passed:
            failures.append(f"{name} residuals")
        for rel, (a, b, ratio, ok) in structure_convergence(data).items():
            if not ok:
                failures.append(f"{name}/{rel} ratio {ratio:.2f}")
            elif not math.isnan(ratio):
                ratios.append(ratio)
    detail = (f"{len(example_names())} examples, 128->256 ratios in "
              f"[{min(ratios):.2f}, {max(ratios):.2f}] (need [3, 5])")
    verdict(2, "structure equations", not failures, detail + ("; " + ", ".join(failures) if failures else ""))


def test_03_rotational_singular_circle(verdict):
    mesh = eval_surface(get_example("rotational", {"r": "1"}, domain=DomainSpec.annulus(0.25, 2.0, (128, 128))))
    curves = extract_singular_curves(mesh)
    gp = np.concatenate([c.grid_params for c in curves]) if curves else np.empty((0, 2))
    dist = float(np.max(np.abs(gp[:, 0] - 1.0))) if len(gp) else float("inf")
    n_par = len(extract_singular_curves(eval_surface(at("paraboloid", 128))))
    ok = len(curves) == 1 and curves[0].closed and dist <= 1e-6 and n_par == 0
    verdict(3, "rotational singular circle", ok,
            f"{len(curves)} curve(s), max ||z|-1| = {dist:.2e} (tol 1e-6); paraboloid curves: {n_par}")


def test_04_vertical_period(verdict):
    p = detect_period(get_example("multivalued", {"r": "1"}))
    p_rot = detect_period(get_example("rotational"))
    ok = p is not None and abs(abs(p) - 2 * math.pi) <= 1e-8 and p_rot is not None and abs(p_rot) <= 1e-8
    verdict(4, "vertical period", ok,
            f"multivalued |period| = {abs(p):.12f}, expected 2*pi = {2 * math.pi:.12f}; "
            f"rotational {p_rot:.1e}")


RICCATI_CASES = [(1.0, 1 / 3, 0), (1.0, 1 / 3, 1), (1.0, 3.0, 1), (1.0, 2.0, 1 + 1j)]


def test_05_riccati_closed_form(verdict):
    rng = np.random.default_rng(20240611)
    res_max, int_err, orders = 0.0, 0.0, []
    for a, b, k in RICCATI_CASES:
        p = HelicoidalClosedForm.from_b(a, b, k)
        R, d = closed_form_expr(p), p.base_data()
        w = rng.uniform(-3, 3, (2, 1000))
        res = riccati_residual(R, d.F, d.G, p.c, CEps(w[0], w[1], 1))
        res_max = max(res_max, float(np.max(np.hypot(res.re, res.im))))
        z0 = CEps(0.0, 0.0, 1)
        rp = RiccatiParams(p.c, d.F, d.G, z0, R.eval(z0))
        errs = []
        for steps in (128, 256, 512):
            path = riccati_integrate(rp, [0j, 1 + 0j, 1 + 1j], steps=steps)
            ex = R.eval(path.z)
            errs.append(float(np.max(np.hypot(path.R.re - ex.re, path.R.im - ex.im))))
        int_err = max(int_err, errs[1])
        orders += [math.log2(errs[0] / errs[1]), math.log2(errs[1] / errs[2])]
    ok = res_max <= 1e-10 and int_err <= 1e-9 and all(3.5 <= o <= 4.5 for o in orders)
    verdict(5, "Riccati closed form", ok,
            f"residual {res_max:.2e} (tol 1e-10) at 4x1000 points; RK4 at 256 steps {int_err:.2e} "
            f"(tol 1e-9); observed order {min(orders):.3f}..{max(orders):.3f}")


@pytest.fixture(scope="module")
def transforms():
    out = {}
    for a, n, m in ((1.0, 1, 3), (1.0, 2, 1)):
        p = HelicoidalClosedForm.from_b(a, n / m, 1.0)
        dom = default_strip_domain(p, m, (96, 96))
        base = p.base_data(dom)
        new = transform_data(base, closed_form_expr(p), p.c)
        out[(a, n, m)] = analyze_transform(eval_surface(base), eval_surface(new), p, n, m)
    return out


def test_06_ribaucour_identities(verdict, transforms):
    parts, ok = [], True
    for key, diag in transforms.items():
        checks = {name: (value, tol, good) for name, value, tol, good in diag.checks()}
        for name in ("product_identity", "g_real", "g_components", "nodal_vs_fold"):
            value, tol, good = checks[name]
            ok &= good
        parts.append(f"{key}: product {checks['product_identity'][0]:.1e}, g imag {checks['g_real'][0]:.1e}, "
                     f"g gap {checks['g_components'][0]:.1e}, nodal {diag.nodal_hausdorff:.2e} "
                     f"<= {2 * diag.grid_step:.2e}")
    verdict(6, "Ribaucour identities", ok, "; ".join(parts))


def test_07_periodicity_and_ends(verdict, transforms):
    parts, ok = [], True
    for (a, n, m), diag in transforms.items():
        checks = {name: (value, tol, good) for name, value, tol, good in diag.checks()}
        t_std = checks["translation_constant"][0]
        got = checks["punctures_per_strip"][0]
        ok &= checks["translation_constant"][2] and checks["punctures_per_strip"][2]
        parts.append(f"(a,n,m)=({a:g},{n},{m}): translation spread {t_std:.1e} (tol 1e-6), "
                     f"punctures/strip {got:g} (want {2 * n})")
    verdict(7, "periodicity and ends", ok, "; ".join(parts))


def test_08_bjorling_oracles(verdict):
    par = AdmissiblePair(poly([[0, 0, 0], [1, 0, 0], [0, 0, 0.5], [0, 0, 0]]),
                         poly([[0, 0, 1], [-1, 0, 0], [0, 0, 0], [0, 0, 0]]), 1, (-1, 1))
    xy = AdmissiblePair(poly([[0, 0, 0], [1, 1, 0], [0, 0, 1], [0, 0, 0]]),
                        poly([[0, 0, 1], [-1, -1, 0], [0, 0, 0], [0, 0, 0]]), -1, (-1, 1))
    m = solve_bjorling(par, 0.5, (65, 33))
    x, y, u = (m.psi[..., i] for i in range(3))
    e_par = float(np.max(np.abs(u - (x * x + y * y) / 2)))
    m = solve_bjorling(xy, 0.5, (65, 33))
    x, y, u = (m.psi[..., i] for i in range(3))
    e_xy = float(np.max(np.abs(u - x * y)))
    e_ref = 0.0
    for pair in (par, xy):
        a = solve_bjorling(pair, 0.5, (65, 33))
        b = solve_bjorling(pair.reflected(), 0.5, (65, 33))
        e_ref = max(e_ref, float(np.max(np.abs(b.psi - a.psi[::-1, ::-1]))))
    ok = max(e_par, e_xy, e_ref) <= 1e-8
    verdict(8, "Bjorling oracles", ok,
            f"paraboloid {e_par:.1e}, u=xy {e_xy:.1e}, reflection {e_ref:.1e} (tol 1e-8, |t| <= 0.5)")


def test_09_characteristic_non_uniqueness(verdict):
    a = poly([[0, 0], [-1, 0.2], [0.3, 0], [0, 0.1]])
    kw = dict(u_range=(-0.5, 0.5), v_range=(-0.5, 0.5))
    m1 = build_characteristic_family(CharacteristicData(a, poly([[0, 0], [0.1, -1], [0, 0.2]]), **kw), (65, 65))
    m2 = build_characteristic_family(CharacteristicData(a, poly([[0, 0], [0.3, -1], [0.5, 0.1]]), **kw), (65, 65))
    shared = float(np.max(np.abs(m1.psi[:, 32] - m2.psi[:, 32])))
    apart = float(np.max(np.abs(m1.psi - m2.psi)))
    ok = shared <= 1e-8 and apart >= 1e-2
    verdict(9, "characteristic non-uniqueness", ok,
            f"shared asymptotic line {shared:.1e} (tol 1e-8), elsewhere up to {apart:.3f} (need >= 1e-2)")


def test_10_determinism_and_interchange(verdict, tmp_path):
    same = True
    for name in ("two_end", "rotational", "paraboloid"):
        for fmt in ("obj", "ply", "csv"):
            a = export_mesh(eval_surface(at(name, 64)), fmt, tmp_path / f"a.{fmt}")
            b = export_mesh(eval_surface(at(name, 64)), fmt, tmp_path / f"b.{fmt}")
            same &= all(pa.read_bytes() == pb.read_bytes() for pa, pb in zip(a, b))
    gap = 0.0
    for name in example_names():
        mesh = eval_surface(at(name, 64))
        export_mesh(mesh, "csv", tmp_path / f"{name}.csv")
        r1, r2 = verify_mesh(mesh), verify_mesh(import_csv(tmp_path / f"{name}.csv"))
        for c1, c2 in zip(r1.checks, r2.checks):
            assert c1.name == c2.name
            for v1, v2 in ((c1.max, c2.max), (c1.mean, c2.mean)):
                if not (np.isnan(v1) and np.isnan(v2)):
                    gap = max(gap, abs(v1 - v2))
    ok = same and gap <= 1e-12
    verdict(10, "determinism and interchange", ok,
            f"byte-identical exports: {same}; max residual change after CSV round trip {gap:.1e} (tol 1e-12)")
