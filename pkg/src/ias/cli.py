"""Command-line front end: ``ias {gallery,transform,cauchy,verify,export}``.

Exit codes: 0 success, 1 a requested check failed, 2 bad input,
3 numerical failure (pole, trust radius, blow-up, quadrature).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from .config import RunConfig
from .errors import IASError, InputError, NumericalError, ParameterError

log = logging.getLogger("ias")

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3
PARAM_FLAGS = ("k", "r", "sign", "a", "b", "c")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(f"{self.prog}: {message}")


def _common(p: argparse.ArgumentParser, out_help: str):
    p.add_argument("--config", type=Path, help="key = value file; the section named after the command supplies defaults")
    p.add_argument("--grid", default=None, help="grid size NxM")
    p.add_argument("--out", type=Path, default=None, help=out_help)
    p.add_argument("--format", dest="fmt", choices=("obj", "ply", "csv"), default=None,
                   help="mesh format (default: from the --out suffix, else obj)")
    p.add_argument("--check", action="store_true", help="run the verification checks; exit 1 if any fails")
    p.add_argument("--report", type=Path, default=None, help="write the check report as CSV (implies --check)")
    p.add_argument("--hessian-tol", type=float, default=None)
    p.add_argument("--structure-tol", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ias", description="Improper affine spheres and maps from Weierstrass data.")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gallery", help="build a named example and export it")
    g.add_argument("--name", required=False, help="example name")
    g.add_argument("--eps", type=int, choices=(1, -1), default=None)
    g.add_argument("--bounds", default=None,
                   help="domain: s0,s1,t0,t1 for rectangles or r_in,r_out for annuli")
    for key in PARAM_FLAGS:
        g.add_argument(f"--{key}", default=None, help=f"example parameter {key}")
    _common(g, "output mesh path")

    t = sub.add_parser("transform", help="helicoidal data and its R-associated transform")
    t.add_argument("--a", default="1")
    grp = t.add_mutually_exclusive_group()
    grp.add_argument("--c", default=None)
    grp.add_argument("--b", default=None)
    t.add_argument("--k", default="0")
    t.add_argument("--n", type=int, default=None)
    t.add_argument("--m", type=int, default=None)
    t.add_argument("--method", choices=("closed", "riccati"), default="closed",
                   help="closed-form R, or RK4 integration seeded by it at the base point")
    t.add_argument("--steps", type=int, default=256,
                   help="initial RK4 steps per line; doubled until step halving changes R by < 1e-9")
    _common(t, "output directory")

    c = sub.add_parser("cauchy", help="solve the geometric Cauchy problem from a curve file")
    c.add_argument("--data", type=Path, required=False)
    c.add_argument("--strip", type=float, default=0.5, help="strip half-width T")
    c.add_argument("--anchor", type=float, default=None)
    _common(c, "output mesh path")

    v = sub.add_parser("verify", help="re-run the checks on a stored CSV mesh")
    v.add_argument("--in", dest="inp", type=Path, required=False)
    v.add_argument("--report", type=Path, default=None)
    v.add_argument("--config", type=Path)
    v.add_argument("--hessian-tol", type=float, default=None)
    v.add_argument("--structure-tol", type=float, default=None)

    e = sub.add_parser("export", help="convert a stored CSV mesh to obj, ply or csv")
    e.add_argument("--in", dest="inp", type=Path, required=False)
    e.add_argument("--out", type=Path, required=False)
    e.add_argument("--format", dest="fmt", choices=("obj", "ply", "csv"), default=None)
    e.add_argument("--config", type=Path)
    return ap


def _subparser(ap, name):
    for action in ap._subparsers._group_actions:
        if name in action.choices:
            return action.choices[name]
    raise KeyError(name)


def _parse(argv):
    """Parse twice: once to find --config, then with its values as defaults."""
    ap = build_parser()
    ns = ap.parse_args(argv)
    if getattr(ns, "config", None) is not None:
        from .config import read_config_section

        sp = _subparser(ap, ns.command)
        allowed = {a.dest for a in sp._actions if a.dest not in ("help", "config")}
        # config keys use option names; map those to dests
        alias = {a.option_strings[0].lstrip("-").replace("-", "_"): a.dest
                 for a in sp._actions if a.option_strings and a.dest != "help"}
        raw = read_config_section(ns.config, ns.command, set(alias) | allowed)
        defaults = {}
        for key, val in raw.items():
            action = next(a for a in sp._actions if a.dest == alias.get(key, key))
            if action.const is True:  # store_true
                defaults[action.dest] = val.lower() in ("1", "true", "yes", "on")
            elif action.type is not None:
                try:
                    defaults[action.dest] = action.type(val)
                except ValueError:
                    raise InputError(f"{ns.config}: bad value for {key}: {val!r}") from None
            else:
                defaults[action.dest] = val
            if action.choices is not None and defaults[action.dest] not in action.choices:
                raise InputError(f"{ns.config}: {key} must be one of {list(action.choices)}")
        sp.set_defaults(**defaults)
        ns = ap.parse_args(argv)
    return ns


def _require(ns, *names):
    for n in names:
        if getattr(ns, n, None) is None:
            flag = "--in" if n == "inp" else f"--{n.replace('_', '-')}"
            raise InputError(f"{ns.command}: {flag} is required")


def _fmt(ns, path: Path) -> str:
    if ns.fmt:
        return ns.fmt
    suf = path.suffix.lower().lstrip(".")
    return suf if suf in ("obj", "ply", "csv") else "obj"


def _run_checks(ns, mesh, label="mesh") -> bool:
    from .verify import verify_mesh

    rep = verify_mesh(mesh, hessian_tol=ns.hessian_tol, structure_tol=ns.structure_tol)
    print(f"[{label}]")
    print(rep.to_text())
    if getattr(ns, "report", None) is not None:
        from .meshio import write_atomic

        target = ns.report
        if label != "mesh":
            target = target.with_name(f"{target.stem}.{label}{target.suffix or '.csv'}")
        write_atomic(target, rep.to_csv())
    return rep.passed


def _want_checks(ns) -> bool:
    return ns.cfg.check


def _grid(ns, default):
    return ns.cfg.grid or default


# subcommands

def cmd_gallery(ns) -> int:
    from .gallery import EXAMPLES, get_example
    from .meshio import export_mesh
    from .weier import DomainSpec, eval_surface

    _require(ns, "name", "out")
    params = {k: getattr(ns, k) for k in PARAM_FLAGS if getattr(ns, k) is not None}
    if ns.name not in EXAMPLES:
        get_example(ns.name)  # raises with the list of names
    spec = EXAMPLES[ns.name]
    grid = _grid(ns, spec.domain.resolution)
    dom = spec.domain
    if ns.bounds is not None:
        try:
            vals = [float(v) for v in ns.bounds.split(",")]
        except ValueError:
            raise ParameterError(f"bad --bounds {ns.bounds!r}") from None
        if dom.kind == "rectangle" and len(vals) == 4:
            dom = DomainSpec.rectangle(*vals)
        elif dom.kind == "annulus" and len(vals) == 2:
            dom = DomainSpec.annulus(*vals)
        else:
            raise ParameterError(f"--bounds needs {4 if dom.kind == 'rectangle' else 2} numbers for {ns.name}")
    data = get_example(ns.name, params, eps=ns.eps, domain=dom.with_resolution(*grid))
    mesh = eval_surface(data)
    for p in export_mesh(mesh, _fmt(ns, ns.out), ns.out):
        log.info("wrote %s", p)
    if mesh.vertical_period is not None:
        print(f"vertical_period {mesh.vertical_period!r}")
    if _want_checks(ns):
        return EXIT_OK if _run_checks(ns, mesh) else EXIT_CHECK
    return EXIT_OK


def _helicoidal_params(ns):
    from .gallery import parse_param
    from .ribaucour import HelicoidalClosedForm

    def real(text, name):
        v = parse_param(text, 1)
        if v.im != 0:
            raise ParameterError(f"--{name} must be real")
        return float(v.re)

    a = real(ns.a, "a")
    k = parse_param(ns.k, 1)
    if ns.c is not None:
        return HelicoidalClosedForm.from_c(a, real(ns.c, "c"), k)
    if ns.b is not None:
        return HelicoidalClosedForm.from_b(a, real(ns.b, "b"), k)
    if ns.n is None or ns.m is None:
        raise ParameterError("transform needs --c, --b, or both --n and --m")
    if ns.n <= 0 or ns.m <= 0:
        raise ParameterError("--n and --m must be positive")
    return HelicoidalClosedForm.from_b(a, ns.n / ns.m, k)


def cmd_transform(ns) -> int:
    from .meshio import export_mesh, write_atomic
    from .ribaucour import (RiccatiParams, RiccatiSolution, analyze_transform, closed_form_expr,
                            default_strip_domain, rational_b, transform_data)
    from .weier import eval_surface

    _require(ns, "out")
    if ns.steps < 64:
        raise ParameterError("--steps must be at least 64")
    p = _helicoidal_params(ns)
    fr = rational_b(p, ns.n, ns.m)
    m = fr.denominator if fr is not None else 1
    dom = default_strip_domain(p, m, _grid(ns, (64, 64)))
    base = p.base_data(dom)
    R = closed_form_expr(p)
    if ns.method == "riccati":
        from .cnum import CEps

        z0 = CEps(*dom.base_point, 1)
        R = RiccatiSolution(RiccatiParams(p.c, base.F, base.G, z0, R.eval(z0)), steps=ns.steps)
    new = transform_data(base, R, p.c)
    bm, nm = eval_surface(base), eval_surface(new)
    out = ns.out
    fmt = ns.fmt or "obj"
    for mesh, stem in ((bm, "base"), (nm, "transformed")):
        export_mesh(mesh, fmt, out / f"{stem}.{fmt}")
    diag = analyze_transform(bm, nm, p, fr.numerator if fr else None, fr.denominator if fr else None)
    write_atomic(out / "diagnostics.csv", diag.to_csv())
    write_atomic(out / "diagnostics.txt", diag.to_text() + "\n")
    print(f"a={p.a!r} b={p.b!r} c={p.c!r} k={p.k}")
    print(diag.to_text())
    ok = diag.passed
    if _want_checks(ns):
        ok = _run_checks(ns, bm, "base") & _run_checks(ns, nm, "transformed") and ok
    return EXIT_OK if ok else EXIT_CHECK


def cmd_cauchy(ns) -> int:
    from .cauchy import (AdmissiblePair, build_characteristic_family, check_admissible,
                         interpolation_error, parse_curve_file, solve_bjorling)
    from .meshio import export_mesh

    _require(ns, "data", "out")
    obj = parse_curve_file(ns.data)
    if isinstance(obj, AdmissiblePair):
        rep = check_admissible(obj)
        print(f"lambda in [{float(rep.lambda_second.min())!r}, {float(rep.lambda_second.max())!r}] "
              f"agreement {rep.lambda_agreement:.3g} geodesic {rep.geodesic}")
        grid = _grid(ns, (65, 33))
        mesh = solve_bjorling(obj, ns.strip, grid, anchor=ns.anchor)
        ep, en = interpolation_error(mesh, obj) if grid[1] % 2 else (float("nan"), float("nan"))
        print(f"curve interpolation error psi {ep:.3g} N {en:.3g}")
    else:
        mesh = build_characteristic_family(obj, _grid(ns, (65, 65)))
    export_mesh(mesh, _fmt(ns, ns.out), ns.out)
    if _want_checks(ns):
        return EXIT_OK if _run_checks(ns, mesh) else EXIT_CHECK
    return EXIT_OK


def cmd_verify(ns) -> int:
    from .meshio import import_csv, write_atomic
    from .verify import verify_mesh

    _require(ns, "inp")
    mesh = import_csv(ns.inp)
    rep = verify_mesh(mesh, hessian_tol=ns.hessian_tol, structure_tol=ns.structure_tol)
    print(rep.to_text())
    if ns.report is not None:
        write_atomic(ns.report, rep.to_csv())
    return EXIT_OK if rep.passed else EXIT_CHECK


def cmd_export(ns) -> int:
    from .meshio import export_mesh, import_csv

    _require(ns, "inp", "out")
    mesh = import_csv(ns.inp)
    export_mesh(mesh, _fmt(ns, ns.out), ns.out)
    return EXIT_OK


COMMANDS = {"gallery": cmd_gallery, "transform": cmd_transform, "cauchy": cmd_cauchy,
            "verify": cmd_verify, "export": cmd_export}


def run(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        ns = _parse(argv)
        ns.cfg = RunConfig.from_namespace(ns)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING - 10 * min(ns.verbose, 2), format="%(levelname)s %(message)s")
    try:
        return COMMANDS[ns.command](ns)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except IASError as exc:  # pragma: no cover - every error is one of the two
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
