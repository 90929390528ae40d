"""Mesh exporters (OBJ, PLY, CSV) and the CSV reader used by ``verify``.

CSV is the interchange format: floats are written with ``repr`` so a round
trip reproduces every sample bit for bit.  OBJ and PLY are for viewers.
"""

from __future__ import annotations

import io
import os
import tempfile
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import ExportError
from .weier import SurfaceMesh, curve_positions, extract_singular_curves

__all__ = ["CSV_COLUMNS", "export_mesh", "import_csv", "write_atomic", "mesh_to_csv",
           "mesh_to_obj", "mesh_to_ply", "sidecar_path"]

CSV_COLUMNS = ("s", "t", "x", "y", "u", "N1", "N2", "h_E", "h_F", "h_G", "singular")
FORMATS = ("obj", "ply", "csv")


def write_atomic(path, data) -> Path:
    """Write ``data`` (str or bytes) to ``path`` through a temp file and rename."""
    path = Path(path)
    payload = data.encode() if isinstance(data, str) else data
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    except OSError as exc:
        raise ExportError(f"cannot write {path}: {exc.strerror or exc}") from None
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except OSError as exc:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise ExportError(f"cannot write {path}: {exc.strerror or exc}") from None
    return path


def _degeneracy_column(mesh: SurfaceMesh) -> str:
    for idx, name in ((0, "h_E"), (1, "h_F"), (2, "h_G")):
        if np.array_equal(mesh.h_degeneracy, mesh.h_coeffs[..., idx]):
            return name
    return "none"


def _check(mesh: SurfaceMesh):
    if mesh.psi.size == 0 or min(mesh.shape) < 2:
        raise ExportError("mesh must have at least 2 samples per axis")


# CSV

def mesh_to_csv(mesh: SurfaceMesh) -> str:
    _check(mesh)
    n1, n2 = mesh.shape
    out = io.StringIO()
    period = "none" if mesh.vertical_period is None else repr(float(mesh.vertical_period))
    out.write("# ias-mesh 1\n")
    out.write(f"# eps={mesh.eps}\n# kind={mesh.kind}\n# shape={n1}x{n2}\n")
    out.write(f"# vertical_period={period}\n# degeneracy={_degeneracy_column(mesh)}\n")
    out.write(f"# provenance={' '.join(mesh.provenance.split())}\n")
    out.write(",".join(CSV_COLUMNS) + "\n")
    S, T = np.meshgrid(mesh.p1, mesh.p2, indexing="ij")
    cols = [S, T, mesh.psi[..., 0], mesh.psi[..., 1], mesh.psi[..., 2], mesh.N[..., 0], mesh.N[..., 1],
            mesh.h_coeffs[..., 0], mesh.h_coeffs[..., 1], mesh.h_coeffs[..., 2]]
    flat = [c.ravel().tolist() for c in cols]
    sing = mesh.singular.ravel().tolist()
    for row in zip(*flat, sing):
        out.write(",".join(repr(float(v)) for v in row[:-1]) + ("," + ("1" if row[-1] else "0")) + "\n")
    return out.getvalue()


def import_csv(path) -> SurfaceMesh:
    """Read a CSV mesh written by :func:`export_mesh`."""
    path = Path(path)
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise ExportError(f"cannot read {path}: {exc.strerror or exc}") from None
    meta = {}
    k = 0
    while k < len(lines) and lines[k].startswith("#"):
        key, sep, val = lines[k][1:].strip().partition("=")
        if sep:
            meta[key.strip()] = val.strip()
        k += 1
    if k >= len(lines) or tuple(lines[k].split(",")) != CSV_COLUMNS:
        raise ExportError(f"{path}: header must be exactly {','.join(CSV_COLUMNS)}")
    try:
        eps = int(meta["eps"])
        kind = meta["kind"]
        n1, n2 = (int(v) for v in meta["shape"].split("x"))
    except (KeyError, ValueError):
        raise ExportError(f"{path}: missing or malformed metadata (eps, kind, shape)") from None
    body = lines[k + 1:]
    if len(body) != n1 * n2:
        raise ExportError(f"{path}: expected {n1 * n2} rows, found {len(body)}")
    try:
        arr = np.array([[float(v) for v in row.split(",")] for row in body], dtype=float)
    except ValueError as exc:
        raise ExportError(f"{path}: bad number ({exc})") from None
    if arr.shape[1] != len(CSV_COLUMNS):
        raise ExportError(f"{path}: every row needs {len(CSV_COLUMNS)} fields")
    g = arr.reshape(n1, n2, -1)
    p1, p2 = g[:, 0, 0].copy(), g[0, :, 1].copy()
    if not (np.array_equal(g[..., 0], np.broadcast_to(p1[:, None], (n1, n2)))
            and np.array_equal(g[..., 1], np.broadcast_to(p2[None, :], (n1, n2)))):
        raise ExportError(f"{path}: rows are not in row-major grid order")
    S, T = g[..., 0], g[..., 1]
    if kind == "annulus":
        z = np.stack([S * np.cos(T), S * np.sin(T)], axis=-1)
    else:
        z = np.stack([S, T], axis=-1)
    psi = g[..., 2:5].copy()
    N = np.concatenate([g[..., 5:7], np.ones((n1, n2, 1))], axis=-1)
    h = g[..., 7:10].copy()
    deg = meta.get("degeneracy", "h_E")
    D = h[..., {"h_E": 0, "h_F": 1, "h_G": 2}.get(deg, 0)].copy()
    period = meta.get("vertical_period", "none")
    return SurfaceMesh(eps=eps, kind=kind, p1=p1, p2=p2, z=z, psi=psi, N=N, h_coeffs=h,
                       h_degeneracy=D, singular=g[..., 10] != 0,
                       vertical_period=None if period == "none" else float(period),
                       provenance=meta.get("provenance", f"imported from {path.name}"))


# OBJ

def _faces(mesh: SurfaceMesh):
    n1, n2 = mesh.shape
    ok = ~mesh.singular
    idx = np.arange(n1 * n2).reshape(n1, n2)
    k_hi = n2 if mesh.periodic else n2 - 1
    for i in range(n1 - 1):
        for k in range(k_hi):
            k1 = (k + 1) % n2
            if ok[i, k] and ok[i + 1, k] and ok[i + 1, k1] and ok[i, k1]:
                yield idx[i, k], idx[i + 1, k], idx[i + 1, k1], idx[i, k1]


def _curves(mesh: SurfaceMesh, curves: Optional[list]):
    if curves is None:
        curves = extract_singular_curves(mesh, refine=mesh.data is not None)
    return [(c, curve_positions(mesh, c)) for c in curves if len(c) >= 2]


def mesh_to_obj(mesh: SurfaceMesh, curves: Optional[list] = None):
    """OBJ text and the singular-curve sidecar CSV text."""
    _check(mesh)
    out = io.StringIO()
    out.write(f"# ias mesh eps={mesh.eps} kind={mesh.kind} shape={mesh.shape[0]}x{mesh.shape[1]}\n")
    out.write("o surface\n")
    for x, y, u in mesh.psi.reshape(-1, 3).tolist():
        out.write(f"v {x!r} {y!r} {u!r}\n")
    for a, b, c, d in _faces(mesh):
        out.write(f"f {a + 1} {b + 1} {c + 1} {d + 1}\n")
    base = mesh.psi.shape[0] * mesh.psi.shape[1]
    side = io.StringIO()
    side.write("curve,index,closed,s,t,x,y,u\n")
    for ci, (curve, pos) in enumerate(_curves(mesh, curves)):
        out.write(f"o singular_{ci}\n")
        for x, y, u in pos.tolist():
            out.write(f"v {x!r} {y!r} {u!r}\n")
        ids = list(range(base + 1, base + len(pos) + 1))
        if curve.closed:
            ids.append(ids[0])
        out.write("l " + " ".join(map(str, ids)) + "\n")
        base += len(pos)
        for j, ((s, t), (x, y, u)) in enumerate(zip(curve.grid_params.tolist(), pos.tolist())):
            side.write(f"{ci},{j},{int(curve.closed)},{s!r},{t!r},{x!r},{y!r},{u!r}\n")
    return out.getvalue(), side.getvalue()


# PLY

def mesh_to_ply(mesh: SurfaceMesh) -> bytes:
    _check(mesh)
    faces = np.array(list(_faces(mesh)), dtype="<i4").reshape(-1, 4)
    n_v = mesh.psi.shape[0] * mesh.psi.shape[1]
    header = (
        "ply\nformat binary_little_endian 1.0\n"
        f"comment ias mesh eps={mesh.eps} kind={mesh.kind}\n"
        f"element vertex {n_v}\n"
        "property double x\nproperty double y\nproperty double z\n"
        "property double h_degeneracy\n"
        f"element face {len(faces)}\n"
        "property list uchar int vertex_indices\nend_header\n"
    )
    vert = np.empty(n_v, dtype=[("x", "<f8"), ("y", "<f8"), ("z", "<f8"), ("h", "<f8")])
    flat = mesh.psi.reshape(-1, 3)
    vert["x"], vert["y"], vert["z"] = flat[:, 0], flat[:, 1], flat[:, 2]
    vert["h"] = mesh.h_degeneracy.ravel()
    face = np.empty(len(faces), dtype=[("n", "u1"), ("v", "<i4", (4,))])
    face["n"] = 4
    face["v"] = faces
    return header.encode("ascii") + vert.tobytes() + face.tobytes()


def sidecar_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.stem + ".singular.csv")


def export_mesh(mesh: SurfaceMesh, fmt: str, path, curves: Optional[list] = None) -> list:
    """Write ``mesh`` as obj, ply or csv; returns the paths written."""
    fmt = fmt.lower()
    if fmt not in FORMATS:
        raise ExportError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")
    if fmt == "csv":
        return [write_atomic(path, mesh_to_csv(mesh))]
    if fmt == "ply":
        return [write_atomic(path, mesh_to_ply(mesh))]
    obj, side = mesh_to_obj(mesh, curves)
    return [write_atomic(path, obj), write_atomic(sidecar_path(path), side)]
