"""Run configuration: ``key = value`` files with one section per subcommand.

Keys are the long option names of the subcommand (``grid``, ``out``,
``name`` ...), with dashes or underscores.  Values from the file become
argparse defaults, so flags given on the command line win.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .errors import ConfigError

__all__ = ["RunConfig", "read_config_section", "parse_grid"]


def parse_grid(text: str) -> tuple:
    """``"128x64"`` or ``"128"`` -> (128, 64) or (128, 128)."""
    parts = str(text).lower().replace("*", "x").split("x")
    try:
        dims = tuple(int(p) for p in parts)
    except ValueError:
        raise ConfigError(f"grid must look like NxM, got {text!r}") from None
    if len(dims) == 1:
        dims = dims * 2
    if len(dims) != 2 or min(dims) < 2:
        raise ConfigError(f"grid must be NxM with N, M >= 2, got {text!r}")
    return dims


def read_config_section(path, section: str, allowed) -> dict:
    """Entries of ``[section]`` in ``path``; unknown sections and keys are errors."""
    cp = configparser.ConfigParser(interpolation=None, delimiters=("=",), comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    known = {"gallery", "transform", "cauchy", "verify", "export"}
    for sec in cp.sections():
        if sec not in known:
            raise ConfigError(f"{path}: unknown section [{sec}]")
    if not cp.has_section(section):
        return {}
    out = {}
    for key, val in cp.items(section):
        dest = key.strip().replace("-", "_")
        if dest not in allowed:
            raise ConfigError(f"{path}: unknown key {key!r} in [{section}]")
        out[dest] = val.strip()
    return out


@dataclass
class RunConfig:
    """Validated settings of one CLI invocation."""

    command: str
    params: dict = field(default_factory=dict)
    grid: Optional[tuple] = None
    out: Optional[Path] = None
    fmt: Optional[str] = None
    report: Optional[Path] = None
    check: bool = False
    hessian_tol: Optional[float] = None
    structure_tol: Optional[float] = None

    @classmethod
    def from_namespace(cls, ns) -> "RunConfig":
        """Validate the parsed flags before any computation starts."""
        grid = parse_grid(ns.grid) if getattr(ns, "grid", None) is not None else None
        params = {k: v for k, v in vars(ns).items()
                  if k not in ("command", "grid", "out", "fmt", "report", "check", "hessian_tol",
                               "structure_tol", "config", "verbose") and v is not None}
        for name in ("hessian_tol", "structure_tol"):
            val = getattr(ns, name, None)
            if val is not None and not val > 0:
                raise ConfigError(f"--{name.replace('_', '-')} must be positive")
        out = getattr(ns, "out", None)
        report = getattr(ns, "report", None)
        return cls(command=ns.command, params=params, grid=grid, out=out,
                   fmt=getattr(ns, "fmt", None), report=report,
                   check=bool(getattr(ns, "check", False) or report is not None),
                   hessian_tol=getattr(ns, "hessian_tol", None),
                   structure_tol=getattr(ns, "structure_tol", None))
