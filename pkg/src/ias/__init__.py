"""Improper affine spheres and maps from Weierstrass data over C_eps.

Typical use::

    from ias import get_example, eval_surface, verify_mesh
    mesh = eval_surface(get_example("rotational"))
    print(verify_mesh(mesh).to_text())
"""

from .cnum import CEps, J
from .errors import IASError, InputError, NumericalError
from .gallery import example_names, get_example
from .holo import parse
from .verify import hessian_residual, structure_residuals, verify_mesh
from .weier import (DomainSpec, SurfaceMesh, WeierstrassData, detect_period, eval_surface,
                    extract_singular_curves, integrate_FdG)

__version__ = "0.1.0"

__all__ = [
    "CEps", "J", "IASError", "InputError", "NumericalError", "example_names", "get_example",
    "parse", "hessian_residual", "structure_residuals", "verify_mesh", "DomainSpec",
    "SurfaceMesh", "WeierstrassData", "detect_period", "eval_surface",
    "extract_singular_curves", "integrate_FdG",
]
