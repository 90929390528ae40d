"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`IASError`.
The CLI maps :class:`InputError` subclasses to exit code 2 and
:class:`NumericalError` subclasses to exit code 3.
"""


class IASError(Exception):
    pass


class InputError(IASError, ValueError):
    """Bad user input: parameters, expressions, files."""


class NumericalError(IASError, ArithmeticError):
    """A computation hit a pole, a trust radius, or failed to converge."""


class AlgebraMismatchError(InputError):
    pass


class ExpressionSyntaxError(InputError):
    pass


class ParameterError(InputError):
    pass


class CurveFileError(InputError):
    pass


class InvalidPairError(InputError):
    pass


class SingularDivisorError(NumericalError, ZeroDivisionError):
    pass


class TrustRadiusError(NumericalError):
    pass


class PathSingularityError(NumericalError):
    pass


class QuadratureError(NumericalError):
    pass


class InconsistentPeriodError(NumericalError):
    pass


class PoleError(NumericalError):
    pass


class BlowUpError(NumericalError):
    pass


class RiccatiResidualError(NumericalError):
    """R does not solve the Riccati equation; the transform is refused."""


class CharacteristicDataError(NumericalError):
    pass


class InconsistentDataError(NumericalError):
    pass


class FitDegenerateError(NumericalError):
    pass


class ExportError(InputError):
    """Output path cannot be written, or a mesh file cannot be read back."""


class ConfigError(InputError):
    pass
