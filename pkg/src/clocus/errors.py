"""Exception hierarchy shared by every clocus module."""


class ClocusError(Exception):
    """Base class for all library errors."""


class DimensionMismatchError(ClocusError, ValueError):
    """Operands live in different rings (variable count or field differ)."""


class DegenerateParametrizationError(ClocusError, ValueError):
    pass


class InvalidCameraError(ClocusError, ValueError):
    pass


class ProfileMismatchError(ClocusError, ValueError):
    pass


class InvalidSetupError(ClocusError, ValueError):
    pass


class DegenerateSetupError(ClocusError):
    """No admissible block choice exists; the setup violates genericity."""


class NeedsHigherDegreeError(ClocusError):
    """The Hilbert function did not stabilize below the requested degree."""


class InconsistencyError(ClocusError):
    pass


class NotOnVarietyError(ClocusError, ValueError):
    pass


class DimensionGuardError(ClocusError, ValueError):
    pass


class NonGenericError(ClocusError):
    pass


class ConstructionFailedError(ClocusError):
    pass


class InvalidLinesError(ClocusError, ValueError):
    pass


class ConfigError(ClocusError, ValueError):
    pass
