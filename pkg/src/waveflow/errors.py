"""Exception types shared across the package."""


class WaveflowError(Exception):
    """Base class for all waveflow errors."""


class NonHermitianInput(WaveflowError):
    """A matrix required to be Hermitian is not, within tolerance."""


class ConvergenceFailure(WaveflowError):
    """The eigensolver failed to converge."""


class DimensionMismatch(WaveflowError):
    """Operands have incompatible shapes or factor dimensions."""


class ConfigInvalid(WaveflowError):
    """An array configuration or scenario violates its schema."""


class ConfigParseError(ConfigInvalid):
    """A config file could not be parsed; carries line/field context."""

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class NonPhysicalBloch(WaveflowError):
    """Bloch vector lies outside the unit ball."""


class NonDiagonalConfig(WaveflowError):
    """Operation requires a polarization-conserving array (all rotation rates zero)."""


class InvalidGamma(WaveflowError):
    """Path-overlap parameter has magnitude above 1."""


class NonOrthogonalEnvPair(WaveflowError):
    """Environment kets expected to be orthonormal are not."""


class EmptyCurve(WaveflowError):
    """A curve with fewer than two samples cannot be analyzed."""


class NonMonotoneTimeGrid(WaveflowError):
    """Time samples must be strictly increasing."""
