"""Exception types raised by cfverify."""


class CFVerifyError(Exception):
    """Base class for all library errors."""


class ParameterError(CFVerifyError, ValueError):
    """Invalid distribution or numerical parameter."""


class StructureError(CFVerifyError, ValueError):
    """Widths or shapes do not line up."""


class DimensionChainError(StructureError):
    """Adjacent network layers have incompatible dimensions."""

    def __init__(self, layer, message):
        super().__init__(f"layer {layer}: {message}")
        self.layer = layer


class NumericFailureError(CFVerifyError, ArithmeticError):
    """A propagated characteristic function picked up NaN or inf values."""

    def __init__(self, layer, component, phase):
        super().__init__(
            f"non-finite characteristic function at layer {layer}, "
            f"component {component} ({phase})"
        )
        self.layer = layer
        self.component = component
        self.phase = phase


class UnsupportedOrderError(CFVerifyError, ValueError):
    """Moment order outside the supported range."""


class DegenerateConstraintError(CFVerifyError, ValueError):
    """Half-space normal vector is identically zero."""


class UnboundedQuantileError(CFVerifyError, ArithmeticError):
    """The quantile bracket could not be established."""


class ConfigError(CFVerifyError, ValueError):
    """Base class for configuration file problems."""


class ParseError(ConfigError):
    """The file is not valid JSON."""


class SchemaError(ConfigError):
    """A required field is missing or has the wrong type."""


class RangeError(ConfigError):
    """A field is present but outside its admissible range."""
