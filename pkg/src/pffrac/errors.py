"""Exception types shared across the package."""


class PffracError(Exception):
    """Base class for package errors."""


class NonPositiveJacobian(PffracError):
    """Deformation gradient with det F <= 0."""


class OutOfRangeZ(PffracError):
    """Phase-field value outside [0, 1]."""


class InvalidInvariant(PffracError):
    """Isochoric invariant below its reference value beyond slack."""


class NonPositiveParameter(PffracError):
    """A physical parameter that must be positive is not."""


class InvalidSlit(PffracError):
    """Slit specification not aligned with the structured mesh."""


class NoCrackFound(PffracError):
    """Post-processing found no cracked elements to evaluate."""


class ConfigError(PffracError):
    """Base class for configuration errors."""


class ParseError(ConfigError):
    """Config file is not readable as structured text."""


class ValidationError(ConfigError):
    """Config parsed but violates one or more constraints."""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))
