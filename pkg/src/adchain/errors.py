"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """A numeric argument lies outside its allowed domain."""


class InvalidStateError(ValueError):
    """A link state or density matrix violates a physicality constraint."""


class NotInFamilyError(InvalidStateError):
    """A density matrix lies outside the Bell-basis block-diagonal family."""


class ConfigurationError(InvalidParameterError):
    """A chain or sweep configuration is internally inconsistent."""


class RunawayTrialError(RuntimeError):
    """A trial exceeded the step cap; almost certainly a configuration bug."""
