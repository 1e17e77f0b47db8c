"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A parameter lies outside the supported domain."""


class BracketError(RuntimeError):
    """A root solver failed to bracket (or keep bracketed) a sign change."""


class ActivationCapError(RuntimeError):
    """A simulation replicate exceeded its activated-vertex cap."""
