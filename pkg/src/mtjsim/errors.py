"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid device parameters or run configuration."""


class ProtocolError(ValueError):
    """A stimulation protocol was asked for something it cannot provide."""


class MaskError(ValueError):
    """Malformed or mismatched stimulus bitmap."""
