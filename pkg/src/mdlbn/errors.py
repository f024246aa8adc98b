"""Exception types shared by the package."""


class InputError(ValueError):
    """Malformed or out-of-range input."""


class CapacityError(RuntimeError):
    """Requested computation exceeds a configured size limit."""
