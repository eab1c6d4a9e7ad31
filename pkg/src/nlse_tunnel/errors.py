"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid grid, solver or scenario parameters."""


class DimensionError(ValueError):
    """Array length or grid mismatch between operands."""


class DegenerateFieldError(ValueError):
    """Field has no structure to analyse (e.g. identically zero)."""


class BlowUpError(RuntimeError):
    """Non-finite values appeared during time stepping."""

    def __init__(self, step_index, time):
        super().__init__(f"non-finite field at step {step_index} (t={time:.6g})")
        self.step_index = step_index
        self.time = time


class SnapshotFormatError(ValueError):
    """Corrupt or truncated snapshot file."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset
