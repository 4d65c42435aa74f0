"""Shared exception types."""


class BlowUpError(RuntimeError):
    """A simulated quantity became non-finite.

    Carries enough context (time, step index, offending quantity) for the
    caller to report a clean failure instead of propagating NaNs.
    """

    def __init__(self, what: str, time: float | None = None, step: int | None = None):
        self.what = what
        self.time = time
        self.step = step
        parts = [f"non-finite value in {what}"]
        if step is not None:
            parts.append(f"at step {step}")
        if time is not None:
            parts.append(f"(t={time:g})")
        super().__init__(" ".join(parts))


class ConfigError(ValueError):
    """A scenario configuration key is missing, unknown, or unparseable."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"config key '{key}': {message}")
