"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the physical or mathematical domain of an operation."""


class NoDeltaShock(ValueError):
    """No single delta shock connects the given data.

    Attributes
    ----------
    reason : str
        One of ``"a_negative"``, ``"u_jump_positive"``, ``"degenerate_constant"``.
    """

    def __init__(self, reason: str, message: str = ""):
        self.reason = reason
        super().__init__(message or reason)


class NoMeasureSolution(ValueError):
    """No delta-containing solution with one or two waves exists for the pair."""

    def __init__(self, region, justification: str):
        self.region = region
        self.justification = justification
        super().__init__(f"{region}: {justification}")
