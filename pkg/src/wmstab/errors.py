class BudgetExceeded(RuntimeError):
    """A search would exceed its configured work or materialization cap."""

    def __init__(self, message: str, needed: int | None = None, budget: int | None = None):
        super().__init__(message)
        self.needed = needed
        self.budget = budget


class DuplicateValues(ValueError):
    """The prefix lists some value twice; tuple counts presume a set."""
