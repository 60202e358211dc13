class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class BudgetExceeded(RuntimeError):
    """An enumeration or expansion would exceed its configured budget."""

    def __init__(self, what: str, needed, budget):
        super().__init__(f"{what}: needs {needed}, budget is {budget}")
        self.what = what
        self.needed = needed
        self.budget = budget
