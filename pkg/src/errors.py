"""Exception hierarchy shared by every module."""


class WordMapError(ValueError):
    """Base class for all library errors."""


class ParameterConstraintError(WordMapError):
    """Presentation or family parameters violate their constraints."""


class WordSyntaxError(WordMapError):
    """A word string does not match the word grammar."""

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}: {text!r}")


class WordLimitError(WordMapError):
    """A word exceeds the desk-scale limits (length, exponent size, variable index)."""


class BudgetExceededError(WordMapError):
    """An enumeration would exceed its configured budget."""

    def __init__(self, what: str, required: int, budget: int):
        self.what = what
        self.required = required
        self.budget = budget
        super().__init__(f"{what} needs {required} evaluations, budget is {budget}")


class PreconditionError(WordMapError):
    """An operation was called outside its precondition."""


class ArithmeticOverflowError(WordMapError):
    """A vectorized kernel would leave the exact int64 range."""
