"""Exception hierarchy shared by all setcomp modules."""


class SetcompError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(SetcompError):
    def __init__(self, message, span=None, expected=()):
        super().__init__(message)
        self.message = message
        self.span = span
        self.expected = frozenset(expected)

    def __str__(self):
        loc = f" at {self.span}" if self.span is not None else ""
        exp = ""
        if self.expected:
            exp = " (expected " + ", ".join(sorted(self.expected)) + ")"
        return f"{self.message}{loc}{exp}"


class DuplicateDefinition(SetcompError):
    pass


class UnknownName(SetcompError):
    pass


class ArityMismatch(SetcompError):
    pass


class UnsupportedConstruct(SetcompError):
    """A construct (TC, the subset atom, the HF constant, ...) is used
    while the theory configuration does not enable it."""


class NotEvaluable(SetcompError):
    """The expression is statically valid but has no terminating query
    plan (it relies on a non-constructive rule, or denotes an infinite
    set like the HF constant)."""


class BudgetExceeded(SetcompError):
    def __init__(self, consumed, max_steps):
        super().__init__(f"evaluation budget exceeded ({consumed} of {max_steps} steps)")
        self.consumed = consumed
        self.max_steps = max_steps


class UnboundVariable(SetcompError):
    pass


class NotAnOrdinalNumeral(SetcompError):
    pass


class NotAPair(SetcompError):
    pass
