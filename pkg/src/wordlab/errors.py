"""Exception hierarchy shared by every module."""


class WordLabError(Exception):
    """Base class for all library errors."""


class ParseError(WordLabError, ValueError):
    pass


class NotPrime(WordLabError, ValueError):
    pass


class DegreeOutOfRange(WordLabError, ValueError):
    pass


class SizeBudgetExceeded(WordLabError):
    pass


class DivisionByZero(WordLabError, ZeroDivisionError):
    pass


class OrderBudgetExceeded(WordLabError):
    pass


class NotPrimePower(WordLabError, ValueError):
    pass


class UnsupportedKind(WordLabError, ValueError):
    pass


class NonsubgroupSpec(WordLabError, ValueError):
    pass


class DomainMismatch(WordLabError, ValueError):
    pass


class EmptyWord(ParseError):
    pass


class BudgetExceeded(WordLabError):
    def __init__(self, required: int, budget: int):
        super().__init__(f"needs {required} evaluations, budget is {budget}")
        self.required = required
        self.budget = budget


class TargetNotInGroup(WordLabError, ValueError):
    pass


class NotNormal(WordLabError, ValueError):
    pass


class ReducednessViolation(WordLabError, AssertionError):
    pass


class PreconditionViolation(WordLabError, ValueError):
    pass


class ZeroPolynomial(WordLabError, ValueError):
    pass


class CoprimalityViolation(WordLabError, ValueError):
    pass
