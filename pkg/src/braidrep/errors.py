"""Exception types shared across the package."""


class BraidRepError(Exception):
    """Base class for every error raised by this package."""


class ZeroDenominator(BraidRepError):
    """A rational function was constructed with a zero denominator."""


class ZeroInverse(BraidRepError):
    """Inversion of the zero rational function was requested."""


class DenominatorVanishes(BraidRepError):
    """A denominator evaluated to zero under the given assignment."""


class InvalidSize(BraidRepError):
    """Presentation parameters out of range (n < 2 or k < 1)."""


class InvalidQuotient(BraidRepError):
    """A quotient map does not respect the relations of the presentation."""

    def __init__(self, quotient: str, relation: str):
        self.quotient = quotient
        self.relation = relation
        super().__init__(f"{quotient} does not respect relation {relation}")


class IndexOutOfRange(BraidRepError):
    """A block embedding index is outside 1..n-1."""


class DimensionMismatch(BraidRepError):
    """Matrix data does not match the requested strand count."""


class UnknownFamily(BraidRepError):
    """A generator family is missing from a representation."""


class UnknownName(BraidRepError):
    """No catalog entry under the requested name."""


class InvalidChoice(BraidRepError):
    """A block combination outside the classified families was requested."""


class BudgetExceeded(BraidRepError):
    """A configured search or branching budget was exhausted."""

    def __init__(self, what: str, budget: int):
        self.what = what
        self.budget = budget
        super().__init__(f"{what} exceeded budget {budget}")


class LayoutMismatch(BraidRepError):
    """A solution branch and an unknown layout disagree on variables."""


class SingularConjugator(BraidRepError):
    """A diagonal conjugator has a zero entry."""
