"""Exception types shared across the package."""


class DoubleCatError(Exception):
    """Base class. `witness` carries the offending ids when there are any."""

    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness


class BoundaryMismatch(DoubleCatError):
    pass


class MissingEntry(DoubleCatError):
    pass


class EckmannHiltonViolation(DoubleCatError):
    pass


class DirectionMismatch(DoubleCatError):
    pass


class BaseMismatch(DoubleCatError):
    pass


class NoFactorization(DoubleCatError):
    pass


class NonUniqueFactorization(DoubleCatError):
    pass


class NotFramed(DoubleCatError):
    pass


class NotInducing(DoubleCatError):
    pass


class IllFormedComposite(DoubleCatError):
    pass


class BudgetExceeded(DoubleCatError):
    pass


class DocumentError(DoubleCatError):
    """A document that cannot be read. `where` locates the problem."""

    def __init__(self, message="", where=None):
        super().__init__(f"{where}: {message}" if where is not None else message, witness=where)
        self.where = where


class DocSyntaxError(DocumentError):
    """Not well-formed text; `where` is (line, column)."""


class SchemaError(DocumentError):
    """Wrong shape; `where` is the path to the offending value."""


class RangeError(DocumentError):
    """An id that points at nothing; `where` is the path to it."""


class Budget:
    """Counts enumeration steps and raises BudgetExceeded past the limit.

    A limit of None means unbounded.
    """

    def __init__(self, limit=None, what="enumeration"):
        self.limit = limit
        self.used = 0
        self.what = what

    def spend(self, n=1):
        self.used += n
        if self.limit is not None and self.used > self.limit:
            raise BudgetExceeded(
                f"{self.what} exceeded budget of {self.limit} steps", witness=self.used
            )


def as_budget(budget, what="enumeration"):
    if isinstance(budget, Budget):
        return budget
    return Budget(budget, what)
