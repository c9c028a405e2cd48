"""Exception hierarchy shared by all modules."""


class WordEqError(Exception):
    """Base class for every error raised by the package."""


class AlphabetError(WordEqError):
    pass


class MonoidError(WordEqError):
    pass


class ParseError(WordEqError):
    """Malformed problem or system text; carries a 1-based line number."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}: " if column is None else f"line {line}, column {column}: "
        super().__init__(where + message)


class BudgetError(WordEqError):
    """A configured step or enumeration budget was exhausted."""


class ArcRejected(WordEqError):
    """An arc violates one of its defining side conditions.

    ``clause`` names the violated condition, e.g. ``"df6:mu"``.
    """

    def __init__(self, clause, message=""):
        self.clause = clause
        super().__init__(f"{clause}: {message}" if message else clause)
