"""Exception hierarchy.

Everything raised on bad input derives from :class:`InputError`; the CLI maps
those to exit code 2 and :class:`BudgetExceeded` to exit code 3.
"""


class CorrnetError(Exception):
    """Base class for all package errors."""


class InputError(CorrnetError, ValueError):
    """Invalid user input or violated precondition."""


class DuplicateSymbol(InputError):
    pass


class NonPositivePrice(InputError):
    def __init__(self, row, symbol, value):
        self.row, self.symbol, self.value = row, symbol, value
        super().__init__(f"non-positive price {value!r} at row {row} ({symbol})")


class NonNumericPrice(InputError):
    def __init__(self, row, symbol, value):
        self.row, self.symbol, self.value = row, symbol, value
        super().__init__(f"non-numeric price {value!r} at row {row} ({symbol})")


class MissingCell(InputError):
    def __init__(self, row, symbol):
        self.row, self.symbol = row, symbol
        super().__init__(f"missing price at row {row} ({symbol})")


class TooFewRows(InputError):
    pass


class InvalidLag(InputError):
    pass


class ZeroVarianceColumn(InputError):
    def __init__(self, symbols):
        self.symbols = list(symbols)
        super().__init__("zero-variance return columns: " + ", ".join(self.symbols))


class InvalidFraction(InputError):
    pass


class EmptyGraph(InputError):
    pass


class InvalidK(InputError):
    pass


class MissingLabel(InputError):
    pass


class InsufficientHistory(InputError):
    pass


class BudgetExceeded(CorrnetError):
    """Clique enumeration hit its resource limit.

    No partial result is returned; ``stats`` records how far the search got.
    """

    def __init__(self, stats):
        self.stats = dict(stats)
        detail = ", ".join(f"{k}={v}" for k, v in self.stats.items())
        super().__init__(f"clique enumeration budget exceeded ({detail})")
