"""Exceptions raised by the miner, the oracle and the command line."""


class NegMineError(Exception):
    """Base error for this package."""


class InputError(NegMineError, ValueError):
    """Inputs violate an operation's contract."""


class EmptyDatabase(InputError):
    """The basket source produced zero transactions."""

    def __init__(self, message="database contains no transactions"):
        super().__init__(message)


class UnknownItem(InputError):
    """An item id or label is not part of the database."""

    def __init__(self, item):
        self.item = item
        super().__init__(f"unknown item: {item!r}")


class EmptyItemset(InputError):
    """An operation that needs a non-empty itemset got the empty one."""


class OverlappingItemsets(InputError):
    """Two itemsets that must be disjoint share items."""

    def __init__(self, a, b):
        self.a = a
        self.b = b
        super().__init__(f"itemsets overlap: {tuple(a)} and {tuple(b)}")


class DivisionUndefined(InputError, ZeroDivisionError):
    """A ratio measure was asked for with a zero denominator."""


class InvalidThreshold(InputError):
    """A mining threshold lies outside its allowed range."""


class TooSmall(InputError):
    """An itemset is too small to be split into two non-empty parts."""


class UniverseTooLarge(InputError):
    """The brute-force oracle refuses item universes beyond its guard."""


class InvalidParameter(InputError):
    """A generator or CLI parameter is out of range."""


class MalformedReport(InputError):
    """A report file does not follow the report schema."""
