"""Exception types shared across the package."""


class StructuralError(ValueError):
    """A graph fails the unitrivalent-tree invariants (cycle, bad degree)."""


class DomainError(ValueError):
    """An argument is outside the mathematical domain of an operation."""


class NoCrossingError(DomainError):
    """The relation/diagram ratio never crosses 1 for this color count."""


class CapacityError(RuntimeError):
    """An enumeration exceeded its configured size guard."""


class UnluckyPrimeError(RuntimeError):
    """Modular ranks kept disagreeing after exhausting retry primes."""


class CacheError(RuntimeError):
    """The result cache could not be read or written."""
