"""Exception types shared across the index structures."""


class FatRangeError(Exception):
    """Base class for all library errors."""


class InputDomainError(FatRangeError, ValueError):
    """Input coordinates are outside the supported domain (e.g. negative)."""


class FatnessError(FatRangeError, ValueError):
    """A box violates the promised aspect-ratio bound."""


class DuplicatePointError(FatRangeError, ValueError):
    """Input point sets must be duplicate-free."""


class CapacityError(FatRangeError, ValueError):
    """A small-set structure was handed more points than its cap allows."""


class ContractError(FatRangeError, ValueError):
    """A caller violated an operation precondition (e.g. non-square query)."""


class OracleGuardError(FatRangeError, ValueError):
    """Brute-force oracle refused an input that exceeds its feasibility guard."""
