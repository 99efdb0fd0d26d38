"""Exception types shared across the package."""

from __future__ import annotations


class HeffterError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(HeffterError):
    """Row and column fill totals disagree (m*s != n*k)."""


class InvalidT(HeffterError):
    """The subgroup order t does not divide 2*m*s."""


class PreconditionViolated(HeffterError):
    """Arguments fall outside the contract of the called operation."""


class NonExistent(HeffterError):
    """No array with the requested parameters exists."""


class OpenCase(HeffterError):
    """Parameters land in the case this toolkit deliberately does not cover."""


class BranchUnavailable(HeffterError):
    """Admissible parameters reached no construction branch; an implementation gap."""


class DuplicateAbsoluteValue(HeffterError):
    """The same absolute value occurs in more than one cell."""

    def __init__(self, value: int, locations):
        self.value = value
        self.locations = list(locations)
        super().__init__(f"absolute value {value} occurs at {self.locations}")


class HeightMismatch(HeffterError):
    """Blocks of different heights cannot be juxtaposed."""


class CellCollision(HeffterError):
    """Two placements target the same cell."""

    def __init__(self, cell, existing: int, incoming: int):
        self.cell = cell
        self.existing = existing
        self.incoming = incoming
        super().__init__(
            f"cell {cell} already holds {existing}, refusing to write {incoming}"
        )


class CountMismatch(HeffterError):
    """A collection has the wrong cardinality for the requested construction."""


class ShapeViolation(HeffterError):
    """Block shape is incompatible with the target arrangement."""


class UnknownBlock(HeffterError):
    """No catalog entry with the requested name."""


class InvalidBlockParams(HeffterError):
    """Catalog entry instantiated with missing or unusable parameters."""


class VerificationFailed(HeffterError):
    """A constructed array failed its own verification; always a bug."""


class ParseError(HeffterError):
    """An array file could not be parsed."""
