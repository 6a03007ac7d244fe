"""Exception types shared across the package."""
from __future__ import annotations


class VoxelsmithError(Exception):
    """Base class for all package errors."""


class SchematicError(VoxelsmithError):
    """Malformed, duplicate, out-of-bounds, or unknown-id schematic content."""


class OutOfBoundsError(VoxelsmithError):
    """Coordinate outside the fixed world bounds."""


class OccupiedError(VoxelsmithError):
    """Attempt to place a block into an occupied cell."""


class EmptyGridError(VoxelsmithError):
    """Operation requires a non-empty grid."""


class DefinitionSyntaxError(VoxelsmithError):
    """A `def:` utterance that does not match the definition shape."""


class StoreError(VoxelsmithError):
    """Definition-store misuse (bad define, double seeding, ...)."""


class SelfReferenceError(StoreError):
    """Definition head appears verbatim in its own body."""


class ExpansionCycleError(VoxelsmithError):
    """Expansion revisited a definition head along the current path."""

    def __init__(self, head: str):
        super().__init__(f"definition cycle through head: {head!r}")
        self.head = head


class ExpansionDepthError(VoxelsmithError):
    """Expansion exceeded the configured depth cap."""


class UnsupportedLabelError(VoxelsmithError):
    """Generator has no parameters for the requested label."""


class PendingHintError(VoxelsmithError):
    """Session has (or lacks) a pending hint where the opposite is required."""


class SnapshotError(VoxelsmithError):
    """Session snapshot is corrupt or carries an unsupported version."""
