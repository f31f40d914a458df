"""Error taxonomy and distinguished non-boolean results.

Exit-code mapping used by the CLI: parse errors 64, resource caps 65,
internal invariant breaches 70.
"""

from __future__ import annotations


class RaagError(Exception):
    """Base class for all library errors."""


class GraphError(RaagError):
    """Malformed defining graph or unknown vertex/letter."""


class WordParseError(RaagError):
    """Unparseable word, partition, or descriptor text."""


class PartitionError(RaagError):
    """Invalid Whitehead partition data or unsatisfiable hypotheses."""


class DescriptorError(RaagError):
    """Generator descriptor fails its validity check."""


class CapExceeded(RaagError):
    """A configured resource cap (ball size, search states, word guard) was hit."""


class BoundaryClipped(RaagError):
    """A cube-ball computation cannot be certified because it touches the boundary."""


class InvariantBreach(RaagError):
    """An internal certified property failed; indicates a bug, reported loudly."""


# Distinguished results, kept as plain strings so they serialize cleanly.
UNKNOWN = "unknown"
INAPPLICABLE = "inapplicable"
UNDECIDED = "undecided"
