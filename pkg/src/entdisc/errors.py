"""
Exception hierarchy for entanglement-discrimination.

Every error raised on purpose by the library derives from DiscriminationError.
The concrete classes also derive from ValueError so callers that only catch
builtins keep working.
"""


class DiscriminationError(Exception):
    """Base class for all library errors."""


class DimensionError(DiscriminationError, ValueError):
    """Qubit counts or matrix dimensions do not match, or exceed the cap."""


class PauliError(DiscriminationError, ValueError):
    """Malformed Pauli word or an operation that would store an imaginary phase."""


class StateError(DiscriminationError, ValueError):
    """State is not normalized, not Hermitian, not positive or of the wrong kind."""


class GroupError(DiscriminationError, ValueError):
    """Generators anticommute, are dependent, or do not define a unique state."""


class GraphError(DiscriminationError, ValueError):
    """Graph is malformed or violates a precondition (connectivity, size)."""


class ConfigError(DiscriminationError, ValueError):
    """Invalid optimizer configuration or parameter grid."""


class DataFormatError(DiscriminationError, ValueError):
    """Malformed input file (graph, state, correlations, labels)."""


class SignalError(DiscriminationError, ValueError):
    """Combined observable has zero expectation on the normalization state."""
