"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`QelError`,
so callers (notably the CLI) can tell a usage/invariant problem apart from a
bug.  Most also derive from :class:`ValueError`.
"""

import numpy as np


class QelError(Exception):
    """Base class for all library errors."""


class InvariantError(QelError, ValueError):
    """An input object fails one of its type invariants."""


class NonHermitian(InvariantError):
    pass


class NotDensity(InvariantError):
    pass


class NotTracePreserving(InvariantError):
    pass


class NotPovm(InvariantError):
    pass


class BadEnsemble(InvariantError):
    pass


class ShapeMismatch(QelError, ValueError):
    pass


# Aliases used by the entropy and channel functions.
DimMismatch = ShapeMismatch
LengthMismatch = ShapeMismatch


class BadSubsystemIndex(QelError, ValueError):
    pass


class BadPermutation(QelError, ValueError):
    pass


class BadDimensions(QelError, ValueError):
    pass


class DomainError(QelError, ValueError):
    """A scalar function was applied outside its domain."""


class SingularState(QelError, ValueError):
    """A strictly positive operator was required but a (numerically) zero
    eigenvalue was found."""


class NotPositive(SingularState):
    pass


class NoConvergence(QelError, np.linalg.LinAlgError):
    pass


class DefectiveMatrix(QelError, ArithmeticError):
    """A non-Hermitian matrix is numerically non-diagonalizable."""


class NotMarkov(QelError, ValueError):
    pass


class NotCommuting(QelError, ValueError):
    pass


class ZeroOutcomeProbability(QelError, ValueError):
    pass


class EnsembleMismatch(QelError, ValueError):
    pass
