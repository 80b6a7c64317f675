"""Exception hierarchy shared by all modules."""


class ClusterIntError(Exception):
    """Base class for all package errors."""


# -- polynomial kernel ------------------------------------------------------

class ZeroInput(ClusterIntError):
    """A nonzero function was required."""


class NonSquare(ClusterIntError):
    """Determinant of a non-square matrix."""


class EvaluationSingular(ClusterIntError):
    """A denominator vanished at every sampled evaluation point."""


class BadTruncation(ClusterIntError):
    """Truncation order below the minimum."""


class NotDivisible(ClusterIntError):
    """Exact polynomial division left a remainder."""


# -- Poisson layer ----------------------------------------------------------

class NotVanishing(ClusterIntError):
    """The structure does not vanish at the requested base point."""


class NotRegular(ClusterIntError):
    """A structure entry has a pole at the requested base point."""


class DependentSystem(ClusterIntError):
    """The functions are not independent (Jacobian determinant is zero)."""


class InequalityViolated(ClusterIntError):
    """deg(mu^low) < rk(pi0)/2; signals an internal inconsistency."""


class NotLogCanonical(ClusterIntError):
    """A pair of functions fails the log-canonical bracket test."""


class CountShortfall(ClusterIntError):
    """Fewer independent functions were found than the magic number."""


# -- type-A / family layers -------------------------------------------------

class DimensionMismatch(ClusterIntError):
    """Weights of different sizes were paired."""


class NotReduced(ClusterIntError):
    """A word is not a reduced word of its permutation."""


class NonPolynomialStructure(ClusterIntError):
    """A pulled-back bracket failed to be polynomial."""


class WrongWord(ClusterIntError):
    """An operation requires one specific reduced word."""


class StructureViolated(ClusterIntError):
    """A Hamiltonian-flow structure hypothesis fails; carries (k, bracket)."""


class TruncationInsufficient(ClusterIntError):
    """Jet order hit the configured cap before the lowest term stabilized."""


class SingularLocus(ClusterIntError):
    """Input lies outside the domain of a birational inverse."""


class NotCasimir(ClusterIntError):
    """A claimed Casimir has a nonzero bracket with some coordinate."""
