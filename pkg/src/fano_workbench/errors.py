"""Exception hierarchy for the workbench.

Input problems (bad grammar, wrong dimensions, unsupported field modes) and
budget exhaustion are separate branches so the CLI can map them to distinct
exit codes.  InternalInvariantViolation is reserved for states that should be
unreachable; raising it is always a bug.
"""


class WorkbenchError(Exception):
    """Base class for all workbench errors."""


class InputError(WorkbenchError):
    """Malformed or inconsistent user input (CLI exit code 2)."""


class BudgetError(WorkbenchError):
    """A configured search/retry budget was exhausted (CLI exit code 3)."""


class InternalInvariantViolation(WorkbenchError):
    """An internal consistency check failed (CLI exit code 4; always a bug)."""


# -- exact-algebra ----------------------------------------------------------

class NonHomogeneous(InputError):
    """Polynomial text mixes terms of different total degree."""


class UnknownVariable(InputError):
    """Polynomial text references a variable index outside 0..n."""


class ZeroPolynomial(InputError):
    """The zero polynomial where a degree could not be inferred from context."""


class DegreeMismatch(InputError):
    """Substitution images (or other form families) disagree in degree."""


class CharacteristicTooSmall(InputError):
    """Prime modulus p <= degree d; integer factors up to d must stay invertible."""


class NotPrime(InputError):
    """Field modulus is not a prime > 2."""


# -- varieties --------------------------------------------------------------

class DimensionMismatch(InputError):
    """Ambient dimensions of two objects disagree."""


class Unsupported(InputError):
    """Operation not available in this field mode."""


class SearchSpaceTooLarge(BudgetError):
    """Requested exhaustive scan exceeds the configured point budget."""


class SmoothnessNotAchieved(BudgetError):
    """Random generation did not produce a smooth-evidence hypersurface in budget."""


# -- expansion --------------------------------------------------------------

class PointNotOnX(InputError):
    """Expansion center does not lie on the hypersurface."""


class CoordinateVanishesAtCenter(InputError):
    """A supplied distinguished coordinate vanishes at the expansion center."""


class PlaneNotInX(InputError):
    """Expansion center plane is not contained in the hypersurface."""


class NotAFanoPoint(InputError):
    """Diagnosed fiber point is not a common zero of the local equations."""


class DownwardSetNotFound(BudgetError):
    """No downward basis found within the center-resampling budget.

    Carries the seeds tried so the failure is reportable as data.
    """

    def __init__(self, message, seeds=None):
        super().__init__(message)
        self.seeds = list(seeds or [])


class IndexOutOfRange(InputError):
    """A multiset index mentions a symbol outside 0..k-1."""


# -- curves -----------------------------------------------------------------

class CurveNotOnX(InputError):
    """Parameterized curve does not lie on the hypersurface."""


class TwistOutOfWindow(InputError):
    """Requested twist is outside the validity window of the kernel formula."""


# -- unirational ------------------------------------------------------------

class PhiInsideX(InputError):
    """The sampled enveloping plane lies inside X; the residual is undefined."""


class NotNested(InputError):
    """Expected a containment (center in plane, plane in hypersurface) that fails."""


class DegreeZeroResidual(InputError):
    """Residual of a degree-1 hypersurface would have degree 0."""


class PointNotOnQ(InputError):
    """Base point for a quadric parameterization does not lie on the quadric."""


class PointSingular(InputError):
    """Base point for a quadric parameterization is a singular point."""


class RetryBudgetExhausted(BudgetError):
    """Sampling retries exhausted; carries a tally of failure causes."""

    def __init__(self, message, tally=None):
        super().__init__(message)
        self.tally = dict(tally or {})
