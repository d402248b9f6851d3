"""Exception taxonomy.

Errors split into two kinds: mathematical failures (a verification or
certification genuinely failed) and resource/configuration failures (a budget,
precision or input problem prevented the computation from finishing).  The CLI
maps the former to exit code 1 and the latter to exit code 2.
"""


class OrdzetaError(Exception):
    kind = "mathematical"


class ResourceError(OrdzetaError):
    kind = "resource"


# -- resource / configuration ------------------------------------------------

class PrecisionExhausted(ResourceError):
    """A chain-ring computation needed digits beyond the working precision."""


class InterpolationUnstable(ResourceError):
    """Rational reconstruction lacked the required stability margin."""


class BudgetExceeded(ResourceError):
    """An enumeration or search exceeded its configured budget."""


class ConfigInvalid(ResourceError):
    """Run configuration failed schema validation."""


class UnsupportedModule(ResourceError):
    """The requested module/variant combination is not realizable here."""


class CutoffReached(ResourceError):
    """An iteration hit its cutoff without certifying an answer."""


class NoStabilization(ResourceError):
    """A rank computed at two precisions disagreed."""


# -- mathematical ------------------------------------------------------------

class Undecided(OrdzetaError):
    """An isomorphism test could neither certify nor refute."""


class DecompositionUncertified(OrdzetaError):
    """Indecomposability could not be certified within budget."""


class NotAnOverring(OrdzetaError):
    """Claimed overring fails containment or closure."""


class NotRightRejective(OrdzetaError):
    """A chain step failed the rejectivity certificate."""


class HeredityFailed(OrdzetaError):
    """An ideal in a candidate heredity chain failed a certificate."""


class CatalogIncomplete(OrdzetaError):
    """A module catalog failed a completeness probe."""


class NoMaximalReduction(OrdzetaError):
    """A catalog chain stabilized before reaching a maximal-order catalog."""


class EmptyChainStep(OrdzetaError):
    """A rejective chain step removed no class."""


class NonIntegralScale(OrdzetaError):
    """A series rescale hit a non-integral power of p on a nonzero term."""


# The same failure seen from the zeta side; kept as an alias so both spellings
# used around the package refer to one class.
ShiftNonIntegral = NonIntegralScale


class NotNilpotent(OrdzetaError):
    """A matrix or ideal expected to be nilpotent is not."""


class NotGorenstein(OrdzetaError):
    """Functional-equation check requested for a non-Gorenstein order."""


class CheckFailed(OrdzetaError):
    """An internal cross-check that should always pass did not."""
