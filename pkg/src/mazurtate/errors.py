"""Error taxonomy shared by every module.

Each class names the precise contract violation; nothing here is ever used
for flow control except where a caller explicitly documents catching it.
"""


class MazurTateError(Exception):
    """Base class for all package-specific failures."""


class PrecisionExhausted(MazurTateError):
    """A valuation query hit the p^B precision cap without resolving."""


class ZeroInput(MazurTateError):
    """An operation that requires a nonzero input received zero."""


class NotAUnit(MazurTateError):
    """Element is not invertible in the ring where inversion was requested."""


class BadReduction(MazurTateError):
    """A Hecke/counting operation was asked for at a prime of bad reduction
    without table data to cover it."""


class BoundExceeded(MazurTateError):
    """A stated search or truncation bound was exceeded."""


class SmallPrimeUnsupported(MazurTateError):
    """Reduction data at ell in {2,3} was needed but not supplied."""


class NotRationalNewform(MazurTateError):
    """Hecke kernel intersection did not cut out one-dimensional plus/minus
    eigenspaces with rational eigenvalues."""


class ConductorMismatch(MazurTateError):
    """A character's conductor is incompatible with the requested modulus."""


class ConductorError(MazurTateError):
    """A character was evaluated at an argument sharing a factor with its
    conductor where a unit value was required (e.g. psi(ell) = 0 in h_ell)."""


class NoConventionMatches(MazurTateError):
    """Neither index convention of the vertical three-term relation holds."""


class SkippedMuPositive(MazurTateError):
    """A transition check was requested on an instance with mu > 0; the
    identity is only asserted under mu = 0, so the instance is skipped."""


class DescentResidual(MazurTateError):
    """Iterated division by (1+T)^{p^m} - 1 left a non-constant residue."""


class CoefficientDrift(MazurTateError):
    """A quantity proved rational came out non-rational (exact arithmetic
    makes this a hard internal error, never a tolerance issue)."""


class AddViolated(MazurTateError):
    """An additive prime fails to stay additive in the extension, violating
    the standing hypothesis on additive reduction."""


class NotSubgroup(MazurTateError):
    """Supplied generators do not generate a subgroup of the unit group in
    the expected sense, or a claimed containment of character groups fails."""


class ToleranceUnreachable(MazurTateError):
    """A numerical check cannot certify the requested tolerance (tail bound
    too large, or ambiguous Fricke sign)."""
