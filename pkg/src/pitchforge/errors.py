"""Error taxonomy shared across the package.

The CLI maps these onto process exit codes: invalid input -> 2, size guard
violations -> 3, verification failures -> 1.  Everything else is a plain bug.
"""


class PitchforgeError(Exception):
    """Base class for all package-specific errors."""


class InvalidInputError(PitchforgeError):
    """Malformed or out-of-contract input data (bad JSON, bad indices, ...)."""


class SizeGuardError(PitchforgeError):
    """A desk-scale size guard tripped (see pitchforge.config.Limits)."""


class InfeasibleRestrictionError(PitchforgeError):
    """Fixing variables emptied a covering row: the restricted instance has
    no feasible 0/1 point.  Callers that enumerate restrictions catch this to
    skip the branch."""


class CertificateError(PitchforgeError):
    """A certificate construction step failed (no core found, multiplier
    recovery infeasible, residual not of the expected shape)."""


class VerificationError(PitchforgeError):
    """An object that should verify did not (used by CLI `verify`)."""


class LPError(PitchforgeError):
    """Linear-programming layer failure (no certified optimum obtainable)."""
