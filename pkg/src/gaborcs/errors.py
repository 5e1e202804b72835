"""Exception hierarchy shared across the package.

Every error raised by library code derives from :class:`GaborCSError` so the
CLI can map computational failures to a single nonzero exit code.
"""


class GaborCSError(Exception):
    """Base class for all gaborcs errors."""


class NotInvertible(GaborCSError):
    """A residue has no multiplicative inverse modulo L (gcd != 1)."""


class NoAdmissibleLength(GaborCSError):
    """No admissible ambient dimension exists at or below the requested bound."""


class DimensionMismatch(GaborCSError):
    """Vector or matrix dimensions are inconsistent with the operator."""


class TooLarge(GaborCSError):
    """A guard against materializing or enumerating something combinatorial."""


class NotAdmissible(GaborCSError):
    """The ambient dimension violates the admissibility conditions."""


class EigensolveFailed(GaborCSError):
    """No eigenvector met the residual tolerance after all fallbacks."""


class BadDimensions(GaborCSError):
    """Measurement operator dimensions are invalid (need 1 <= K <= L)."""


class Infeasible(GaborCSError):
    """The measurement constraint set is empty for the given radius."""


class UnsupportedFormat(GaborCSError):
    """Audio file is not mono PCM16 / IEEE-float WAV."""


class FileTooShort(GaborCSError):
    """Audio file has fewer samples than the requested ambient dimension."""


class IOFailure(GaborCSError):
    """Writing an experiment artifact (CSV/plot) failed."""
