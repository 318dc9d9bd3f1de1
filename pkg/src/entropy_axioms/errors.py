"""Exception hierarchy shared by every module of the package."""


class EntropyAxiomsError(ValueError):
    """Base class for all input and numerical errors raised here."""


class NotSquare(EntropyAxiomsError):
    pass


class NotHermitian(EntropyAxiomsError):
    pass


class NoConvergence(EntropyAxiomsError):
    pass


class SizeOverflow(EntropyAxiomsError):
    pass


class DimensionMismatch(EntropyAxiomsError):
    pass


class IndexOutOfRange(EntropyAxiomsError):
    pass


class ZeroVector(EntropyAxiomsError):
    pass


class MultiBlockUnsupported(EntropyAxiomsError):
    pass


class RankExceedsDim(EntropyAxiomsError):
    pass


class InvalidState(EntropyAxiomsError):
    """A density matrix (or state file) violates a named invariant."""

    def __init__(self, invariant, detail=""):
        self.invariant = invariant
        msg = f"invariant violated: {invariant}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class InvalidSpectrum(EntropyAxiomsError):
    pass


class AlphaInvalid(EntropyAxiomsError):
    pass


class NotNormalized(EntropyAxiomsError):
    pass


class NotMultiple(EntropyAxiomsError):
    pass


class MarginalViolation(EntropyAxiomsError):
    pass


class BoundViolation(EntropyAxiomsError):
    """A proven inequality failed numerically; indicates a bug, not bad input."""


class NTooSmall(EntropyAxiomsError):
    pass


class UniformSpectrum(EntropyAxiomsError):
    pass
