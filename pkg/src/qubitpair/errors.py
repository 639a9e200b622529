"""Exception types shared across the package."""


class QubitPairError(Exception):
    """Base class for all errors raised by this package."""


class InvalidStateError(QubitPairError):
    """A matrix fails the density-matrix invariants (Hermiticity, trace, positivity)."""


class NumericalFailureError(QubitPairError):
    """A numerical routine produced residues outside its tolerance budget."""


class DomainError(QubitPairError):
    """An evaluation point left the domain where the quantity is defined."""


class SingularSpectrumError(DomainError):
    """An eigenvalue of the evolving state vanished, so its logarithm diverges."""

    def __init__(self, which: str, value: float):
        self.which = which
        self.value = value
        super().__init__(
            f"singular spectrum: eigenvalue {which} = {value!r} is too small to take a log"
        )


class FormulaInconsistencyError(QubitPairError):
    """A closed-form shortcut produced a value outside its mathematically valid range."""
