"""Exception types shared across the package."""


class TripleCanonError(Exception):
    """Base class for all errors raised by this package."""


class FieldSpecError(TripleCanonError):
    """Illegal combination of base field, involution and form signs."""


class ScalarParseError(TripleCanonError):
    """A scalar string does not match the exact-scalar grammar."""

    def __init__(self, text, position, message):
        super().__init__(f"cannot parse scalar {text!r} at position {position}: {message}")
        self.text = text
        self.position = position


class ZeroScalar(TripleCanonError):
    """A nonzero scalar was required."""


class NotSymmetric(TripleCanonError):
    """The scalar is not fixed by the involution."""


class OddSkewSize(TripleCanonError):
    """The skew anti-identity block only exists in even sizes."""


class IllegalParity(TripleCanonError):
    """A canonical block was requested with a size/sign combination that does not exist."""


class SignNotApplicable(TripleCanonError):
    """A sign parameter was supplied for a coefficient system where signs collapse to 1."""


class FieldMismatch(TripleCanonError):
    """Operands live over different field specs."""


class SingularTransformation(TripleCanonError):
    """A basis-change matrix is not invertible."""


class NotRegular(TripleCanonError):
    """The operation needs an invertible map part (and nonsingular forms)."""


class NotInd1(TripleCanonError):
    """The catalog item is not one of the pair-assembled (hyperbolic) kinds."""


class IrrationalSpectrum(TripleCanonError):
    """The characteristic polynomial does not split over the coefficient field.

    Carries the offending irreducible factor as a coefficient list
    (constant term first, exact scalars).
    """

    def __init__(self, factor_coeffs, message="characteristic polynomial does not split"):
        super().__init__(f"{message}; irreducible factor coefficients {factor_coeffs}")
        self.factor_coeffs = factor_coeffs


class PairingFailure(TripleCanonError):
    """Internal decomposition invariant violated (a bug, not a user error)."""


class DegenerateGram(TripleCanonError):
    """The induced self-pairing of an isotypic group is singular."""


class DegenerateChainPairing(TripleCanonError):
    """A Jordan chain of the pencil pairs to zero against itself."""


class DecompositionError(TripleCanonError):
    """The peeling engine could not make progress (internal error)."""


class VerificationError(TripleCanonError):
    """An emitted certificate failed exact re-verification."""


class DimensionLimit(TripleCanonError):
    """Input exceeds the configured dimension guard."""
