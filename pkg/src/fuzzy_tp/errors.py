"""Exception types shared across the package."""


class TransferPricingError(ValueError):
    """Base class for every domain error raised by fuzzy_tp."""


class DegenerateRange(TransferPricingError):
    pass


class InvalidGamma(TransferPricingError):
    pass


class IncompatibleModes(TransferPricingError):
    pass


class EmptyCut(TransferPricingError):
    pass


class DomainError(TransferPricingError):
    pass


class InvalidLambda(TransferPricingError):
    pass


class InvalidArgs(TransferPricingError):
    pass


class DivergentIntegral(TransferPricingError):
    pass


class NegativeQuantity(TransferPricingError):
    pass


class OutsideSupport(TransferPricingError):
    pass


class NoIncentive(TransferPricingError):
    """tau1 == tau2: there is nothing to shift."""


class SideMismatch(TransferPricingError):
    """The arm's length side does not match the shifting direction."""


class InfeasiblePenalty(TransferPricingError):
    """No audit intensity makes the optimum an alpha-cut."""


class NotInEscapeRegime(TransferPricingError):
    pass


class NoRoot(TransferPricingError):
    pass


class Singular(TransferPricingError):
    """Evaluation requested on a singular locus (tau1 == tau2, tau_i == 0, ...)."""


class OutOfRange(TransferPricingError):
    pass


class NonConvexWarning(UserWarning):
    pass
