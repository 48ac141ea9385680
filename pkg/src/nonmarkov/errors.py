"""Exception hierarchy for numerical and physical failure modes."""


class NonMarkovError(Exception):
    """Base class for all library errors."""


class NonConvergence(NonMarkovError):
    """Adaptive quadrature exhausted its subdivision budget before the
    requested tolerance was met."""


class PoleOutOfRange(NonMarkovError):
    """Principal-value pole does not lie strictly inside the integration
    interval."""


class NoBracket(NonMarkovError):
    """Root finder was given endpoints that do not bracket a sign change."""


class DegenerateArgument(NonMarkovError):
    """Bose occupation requested at a non-positive frequency."""


class StepTooCoarse(NonMarkovError):
    """Volterra time step failed the dt vs dt/2 Richardson self-check."""


class ImaginaryLeak(NonMarkovError):
    """Equal-time noise function acquired a non-negligible imaginary part."""


class NotConverged(NonMarkovError):
    """Long-time limit requested but the quantity has not reached a plateau
    on the available time grid."""


class UZero(NonMarkovError):
    """Master-equation coefficients are singular at an exact zero of the
    propagator."""


class DegenerateState(NonMarkovError):
    """Coherence function is 0/0 because a population vanishes (vacuum
    initial state at zero temperature)."""


class NoDecay(NonMarkovError):
    """Asymptotic measure requires a decaying Markov coherence, i.e.
    J(omega0) > 0."""


class ExactZero(NonMarkovError):
    """Ratio-type measure undefined where the exact correlator vanishes."""
