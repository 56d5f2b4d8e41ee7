"""Failure types raised by the propagators and the ensemble driver."""

from __future__ import annotations


class IntegrationError(RuntimeError):
    """An integrator left its validity domain (drift, blowup, inconsistency).

    Carries enough context to replay the failing trajectory: the time
    reached, and for ensemble members the realization index and seed.
    """

    def __init__(self, message: str, t_fail: float | None = None,
                 realization: int | None = None, seed=None):
        super().__init__(message)
        self.t_fail = t_fail
        self.realization = realization
        self.seed = seed


class RiccatiBlowupError(IntegrationError):
    """The Riccati variable exceeded the divergence guard.

    This marks the known validity boundary of the block decomposition
    (the corner element of the propagator passing through zero); rerun
    with the direct backend instead of re-seeding silently.
    """
