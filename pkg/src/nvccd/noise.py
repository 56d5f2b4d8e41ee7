"""Ornstein-Uhlenbeck noise generator with exact one-step discretization.

Models both the spin-bath detuning fluctuation and the relative microwave
amplitude noise.  The update

    zeta(t+dt) = zeta(t) * exp(-dt/tau) + sqrt((c*tau/2) * (1 - exp(-2dt/tau))) * n

with n a unit normal draws from the exact transition density, so it is valid
for any step size.  The stationary variance is sigma^2 = c*tau/2, the
autocorrelation sigma^2 * exp(-|t|/tau), and the noise intensity (the single
strength knob used throughout) is I_n = sigma^2 * tau.  Every process starts
at zeta(0) = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import lfilter

# detuning (spin bath) and drive-amplitude (microwave source) noise channels
SOURCE_BATH = 0
SOURCE_DRIVE_AMPLITUDE = 1


def realization_seed(master_seed: int, realization: int, source: int) -> np.random.SeedSequence:
    """Per-(realization, source) seed, splittable and order-independent.

    Guarantees independent streams across an ensemble and bitwise
    reproducibility regardless of how realizations are scheduled.
    """
    return np.random.SeedSequence(master_seed, spawn_key=(realization, source))


@dataclass
class OUProcess:
    """Stateful Ornstein-Uhlenbeck sample stream.

    tau:  relaxation time (> 0), same time units as the integrators.
    c:    diffusion constant (>= 0).
    seed: int or numpy SeedSequence; the stream is deterministic given it.

    A process is owned by a single trajectory; it is never shared between
    workers.  ``step`` and ``sample_path`` consume the same underlying
    random stream, so mixing them keeps the path reproducible.
    """

    tau: float
    c: float
    seed: int | np.random.SeedSequence = 0
    current: float = field(default=0.0, init=False)

    def __post_init__(self):
        if self.tau <= 0.0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if self.c < 0.0:
            raise ValueError(f"diffusion constant must be >= 0, got {self.c}")
        self._rng = np.random.Generator(np.random.PCG64(self.seed))

    @property
    def sigma2(self) -> float:
        """Stationary variance c*tau/2."""
        return 0.5 * self.c * self.tau

    @property
    def intensity(self) -> float:
        """Noise intensity I_n = sigma^2 * tau."""
        return self.sigma2 * self.tau

    def reset(self) -> None:
        """Return to zeta = 0 and restart the random stream from the seed."""
        self.current = 0.0
        self._rng = np.random.Generator(np.random.PCG64(self.seed))

    def step(self, dt: float) -> float:
        """Advance by dt and return the new sample (exact discretization)."""
        if dt <= 0.0:
            raise ValueError(f"dt must be positive, got {dt}")
        decay = np.exp(-dt / self.tau)
        kick = np.sqrt(0.5 * self.c * self.tau * (1.0 - np.exp(-2.0 * dt / self.tau)))
        self.current = self.current * decay + kick * self._rng.standard_normal()
        return self.current

    def sample_path(self, n_steps: int, dt: float, include_initial: bool = True) -> np.ndarray:
        """Path of ``n_steps`` successive steps of size dt.

        With ``include_initial`` the returned array has length n_steps and
        holds (zeta(t0), zeta(t0+dt), ..., zeta(t0+(n-1)dt)) -- the layout
        the integrators consume, one held value per step.  Otherwise it
        holds the n_steps values after t0.  Bit-identical to calling
        ``step`` in a loop.
        """
        if dt <= 0.0:
            raise ValueError(f"dt must be positive, got {dt}")
        if n_steps < 1:
            raise ValueError(f"n_steps must be >= 1, got {n_steps}")
        n_new = n_steps - 1 if include_initial else n_steps
        start = self.current
        if n_new == 0:
            return np.array([start])
        decay = np.exp(-dt / self.tau)
        kick = np.sqrt(0.5 * self.c * self.tau * (1.0 - np.exp(-2.0 * dt / self.tau)))
        normals = self._rng.standard_normal(n_new)
        # linear recurrence zeta_k = decay*zeta_{k-1} + kick*n_k as an IIR filter
        zi = np.array([decay * start])
        path, _ = lfilter([kick], [1.0, -decay], normals, zi=zi)
        self.current = float(path[-1])
        if include_initial:
            return np.concatenate(([start], path))
        return path


def from_intensity(intensity: float, tau: float,
                   seed: int | np.random.SeedSequence = 0) -> OUProcess:
    """Process with a given noise intensity I_n = sigma^2 * tau.

    Solving I_n = (c*tau/2)*tau gives c = 2*I_n/tau^2.
    """
    if intensity < 0.0:
        raise ValueError(f"noise intensity must be >= 0, got {intensity}")
    return OUProcess(tau=tau, c=2.0 * intensity / tau**2, seed=seed)
