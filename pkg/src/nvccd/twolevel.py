"""Two-level verification suite for the concatenated decoupling mechanism.

Executable checks (not production API) of the protection hierarchy on a
spin-1/2: a resonant carrier turns bath dephasing into suppressed
transitions between the x-dressed states, and a weaker quadrature term
enveloped at the first Rabi frequency re-encodes the qubit in y-dressed
states that are protected against the carrier's own amplitude noise.

The leakage metric is the probability of having left the noise-free dressed
trajectory,

    leakage(t) = 1 - |<psi_ref(t)|psi(t)>|^2,

with psi_ref the lab-frame evolution of the same initial state with all
noise switched off.  Deterministic micromotion (counter-rotating wiggles)
is common to both evolutions and cancels in the overlap, so this isolates
the noise-induced transitions out of the followed dressed state.  Prepared
in an x-dressed eigenstate it is the transition probability in the sigma_x
dressed basis; prepared in a y-dressed eigenstate, in the sigma_y basis.

All constructed Hamiltonians follow the printed forms exactly; note the
lab-frame quadrature term carries amplitude amp2 (no factor 2), so the
effective second-order gap realized dynamically is amp2/2.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _kernels, _rhs
from ._run import time_grid
from .noise import OUProcess, from_intensity, realization_seed

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

# noise channel ids for seed derivation
SOURCE_TL_BATH = 0
SOURCE_TL_DRIVE1 = 1
SOURCE_TL_DRIVE2 = 2


@dataclass
class TwoLevelParams:
    """Level splitting, drive amplitudes and optional noise streams.

    The rotating-wave picture requires amp2 << amp1 << omega; a violated
    hierarchy warns but never rejects.
    """

    omega: float
    amp1: float
    amp2: float = 0.0
    bath_noise: OUProcess | None = field(default=None, repr=False)
    drive1_noise: OUProcess | None = field(default=None, repr=False)
    drive2_noise: OUProcess | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.amp2 > self.amp1:
            warnings.warn(f"rotating-wave hierarchy violated: amp2={self.amp2} "
                          f"> amp1={self.amp1}", stacklevel=3)


def lab_frame_hamiltonian(p: TwoLevelParams, t: float,
                          samples: tuple[float, float, float] = (0.0, 0.0, 0.0)) -> np.ndarray:
    """Full lab-frame Hamiltonian at time t.

    samples = (zeta_b, zeta_1, zeta_2): bath shift of the splitting and
    relative amplitude fluctuations of the two drive terms.
    """
    zb, z1, z2 = samples
    hz = 0.5 * (p.omega + zb)
    hx = _rhs.twolevel_drive(2, p.omega, p.amp1, p.amp2, t, z1, z2)
    return hz * SIGMA_Z + hx * SIGMA_X


def rwa_effective_hamiltonian(p: TwoLevelParams, order: int,
                              samples: tuple[float, float, float] = (0.0, 0.0, 0.0)) -> np.ndarray:
    """Rotating-wave Hamiltonian in the first or second interaction picture.

    Order 1: (amp1(1+zeta1)/2) sigma_x + (zeta_b/2) sigma_z -- bath noise is
    transverse to the dressed axis.  Order 2: (amp2(1+zeta2)/2) sigma_y plus
    the residual first-order fluctuation amp1*zeta1/2 as a pure energy shift
    (identity), which cannot drive transitions between the y-dressed states.
    """
    zb, z1, z2 = samples
    if order == 1:
        return 0.5 * p.amp1 * (1.0 + z1) * SIGMA_X + 0.5 * zb * SIGMA_Z
    if order == 2:
        return 0.5 * p.amp2 * (1.0 + z2) * SIGMA_Y + 0.5 * p.amp1 * z1 * np.eye(2, dtype=complex)
    raise ValueError(f"order must be 1 or 2, got {order}")


def dressed_state(order: int, sign: int = +1) -> np.ndarray:
    """Eigenstate of the dressed axis: sigma_x for order 1, sigma_y for 2."""
    if order == 1:
        v = np.array([1.0, sign * 1.0], dtype=complex)
    elif order == 2:
        v = np.array([1.0, sign * 1.0j], dtype=complex)
    else:
        raise ValueError(f"order must be 1 or 2, got {order}")
    return v / np.sqrt(2.0)


def initial_state(name: str) -> np.ndarray:
    """Named preparations: 'x'/'y' dressed eigenstates, 'up' bare state."""
    if name == "x":
        return dressed_state(1)
    if name == "y":
        return dressed_state(2)
    if name == "up":
        return np.array([1.0, 0.0], dtype=complex)
    raise ValueError(f"unknown initial state {name!r} (expected x, y or up)")


def to_interaction_picture(states: np.ndarray, t: np.ndarray, omega: float) -> np.ndarray:
    """Unwind the free precession: psi_I = exp(+i (omega/2) sigma_z t) psi."""
    phase = np.exp(0.5j * omega * t)
    out = np.empty_like(states)
    out[:, 0] = states[:, 0] * phase
    out[:, 1] = states[:, 1] / phase
    return out


def to_second_picture(states_I: np.ndarray, t: np.ndarray, amp1: float) -> np.ndarray:
    """Unwind the first-order dressed precession:
    psi_II = exp(+i (amp1/2) sigma_x t) psi_I."""
    c = np.cos(0.5 * amp1 * t)
    s = 1j * np.sin(0.5 * amp1 * t)
    out = np.empty_like(states_I)
    out[:, 0] = c * states_I[:, 0] + s * states_I[:, 1]
    out[:, 1] = s * states_I[:, 0] + c * states_I[:, 1]
    return out


def dressed_populations(states_picture: np.ndarray, order: int) -> np.ndarray:
    """|<dressed +/-|psi>|^2 in the order's dressed basis, shape (n, 2)."""
    plus = dressed_state(order, +1)
    minus = dressed_state(order, -1)
    p = np.abs(states_picture @ plus.conj()) ** 2
    m = np.abs(states_picture @ minus.conj()) ** 2
    return np.stack([p, m], axis=1)


@dataclass
class NoiseChannel:
    """Intensity/correlation-time pair for one noise source."""

    intensity: float
    tau: float


@dataclass
class TwoLevelNoiseConfig:
    """Which sources fluctuate, and the seed namespace for realizations."""

    bath: NoiseChannel | None = None
    drive1: NoiseChannel | None = None
    drive2: NoiseChannel | None = None
    master_seed: int = 0


@dataclass
class LeakageResult:
    """Realization-averaged departure from the noise-free dressed trajectory."""

    t: np.ndarray
    mean_leakage: np.ndarray
    stderr: np.ndarray
    n_realizations: int
    order: int
    initial: str

    def late_time_mean(self, fraction: float = 0.25) -> float:
        """Time average of the mean leakage over the final fraction of the run."""
        n = len(self.t)
        return float(self.mean_leakage[int(n * (1.0 - fraction)):].mean())


def _paths(channel: NoiseChannel | None, master_seed: int, realization: int,
           source: int, n_steps: int, dt: float) -> np.ndarray:
    if channel is None or channel.intensity == 0.0:
        return np.zeros(n_steps)
    proc = from_intensity(channel.intensity, channel.tau,
                          seed=realization_seed(master_seed, realization, source))
    return proc.sample_path(n_steps, dt)


def dressed_population_leakage(p: TwoLevelParams, noise_cfg: TwoLevelNoiseConfig,
                               t_max: float, dt: float, n_real: int,
                               order: int, initial: str = "x",
                               sample_every: int = 100) -> LeakageResult:
    """Integrate the lab-frame dynamics under noise and measure the mean
    probability of leaving the noise-free dressed trajectory.

    order selects the drive actually applied: 0 none, 1 carrier only,
    2 carrier plus quadrature term.  The reference trajectory uses the same
    drive with all noise off, so the leakage vanishes identically when no
    channel fluctuates.
    """
    if order not in (0, 1, 2):
        raise ValueError(f"order must be 0, 1 or 2, got {order}")
    n_steps, n_samples, t = time_grid(t_max, dt, sample_every)
    psi0 = initial_state(initial)

    ref = np.empty((n_samples, 2), dtype=complex)
    zeros = np.zeros(n_steps)
    _kernels.twolevel_trajectory(psi0, dt, n_steps, sample_every,
                                 p.omega, p.amp1, p.amp2, order,
                                 zeros, zeros, zeros, ref)

    zbs = np.empty((n_real, n_steps))
    zd1s = np.empty((n_real, n_steps))
    zd2s = np.empty((n_real, n_steps))
    for r in range(n_real):
        zbs[r] = _paths(noise_cfg.bath, noise_cfg.master_seed, r, SOURCE_TL_BATH, n_steps, dt)
        zd1s[r] = _paths(noise_cfg.drive1, noise_cfg.master_seed, r, SOURCE_TL_DRIVE1, n_steps, dt)
        zd2s[r] = _paths(noise_cfg.drive2, noise_cfg.master_seed, r, SOURCE_TL_DRIVE2, n_steps, dt)
    out = np.empty((n_real, n_samples, 2), dtype=complex)
    _kernels.twolevel_batch(psi0, dt, n_steps, sample_every,
                            p.omega, p.amp1, p.amp2, order,
                            zbs, zd1s, zd2s, out)

    overlap = out[:, :, 0] * ref[:, 0].conj() + out[:, :, 1] * ref[:, 1].conj()
    leak = 1.0 - np.abs(overlap) ** 2
    mean = leak.mean(axis=0)
    stderr = leak.std(axis=0, ddof=1) / np.sqrt(n_real) if n_real > 1 else np.zeros(n_samples)
    return LeakageResult(t=t, mean_leakage=mean, stderr=stderr,
                         n_realizations=n_real, order=order, initial=initial)


# Suite parameter choices (the construction itself fixes no numbers):
# the bath comparison uses the pinned intensity 0.25 and carrier amp1 =
# 0.1*omega; correlation times are chosen slow against the relevant dressed
# gap (bath: tau >> 1/amp1; drive noise: tau >> 1/(amp2/2)) so the dressed
# protection regime applies, and run lengths long enough for the unprotected
# comparison case to accumulate clearly separated leakage.
BATH_INTENSITY = 0.25
BATH_TAU = 100.0
BATH_AMP1 = 0.1
BATH_T_MAX = 100.0
MW_INTENSITY = 0.25
MW_TAU = 2000.0
MW_T_MAX = 2000.0
SUITE_OMEGA = 1.0
SUITE_AMP1 = 0.05
SUITE_AMP2 = 0.01
SUITE_DT = 0.005


@dataclass
class ProtectionComparison:
    """Paired-noise comparison of two drive settings."""

    protected: LeakageResult
    unprotected: LeakageResult
    protected_label: str
    unprotected_label: str

    @property
    def factor(self) -> float:
        """unprotected / protected late-time leakage (> 1 means protection)."""
        denom = self.protected.late_time_mean()
        return self.unprotected.late_time_mean() / denom if denom > 0 else np.inf


def bath_protection_comparison(n_real: int = 100, t_max: float = BATH_T_MAX,
                               dt: float = SUITE_DT, master_seed: int = 2024,
                               intensity: float = BATH_INTENSITY,
                               tau: float = BATH_TAU,
                               omega: float = SUITE_OMEGA,
                               amp1: float | None = None) -> ProtectionComparison:
    """Bath dephasing with and without the order-1 carrier, identical
    zeta_b paths (same seeds).  Prepared in the x-dressed eigenstate: with
    the carrier the bath field is transverse to the dressed axis and
    transitions are suppressed by the Rabi gap; without it the same paths
    randomize the state."""
    a1 = BATH_AMP1 * omega if amp1 is None else amp1
    noise = TwoLevelNoiseConfig(bath=NoiseChannel(intensity, tau), master_seed=master_seed)
    p = TwoLevelParams(omega=omega, amp1=a1, amp2=0.0)
    driven = dressed_population_leakage(p, noise, t_max, dt, n_real, order=1, initial="x")
    undriven = dressed_population_leakage(p, noise, t_max, dt, n_real, order=0, initial="x")
    return ProtectionComparison(protected=driven, unprotected=undriven,
                                protected_label="order-1 drive",
                                unprotected_label="no drive")


def drive_noise_protection_comparison(n_real: int = 60, t_max: float = MW_T_MAX,
                                      dt: float = SUITE_DT, master_seed: int = 2025,
                                      intensity: float = MW_INTENSITY,
                                      tau: float = MW_TAU,
                                      omega: float = SUITE_OMEGA,
                                      amp1: float = SUITE_AMP1,
                                      amp2: float = SUITE_AMP2) -> ProtectionComparison:
    """Carrier amplitude noise zeta_1 under order-1 vs order-2 driving,
    identical zeta_1 paths (same seeds).  Prepared in the y-dressed
    eigenstate: under order-2 driving that is the protected dressed state
    (the zeta_1 term is transverse to the y axis and suppressed by the
    second-order gap); under order-1 driving alone the same state is an
    unprotected superposition of x-dressed states whose relative phase
    diffuses with the integrated noise."""
    noise = TwoLevelNoiseConfig(drive1=NoiseChannel(intensity, tau), master_seed=master_seed)
    p = TwoLevelParams(omega=omega, amp1=amp1, amp2=amp2)
    second = dressed_population_leakage(p, noise, t_max, dt, n_real, order=2, initial="y")
    first = dressed_population_leakage(p, noise, t_max, dt, n_real, order=1, initial="y")
    return ProtectionComparison(protected=second, unprotected=first,
                                protected_label="order-2 drive (sigma_y basis)",
                                unprotected_label="order-1 drive (sigma_x basis)")


def rwa_validity_error(omega: float = SUITE_OMEGA, amp1: float = SUITE_AMP1,
                       dt: float = 0.001) -> float:
    """Worst amplitude deviation, over one Rabi cycle, between the noise-free
    lab evolution moved to the interaction picture and the ideal rotating-
    wave evolution exp(-i (amp1/2) sigma_x t) of the bare up state."""
    p = TwoLevelParams(omega=omega, amp1=amp1, amp2=0.0)
    t_max = 2.0 * np.pi / amp1
    n_steps, n_samples, t = time_grid(t_max, dt, sample_every=10)
    psi0 = initial_state("up")
    out = np.empty((n_samples, 2), dtype=complex)
    zeros = np.zeros(n_steps)
    _kernels.twolevel_trajectory(psi0, dt, n_steps, 10, omega, amp1, 0.0, 1,
                                 zeros, zeros, zeros, out)
    lab_I = to_interaction_picture(out, t, omega)
    c = np.cos(0.5 * amp1 * t)
    s = -1j * np.sin(0.5 * amp1 * t)
    ideal = np.stack([c * psi0[0] + s * psi0[1], s * psi0[0] + c * psi0[1]], axis=1)
    return float(np.abs(lab_I - ideal).max())
