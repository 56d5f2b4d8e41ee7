"""Shared propagation plumbing: time grids, noise paths, parameter packing."""

from __future__ import annotations

import numpy as np

from .hamiltonian import NVParams


def time_grid(t_max: float, dt: float, sample_every: int) -> tuple[int, int, np.ndarray]:
    """(n_steps, n_samples, sampled times) for a fixed-step run.

    Samples land at t = 0 and every ``sample_every`` steps thereafter; a
    trailing partial segment (when n_steps is not a multiple) is integrated
    but not sampled.
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    if t_max <= 0.0:
        raise ValueError(f"t_max must be positive, got {t_max}")
    if sample_every < 1:
        raise ValueError(f"sample_every must be >= 1, got {sample_every}")
    n_steps = int(round(t_max / dt))
    if n_steps < 1:
        raise ValueError(f"t_max/dt gives no steps ({t_max}/{dt})")
    n_samples = n_steps // sample_every + 1
    t = np.arange(n_samples) * (sample_every * dt)
    return n_steps, n_samples, t


def noise_paths(params: NVParams, n_steps: int, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Per-step (detuning, drive-amplitude) noise samples; zeros when the
    corresponding stream is not attached.  One value per step, held constant
    across the RK4 stages of that step."""
    if params.detuning_noise is not None:
        zeta = params.detuning_noise.sample_path(n_steps, dt)
    else:
        zeta = np.zeros(n_steps)
    hook = params.drive.amplitude_noise
    if hook is not None:
        zeta1 = hook.sample_path(n_steps, dt)
    else:
        zeta1 = np.zeros(n_steps)
    return zeta, zeta1


def drive_packs(params: NVParams) -> tuple[np.ndarray, np.ndarray]:
    """Per-branch (order, omega, amp1, amp2, amp3, constant) float arrays
    in the layout the kernels consume."""
    dr = params.drive
    omega_p, a1p, a2p, a3p, cp = dr.branch("plus")
    omega_m, a1m, a2m, a3m, cm = dr.branch("minus")
    order = float(int(dr.order))
    dpl = np.array([order, omega_p, a1p, a2p, a3p, cp])
    dmn = np.array([order, omega_m, a1m, a2m, a3m, cm])
    return dpl, dmn
