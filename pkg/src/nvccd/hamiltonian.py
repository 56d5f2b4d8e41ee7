"""Time-dependent 3x3 Hamiltonian of the driven NV ground-state spin.

In the |0>, |-1>, |+1> basis the drive couples the ground level to each
excited level with half its branch amplitude, and a common detuning sits on
both excited diagonal entries.  Spin-bath noise shifts that detuning by a
sampled value zeta, so the diagonal reads -(delta_plus - zeta).  Everything
is in units of the zero-field splitting; the splitting itself never enters.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .drive import DriveConfig, drive_amplitude
from .noise import OUProcess


@dataclass
class NVParams:
    """Detuning, drive configuration and optional bath-noise stream."""

    delta_plus: float
    drive: DriveConfig
    detuning_noise: OUProcess | None = field(default=None, repr=False)


def hamiltonian_at(params: NVParams, t: float,
                   zeta: float | None = None,
                   zeta1: float | None = None) -> np.ndarray:
    """Hermitian 3x3 Hamiltonian at time t.

    zeta is the sampled detuning noise (0 when absent), zeta1 the sampled
    relative drive-amplitude noise.  The propagators hold both constant
    within an integrator step and pass them in explicitly; this function is
    pure.
    """
    z = 0.0 if zeta is None else float(zeta)
    cm = 0.5 * drive_amplitude(params.drive, "minus", t, noise=zeta1)
    cp = 0.5 * drive_amplitude(params.drive, "plus", t, noise=zeta1)
    diag = -params.delta_plus + z
    return np.array([[0.0, cm, cp],
                     [cm, diag, 0.0],
                     [cp, 0.0, diag]], dtype=complex)
