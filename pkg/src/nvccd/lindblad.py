"""Open-system evolution of the density matrix with a level-1<->2 collapse.

The master equation is integrated in the nine-component form obtained by
row-flattening rho into xi = (rho11, rho12, rho13, rho21, rho22, rho23,
rho31, rho32, rho33).  The collapse operator is sqrt(gamma) times the real
symmetric generator exchanging levels 1 and 2 (a Gell-Mann matrix), which
relaxes the 1-2 population difference at rate 2*gamma and damps coherences
involving level 3 at rate gamma/2.

Two independent right-hand sides are provided: the component form used by
the compiled integrator, and the matrix form

    drho/dt = -i[H, rho] - 1/2 (L^dag L rho + rho L^dag L - 2 L rho L^dag)

which serves as the oracle guarding the component transcription.  All nine
components are integrated; the trace identity (the nine derivatives sum to
zero) is kept as a free invariant check instead of eliminating one equation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels, _rhs
from ._run import drive_packs, noise_paths, time_grid
from .drive import drive_amplitude
from .errors import IntegrationError
from .hamiltonian import NVParams
from .qutrit import entropy_series, purity_series

GELL_MANN_12 = np.array([[0.0, 1.0, 0.0],
                         [1.0, 0.0, 0.0],
                         [0.0, 0.0, 0.0]], dtype=complex)

TRACE_DRIFT_TOL = 1e-6
POSITIVITY_WARN_TOL = 1e-6


@dataclass
class LindbladParams:
    """Hamiltonian parameters plus the relaxation rate of the collapse."""

    nv: NVParams
    gamma: float

    def __post_init__(self):
        if self.gamma < 0.0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")


def collapse_operator(gamma: float) -> np.ndarray:
    """L = sqrt(gamma) times the hard-coded level-1<->2 generator."""
    return np.sqrt(gamma) * GELL_MANN_12


def xi_from_rho(rho: np.ndarray) -> np.ndarray:
    """Row-flattened 9-vector of a 3x3 density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {rho.shape}")
    return rho.reshape(9).copy()


def rho_from_xi(xi: np.ndarray) -> np.ndarray:
    xi = np.asarray(xi, dtype=complex)
    if xi.shape != (9,):
        raise ValueError(f"expected a 9-vector, got shape {xi.shape}")
    return xi.reshape(3, 3).copy()


def validate_xi(xi: np.ndarray, tol: float = 1e-8) -> None:
    """Trace and conjugate-pair structure of a flattened density matrix."""
    xi = np.asarray(xi, dtype=complex)
    tr = xi[0] + xi[4] + xi[8]
    if abs(tr - 1.0) > tol:
        raise ValueError(f"trace deviates from 1 by {abs(tr - 1.0):.3e}")
    pairs = ((1, 3), (2, 6), (5, 7))
    for a, b in pairs:
        if abs(xi[a] - xi[b].conjugate()) > tol:
            raise ValueError(f"components {a+1} and {b+1} are not conjugates")


def lindblad_rhs(xi: np.ndarray, params: LindbladParams, t: float,
                 zeta: float = 0.0, zeta1: float = 0.0) -> np.ndarray:
    """Component-form time derivative of the flattened density matrix.

    The sampled detuning noise zeta shifts the detuning (delta -> delta -
    zeta); zeta1 is the relative drive-amplitude noise.
    """
    xi = np.asarray(xi, dtype=complex)
    cm = 0.5 * drive_amplitude(params.nv.drive, "minus", t, noise=zeta1)
    cp = 0.5 * drive_amplitude(params.nv.drive, "plus", t, noise=zeta1)
    d = params.nv.delta_plus - zeta
    return np.array(_rhs.xi_derivative(*xi, cm, cp, d, params.gamma), dtype=complex)


def lindblad_rhs_matrix(rho: np.ndarray, H: np.ndarray, gamma: float) -> np.ndarray:
    """Matrix-form oracle: -i[H, rho] plus the dissipator of the collapse."""
    rho = np.asarray(rho, dtype=complex)
    H = np.asarray(H, dtype=complex)
    L = collapse_operator(gamma)
    Ld = L.conj().T
    LdL = Ld @ L
    drho = -1j * (H @ rho - rho @ H)
    drho -= 0.5 * (LdL @ rho + rho @ LdL - 2.0 * (L @ rho @ Ld))
    return drho


@dataclass
class LindbladResult:
    """Sampled open-system trajectory with conservation diagnostics."""

    t: np.ndarray
    rhos: np.ndarray            # (n, 3, 3)
    purity: np.ndarray
    entropy: np.ndarray
    trace_drift: np.ndarray     # |Tr rho - 1| per sample
    herm_residual: np.ndarray   # max |rho - rho^dag| per sample
    min_eigenvalue: np.ndarray


def observables_from_rhos(rhos: np.ndarray,
                          trace_tol: float = TRACE_DRIFT_TOL,
                          positivity_warn_tol: float = POSITIVITY_WARN_TOL,
                          context: str = "") -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(purity, entropy, min eigenvalue) for a stack of density matrices.

    Raises IntegrationError on trace drift beyond ``trace_tol``; warns (with
    the worst eigenvalue) when positivity is violated beyond the integrator
    tolerance but still within ``positivity_warn_tol``.
    """
    traces = np.einsum("...ii->...", rhos).real
    drift = np.abs(traces - 1.0).max()
    if not np.isfinite(drift) or drift > trace_tol:
        raise IntegrationError(
            f"trace drift {drift:.3e} exceeds {trace_tol}{context}")
    lam_min = np.linalg.eigvalsh(rhos).min(axis=-1)
    worst = lam_min.min()
    if worst < -positivity_warn_tol:
        raise IntegrationError(
            f"positivity violated: eigenvalue {worst:.3e}{context}")
    if worst < -1e-8:
        warnings.warn(f"positivity slightly violated: worst eigenvalue {worst:.3e}{context}")
    pur = purity_series(rhos, trace_tol=trace_tol)
    ent = entropy_series(rhos, positivity_tol=positivity_warn_tol)
    return pur, ent, lam_min


def propagate_lindblad(params: LindbladParams, rho0: np.ndarray, t_max: float,
                       dt: float = 0.001, sample_every: int = 100,
                       noise=None,
                       trace_tol: float = TRACE_DRIFT_TOL) -> LindbladResult:
    """Fixed-step RK4 of the nine-component system.

    Noise streams attached to the params (detuning on the Hamiltonian,
    relative amplitude noise on the drive) are sampled once per step and
    held constant across the four stages; ``noise`` overrides the detuning
    stream for this run.  Invariants are checked at every output sample.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    n_steps, n_samples, t = time_grid(t_max, dt, sample_every)
    if noise is not None:
        zeta = noise.sample_path(n_steps, dt)
        hook = params.nv.drive.amplitude_noise
        zeta1 = hook.sample_path(n_steps, dt) if hook is not None else np.zeros(n_steps)
    else:
        zeta, zeta1 = noise_paths(params.nv, n_steps, dt)
    dpl, dmn = drive_packs(params.nv)
    out = np.empty((n_samples, 9), dtype=complex)
    _kernels.lindblad_trajectory(xi_from_rho(rho0), dt, n_steps, sample_every,
                                 dpl, dmn, params.nv.delta_plus, params.gamma,
                                 zeta, zeta1, out)
    rhos = out.reshape(-1, 3, 3)
    herm = np.abs(rhos - rhos.conj().transpose(0, 2, 1)).max(axis=(1, 2))
    pur, ent, lam_min = observables_from_rhos(rhos, trace_tol=trace_tol)
    traces = np.einsum("nii->n", rhos).real
    return LindbladResult(t=t, rhos=rhos, purity=pur, entropy=ent,
                          trace_drift=np.abs(traces - 1.0),
                          herm_residual=herm, min_eigenvalue=lam_min)
