"""Three-level state and operator algebra with coherence observables.

Basis ordering is |0>, |-1>, |+1> (referred to as levels 1, 2 and 3).  All
operators are dense 3x3 complex arrays; no larger Hilbert spaces are
supported.  Purity and entropy use the base-3 normalization, so the
maximally mixed state has purity 1/3 and entropy 1, while any pure state
has purity 1 and entropy 0.
"""

from __future__ import annotations

import numpy as np

DIM = 3

HERMITICITY_TOL = 1e-9
TRACE_TOL = 1e-9
POSITIVITY_TOL = 1e-8
NORM_TOL = 1e-9

#: trace tolerance used when gating observables; looser than the
#: construction-time tolerance so it flags integrator drift, not roundoff
DRIFT_TOL = 1e-6

_LOG3 = np.log(3.0)

MAXIMALLY_MIXED = np.eye(DIM, dtype=complex) / DIM


class PositivityError(ValueError):
    """An eigenvalue fell below the allowed negative tolerance."""


def basis_state(level: int) -> np.ndarray:
    """Amplitude vector of basis level 1, 2 or 3."""
    if level not in (1, 2, 3):
        raise ValueError(f"level must be 1, 2 or 3, got {level}")
    psi = np.zeros(DIM, dtype=complex)
    psi[level - 1] = 1.0
    return psi


def normalize(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    norm = np.linalg.norm(psi)
    if norm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return psi / norm


def validate_state(psi: np.ndarray, tol: float = NORM_TOL) -> None:
    psi = np.asarray(psi)
    if psi.shape != (DIM,):
        raise ValueError(f"state must have shape (3,), got {psi.shape}")
    if abs(np.linalg.norm(psi) - 1.0) > tol:
        raise ValueError(f"state norm deviates from 1 by more than {tol}")


def populations(psi: np.ndarray) -> np.ndarray:
    """Level populations |C_i|^2; sums to one for a normalized state."""
    psi = np.asarray(psi, dtype=complex)
    return (psi * psi.conj()).real


def density_from_state(psi: np.ndarray) -> np.ndarray:
    """Projector |psi><psi| of a (normalized) amplitude vector."""
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def validate_density(rho: np.ndarray,
                     hermiticity_tol: float = HERMITICITY_TOL,
                     trace_tol: float = TRACE_TOL,
                     positivity_tol: float = POSITIVITY_TOL) -> None:
    """Check the density-matrix invariants, raising on the first violation."""
    rho = np.asarray(rho)
    if rho.shape != (DIM, DIM):
        raise ValueError(f"density matrix must be 3x3, got {rho.shape}")
    herm = np.abs(rho - rho.conj().T).max()
    if herm > hermiticity_tol:
        raise ValueError(f"Hermiticity residual {herm:.3e} exceeds {hermiticity_tol}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"trace deviates from 1 by {abs(tr - 1.0):.3e} (> {trace_tol})")
    lam_min = np.linalg.eigvalsh(rho).min()
    if lam_min < -positivity_tol:
        raise PositivityError(
            f"eigenvalue {lam_min:.3e} below -{positivity_tol} (positivity violated)")


def purity(rho: np.ndarray, trace_tol: float = DRIFT_TOL) -> float:
    """Tr(rho^2): 1 for pure states, 1/3 for the maximally mixed state.

    Rejects input whose trace has drifted from 1 by more than ``trace_tol``
    (a symptom of upstream integrator failure, not of physics).
    """
    return float(purity_series(rho[np.newaxis], trace_tol=trace_tol)[0])


def purity_series(rhos: np.ndarray, trace_tol: float = DRIFT_TOL) -> np.ndarray:
    """Tr(rho^2) over a stack of density matrices of shape (..., 3, 3)."""
    rhos = np.asarray(rhos, dtype=complex)
    traces = np.einsum("...ii->...", rhos).real
    worst = np.abs(traces - 1.0).max()
    if worst > trace_tol:
        raise ValueError(f"trace drift {worst:.3e} exceeds {trace_tol}")
    return np.einsum("...ij,...ji->...", rhos, rhos).real


def entropy(rho: np.ndarray, positivity_tol: float = POSITIVITY_TOL) -> float:
    """Base-3 von Neumann entropy -Tr(rho log3 rho) in [0, 1].

    Eigenvalues in [-positivity_tol, 0) are clamped to 0 (integrator noise
    must not crash the observable); anything lower raises PositivityError.
    """
    return float(entropy_series(rho[np.newaxis], positivity_tol=positivity_tol)[0])


def entropy_series(rhos: np.ndarray, positivity_tol: float = POSITIVITY_TOL) -> np.ndarray:
    """Base-3 von Neumann entropy over a stack of shape (..., 3, 3)."""
    rhos = np.asarray(rhos, dtype=complex)
    lam = np.linalg.eigvalsh(rhos)
    lam_min = lam.min()
    if lam_min < -positivity_tol:
        raise PositivityError(
            f"eigenvalue {lam_min:.3e} below -{positivity_tol} (positivity violated)")
    lam = np.clip(lam, 0.0, None)
    terms = np.where(lam > 0.0, lam * np.log(np.where(lam > 0.0, lam, 1.0)), 0.0)
    return -terms.sum(axis=-1) / _LOG3 + 0.0  # +0.0 normalizes -0.0
