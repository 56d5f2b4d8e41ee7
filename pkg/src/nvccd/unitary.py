"""Closed-system propagation by block decomposition of the evolution operator.

The propagator is factored as U = U1~ * U2~ with

    U1~ = [[I + z w^dag, z], [w^dag, 1]],      U2~ = diag(B, u33),

where the 2-vector z obeys a Riccati flow driven by the Hamiltonian
partition (upper 2x2 block, coupling column V, corner scalar) and
w = -z / (1 + z^dag z).  That choice of w kills the off-diagonal blocks of
the effective generator

    Heff = U1~^-1 H U1~ - i U1~^-1 dU1~/dt,

so the remaining factor stays block diagonal and obeys i dU2~/dt = Heff U2~.
Neither factor is unitary on its own, but their product is; a gauge
transformation by the Hermitian square-root factors of U1~^dag U1~ restores
unitarity of each factor separately without changing the product.

The module also provides a direct RK4 integration of the propagator columns
(`propagate_direct`, the independent backend) and the eigendecomposition
matrix exponential for constant Hamiltonians (the test oracle).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from ._run import drive_packs, noise_paths, time_grid
from .errors import IntegrationError, RiccatiBlowupError
from .hamiltonian import NVParams

DEFAULT_DT = 0.001
DEFAULT_SAMPLE_EVERY = 100
DEFAULT_Z_GUARD = 1e6
OFFBLOCK_TOL = 1e-6


def partition(H: np.ndarray) -> tuple[np.ndarray, np.ndarray, complex]:
    """(upper 2x2 block, coupling column V, corner scalar) of a 3x3 H."""
    H = np.asarray(H, dtype=complex)
    return H[:2, :2], H[:2, 2], H[2, 2]


def z_rhs(z: np.ndarray, H: np.ndarray) -> np.ndarray:
    """Riccati flow dz/dt = -i [H2 z + V - z (V^dag z + h33)].

    Matrix/vector form; note the quadratic term carries z (not |z|) so the
    flow is holomorphic in z.
    """
    z = np.asarray(z, dtype=complex)
    H2, V, h1 = partition(H)
    return -1j * (H2 @ z + V - z * (np.vdot(V, z) + h1))


def w_from_z(z: np.ndarray) -> np.ndarray:
    """w = -z / (1 + z^dag z), the unique companion vector for which
    U1~^dag U1~ is block diagonal (denominator >= 1, never singular)."""
    z = np.asarray(z, dtype=complex)
    return -z / (1.0 + np.vdot(z, z).real)


def u1_tilde(z: np.ndarray, w: np.ndarray | None = None) -> np.ndarray:
    """Unit-triangular-product factor [[I + z w^dag, z], [w^dag, 1]]."""
    z = np.asarray(z, dtype=complex)
    w = w_from_z(z) if w is None else np.asarray(w, dtype=complex)
    out = np.empty((3, 3), dtype=complex)
    out[:2, :2] = np.eye(2) + np.outer(z, w.conj())
    out[:2, 2] = z
    out[2, :2] = w.conj()
    out[2, 2] = 1.0
    return out


def u1_tilde_inverse(z: np.ndarray, w: np.ndarray | None = None) -> np.ndarray:
    """Closed-form inverse [[I, -z], [-w^dag, 1 + w^dag z]]."""
    z = np.asarray(z, dtype=complex)
    w = w_from_z(z) if w is None else np.asarray(w, dtype=complex)
    out = np.empty((3, 3), dtype=complex)
    out[:2, :2] = np.eye(2)
    out[:2, 2] = -z
    out[2, :2] = -w.conj()
    out[2, 2] = 1.0 + np.vdot(w, z)
    return out


def effective_hamiltonian(z: np.ndarray, w: np.ndarray, zdot: np.ndarray,
                          H: np.ndarray, offblock_tol: float = OFFBLOCK_TOL) -> np.ndarray:
    """Block-diagonal generator of the residual factor.

    Built from the similarity transform of H by U1~ minus the frame term
    -i U1~^-1 dU1~/dt, with dw/dt chained through the w(z) relation.  The
    off-diagonal blocks vanish identically when zdot is the Riccati flow of
    z; a residue above ``offblock_tol`` means the inputs are mutually
    inconsistent and raises.
    """
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    zdot = np.asarray(zdot, dtype=complex)
    s = 1.0 + np.vdot(z, z).real
    sdot = 2.0 * np.vdot(z, zdot).real
    wdot = -zdot / s + z * sdot / s**2

    inv = u1_tilde_inverse(z, w)
    u1 = u1_tilde(z, w)
    du1 = np.zeros((3, 3), dtype=complex)
    du1[:2, :2] = np.outer(zdot, w.conj()) + np.outer(z, wdot.conj())
    du1[:2, 2] = zdot
    du1[2, :2] = wdot.conj()

    heff = inv @ np.asarray(H, dtype=complex) @ u1 - 1j * (inv @ du1)
    off = max(abs(heff[0, 2]), abs(heff[1, 2]), abs(heff[2, 0]), abs(heff[2, 1]))
    if off > offblock_tol:
        raise IntegrationError(
            f"effective-Hamiltonian off-block residue {off:.3e} exceeds {offblock_tol}; "
            "z, w and zdot are not a consistent Riccati triple")
    return heff


def _sqrtm_psd_2x2(M: np.ndarray) -> np.ndarray:
    """Principal square root of a Hermitian positive-definite 2x2 matrix."""
    det = (M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]).real
    s = np.sqrt(det)
    trace = (M[0, 0] + M[1, 1]).real
    return (M + s * np.eye(2)) / np.sqrt(trace + 2.0 * s)


def gauge_factors(z: np.ndarray) -> tuple[np.ndarray, float]:
    """Hermitian-positive pair (g_block, g_scalar) that unitarizes U1~.

    U1~^dag U1~ = diag((I + z z^dag)^-1, 1 + z^dag z), so right-multiplying
    U1~ by diag((I + z z^dag)^1/2, (1 + z^dag z)^-1/2) yields a unitary U1.
    """
    z = np.asarray(z, dtype=complex)
    s = 1.0 + np.vdot(z, z).real
    gamma1 = np.eye(2) + np.outer(z, z.conj())
    return _sqrtm_psd_2x2(gamma1), float(s) ** -0.5


def unitary_factors(z: np.ndarray, u2_block: np.ndarray,
                    u33: complex) -> tuple[np.ndarray, np.ndarray]:
    """Gauge-fixed factors (U1, U2), each unitary, with U1 @ U2 equal to the
    raw product U1~ @ U2~ (the gauge cancels in the product)."""
    z = np.asarray(z, dtype=complex)
    g_block, g_scalar = gauge_factors(z)
    gauge = np.zeros((3, 3), dtype=complex)
    gauge[:2, :2] = g_block
    gauge[2, 2] = g_scalar
    u1 = u1_tilde(z) @ gauge

    # closed-form inverse of the 2x2 Hermitian positive factor
    det = (g_block[0, 0] * g_block[1, 1] - g_block[0, 1] * g_block[1, 0]).real
    g_block_inv = np.array([[g_block[1, 1], -g_block[0, 1]],
                            [-g_block[1, 0], g_block[0, 0]]], dtype=complex) / det
    u2 = np.zeros((3, 3), dtype=complex)
    u2[:2, :2] = g_block_inv @ np.asarray(u2_block, dtype=complex)
    u2[2, 2] = u33 / g_scalar
    return u1, u2


def reconstruct_propagator(z: np.ndarray, u2_block: np.ndarray,
                           u33: complex) -> np.ndarray:
    """Full propagator U = U1~ @ U2~ from the integrated variables."""
    u2t = np.zeros((3, 3), dtype=complex)
    u2t[:2, :2] = np.asarray(u2_block, dtype=complex)
    u2t[2, 2] = u33
    return u1_tilde(z) @ u2t


def expm_hermitian(H: np.ndarray, t: float) -> np.ndarray:
    """exp(-i H t) by eigendecomposition (oracle for constant H)."""
    lam, Q = np.linalg.eigh(np.asarray(H, dtype=complex))
    return (Q * np.exp(-1j * lam * t)) @ Q.conj().T


def z_from_propagator(U: np.ndarray) -> np.ndarray:
    """Riccati variable extracted from a full propagator: column ratio
    z = U[:2, 2] / U[2, 2] (valid while the corner element is nonzero)."""
    U = np.asarray(U, dtype=complex)
    return U[:2, 2] / U[2, 2]


@dataclass
class PropagationResult:
    """Sampled closed-system trajectory with conservation diagnostics."""

    t: np.ndarray
    states: np.ndarray              # (n, 3) amplitudes
    populations: np.ndarray         # (n, 3)
    norm_drift: np.ndarray          # | ||psi|| - 1 | per sample
    unitarity_residual: np.ndarray  # max |U^dag U - I| per sample
    backend: str
    max_offblock: float | None = None
    z: np.ndarray | None = None     # (n, 2) Riccati variable (block backend)


def _finish(U: np.ndarray, psi0: np.ndarray, t: np.ndarray, backend: str,
            max_offblock: float | None = None,
            z: np.ndarray | None = None) -> PropagationResult:
    states = U @ psi0
    pops = (states * states.conj()).real
    norm_drift = np.abs(np.sqrt(pops.sum(axis=1)) - 1.0)
    gram = np.einsum("nij,nik->njk", U.conj(), U)
    unit_res = np.abs(gram - np.eye(3)).max(axis=(1, 2))
    return PropagationResult(t=t, states=states, populations=pops,
                             norm_drift=norm_drift, unitarity_residual=unit_res,
                             backend=backend, max_offblock=max_offblock, z=z)


def propagate_unitary(params: NVParams, t_max: float, dt: float = DEFAULT_DT,
                      psi0: np.ndarray | None = None,
                      sample_every: int = DEFAULT_SAMPLE_EVERY,
                      z_guard: float = DEFAULT_Z_GUARD,
                      offblock_tol: float = OFFBLOCK_TOL) -> PropagationResult:
    """Block-decomposition propagation of |psi(t)> = U(t) |psi(0)>.

    Fixed-step RK4 on the joint (z, B, u33) system with z(0) = 0 and
    U2~(0) = I.  Raises RiccatiBlowupError with the failure time when |z|
    exceeds ``z_guard`` (rerun those parameters with the direct backend).
    """
    if psi0 is None:
        psi0 = np.array([1.0, 0.0, 0.0], dtype=complex)
    psi0 = np.asarray(psi0, dtype=complex)
    n_steps, n_samples, t = time_grid(t_max, dt, sample_every)
    zeta, zeta1 = noise_paths(params, n_steps, dt)
    dpl, dmn = drive_packs(params)
    out = np.empty((n_samples, 7), dtype=complex)
    status, t_reached, max_off, n_written = _kernels.block_trajectory(
        dt, n_steps, sample_every, dpl, dmn, params.delta_plus,
        zeta, zeta1, z_guard, offblock_tol, out)
    if status == _kernels.Z_GUARD_TRIPPED:
        raise RiccatiBlowupError(
            f"Riccati variable exceeded guard {z_guard:g} at t = {t_reached:.6g} "
            "(corner of the propagator near zero); use the direct backend",
            t_fail=t_reached)
    if status == _kernels.OFFBLOCK_EXCEEDED:
        raise IntegrationError(
            f"effective-Hamiltonian off-block residue {max_off:.3e} exceeded "
            f"{offblock_tol:g} at t = {t_reached:.6g}", t_fail=t_reached)

    zs = out[:, :2]
    s = 1.0 + np.einsum("ni,ni->n", zs, zs.conj()).real
    ws = -zs / s[:, None]
    U = np.empty((n_samples, 3, 3), dtype=complex)
    U1t = np.empty((n_samples, 3, 3), dtype=complex)
    U1t[:, :2, :2] = np.eye(2) + zs[:, :, None] * ws.conj()[:, None, :]
    U1t[:, :2, 2] = zs
    U1t[:, 2, :2] = ws.conj()
    U1t[:, 2, 2] = 1.0
    U2t = np.zeros((n_samples, 3, 3), dtype=complex)
    U2t[:, :2, :2] = out[:, 2:6].reshape(-1, 2, 2)
    U2t[:, 2, 2] = out[:, 6]
    U = U1t @ U2t
    return _finish(U, psi0, t, "block", max_offblock=float(max_off), z=zs.copy())


def propagate_direct(params: NVParams, t_max: float, dt: float = DEFAULT_DT,
                     psi0: np.ndarray | None = None,
                     sample_every: int = DEFAULT_SAMPLE_EVERY) -> PropagationResult:
    """Independent backend: direct RK4 of the three propagator columns.

    Integrates i dU/dt = H(t) U column by column over the same noise
    realization, then applies U to the initial state; used to cross-check
    the block decomposition.
    """
    if psi0 is None:
        psi0 = np.array([1.0, 0.0, 0.0], dtype=complex)
    psi0 = np.asarray(psi0, dtype=complex)
    n_steps, n_samples, t = time_grid(t_max, dt, sample_every)
    zeta, zeta1 = noise_paths(params, n_steps, dt)
    dpl, dmn = drive_packs(params)
    U = np.empty((n_samples, 3, 3), dtype=complex)
    col = np.empty((n_samples, 3), dtype=complex)
    for j in range(3):
        e = np.zeros(3, dtype=complex)
        e[j] = 1.0
        _kernels.schrodinger_trajectory(e, dt, n_steps, sample_every, dpl, dmn,
                                        params.delta_plus, zeta, zeta1, col)
        U[:, :, j] = col
    return _finish(U, psi0, t, "direct")


def propagate_const_block(H: np.ndarray, t_max: float, dt: float = DEFAULT_DT,
                          psi0: np.ndarray | None = None,
                          sample_every: int = DEFAULT_SAMPLE_EVERY,
                          z_guard: float = DEFAULT_Z_GUARD,
                          offblock_tol: float = OFFBLOCK_TOL) -> PropagationResult:
    """Block-decomposition propagation under an arbitrary constant Hermitian H."""
    if psi0 is None:
        psi0 = np.array([1.0, 0.0, 0.0], dtype=complex)
    psi0 = np.asarray(psi0, dtype=complex)
    H = np.asarray(H, dtype=complex)
    n_steps, n_samples, t = time_grid(t_max, dt, sample_every)
    h = np.array([H[0, 0], H[0, 1], H[0, 2], H[1, 1], H[1, 2], H[2, 2]], dtype=complex)
    out = np.empty((n_samples, 7), dtype=complex)
    status, t_reached, max_off, _ = _kernels.block_trajectory_const(
        h, dt, n_steps, sample_every, z_guard, offblock_tol, out)
    if status == _kernels.Z_GUARD_TRIPPED:
        raise RiccatiBlowupError(
            f"Riccati variable exceeded guard {z_guard:g} at t = {t_reached:.6g}",
            t_fail=t_reached)
    if status == _kernels.OFFBLOCK_EXCEEDED:
        raise IntegrationError(
            f"off-block residue {max_off:.3e} exceeded {offblock_tol:g} "
            f"at t = {t_reached:.6g}", t_fail=t_reached)
    zs = out[:, :2]
    U = np.empty((n_samples, 3, 3), dtype=complex)
    for i in range(n_samples):
        U[i] = reconstruct_propagator(out[i, :2], out[i, 2:6].reshape(2, 2), out[i, 6])
    return _finish(U, psi0, t, "block", max_offblock=float(max_off), z=zs.copy())


def propagate_const_direct(H: np.ndarray, t_max: float, dt: float = DEFAULT_DT,
                           psi0: np.ndarray | None = None,
                           sample_every: int = DEFAULT_SAMPLE_EVERY) -> PropagationResult:
    """Direct RK4 of the propagator columns under a constant Hermitian H."""
    if psi0 is None:
        psi0 = np.array([1.0, 0.0, 0.0], dtype=complex)
    psi0 = np.asarray(psi0, dtype=complex)
    H = np.asarray(H, dtype=complex)
    n_steps, n_samples, t = time_grid(t_max, dt, sample_every)
    h = np.array([H[0, 0], H[0, 1], H[0, 2], H[1, 1], H[1, 2], H[2, 2]], dtype=complex)
    U = np.empty((n_samples, 3, 3), dtype=complex)
    col = np.empty((n_samples, 3), dtype=complex)
    for j in range(3):
        e = np.zeros(3, dtype=complex)
        e[j] = 1.0
        _kernels.schrodinger_trajectory_const(e, h, dt, n_steps, sample_every, col)
        U[:, :, j] = col
    return _finish(U, psi0, t, "direct")
