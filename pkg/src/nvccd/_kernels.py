"""Numba-compiled fixed-step RK4 cores for all propagators.

Every kernel consumes pre-sampled noise paths (one value per step, held
constant across the four stages of that step) and writes sampled states into
a caller-allocated output array.  The scalar derivative formulas live in
``_rhs`` and are jitted here, so the compiled loops and the numpy reference
paths share one definition.
"""

import numpy as np
from numba import njit, prange

from . import _rhs

# trajectory status codes
OK = 0
Z_GUARD_TRIPPED = 1
OFFBLOCK_EXCEEDED = 2

drive_value = njit(cache=True, inline="always")(_rhs.drive_scalar)
_state_rhs = njit(cache=True, inline="always")(_rhs.state_derivative)
_state_rhs_gen = njit(cache=True, inline="always")(_rhs.state_derivative_general)
_xi_rhs = njit(cache=True, inline="always")(_rhs.xi_derivative)
_block_rhs = njit(cache=True, inline="always")(_rhs.block_derivative)
_tl_rhs = njit(cache=True, inline="always")(_rhs.twolevel_derivative)
_tl_drive = njit(cache=True, inline="always")(_rhs.twolevel_drive)


@njit(cache=True, inline="always")
def _couplings(dpl, dmn, t, zeta1):
    """Half drive amplitudes (cm, cp) at time t for packed branch params.

    Branch packing: (order, omega, amp1, amp2, amp3, constant).
    """
    cp = 0.5 * drive_value(int(dpl[0]), dpl[1], dpl[2], dpl[3], dpl[4], dpl[5], t, zeta1)
    cm = 0.5 * drive_value(int(dmn[0]), dmn[1], dmn[2], dmn[3], dmn[4], dmn[5], t, zeta1)
    return cm, cp


@njit(cache=True)
def schrodinger_trajectory(psi0, dt, n_steps, sample_every,
                           dpl, dmn, delta_plus, zeta, zeta1, out):
    """RK4 of i dpsi/dt = H(t) psi on the driven three-level system."""
    p1 = psi0[0]
    p2 = psi0[1]
    p3 = psi0[2]
    out[0, 0] = p1
    out[0, 1] = p2
    out[0, 2] = p3
    si = 1
    half = 0.5 * dt
    sixth = dt / 6.0
    for k in range(n_steps):
        t = k * dt
        d = delta_plus - zeta[k]
        z1k = zeta1[k]
        cm0, cp0 = _couplings(dpl, dmn, t, z1k)
        cmh, cph = _couplings(dpl, dmn, t + half, z1k)
        cm1, cp1 = _couplings(dpl, dmn, t + dt, z1k)
        a1, a2, a3 = _state_rhs(p1, p2, p3, cm0, cp0, d)
        b1, b2, b3 = _state_rhs(p1 + half * a1, p2 + half * a2, p3 + half * a3, cmh, cph, d)
        c1, c2, c3 = _state_rhs(p1 + half * b1, p2 + half * b2, p3 + half * b3, cmh, cph, d)
        e1, e2, e3 = _state_rhs(p1 + dt * c1, p2 + dt * c2, p3 + dt * c3, cm1, cp1, d)
        p1 += sixth * (a1 + 2.0 * (b1 + c1) + e1)
        p2 += sixth * (a2 + 2.0 * (b2 + c2) + e2)
        p3 += sixth * (a3 + 2.0 * (b3 + c3) + e3)
        if (k + 1) % sample_every == 0 and si < out.shape[0]:
            out[si, 0] = p1
            out[si, 1] = p2
            out[si, 2] = p3
            si += 1
    return si


@njit(cache=True)
def schrodinger_trajectory_const(psi0, h, dt, n_steps, sample_every, out):
    """RK4 of i dpsi/dt = H psi for a constant Hermitian H.

    h packs the independent entries (h11, h12, h13, h22, h23, h33).
    """
    h11, h12, h13, h22, h23, h33 = h[0], h[1], h[2], h[3], h[4], h[5]
    p1 = psi0[0]
    p2 = psi0[1]
    p3 = psi0[2]
    out[0, 0] = p1
    out[0, 1] = p2
    out[0, 2] = p3
    si = 1
    half = 0.5 * dt
    sixth = dt / 6.0
    for k in range(n_steps):
        a1, a2, a3 = _state_rhs_gen(p1, p2, p3, h11, h12, h13, h22, h23, h33)
        b1, b2, b3 = _state_rhs_gen(p1 + half * a1, p2 + half * a2, p3 + half * a3,
                                    h11, h12, h13, h22, h23, h33)
        c1, c2, c3 = _state_rhs_gen(p1 + half * b1, p2 + half * b2, p3 + half * b3,
                                    h11, h12, h13, h22, h23, h33)
        e1, e2, e3 = _state_rhs_gen(p1 + dt * c1, p2 + dt * c2, p3 + dt * c3,
                                    h11, h12, h13, h22, h23, h33)
        p1 += sixth * (a1 + 2.0 * (b1 + c1) + e1)
        p2 += sixth * (a2 + 2.0 * (b2 + c2) + e2)
        p3 += sixth * (a3 + 2.0 * (b3 + c3) + e3)
        if (k + 1) % sample_every == 0 and si < out.shape[0]:
            out[si, 0] = p1
            out[si, 1] = p2
            out[si, 2] = p3
            si += 1
    return si


@njit(cache=True)
def block_trajectory(dt, n_steps, sample_every, dpl, dmn, delta_plus,
                     zeta, zeta1, z_guard, offblock_cap, out):
    """Joint RK4 of the Riccati 2-vector and the block-diagonal factor.

    out rows hold (z1, z2, b11, b12, b21, b22, u33).  Returns
    (status, t_reached, max_offblock, samples_written); on a guard trip the
    state written so far stays valid for diagnostics.
    """
    z1 = 0j
    z2 = 0j
    b11 = 1.0 + 0j
    b12 = 0j
    b21 = 0j
    b22 = 1.0 + 0j
    u33 = 1.0 + 0j
    out[0, 0] = z1
    out[0, 1] = z2
    out[0, 2] = b11
    out[0, 3] = b12
    out[0, 4] = b21
    out[0, 5] = b22
    out[0, 6] = u33
    si = 1
    half = 0.5 * dt
    sixth = dt / 6.0
    max_off = 0.0
    guard2 = z_guard * z_guard
    for k in range(n_steps):
        t = k * dt
        d = delta_plus - zeta[k]
        z1k = zeta1[k]
        cm0, cp0 = _couplings(dpl, dmn, t, z1k)
        cmh, cph = _couplings(dpl, dmn, t + half, z1k)
        cm1, cp1 = _couplings(dpl, dmn, t + dt, z1k)
        zero = 0j
        da1, da2, da3, da4, da5, da6, da7, o1 = _block_rhs(
            z1, z2, b11, b12, b21, b22, u33,
            zero, cm0 + 0j, cp0 + 0j, -d + 0j, zero, -d + 0j)
        db1, db2, db3, db4, db5, db6, db7, o2 = _block_rhs(
            z1 + half * da1, z2 + half * da2, b11 + half * da3, b12 + half * da4,
            b21 + half * da5, b22 + half * da6, u33 + half * da7,
            zero, cmh + 0j, cph + 0j, -d + 0j, zero, -d + 0j)
        dc1, dc2, dc3, dc4, dc5, dc6, dc7, o3 = _block_rhs(
            z1 + half * db1, z2 + half * db2, b11 + half * db3, b12 + half * db4,
            b21 + half * db5, b22 + half * db6, u33 + half * db7,
            zero, cmh + 0j, cph + 0j, -d + 0j, zero, -d + 0j)
        de1, de2, de3, de4, de5, de6, de7, o4 = _block_rhs(
            z1 + dt * dc1, z2 + dt * dc2, b11 + dt * dc3, b12 + dt * dc4,
            b21 + dt * dc5, b22 + dt * dc6, u33 + dt * dc7,
            zero, cm1 + 0j, cp1 + 0j, -d + 0j, zero, -d + 0j)
        z1 += sixth * (da1 + 2.0 * (db1 + dc1) + de1)
        z2 += sixth * (da2 + 2.0 * (db2 + dc2) + de2)
        b11 += sixth * (da3 + 2.0 * (db3 + dc3) + de3)
        b12 += sixth * (da4 + 2.0 * (db4 + dc4) + de4)
        b21 += sixth * (da5 + 2.0 * (db5 + dc5) + de5)
        b22 += sixth * (da6 + 2.0 * (db6 + dc6) + de6)
        u33 += sixth * (da7 + 2.0 * (db7 + dc7) + de7)
        off = max(max(o1, o2), max(o3, o4))
        if off > max_off:
            max_off = off
        znorm2 = (z1 * z1.conjugate()).real + (z2 * z2.conjugate()).real
        if not np.isfinite(znorm2) or znorm2 > guard2:
            return Z_GUARD_TRIPPED, t + dt, max_off, si
        if max_off > offblock_cap:
            return OFFBLOCK_EXCEEDED, t + dt, max_off, si
        if (k + 1) % sample_every == 0 and si < out.shape[0]:
            out[si, 0] = z1
            out[si, 1] = z2
            out[si, 2] = b11
            out[si, 3] = b12
            out[si, 4] = b21
            out[si, 5] = b22
            out[si, 6] = u33
            si += 1
    return OK, n_steps * dt, max_off, si


@njit(cache=True)
def block_trajectory_const(h, dt, n_steps, sample_every, z_guard, offblock_cap, out):
    """Block-decomposition propagation under a constant Hermitian H.

    h packs (h11, h12, h13, h22, h23, h33); output layout and return values
    match ``block_trajectory``.
    """
    h11, h12, h13, h22, h23, h33 = h[0], h[1], h[2], h[3], h[4], h[5]
    z1 = 0j
    z2 = 0j
    b11 = 1.0 + 0j
    b12 = 0j
    b21 = 0j
    b22 = 1.0 + 0j
    u33 = 1.0 + 0j
    out[0, 0] = z1
    out[0, 1] = z2
    out[0, 2] = b11
    out[0, 3] = b12
    out[0, 4] = b21
    out[0, 5] = b22
    out[0, 6] = u33
    si = 1
    half = 0.5 * dt
    sixth = dt / 6.0
    max_off = 0.0
    guard2 = z_guard * z_guard
    for k in range(n_steps):
        da1, da2, da3, da4, da5, da6, da7, o1 = _block_rhs(
            z1, z2, b11, b12, b21, b22, u33, h11, h12, h13, h22, h23, h33)
        db1, db2, db3, db4, db5, db6, db7, o2 = _block_rhs(
            z1 + half * da1, z2 + half * da2, b11 + half * da3, b12 + half * da4,
            b21 + half * da5, b22 + half * da6, u33 + half * da7,
            h11, h12, h13, h22, h23, h33)
        dc1, dc2, dc3, dc4, dc5, dc6, dc7, o3 = _block_rhs(
            z1 + half * db1, z2 + half * db2, b11 + half * db3, b12 + half * db4,
            b21 + half * db5, b22 + half * db6, u33 + half * db7,
            h11, h12, h13, h22, h23, h33)
        de1, de2, de3, de4, de5, de6, de7, o4 = _block_rhs(
            z1 + dt * dc1, z2 + dt * dc2, b11 + dt * dc3, b12 + dt * dc4,
            b21 + dt * dc5, b22 + dt * dc6, u33 + dt * dc7,
            h11, h12, h13, h22, h23, h33)
        z1 += sixth * (da1 + 2.0 * (db1 + dc1) + de1)
        z2 += sixth * (da2 + 2.0 * (db2 + dc2) + de2)
        b11 += sixth * (da3 + 2.0 * (db3 + dc3) + de3)
        b12 += sixth * (da4 + 2.0 * (db4 + dc4) + de4)
        b21 += sixth * (da5 + 2.0 * (db5 + dc5) + de5)
        b22 += sixth * (da6 + 2.0 * (db6 + dc6) + de6)
        u33 += sixth * (da7 + 2.0 * (db7 + dc7) + de7)
        off = max(max(o1, o2), max(o3, o4))
        if off > max_off:
            max_off = off
        znorm2 = (z1 * z1.conjugate()).real + (z2 * z2.conjugate()).real
        if not np.isfinite(znorm2) or znorm2 > guard2:
            return Z_GUARD_TRIPPED, (k + 1) * dt, max_off, si
        if max_off > offblock_cap:
            return OFFBLOCK_EXCEEDED, (k + 1) * dt, max_off, si
        if (k + 1) % sample_every == 0 and si < out.shape[0]:
            out[si, 0] = z1
            out[si, 1] = z2
            out[si, 2] = b11
            out[si, 3] = b12
            out[si, 4] = b21
            out[si, 5] = b22
            out[si, 6] = u33
            si += 1
    return OK, n_steps * dt, max_off, si


@njit(cache=True)
def lindblad_trajectory(xi0, dt, n_steps, sample_every,
                        dpl, dmn, delta_plus, gamma, zeta, zeta1, out):
    """RK4 of the nine-component master equation, component form."""
    x1 = xi0[0]
    x2 = xi0[1]
    x3 = xi0[2]
    x4 = xi0[3]
    x5 = xi0[4]
    x6 = xi0[5]
    x7 = xi0[6]
    x8 = xi0[7]
    x9 = xi0[8]
    for j in range(9):
        out[0, j] = xi0[j]
    si = 1
    half = 0.5 * dt
    sixth = dt / 6.0
    for k in range(n_steps):
        t = k * dt
        d = delta_plus - zeta[k]
        z1k = zeta1[k]
        cm0, cp0 = _couplings(dpl, dmn, t, z1k)
        cmh, cph = _couplings(dpl, dmn, t + half, z1k)
        cm1, cp1 = _couplings(dpl, dmn, t + dt, z1k)
        a1, a2, a3, a4, a5, a6, a7, a8, a9 = _xi_rhs(
            x1, x2, x3, x4, x5, x6, x7, x8, x9, cm0, cp0, d, gamma)
        b1, b2, b3, b4, b5, b6, b7, b8, b9 = _xi_rhs(
            x1 + half * a1, x2 + half * a2, x3 + half * a3, x4 + half * a4,
            x5 + half * a5, x6 + half * a6, x7 + half * a7, x8 + half * a8,
            x9 + half * a9, cmh, cph, d, gamma)
        c1, c2, c3, c4, c5, c6, c7, c8, c9 = _xi_rhs(
            x1 + half * b1, x2 + half * b2, x3 + half * b3, x4 + half * b4,
            x5 + half * b5, x6 + half * b6, x7 + half * b7, x8 + half * b8,
            x9 + half * b9, cmh, cph, d, gamma)
        e1, e2, e3, e4, e5, e6, e7, e8, e9 = _xi_rhs(
            x1 + dt * c1, x2 + dt * c2, x3 + dt * c3, x4 + dt * c4,
            x5 + dt * c5, x6 + dt * c6, x7 + dt * c7, x8 + dt * c8,
            x9 + dt * c9, cm1, cp1, d, gamma)
        x1 += sixth * (a1 + 2.0 * (b1 + c1) + e1)
        x2 += sixth * (a2 + 2.0 * (b2 + c2) + e2)
        x3 += sixth * (a3 + 2.0 * (b3 + c3) + e3)
        x4 += sixth * (a4 + 2.0 * (b4 + c4) + e4)
        x5 += sixth * (a5 + 2.0 * (b5 + c5) + e5)
        x6 += sixth * (a6 + 2.0 * (b6 + c6) + e6)
        x7 += sixth * (a7 + 2.0 * (b7 + c7) + e7)
        x8 += sixth * (a8 + 2.0 * (b8 + c8) + e8)
        x9 += sixth * (a9 + 2.0 * (b9 + c9) + e9)
        if (k + 1) % sample_every == 0 and si < out.shape[0]:
            out[si, 0] = x1
            out[si, 1] = x2
            out[si, 2] = x3
            out[si, 3] = x4
            out[si, 4] = x5
            out[si, 5] = x6
            out[si, 6] = x7
            out[si, 7] = x8
            out[si, 8] = x9
            si += 1
    return si


@njit(cache=True, parallel=True)
def lindblad_batch(xi0, dt, n_steps, sample_every,
                   dpl, dmn, delta_plus, gamma, zetas, zeta1s, out):
    """Independent trajectories over pre-seeded noise paths (parallel).

    zetas/zeta1s have shape (n_realizations, n_steps); out has shape
    (n_realizations, n_samples, 9).  Each realization writes only its own
    slice, so results do not depend on the thread count.
    """
    for r in prange(zetas.shape[0]):
        lindblad_trajectory(xi0, dt, n_steps, sample_every,
                            dpl, dmn, delta_plus, gamma,
                            zetas[r], zeta1s[r], out[r])


@njit(cache=True)
def twolevel_trajectory(psi0, dt, n_steps, sample_every,
                        omega, amp1, amp2, order, zb, zd1, zd2, out):
    """Lab-frame RK4 for the two-level decoupling test system.

    zb, zd1, zd2: per-step samples of the bath and the two drive-amplitude
    noise channels.
    """
    a = psi0[0]
    b = psi0[1]
    out[0, 0] = a
    out[0, 1] = b
    si = 1
    half = 0.5 * dt
    sixth = dt / 6.0
    for k in range(n_steps):
        t = k * dt
        hz = 0.5 * (omega + zb[k])
        z1k = zd1[k]
        z2k = zd2[k]
        hx0 = _tl_drive(order, omega, amp1, amp2, t, z1k, z2k)
        hxh = _tl_drive(order, omega, amp1, amp2, t + half, z1k, z2k)
        hx1 = _tl_drive(order, omega, amp1, amp2, t + dt, z1k, z2k)
        ka1, ka2 = _tl_rhs(a, b, hz, hx0)
        kb1, kb2 = _tl_rhs(a + half * ka1, b + half * ka2, hz, hxh)
        kc1, kc2 = _tl_rhs(a + half * kb1, b + half * kb2, hz, hxh)
        ke1, ke2 = _tl_rhs(a + dt * kc1, b + dt * kc2, hz, hx1)
        a += sixth * (ka1 + 2.0 * (kb1 + kc1) + ke1)
        b += sixth * (ka2 + 2.0 * (kb2 + kc2) + ke2)
        if (k + 1) % sample_every == 0 and si < out.shape[0]:
            out[si, 0] = a
            out[si, 1] = b
            si += 1
    return si


@njit(cache=True, parallel=True)
def twolevel_batch(psi0, dt, n_steps, sample_every,
                   omega, amp1, amp2, order, zbs, zd1s, zd2s, out):
    """Parallel two-level trajectories over pre-seeded noise paths."""
    for r in prange(zbs.shape[0]):
        twolevel_trajectory(psi0, dt, n_steps, sample_every,
                            omega, amp1, amp2, order,
                            zbs[r], zd1s[r], zd2s[r], out[r])
