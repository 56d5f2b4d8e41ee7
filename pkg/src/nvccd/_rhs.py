"""Scalar right-hand-side formulas for the integrators.

Single source of truth for the hot-loop math: the functions here are plain
Python (so the reference/numpy code paths can call them directly) and are
compiled with numba in ``_kernels``.  They take and return scalars only.
"""

import math

# drive order codes (values shared with drive.DriveOrder)
ORDER_CONSTANT = 0
ORDER_FIRST = 1
ORDER_SECOND = 2
ORDER_THIRD = 3


def drive_scalar(order, omega, a1, a2, a3, const, t, zeta1):
    """Driving amplitude at time t for one branch.

    order 0 returns the static value ``const``.  Higher orders stack the
    carrier a1*cos(omega*t), a quadrature second-order term enveloped at the
    first-order Rabi frequency, and a third-order in-phase term enveloped at
    the second-order amplitude.  ``zeta1`` is the relative microwave-source
    noise; it scales only the first-order amplitude factor, never the
    envelope frequencies (those target the nominal dressed-state gaps).
    """
    if order == ORDER_CONSTANT:
        return const
    value = a1 * (1.0 + zeta1) * math.cos(omega * t)
    if order >= ORDER_SECOND:
        value += 2.0 * a2 * math.cos(omega * t + 0.5 * math.pi) * math.cos(a1 * t)
    if order >= ORDER_THIRD:
        value += 2.0 * a3 * math.cos(omega * t) * math.cos(a2 * t)
    return value


def state_derivative(p1, p2, p3, cm, cp, delta):
    """d/dt of the amplitude 3-vector under H(t): i dpsi/dt = H psi.

    cm = Omega_minus(t)/2, cp = Omega_plus(t)/2, delta = effective detuning
    (both excited diagonal entries are -delta).
    """
    d1 = -1j * (cm * p2 + cp * p3)
    d2 = -1j * (cm * p1 - delta * p2)
    d3 = -1j * (cp * p1 - delta * p3)
    return d1, d2, d3


def state_derivative_general(p1, p2, p3, h11, h12, h13, h22, h23, h33):
    """d/dt of the amplitude 3-vector under a generic Hermitian H."""
    d1 = -1j * (h11 * p1 + h12 * p2 + h13 * p3)
    d2 = -1j * (h12.conjugate() * p1 + h22 * p2 + h23 * p3)
    d3 = -1j * (h13.conjugate() * p1 + h23.conjugate() * p2 + h33 * p3)
    return d1, d2, d3


def xi_derivative(x1, x2, x3, x4, x5, x6, x7, x8, x9, cm, cp, delta, gamma):
    """d/dt of the row-flattened density matrix under the master equation.

    x1..x9 = rho11, rho12, rho13, rho21, rho22, rho23, rho31, rho32, rho33.
    cm = Omega_minus(t)/2, cp = Omega_plus(t)/2, delta = effective detuning,
    gamma = relaxation rate of the level-1<->2 collapse operator.  The sum
    d1+d5+d9 vanishes identically (trace preservation).
    """
    j = 1j
    d1 = -j * (-j * gamma * (x1 - x5) - cm * x2 - cp * x3 + cp * x7 + cm * x4)
    d2 = -j * (j * gamma * x4 + (delta - j * gamma) * x2 + cm * (x5 - x1) + cp * x8)
    d3 = -j * (cp * (x9 - x1) + (delta - j * 0.5 * gamma) * x3 + cm * x6)
    d4 = -j * (j * gamma * x2 - (delta + j * gamma) * x4 + cm * (x1 - x5) - cp * x6)
    d5 = -j * (cm * (x2 - x4) + j * gamma * (x1 - x5))
    d6 = -j * (cm * x3 - cp * x4 - j * 0.5 * gamma * x6)
    d7 = -j * (cp * (x1 - x9) - (delta + j * 0.5 * gamma) * x7 - cm * x8)
    d8 = -j * (-cm * x7 + cp * x2 - j * 0.5 * gamma * x8)
    d9 = -j * (cp * (x3 - x7))
    return d1, d2, d3, d4, d5, d6, d7, d8, d9


def block_derivative(z1, z2, b11, b12, b21, b22, u33,
                     h11, h12, h13, h22, h23, h33):
    """One derivative evaluation of the block-decomposed propagator.

    State: the Riccati 2-vector z, the upper 2x2 block B and the (3,3)
    scalar u33 of the block-diagonal factor.  h11..h33 are the independent
    entries of the Hermitian Hamiltonian (lower triangle by conjugation).

    Returns the seven derivatives plus the largest off-diagonal-block
    magnitude of the effective generator, which must vanish when z obeys
    its flow (an integration-consistency diagnostic).
    """
    # Riccati flow: i dz/dt = H2 z + V - z (V^dag z + h33)
    q = h13.conjugate() * z1 + h23.conjugate() * z2 + h33
    dz1 = -1j * (h11 * z1 + h12 * z2 + h13 - z1 * q)
    dz2 = -1j * (h12.conjugate() * z1 + h22 * z2 + h23 - z2 * q)

    # w = -z / (1 + z^dag z) and its time derivative
    s = 1.0 + (z1 * z1.conjugate()).real + (z2 * z2.conjugate()).real
    w1 = -z1 / s
    w2 = -z2 / s
    sdot = 2.0 * ((z1.conjugate() * dz1).real + (z2.conjugate() * dz2).real)
    dw1 = -dz1 / s + z1 * sdot / (s * s)
    dw2 = -dz2 / s + z2 * sdot / (s * s)

    cw1 = w1.conjugate()
    cw2 = w2.conjugate()
    cdw1 = dw1.conjugate()
    cdw2 = dw2.conjugate()

    # U1 = [[I + z w^dag, z], [w^dag, 1]]
    a11 = 1.0 + z1 * cw1
    a12 = z1 * cw2
    a13 = z1
    a21 = z2 * cw1
    a22 = 1.0 + z2 * cw2
    a23 = z2
    a31 = cw1
    a32 = cw2
    a33 = 1.0 + 0j

    # dU1/dt
    c11 = dz1 * cw1 + z1 * cdw1
    c12 = dz1 * cw2 + z1 * cdw2
    c13 = dz1
    c21 = dz2 * cw1 + z2 * cdw1
    c22 = dz2 * cw2 + z2 * cdw2
    c23 = dz2
    c31 = cdw1
    c32 = cdw2
    c33 = 0j

    # M = H U1 (H Hermitian: rows (h11,h12,h13), (h12*,h22,h23), (h13*,h23*,h33))
    h21 = h12.conjugate()
    h31 = h13.conjugate()
    h32 = h23.conjugate()
    m11 = h11 * a11 + h12 * a21 + h13 * a31
    m12 = h11 * a12 + h12 * a22 + h13 * a32
    m13 = h11 * a13 + h12 * a23 + h13 * a33
    m21 = h21 * a11 + h22 * a21 + h23 * a31
    m22 = h21 * a12 + h22 * a22 + h23 * a32
    m23 = h21 * a13 + h22 * a23 + h23 * a33
    m31 = h31 * a11 + h32 * a21 + h33 * a31
    m32 = h31 * a12 + h32 * a22 + h33 * a32
    m33 = h31 * a13 + h32 * a23 + h33 * a33

    # Heff = U1^-1 H U1 - i U1^-1 dU1, with
    # U1^-1 = [[I, -z], [-w^dag, 1 + w^dag z]]
    g3 = 1.0 + cw1 * z1 + cw2 * z2
    e11 = (m11 - z1 * m31) - 1j * (c11 - z1 * c31)
    e12 = (m12 - z1 * m32) - 1j * (c12 - z1 * c32)
    e13 = (m13 - z1 * m33) - 1j * (c13 - z1 * c33)
    e21 = (m21 - z2 * m31) - 1j * (c21 - z2 * c31)
    e22 = (m22 - z2 * m32) - 1j * (c22 - z2 * c32)
    e23 = (m23 - z2 * m33) - 1j * (c23 - z2 * c33)
    e31 = (-cw1 * m11 - cw2 * m21 + g3 * m31) - 1j * (-cw1 * c11 - cw2 * c21 + g3 * c31)
    e32 = (-cw1 * m12 - cw2 * m22 + g3 * m32) - 1j * (-cw1 * c12 - cw2 * c22 + g3 * c32)
    e33 = (-cw1 * m13 - cw2 * m23 + g3 * m33) - 1j * (-cw1 * c13 - cw2 * c23 + g3 * c33)

    offblock = max(abs(e13), abs(e23), abs(e31), abs(e32))

    # i dU2/dt = Heff U2 on the diagonal blocks
    db11 = -1j * (e11 * b11 + e12 * b21)
    db12 = -1j * (e11 * b12 + e12 * b22)
    db21 = -1j * (e21 * b11 + e22 * b21)
    db22 = -1j * (e21 * b12 + e22 * b22)
    du33 = -1j * e33 * u33

    return dz1, dz2, db11, db12, db21, db22, du33, offblock


def twolevel_derivative(a, b, hz, hx):
    """d/dt of a spin-1/2 amplitude pair under H = hz*sigma_z + hx*sigma_x."""
    da = -1j * (hz * a + hx * b)
    db = -1j * (hx * a - hz * b)
    return da, db


def twolevel_drive(order, omega, amp1, amp2, t, zeta1, zeta2):
    """Two-level lab-frame drive amplitude (the sigma_x coefficient).

    order 0 means no drive; order 1 the resonant carrier; order 2 adds the
    quadrature term enveloped at the first-order Rabi frequency.  zeta1 and
    zeta2 are the relative amplitude fluctuations of the two terms.
    """
    if order <= 0:
        return 0.0
    value = amp1 * (1.0 + zeta1) * math.cos(omega * t)
    if order >= 2:
        value += amp2 * (1.0 + zeta2) * math.cos(omega * t + 0.5 * math.pi) * math.cos(amp1 * t)
    return value
