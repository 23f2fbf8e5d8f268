"""Independent mpmath reference values shared by the analytic tests.

Everything here is built from mpmath primitives only, so agreement with
the package is a real cross-check rather than a tautology.
"""

import mpmath


def parity_transform(s, alpha, dps=40):
    """The parity-weighted family's Laplace-side transform.

    Dirichlet series of the n -> (-1)^(n - Omega(n)) weights, shifted so
    poles sit on the imaginary axis: a simple pole at s = i*gamma for
    every critical-line zero 1/2 + i*gamma, and one at s = 0.
    """
    mpmath.mp.dps = dps
    s = mpmath.mpc(s)
    w = s + mpmath.mpf(1) / 2
    return (
        -(1 + mpmath.power(2, 1 - w))
        * mpmath.zeta(2 * w)
        / (mpmath.zeta(w) * (w - alpha))
    )


def parity_residue_limit(gamma, alpha, h=1e-6, dps=40):
    """Residue of the parity transform at s = i*gamma via the symmetric
    two-point limit (s - i*gamma) * F(s); O(h^2) error."""
    mpmath.mp.dps = dps
    s0 = mpmath.mpc(0, gamma)
    hh = mpmath.mpf(h)
    left = -hh * parity_transform(s0 - hh, alpha, dps)
    right = hh * parity_transform(s0 + hh, alpha, dps)
    return (left + right) / 2


def parity_center_limit(alpha, h=1e-7, dps=40):
    """Residue of the parity transform at s = 0, same two-point scheme."""
    mpmath.mp.dps = dps
    hh = mpmath.mpf(h)
    return (-hh * parity_transform(-hh, alpha, dps)
            + hh * parity_transform(hh, alpha, dps)) / 2
