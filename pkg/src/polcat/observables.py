"""Quadrature statistics, inseparability, linear entropy and fidelity.

Quadratures use X = (a + a^dag)/2 and Y = (a^dag - a)/2i, so the vacuum
variance is 1/4.

The inseparability sum is reported *without* the 1/2 prefactor:
I = Var(X_a + X_b) + Var(Y_a - Y_b). In the 1/4-vacuum convention this puts
every coherent product at exactly 1 and keeps the separability bound at 1.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .states import CoherentSuperposition, moments, normalize

# quadrature R = u a + conj(u) a^dag on one mode
_U_X = 0.5
_U_Y = 0.5j


@dataclass(frozen=True)
class QuadratureSpec:
    mode: int
    axis: str = "X"

    def __post_init__(self):
        if self.mode not in (0, 1):
            raise ValueError("mode must be 0 or 1")
        if self.axis not in ("X", "Y"):
            raise ValueError("axis must be 'X' or 'Y'")


@dataclass(frozen=True)
class SqueezedVacuumSpec:
    magnitude: float
    theta: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.magnitude < 5.0):
            raise ValueError("squeezing magnitude must lie in [0, 5)")


def covariance_matrix(s):
    """Symmetrized covariance of (X_0, Y_0, X_1, Y_1) and the mean vector."""
    mom = moments(s)
    u = np.zeros((4, 2), dtype=np.complex128)
    u[0, 0] = u[2, 1] = _U_X
    u[1, 0] = u[3, 1] = _U_Y
    d_half = mom.adag_a + 0.5 * np.eye(2)
    # <{R_i, R_j}>/2 = 2 Re(u_i^T A u_j + u_i^dag (D + 1/2) u_j)
    sym = 2.0 * np.real(u @ mom.aa @ u.T + np.conj(u) @ d_half @ u.T)
    mean = 2.0 * np.real(u @ mom.mean)
    return sym - np.outer(mean, mean), mean


def quadrature_variance(s, q: QuadratureSpec):
    cov, _ = covariance_matrix(s)
    i = 2 * q.mode + (0 if q.axis == "X" else 1)
    return float(max(cov[i, i], 0.0))


def all_variances(s):
    """(Var X_0, Var Y_0, Var X_1, Var Y_1)."""
    cov, _ = covariance_matrix(s)
    return tuple(float(v) for v in np.diag(cov))


def inseparability(s):
    """Var(X_0 + X_1) + Var(Y_0 - Y_1); below 1 certifies entanglement."""
    cov, _ = covariance_matrix(s)
    return float(cov[0, 0] + cov[2, 2] + 2 * cov[0, 2] + cov[1, 1] + cov[3, 3] - 2 * cov[1, 3])


def linear_entropy(s, mode=0):
    """1 - Tr(rho_mode^2) of the one-mode reduction."""
    if mode not in (0, 1):
        raise ValueError("mode must be 0 or 1")
    if not s.normalized:
        s = normalize(s)
    purity = _kernels.reduced_purity(np.ascontiguousarray(s.coeffs), np.ascontiguousarray(s.amps), mode)
    return float(min(max(1.0 - purity, 0.0), 1.0))


def squeezed_overlap(spec: SqueezedVacuumSpec, mu):
    """<xi|mu> for the squeezed vacuum of ``spec`` and a coherent state."""
    mu = np.asarray(mu, dtype=np.complex128)
    t = math.tanh(spec.magnitude)
    pref = math.cosh(spec.magnitude) ** -0.5
    return pref * np.exp(-0.5 * np.abs(mu) ** 2 - 0.5 * np.exp(-1j * spec.theta) * t * mu ** 2)


def fidelity_squeezed_vacuum(s, spec: SqueezedVacuumSpec, mode=1):
    """sqrt(<xi|rho_mode|xi>) for the reduced state of ``mode``.

    Defaults to mode 1, the y mode of a linear-frame cat. When the other mode
    is common to all terms this is |sum_k c_k <xi|mu_k>|.
    """
    if not s.normalized:
        s = normalize(s)
    c = s.coeffs
    xi_mu = squeezed_overlap(spec, s.amps[:, mode])
    other = s.amps[:, 1 - mode]
    b = _kernels.overlap_matrix_numpy(other, other)
    v = c * xi_mu
    value = float(np.real(np.conj(v) @ b @ v))
    return math.sqrt(min(max(value, 0.0), 1.0))


def best_fidelity(s, magnitudes, theta=0.0, mode=1):
    """(max F, argmax |xi|) over a grid of squeezing magnitudes."""
    vals = [fidelity_squeezed_vacuum(s, SqueezedVacuumSpec(float(r), theta), mode) for r in magnitudes]
    i = int(np.argmax(vals))
    return vals[i], float(magnitudes[i])
