"""Mean-field check of the adiabatic elimination.

Integrates the atomic Heisenberg-Langevin equations with the Langevin forces
dropped and the two circular field amplitudes frozen to classical values,
then compares the stationary coherences and excited populations with the
closed-form eliminated solutions.

Internally time is measured in units of 1/gamma.
"""

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .dynamics import CouplingFrame
from .errors import NonPhysical, NotStationary, StepTooLarge

DRIFT_TOL = 1e-6
DRIFT_ATOL = 1e-12


@dataclass(frozen=True)
class PhysicalParams:
    g: float
    gamma: float
    gamma_par: float
    gamma_perp: float
    delta: float

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if abs(self.gamma - (self.gamma_par + self.gamma_perp)) > 1e-12 * self.gamma:
            raise ValueError("gamma must equal gamma_par + gamma_perp")
        if self.g < 0:
            raise ValueError("g must be non-negative")
        if abs(self.delta) < 10 * self.gamma:
            warnings.warn(f"|delta|/gamma = {abs(self.delta) / self.gamma:.3g} < 10: elimination not justified",
                          stacklevel=2)
        if self.g > 0 and self.gamma < 10 * self.g:
            warnings.warn(f"gamma/g = {self.gamma / self.g:.3g} < 10: elimination not justified", stacklevel=2)

    @classmethod
    def symmetric(cls, g, gamma, delta):
        """gamma_par = gamma_perp = gamma/2."""
        return cls(g, gamma, gamma / 2, gamma - gamma / 2, delta)

    @property
    def saturation(self):
        """g^2 / (gamma^2 + delta^2)."""
        return self.g ** 2 / (self.gamma ** 2 + self.delta ** 2)


def derived_coupling(p: PhysicalParams):
    """(lambda_1, lambda_2) = g^2 (gamma, -delta) / 2(gamma^2 + delta^2)."""
    den = 2.0 * (p.gamma ** 2 + p.delta ** 2)
    return p.g ** 2 * p.gamma / den, -p.g ** 2 * p.delta / den


def coupling_frame(p: PhysicalParams, t):
    """Dimensionless frame for physical time ``t``; ratio is gamma/|delta|."""
    _, lam2 = derived_coupling(p)
    return CouplingFrame(abs(lam2) * t, p.gamma / abs(p.delta), -1 if lam2 < 0 else 1)


@dataclass(frozen=True)
class MeanFieldState:
    s11: float
    s22: float
    s33: float
    s44: float
    s14: complex
    s23: complex
    a_plus: complex
    a_minus: complex

    @classmethod
    def ground(cls, a_plus, a_minus, s11=0.5):
        return cls(s11, 1.0 - s11, 0.0, 0.0, 0j, 0j, complex(a_plus), complex(a_minus))

    def vector(self):
        return np.array([self.s11, self.s22, self.s33, self.s44, self.s14, self.s23], dtype=np.complex128)

    @property
    def trace(self):
        return self.s11 + self.s22 + self.s33 + self.s44


class Trajectory:
    """Recorded mean-field trajectory; iterates as (t, MeanFieldState)."""

    def __init__(self, times, values, a_plus, a_minus):
        self.times = times
        self.values = values
        self.a_plus = a_plus
        self.a_minus = a_minus

    def __len__(self):
        return len(self.times)

    def __getitem__(self, i):
        y = self.values[i]
        state = MeanFieldState(y[0].real, y[1].real, y[2].real, y[3].real, complex(y[4]), complex(y[5]),
                               self.a_plus, self.a_minus)
        return float(self.times[i]), state

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    @property
    def final(self):
        return self[len(self) - 1][1]

    def populations(self):
        return self.values[:, :4].real


def integrate_mean_field(p: PhysicalParams, init: MeanFieldState, t_end, dt, record_every=1,
                         symmetrized=True):
    """Fixed-step RK4 from t = 0 to ``t_end`` (physical units).

    ``symmetrized`` adds the half-photon pumping term that the symmetrized
    operator ordering puts next to |a|^2; without it the c-number closure
    gives populations proportional to |a|^2 alone.
    """
    scale = max(p.gamma, abs(p.delta))
    if dt <= 0 or dt > 0.05 / scale * (1 + 1e-12):
        raise StepTooLarge(f"dt = {dt:.3e} exceeds 0.05/max(gamma, |delta|) = {0.05 / scale:.3e}")
    if t_end < 0:
        raise ValueError("t_end must be non-negative")
    n_steps = max(int(math.ceil(t_end / dt - 1e-9)), 0)
    dt_s = (t_end / n_steps if n_steps else dt) * p.gamma
    params = np.array([p.g / p.gamma, 1.0, p.gamma_par / p.gamma, p.gamma_perp / p.gamma,
                       p.delta / p.gamma, 1.0 if symmetrized else 0.0])
    record_every = max(int(record_every), 1)
    values, bad = _kernels.rk4_mean_field(init.vector(), params, complex(init.a_plus), complex(init.a_minus),
                                          dt_s, n_steps, record_every)
    idx = np.arange(0, n_steps + 1, record_every)
    if idx[-1] != n_steps:
        idx = np.append(idx, n_steps)
    times = idx[: len(values)] * (dt_s / p.gamma)
    if bad >= 0:
        raise NonPhysical(f"population left [0, 1] at t = {bad * dt_s / p.gamma:.4e}")
    return Trajectory(times, values, complex(init.a_plus), complex(init.a_minus))


@dataclass(frozen=True)
class StationaryReport:
    """Relative residuals of the stationary state against the eliminated forms.

    ``None`` marks a residual that is not defined (e.g. g = 0 or a zero field).
    """

    t_final: float
    coherence_14: Optional[float]
    coherence_23: Optional[float]
    coherence0_14: Optional[float]
    coherence0_23: Optional[float]
    population_44: Optional[float]
    population_33: Optional[float]
    phase_14: Optional[float]
    max_drift: float

    @property
    def applicable(self):
        return self.coherence_14 is not None or self.coherence_23 is not None

    def as_dict(self):
        return dict(self.__dict__)


def _rel(value, ref):
    if ref == 0 or not math.isfinite(abs(ref)):
        return None
    return abs(value - ref) / abs(ref)


def stationary_check(traj: Trajectory, p: PhysicalParams):
    t_final = float(traj.times[-1])
    if t_final * p.gamma < 20 - 1e-9:
        raise NotStationary(f"trajectory ends at gamma*t = {t_final * p.gamma:.3g} < 20")
    i_ref = int(np.searchsorted(traj.times, 0.9 * t_final))
    last = traj.values[-1]
    ref = traj.values[min(i_ref, len(traj) - 1)]
    drift = np.abs(last - ref) / np.maximum(np.abs(last), DRIFT_ATOL)
    max_drift = float(drift.max())
    if max_drift > DRIFT_TOL:
        raise NotStationary(f"relative drift {max_drift:.2e} over the last tenth of the run")

    st = traj.final
    z = complex(p.gamma, p.delta)
    g = p.g
    sat = p.saturation
    coh14 = coh23 = coh0_14 = coh0_23 = pop44 = pop33 = phase = None
    if g > 0:
        ap, am = st.a_plus, st.a_minus
        if st.s14 != 0 and ap != 0:
            coh14 = abs(st.s14 - (-1j * g * ap * (st.s11 - st.s44) / z)) / abs(st.s14)
            coh0_14 = abs(st.s14 - (-1j * g * ap * st.s11 / z)) / abs(st.s14)
            target = np.angle(-1j * ap / z)
            phase = abs(float(np.angle(st.s14 * np.exp(-1j * target))))
        if st.s23 != 0 and am != 0:
            coh23 = abs(st.s23 - (-1j * g * am * (st.s22 - st.s33) / z)) / abs(st.s23)
            coh0_23 = abs(st.s23 - (-1j * g * am * st.s22 / z)) / abs(st.s23)
        pop44 = _rel(float(st.s44), float(sat * (abs(ap) ** 2 + 0.5) * st.s11))
        pop33 = _rel(float(st.s33), float(sat * (abs(am) ** 2 + 0.5) * st.s22))
    return StationaryReport(t_final, coh14, coh23, coh0_14, coh0_23, pop44, pop33, phase, max_drift)
