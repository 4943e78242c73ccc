"""Joint field-atom evolution and atomic conditioning.

Time and coupling are dimensionless: ``tau = |lambda_2| t`` and
``ratio = lambda_1 / |lambda_2|``, so the complex exponent carried by the
sigma_z = +1 branch is ``lambda_tau = (ratio + i*sign) * tau``.

Branches follow the circular-frame assignment: the sigma_z = +1 collective
state sends ``(alpha_+, alpha_-) -> (alpha_+ e^{lambda_tau}, alpha_- e^{-lambda_tau})``.
The linear-frame beam-splitter map is the exact image of that under the
polarization transform, so both frames describe the same branch.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .errors import DegenerateState, UnsupportedBasisCombination
from .polarization import transform_amps
from .states import (
    DEGENERATE_TOL,
    CoherentSuperposition,
    CoherentTerm,
    ModeBasis,
    normalize,
    state_norm2,
)

DEFAULT_ATOM_CAP = 50
_S = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class CouplingFrame:
    tau: float
    ratio: float = 0.0
    lambda2_sign: int = -1

    def __post_init__(self):
        if not math.isfinite(self.tau) or self.tau < 0:
            raise ValueError(f"tau must be finite and >= 0, got {self.tau!r}")
        if not (0.0 <= self.ratio < 1.0):
            raise ValueError(f"ratio lambda1/|lambda2| must lie in [0, 1), got {self.ratio!r}")
        if self.lambda2_sign not in (1, -1):
            raise ValueError("lambda2_sign must be +1 or -1")

    @property
    def lambda_tau(self):
        return complex(self.ratio, self.lambda2_sign) * self.tau

    def at(self, tau):
        return CouplingFrame(tau, self.ratio, self.lambda2_sign)


@dataclass(frozen=True)
class MacroSuperposition:
    """Atoms in (|11..1> + sign |22..2>)/sqrt2."""

    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")


@dataclass(frozen=True)
class ProductSuperposition:
    """Every atom in (|1> + |2>)/sqrt2."""

    n_atoms: int
    cap: int = DEFAULT_ATOM_CAP

    def __post_init__(self):
        if int(self.n_atoms) != self.n_atoms or self.n_atoms < 1:
            raise ValueError("n_atoms must be a positive integer")
        if self.n_atoms > self.cap:
            raise ValueError(f"n_atoms={self.n_atoms} exceeds the cap of {self.cap}")


AtomPreparation = Union[MacroSuperposition, ProductSuperposition]


def parse_prep(text, n_atoms=None):
    """'macro+', 'macro-', 'product:N' (or 'product' with ``n_atoms``)."""
    text = str(text).strip().lower()
    if text in ("macro+", "macro", "+"):
        return MacroSuperposition(1)
    if text in ("macro-", "-"):
        return MacroSuperposition(-1)
    if text.startswith("product"):
        _, _, tail = text.partition(":")
        n = int(tail) if tail else n_atoms
        if n is None:
            raise ValueError("product preparation needs an atom count")
        return ProductSuperposition(int(n))
    raise ValueError(f"unknown preparation {text!r}")


class Branch(NamedTuple):
    atom_label: int
    weight: complex
    term: CoherentTerm


@dataclass(frozen=True)
class JointBranchSet:
    basis: ModeBasis
    prep: object
    branches: tuple


def _branch_table(prep):
    """(atom label, amplitude on the collective atomic state, sigma_z / N)."""
    if isinstance(prep, MacroSuperposition):
        return [(1, _S, 1.0), (2, prep.sign * _S, -1.0)]
    n = prep.n_atoms
    # label j = number of atoms in |2>; amplitude on the normalized Dicke state
    return [(j, math.sqrt(math.comb(n, j)) * 2.0 ** (-n / 2.0), (n - 2 * j) / n)
            for j in range(n + 1)]


def branch_amps(amps, basis, kappa):
    """Apply the branch evolution exp(kappa * generator) to one amplitude pair."""
    a0, a1 = amps
    if basis is ModeBasis.CIRCULAR:
        return a0 * np.exp(kappa), a1 * np.exp(-kappa)
    ch = np.cosh(kappa)
    sh = np.sinh(kappa)
    # (x, y) -> (cosh x - i sinh y, cosh y + i sinh x)
    return ch * a0 - 1j * sh * a1, ch * a1 + 1j * sh * a0


def evolve_joint(initial, prep, frame, weighted=False):
    """Evolve a coherent product with the atoms in ``prep``.

    With ``weighted=False`` (the default) every branch keeps a
    unit-norm coherent term. ``weighted=True`` keeps the non-unitary factor
    exp((|new|^2 - |old|^2)/2) that the complex coupling produces.
    """
    if len(initial) != 1:
        raise ValueError("evolve_joint expects a single coherent product")
    basis = initial.basis
    if isinstance(prep, ProductSuperposition) and basis is not ModeBasis.CIRCULAR:
        raise UnsupportedBasisCombination("product preparation is only defined in the circular frame")
    coeff = complex(initial.coeffs[0])
    amps = (complex(initial.amps[0, 0]), complex(initial.amps[0, 1]))
    old2 = abs(amps[0]) ** 2 + abs(amps[1]) ** 2
    branches = []
    for label, weight, sz in _branch_table(prep):
        new = branch_amps(amps, basis, sz * frame.lambda_tau)
        new = (complex(new[0]), complex(new[1]))
        c = coeff
        if weighted:
            c *= math.exp(0.5 * (abs(new[0]) ** 2 + abs(new[1]) ** 2 - old2))
        branches.append(Branch(label, complex(weight), CoherentTerm(c, new)))
    return JointBranchSet(basis, prep, tuple(branches))


def condition_atoms(joint, prep, outcome=1):
    """Project the atoms and return (normalized field state, probability).

    For a macroscopic preparation the projection is onto
    (|1> + outcome |2>)/sqrt2; with the default outcome the "+" / "-"
    preparations give the even / odd branch combinations
    (|T1> +- |T2>)/sqrt(N+-) with probability N+-/4. A product preparation
    is projected back onto itself.
    """
    if prep != joint.prep:
        raise ValueError("conditioning preparation differs from the evolved one")
    if isinstance(prep, MacroSuperposition):
        if outcome not in (1, -1):
            raise ValueError("outcome must be +1 or -1")
        proj = {1: _S, 2: outcome * _S}
    else:
        proj = {label: w for label, w, _ in _branch_table(prep)}
    coeffs = []
    amps = []
    for br in joint.branches:
        coeffs.append(np.conj(proj[br.atom_label]) * br.weight * br.term.coeff)
        amps.append(br.term.amps)
    raw = CoherentSuperposition(joint.basis, coeffs, amps)
    prob = state_norm2(raw)
    if prob <= DEGENERATE_TOL:
        raise DegenerateState(f"conditioning probability {prob:.3e} vanishes")
    return normalize(raw), prob


def norm_factor(alpha, beta, frame):
    """(N+, N-) for the two-branch circular state, closed form."""
    n_sum = abs(alpha) ** 2 + abs(beta) ** 2
    n_diff = abs(alpha) ** 2 - abs(beta) ** 2
    l1t = frame.ratio * frame.tau
    l2t = frame.tau
    x = math.exp(-n_sum * math.cosh(2 * l1t) + n_sum * math.cos(2 * l2t)) * math.cos(n_diff * math.sin(2 * l2t))
    return 2.0 * (1.0 + x), 2.0 * (1.0 - x)


def initial_product(alpha, beta, basis=ModeBasis.CIRCULAR):
    """|alpha>_+ |beta>_- expressed in ``basis``."""
    basis = ModeBasis.parse(basis)
    amps = transform_amps([[alpha, beta]], ModeBasis.CIRCULAR, basis)
    return CoherentSuperposition(basis, [1.0], amps, True)


def conditioned_state(alpha, beta, frame, prep=MacroSuperposition(1), basis=ModeBasis.CIRCULAR,
                      weighted=False, outcome=1):
    """Initial |alpha>_+|beta>_-, evolved and conditioned in ``basis``."""
    s0 = initial_product(alpha, beta, basis)
    joint = evolve_joint(s0, prep, frame, weighted=weighted)
    return condition_atoms(joint, prep, outcome=outcome)


def _check_amp(alpha):
    if not abs(alpha) < 10:
        raise ValueError("|alpha| must be below 10")


def make_cat_y(alpha, parity="even"):
    """(|sqrt2 alpha>_y +- |-sqrt2 alpha>_y)|0>_x, normalized, linear frame."""
    _check_amp(alpha)
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    sign = 1.0 if parity == "even" else -1.0
    mu = math.sqrt(2.0) * complex(alpha)
    raw = CoherentSuperposition(ModeBasis.LINEAR, [1.0, sign], [(0.0, mu), (0.0, -mu)])
    return normalize(raw)


def make_entangled_coherent(alpha, sign=1):
    """(|i alpha>_+|-i alpha>_- +- |-i alpha>_+|i alpha>_-)/sqrt(N+-)."""
    _check_amp(alpha)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    ia = 1j * complex(alpha)
    raw = CoherentSuperposition(ModeBasis.CIRCULAR, [1.0, sign], [(ia, -ia), (-ia, ia)])
    return normalize(raw)
