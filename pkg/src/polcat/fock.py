"""Truncated number-basis oracle.

Recomputes states and observables by brute force in a Fock space of
``cutoff + 1`` levels per mode. Nothing here touches the Gram-matrix code in
:mod:`polcat.states`; the two routes are meant to be compared.

Two-mode vectors are stored as a (D, D) array ``psi[n0, n1]`` (row-major over
the frame's mode order), so single-mode operators act as ``O @ psi`` on mode 0
and ``psi @ O.T`` on mode 1.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .dynamics import MacroSuperposition
from .errors import CutoffTooSmall, DegenerateState
from .observables import QuadratureSpec, SqueezedVacuumSpec
from .states import ModeBasis

TAIL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class FockVector:
    cutoff: int
    data: np.ndarray  # (D,) single mode or (D, D) two modes

    @property
    def dim(self):
        return self.cutoff + 1

    @property
    def n_modes(self):
        return self.data.ndim

    @property
    def flat(self):
        return self.data.reshape(-1)

    def norm2(self):
        return float(np.vdot(self.data, self.data).real)


def required_cutoff(s):
    mu = float(np.max(np.abs(s.amps))) if len(s) else 0.0
    return int(math.ceil(mu ** 2 + 8 * mu + 20))


def _tail_mass(data):
    p = np.abs(data) ** 2
    total = p.sum()
    if data.ndim == 1:
        return p[-2:].sum() / total
    return (p[-2:, :].sum() + p[:-2, -2:].sum()) / total


def _checked(data, cutoff, what):
    n2 = float(np.vdot(data, data).real)
    if n2 <= 1e-14:
        raise DegenerateState(f"{what}: vector has zero norm")
    tail = _tail_mass(data)
    if tail >= TAIL_TOL:
        raise CutoffTooSmall(f"{what}: top-level weight {tail:.2e} at cutoff {cutoff}")
    return FockVector(cutoff, data / math.sqrt(n2))


def coherent_vector(mu, cutoff):
    """e^{-|mu|^2/2} mu^n / sqrt(n!) for n = 0..cutoff (unnormalized truncation)."""
    out = np.empty(cutoff + 1, dtype=np.complex128)
    out[0] = math.exp(-0.5 * abs(mu) ** 2)
    for n in range(1, cutoff + 1):
        out[n] = out[n - 1] * mu / math.sqrt(n)
    return out


def to_fock(s, cutoff):
    """Expand a coherent superposition in the truncated two-mode number basis."""
    psi = np.zeros((cutoff + 1, cutoff + 1), dtype=np.complex128)
    for c, (a0, a1) in zip(s.coeffs, s.amps):
        psi += c * np.outer(coherent_vector(a0, cutoff), coherent_vector(a1, cutoff))
    return _checked(psi, cutoff, "to_fock")


def squeezed_vacuum_fock(spec: SqueezedVacuumSpec, cutoff):
    if cutoff < 20:
        raise ValueError("cutoff must be at least 20")
    out = np.zeros(cutoff + 1, dtype=np.complex128)
    ratio = -0.5 * np.exp(1j * spec.theta) * math.tanh(spec.magnitude)
    out[0] = 1.0
    for n in range(cutoff // 2):
        # c_{2n+2}/c_{2n} = sqrt((2n+1)(2n+2))/(n+1) * ratio
        out[2 * n + 2] = out[2 * n] * math.sqrt((2 * n + 1) * (2 * n + 2)) / (n + 1) * ratio
    return _checked(out, cutoff, "squeezed_vacuum_fock")


def annihilation(dim):
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(np.complex128)


def _apply_circular(psi, kappa):
    n = np.arange(psi.shape[0])
    return psi * np.exp(kappa * (n[:, None] - n[None, :]))


def _beam_splitter_blocks(dim):
    """Per total photon number N: (n_x values, generator block).

    Generator is -i a_x^dag a_y + i a_y^dag a_x, which conserves n_x + n_y,
    so the truncated operator is block diagonal.
    """
    blocks = []
    for total in range(2 * dim - 1):
        lo = max(0, total - dim + 1)
        hi = min(total, dim - 1)
        nx = np.arange(lo, hi + 1)
        size = nx.size
        gen = np.zeros((size, size), dtype=np.complex128)
        for i, x in enumerate(nx):
            y = total - x
            if i > 0:  # a_y^dag a_x: |x, y> -> |x-1, y+1>
                gen[i - 1, i] += 1j * math.sqrt(x) * math.sqrt(y + 1)
            if i < size - 1:  # a_x^dag a_y: |x, y> -> |x+1, y-1>
                gen[i + 1, i] += -1j * math.sqrt(x + 1) * math.sqrt(y)
        blocks.append((nx, gen))
    return blocks


def _apply_linear(psi, kappa, blocks):
    out = np.zeros_like(psi)
    for total, (nx, gen) in enumerate(blocks):
        ny = total - nx
        out[nx, ny] = expm(kappa * gen) @ psi[nx, ny]
    return out


def evolve_fock(initial: FockVector, prep, frame, basis):
    """Apply each atomic branch's propagator; returns [(label, FockVector)].

    Each branch is renormalized, matching the equal-weight convention of
    :func:`polcat.dynamics.evolve_joint`.
    """
    if not isinstance(prep, MacroSuperposition):
        raise ValueError("the Fock oracle only handles macroscopic superpositions")
    basis = ModeBasis.parse(basis)
    kappa = frame.lambda_tau
    psi = initial.data
    blocks = _beam_splitter_blocks(initial.dim) if basis is ModeBasis.LINEAR else None
    out = []
    for label, sz in ((1, 1.0), (2, -1.0)):
        if basis is ModeBasis.CIRCULAR:
            evolved = _apply_circular(psi, sz * kappa)
        else:
            evolved = _apply_linear(psi, sz * kappa, blocks)
        out.append((label, _checked(evolved, initial.cutoff, "evolve_fock")))
    return out


def condition_fock(branches, prep, outcome=1):
    """Project onto (|1> + outcome|2>)/sqrt2; returns (FockVector, probability)."""
    vecs = dict(branches)
    raw = 0.5 * (vecs[1].data + prep.sign * outcome * vecs[2].data)
    prob = float(np.vdot(raw, raw).real)
    if prob <= 1e-14:
        raise DegenerateState(f"conditioning probability {prob:.3e} vanishes")
    return FockVector(vecs[1].cutoff, raw / math.sqrt(prob)), prob


# ---------------------------------------------------------------------------
# observables by dense algebra
# ---------------------------------------------------------------------------

def _quadratures(dim):
    a = annihilation(dim)
    ad = a.conj().T
    return (a + ad) / 2, (ad - a) / 2j


def _apply(op, psi, mode):
    return op @ psi if mode == 0 else psi @ op.T


def _variance(psi, phi):
    mean = np.vdot(psi, phi).real
    return float(np.vdot(phi, phi).real - mean ** 2)


def oracle_variance(v: FockVector, q: QuadratureSpec):
    x, y = _quadratures(v.dim)
    op = x if q.axis == "X" else y
    return _variance(v.data, _apply(op, v.data, q.mode))


def oracle_inseparability(v: FockVector):
    x, y = _quadratures(v.dim)
    psi = v.data
    plus = _apply(x, psi, 0) + _apply(x, psi, 1)
    minus = _apply(y, psi, 0) - _apply(y, psi, 1)
    return _variance(psi, plus) + _variance(psi, minus)


def reduced_density(v: FockVector, mode):
    psi = v.data
    return psi @ psi.conj().T if mode == 0 else psi.T @ psi.conj()


def oracle_linear_entropy(v: FockVector, mode=0):
    rho = reduced_density(v, mode)
    return float(1.0 - np.sum(np.abs(rho) ** 2))


def _squeezed_for_dim(spec, dim):
    cutoff = max(dim - 1, 20)
    while True:
        try:
            vec = squeezed_vacuum_fock(spec, cutoff)
        except CutoffTooSmall:
            if cutoff > 4000:
                raise
            cutoff *= 2
            continue
        return vec.data[:dim]


def oracle_fidelity(v: FockVector, spec: SqueezedVacuumSpec, mode=1):
    if v.n_modes == 1:
        xi = _squeezed_for_dim(spec, v.dim)
        return float(abs(np.vdot(xi, v.data)))
    rho = reduced_density(v, mode)
    xi = _squeezed_for_dim(spec, v.dim)
    return float(math.sqrt(max(np.vdot(xi, rho @ xi).real, 0.0)))


def oracle_observable(v: FockVector, which, arg=None, mode=None):
    """Dispatch: 'variance' (QuadratureSpec), 'inseparability',
    'linear_entropy' (mode), 'fidelity' (SqueezedVacuumSpec, mode)."""
    if which == "variance":
        return oracle_variance(v, arg)
    if which == "inseparability":
        return oracle_inseparability(v)
    if which == "linear_entropy":
        return oracle_linear_entropy(v, 0 if arg is None else arg)
    if which == "fidelity":
        return oracle_fidelity(v, arg, 1 if mode is None else mode)
    raise ValueError(f"unknown observable {which!r}")
