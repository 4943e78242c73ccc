"""Finite superpositions of two-mode coherent states.

A state is ``sum_k c_k |a_k0>|a_k1>`` in either the circular (+, -) or the
linear (x, y) polarization frame. Everything here is exact coherent-state
algebra: overlaps, norms and low-order moments come from the Gram matrix of
the terms, never from a Fock expansion.
"""

import enum
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import _kernels
from .errors import DegenerateState, NumericFailure

MERGE_TOL = 1e-12
DEGENERATE_TOL = 1e-14
NORMALIZED_TOL = 1e-12


class ModeBasis(enum.Enum):
    CIRCULAR = "circular"
    LINEAR = "linear"

    @property
    def mode_names(self):
        return ("plus", "minus") if self is ModeBasis.CIRCULAR else ("x", "y")

    @property
    def other(self):
        return ModeBasis.LINEAR if self is ModeBasis.CIRCULAR else ModeBasis.CIRCULAR

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


class CoherentTerm(NamedTuple):
    coeff: complex
    amps: tuple


def coherent_overlap(mu, nu):
    """<mu|nu> = exp(-|mu|^2/2 - |nu|^2/2 + conj(mu) nu)."""
    mu = complex(mu)
    nu = complex(nu)
    return complex(np.exp(-0.5 * abs(mu) ** 2 - 0.5 * abs(nu) ** 2 + mu.conjugate() * nu))


def _merge(coeffs, amps):
    keep_c = []
    keep_a = []
    for c, a in zip(coeffs, amps):
        for i, b in enumerate(keep_a):
            if np.all(np.abs(a - b) < MERGE_TOL):
                keep_c[i] += c
                break
        else:
            keep_c.append(complex(c))
            keep_a.append(a.copy())
    return np.array(keep_c, dtype=np.complex128), np.array(keep_a, dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class CoherentSuperposition:
    """Immutable superposition of two-mode coherent products.

    Terms whose amplitudes agree to within 1e-12 in both modes are merged on
    construction (coefficients added), so a cancelling pair shows up as a
    zero-norm state instead of a singular Gram matrix.
    """

    basis: ModeBasis
    coeffs: np.ndarray
    amps: np.ndarray
    normalized: bool = field(default=False)

    def __post_init__(self):
        basis = ModeBasis.parse(self.basis)
        coeffs = np.atleast_1d(np.asarray(self.coeffs, dtype=np.complex128))
        amps = np.asarray(self.amps, dtype=np.complex128).reshape(-1, 2)
        if coeffs.shape[0] == 0 or coeffs.shape[0] != amps.shape[0]:
            raise ValueError("need at least one term and one amplitude pair per coefficient")
        if not (np.all(np.isfinite(coeffs)) and np.all(np.isfinite(amps))):
            raise ValueError("coefficients and amplitudes must be finite")
        coeffs, amps = _merge(coeffs, amps)
        coeffs.setflags(write=False)
        amps.setflags(write=False)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "amps", amps)
        if self.normalized:
            n2 = state_norm2(self)
            # rounding in the Gram sum scales with (sum |c_k|)^2, large for nearly cancelling terms
            scale = max(1.0, float(np.sum(np.abs(coeffs))) ** 2)
            if abs(n2 - 1.0) > NORMALIZED_TOL * scale:
                raise ValueError(f"state flagged normalized but norm^2 = {n2!r}")

    @classmethod
    def from_terms(cls, basis, terms: Iterable, normalized=False):
        """Build from ``(coeff, (amp0, amp1))`` pairs."""
        terms = list(terms)
        coeffs = [t[0] for t in terms]
        amps = [tuple(t[1]) for t in terms]
        return cls(basis, coeffs, amps, normalized)

    @classmethod
    def coherent(cls, basis, amp0, amp1=0.0):
        return cls(basis, [1.0], [(amp0, amp1)], True)

    @property
    def terms(self):
        return [CoherentTerm(complex(c), (complex(a[0]), complex(a[1])))
                for c, a in zip(self.coeffs, self.amps)]

    def __len__(self):
        return self.coeffs.shape[0]

    def __repr__(self):
        body = ", ".join(f"{c:.6g}|{a[0]:.6g}, {a[1]:.6g}>" for c, a in zip(self.coeffs, self.amps))
        return f"CoherentSuperposition({self.basis.value}: {body})"


def gram(s):
    """G[k, l] = prod_m <a_km|a_lm>."""
    return _kernels.gram_matrix(np.ascontiguousarray(s.amps))


def state_norm2(s):
    """Gram-weighted squared norm sum_kl c_k* c_l G_kl."""
    c = s.coeffs
    value = np.conj(c) @ gram(s) @ c
    n2 = float(value.real)
    if n2 < -1e-12 or not np.isfinite(n2):
        raise NumericFailure(f"negative squared norm {n2!r}: corrupted state")
    return max(n2, 0.0)


def normalize(s):
    n2 = state_norm2(s)
    if n2 <= DEGENERATE_TOL:
        raise DegenerateState(f"squared norm {n2:.3e} is numerically zero")
    return CoherentSuperposition(s.basis, s.coeffs / np.sqrt(n2), s.amps, True)


def inner_product(s, t):
    """<s|t> for two states in the same frame (unnormalized inputs allowed)."""
    if s.basis is not t.basis:
        raise ValueError("states live in different polarization frames")
    cross = _kernels.cross_gram(np.ascontiguousarray(s.amps), np.ascontiguousarray(t.amps))
    return complex(np.conj(s.coeffs) @ cross @ t.coeffs)


def squared_fidelity(s, t):
    """|<s|t>|^2 / (<s|s><t|t>)."""
    return abs(inner_product(s, t)) ** 2 / (state_norm2(s) * state_norm2(t))


class Moments(NamedTuple):
    """First and second moments of the two mode operators.

    mean[m] = <a_m>, aa[m, n] = <a_m a_n>, adag_a[m, n] = <a_m^dag a_n>.
    """

    mean: np.ndarray
    aa: np.ndarray
    adag_a: np.ndarray


def moments(s):
    """All first/second moments in one Gram pass."""
    n2 = state_norm2(s)
    if n2 <= DEGENERATE_TOL:
        raise DegenerateState(f"squared norm {n2:.3e} is numerically zero")
    c = s.coeffs
    w = np.conj(c)[:, None] * c[None, :] * gram(s) / n2  # w[k, l] = c_k* c_l G_kl
    amps = s.amps
    col = w.sum(axis=0)  # sum over k, indexed by l
    mean = col @ amps
    aa = np.einsum("l,lm,ln->mn", col, amps, amps)
    adag_a = np.einsum("kl,km,ln->mn", w, np.conj(amps), amps)
    return Moments(mean, aa, adag_a)


@dataclass(frozen=True)
class MomentSpec:
    """One of A(m) = <a_m>, AA(m, n) = <a_m a_n>, AdagA(m, n) = <a_m^dag a_n>."""

    kind: str
    m: int
    n: int = 0

    def __post_init__(self):
        if self.kind not in ("A", "AA", "AdagA"):
            raise ValueError(f"unknown moment kind {self.kind!r}")
        if self.m not in (0, 1) or self.n not in (0, 1):
            raise ValueError("mode indices must be 0 or 1")


def moment(s, spec: MomentSpec):
    mom = moments(s)
    if spec.kind == "A":
        return complex(mom.mean[spec.m])
    if spec.kind == "AA":
        return complex(mom.aa[spec.m, spec.n])
    return complex(mom.adag_a[spec.m, spec.n])


def product_state(basis, amps0: Sequence, coeffs0: Sequence, amps1: Sequence, coeffs1: Sequence):
    """Tensor product of two single-mode superpositions, term by term."""
    coeffs = []
    amps = []
    for c0, a0 in zip(coeffs0, amps0):
        for c1, a1 in zip(coeffs1, amps1):
            coeffs.append(c0 * c1)
            amps.append((a0, a1))
    return CoherentSuperposition(basis, coeffs, amps)
