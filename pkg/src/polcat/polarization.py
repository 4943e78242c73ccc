"""Circular <-> linear polarization frames.

a_+ = (a_x - i a_y)/sqrt2 and a_- = (a_x + i a_y)/sqrt2. The map is a
passive unitary, so a coherent product goes to a coherent product whose
amplitudes transform exactly like the annihilation operators.
"""

import numpy as np

from .states import CoherentSuperposition, ModeBasis

_S = 1.0 / np.sqrt(2.0)

# rows: new modes, columns: old modes (ordered (+, -) or (x, y))
CIRC_TO_LIN = np.array([[_S, _S], [1j * _S, -1j * _S]])
LIN_TO_CIRC = np.array([[_S, -1j * _S], [_S, 1j * _S]])


def circular_to_linear(a_plus, a_minus):
    """(alpha_+, alpha_-) -> (alpha_x, alpha_y)."""
    return (a_plus + a_minus) * _S, 1j * (a_plus - a_minus) * _S


def linear_to_circular(a_x, a_y):
    """(alpha_x, alpha_y) -> (alpha_+, alpha_-)."""
    return (a_x - 1j * a_y) * _S, (a_x + 1j * a_y) * _S


def transform_amps(amps, source, target):
    source = ModeBasis.parse(source)
    target = ModeBasis.parse(target)
    amps = np.asarray(amps, dtype=np.complex128)
    if source is target:
        return amps
    mat = CIRC_TO_LIN if source is ModeBasis.CIRCULAR else LIN_TO_CIRC
    return amps @ mat.T


def change_basis(s, target):
    """Re-express ``s`` in ``target``; coefficients are untouched."""
    target = ModeBasis.parse(target)
    if s.basis is target:
        return s
    return CoherentSuperposition(target, s.coeffs, transform_amps(s.amps, s.basis, target), s.normalized)
