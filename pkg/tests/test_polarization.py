import math

import numpy as np
import pytest

from polcat.observables import all_variances, inseparability
from polcat.polarization import (
    CIRC_TO_LIN,
    LIN_TO_CIRC,
    change_basis,
    circular_to_linear,
    linear_to_circular,
    transform_amps,
)
from polcat.states import CoherentSuperposition, ModeBasis, state_norm2

C, L = ModeBasis.CIRCULAR, ModeBasis.LINEAR


def test_matrices_are_unitary_inverses():
    np.testing.assert_allclose(CIRC_TO_LIN @ CIRC_TO_LIN.conj().T, np.eye(2), atol=1e-15)
    np.testing.assert_allclose(LIN_TO_CIRC @ CIRC_TO_LIN, np.eye(2), atol=1e-15)


def test_pair_maps():
    x, y = circular_to_linear(1.0, 0.0)
    assert x == pytest.approx(1 / math.sqrt(2)) and y == pytest.approx(1j / math.sqrt(2))
    np.testing.assert_allclose(linear_to_circular(x, y), (1.0, 0.0), atol=1e-15)


def test_transform_amps_identity_and_roundtrip():
    amps = np.array([[0.3 + 0.1j, -0.7j], [1.2, 0.4 - 0.4j]])
    np.testing.assert_array_equal(transform_amps(amps, C, C), amps)
    back = transform_amps(transform_amps(amps, C, L), L, C)
    np.testing.assert_allclose(back, amps, atol=1e-15)


def test_change_basis_preserves_norm_and_flag():
    s = CoherentSuperposition(C, [1, 1], [(0.3j, -0.3j), (-0.3j, 0.3j)])
    t = change_basis(s, L)
    assert t.basis is L and not t.normalized
    assert state_norm2(t) == pytest.approx(state_norm2(s), abs=1e-13)
    assert change_basis(s, C) is s


def test_ecs_maps_to_y_cat():
    # the circular entangled coherent state is a y-mode cat with x in vacuum
    s = CoherentSuperposition(C, [1, 1], [(0.3j, -0.3j), (-0.3j, 0.3j)])
    t = change_basis(s, L)
    np.testing.assert_allclose(t.amps[:, 0], 0.0, atol=1e-15)
    np.testing.assert_allclose(np.abs(t.amps[:, 1]), 0.3 * math.sqrt(2), atol=1e-15)


def test_variances_frozen_in_linear_frame():
    s = CoherentSuperposition(C, [1, 1], [(0.3, -0.3), (-0.3, 0.3)])
    v = all_variances(change_basis(s, L))
    np.testing.assert_allclose(v, [0.25, 0.25, 0.17602727813055972, 0.35602727813055971], atol=1e-14)
    assert inseparability(s) == pytest.approx(0.85205455626111944, abs=1e-14)
