import math

import numpy as np
import pytest

from polcat import fock
from polcat.dynamics import CouplingFrame, MacroSuperposition, conditioned_state, initial_product, make_cat_y
from polcat.errors import CutoffTooSmall, DegenerateState
from polcat.observables import (
    QuadratureSpec,
    SqueezedVacuumSpec,
    fidelity_squeezed_vacuum,
    inseparability,
    linear_entropy,
    quadrature_variance,
)
from polcat.states import CoherentSuperposition, ModeBasis

C, L = ModeBasis.CIRCULAR, ModeBasis.LINEAR


def test_coherent_vector_is_poisson():
    v = fock.coherent_vector(1.2, 40)
    np.testing.assert_allclose(np.abs(v) ** 2, [math.exp(-1.44) * 1.44 ** n / math.factorial(n) for n in range(41)],
                               rtol=1e-12)


def test_cutoff_too_small_raises():
    with pytest.raises(CutoffTooSmall):
        fock.to_fock(CoherentSuperposition.coherent(C, 3.0, 0.0), 10)
    assert fock.required_cutoff(CoherentSuperposition.coherent(C, 3.0, 0.0)) == 53


def test_zero_state_raises():
    with pytest.raises(DegenerateState):
        fock.to_fock(CoherentSuperposition(C, [1, -1], [(0.1, 0), (0.1, 0)]), 20)


def test_squeezed_vacuum_coefficients_frozen():
    v = fock.squeezed_vacuum_fock(SqueezedVacuumSpec(0.5), 40).data
    assert (v[2] / v[0]).real == pytest.approx(-0.326766175601203, abs=1e-14)
    np.testing.assert_array_equal(v[1::2], 0)
    with pytest.raises(ValueError):
        fock.squeezed_vacuum_fock(SqueezedVacuumSpec(0.5), 10)


def test_beam_splitter_blocks_unitary():
    from scipy.linalg import expm
    for nx, gen in fock._beam_splitter_blocks(6):
        np.testing.assert_allclose(gen, gen.conj().T, atol=0)
        u = expm(1j * gen)
        np.testing.assert_allclose(u @ u.conj().T, np.eye(nx.size), atol=1e-12)


def test_evolution_matches_analytic_both_frames():
    frame = CouplingFrame(1.1, 0.1)
    for basis in (C, L):
        for prep in (MacroSuperposition(1), MacroSuperposition(-1)):
            s, prob = conditioned_state(0.4 - 0.2j, 0.3j, frame, prep, basis)
            v0 = fock.to_fock(initial_product(0.4 - 0.2j, 0.3j, basis), 30)
            v, prob_f = fock.condition_fock(fock.evolve_fock(v0, prep, frame, basis), prep)
            assert prob_f == pytest.approx(prob, abs=1e-12)
            for q in (QuadratureSpec(0, "X"), QuadratureSpec(1, "Y")):
                assert fock.oracle_observable(v, "variance", q) == pytest.approx(quadrature_variance(s, q), abs=1e-12)
            assert fock.oracle_observable(v, "inseparability") == pytest.approx(inseparability(s), abs=1e-12)
            assert fock.oracle_observable(v, "linear_entropy", 1) == pytest.approx(linear_entropy(s, 1), abs=1e-12)


def test_fidelity_oracle_on_cat():
    cat = make_cat_y(0.3j)
    v = fock.to_fock(cat, 30)
    spec = SqueezedVacuumSpec(0.18)
    assert fock.oracle_fidelity(v, spec) == pytest.approx(fidelity_squeezed_vacuum(cat, spec), abs=1e-12)
    assert fock.oracle_fidelity(v, spec) == pytest.approx(0.99991401335728, abs=1e-12)


def test_oracle_rejects_product_and_unknown():
    from polcat.dynamics import ProductSuperposition
    v0 = fock.to_fock(initial_product(0.3j, 0.3j), 20)
    with pytest.raises(ValueError):
        fock.evolve_fock(v0, ProductSuperposition(2), CouplingFrame(1.0), C)
    with pytest.raises(ValueError):
        fock.oracle_observable(v0, "wigner")
