"""Acceptance criteria, one test per criterion, at the stated tolerances.

A summary line per criterion is printed at the end of the run (see conftest).
"""

import math
import time

import numpy as np
import pytest

from polcat import fock
from polcat.adiabatic import (
    MeanFieldState,
    PhysicalParams,
    derived_coupling,
    integrate_mean_field,
    stationary_check,
)
from polcat.dynamics import (
    CouplingFrame,
    MacroSuperposition,
    ProductSuperposition,
    conditioned_state,
    evolve_joint,
    initial_product,
    make_cat_y,
    norm_factor,
)
from polcat.observables import (
    QuadratureSpec,
    SqueezedVacuumSpec,
    all_variances,
    fidelity_squeezed_vacuum,
    inseparability,
    linear_entropy,
    quadrature_variance,
)
from polcat.polarization import change_basis, transform_amps
from polcat.states import CoherentSuperposition, ModeBasis, state_norm2

C, L = ModeBasis.CIRCULAR, ModeBasis.LINEAR
IM_ALPHAS = (0.3, 0.7, 1.5)
RATIOS = (0.0, 0.1)
TAUS = np.linspace(0.0, math.pi, 101)

_T0 = time.perf_counter()


def _grid():
    for r in RATIOS:
        for a in IM_ALPHAS:
            for tau in TAUS:
                yield r, 1j * a, tau


def test_criterion_01_baselines_at_tau_zero():
    frame = CouplingFrame(0.0)
    for re_part in (0.0, 0.4, -1.1):
        for im in IM_ALPHAS:
            alpha = complex(re_part, im)
            for basis in (C, L):
                # the "-" preparation conditions to zero norm at tau = 0
                for prep in (MacroSuperposition(1), ProductSuperposition(1)):
                    if basis is L and isinstance(prep, ProductSuperposition):
                        continue
                    s, _ = conditioned_state(alpha, alpha, frame, prep, basis)
                    np.testing.assert_allclose(all_variances(s), 0.25, rtol=0, atol=1e-12)
                    assert abs(inseparability(s) - 1.0) <= 1e-12
                    assert abs(linear_entropy(s, 0)) <= 1e-12
                    assert abs(linear_entropy(s, 1)) <= 1e-12


def test_criterion_02_norm_identities():
    for r, alpha, tau in _grid():
        frame = CouplingFrame(tau, r)
        n_plus, n_minus = norm_factor(alpha, alpha, frame)
        assert abs(n_plus + n_minus - 4.0) <= 1e-12
        for sign, closed in ((1, n_plus), (-1, n_minus)):
            if closed < 1e-9:
                continue  # the "-" branch sum vanishes at tau = 0
            joint = evolve_joint(initial_product(alpha, alpha, C), MacroSuperposition(sign), frame)
            raw = CoherentSuperposition(C, [1.0, sign], [b.term.amps for b in joint.branches])
            assert abs(state_norm2(raw) - closed) <= 1e-12


def test_criterion_03_frame_commutation():
    for prep in (MacroSuperposition(1), MacroSuperposition(-1)):
        for r, alpha, tau in _grid():
            frame = CouplingFrame(tau, r)
            circ = evolve_joint(initial_product(alpha, alpha, C), prep, frame)
            lin = evolve_joint(initial_product(alpha, alpha, L), prep, frame)
            for bc, bl in zip(circ.branches, lin.branches):
                assert bc.atom_label == bl.atom_label
                mapped = transform_amps([bc.term.amps], C, L)[0]
                np.testing.assert_allclose(mapped, bl.term.amps, rtol=0, atol=1e-12)
                assert abs(bc.weight * bc.term.coeff - bl.weight * bl.term.coeff) <= 1e-12


def _random_points(n, seed=20240611):
    rng = np.random.default_rng(seed)
    points = []
    while len(points) < n:
        r = float(rng.choice([0.0, rng.uniform(0.0, 0.1)]))
        tau = float(rng.uniform(0.2, math.pi))
        grow = math.exp(r * tau)
        # keep every evolved circular amplitude inside |mu| <= 2.5
        mod = rng.uniform(0.0, 2.5 / grow, size=2)
        ph = rng.uniform(0.0, 2 * math.pi, size=2)
        alpha, beta = mod * np.exp(1j * ph)
        prep = MacroSuperposition(int(rng.choice([1, -1])))
        basis = C if rng.random() < 0.5 else L
        spec = SqueezedVacuumSpec(float(rng.uniform(0.0, 0.6)), float(rng.uniform(0.0, 2 * math.pi)))
        if norm_factor(alpha, beta, CouplingFrame(tau, r))[0 if prep.sign == 1 else 1] < 1e-3:
            continue
        points.append((complex(alpha), complex(beta), CouplingFrame(tau, r), prep, basis, spec))
    return points


def test_criterion_04_oracle_equivalence():
    cutoff = 60
    for alpha, beta, frame, prep, basis, spec in _random_points(30):
        s, prob = conditioned_state(alpha, beta, frame, prep, basis)
        v0 = fock.to_fock(initial_product(alpha, beta, basis), cutoff)
        v, prob_f = fock.condition_fock(fock.evolve_fock(v0, prep, frame, basis), prep)
        assert abs(prob - prob_f) <= 1e-8
        for q in (QuadratureSpec(m, ax) for m in (0, 1) for ax in ("X", "Y")):
            assert abs(quadrature_variance(s, q) - fock.oracle_variance(v, q)) <= 1e-8
        assert abs(inseparability(s) - fock.oracle_inseparability(v)) <= 1e-8
        for mode in (0, 1):
            assert abs(linear_entropy(s, mode) - fock.oracle_linear_entropy(v, mode)) <= 1e-8
            assert abs(fidelity_squeezed_vacuum(s, spec, mode) - fock.oracle_fidelity(v, spec, mode)) <= 1e-8


def test_criterion_05_only_x_y_squeezed():
    frame = CouplingFrame(math.pi / 2, 0.0)
    s, _ = conditioned_state(0.3j, 0.3j, frame, MacroSuperposition(1), L)
    v0 = fock.to_fock(initial_product(0.3j, 0.3j, L), 40)
    v, _ = fock.condition_fock(fock.evolve_fock(v0, MacroSuperposition(1), frame, L), MacroSuperposition(1))
    var_xy = quadrature_variance(s, QuadratureSpec(1, "X"))
    assert abs(var_xy - fock.oracle_variance(v, QuadratureSpec(1, "X"))) <= 1e-6
    assert abs(var_xy - 0.176028) <= 1e-6
    assert var_xy < 0.25
    others = [quadrature_variance(s, QuadratureSpec(m, ax)) for m, ax in ((0, "X"), (0, "Y"), (1, "Y"))]
    assert min(others) >= 0.25 - 1e-12


def test_criterion_06_circular_criterion_dips_below_one():
    for im in (0.3, 0.7):
        vals = [inseparability(conditioned_state(1j * im, 1j * im, CouplingFrame(t))[0]) for t in TAUS]
        assert min(vals) < 1.0
    s, _ = conditioned_state(0.3j, 0.3j, CouplingFrame(math.pi / 2))
    lin = change_basis(s, L)
    identity = 2 * (quadrature_variance(lin, QuadratureSpec(0, "X")) + quadrature_variance(lin, QuadratureSpec(1, "X")))
    assert abs(inseparability(s) - identity) <= 1e-3
    assert abs(inseparability(s) - 0.852056) <= 1e-3


def test_criterion_07_linear_criterion_never_below_one():
    for r, alpha, tau in _grid():
        s, _ = conditioned_state(alpha, alpha, CouplingFrame(tau, r), MacroSuperposition(1), L)
        assert inseparability(s) >= 1.0 - 1e-9


def test_criterion_08_entropy_shape():
    step = TAUS[1] - TAUS[0]
    for im in IM_ALPHAS:
        alpha = 1j * im
        s_vals = np.array([linear_entropy(conditioned_state(alpha, alpha, CouplingFrame(t))[0]) for t in TAUS])
        assert abs(s_vals[0]) <= 1e-9 and abs(s_vals[-1]) <= 1e-9
        assert abs(TAUS[int(np.argmax(s_vals))] - math.pi / 2) <= step + 1e-12
        shifted = np.array([linear_entropy(conditioned_state(alpha, alpha, CouplingFrame(t + math.pi))[0])
                            for t in TAUS])
        np.testing.assert_allclose(shifted, s_vals, rtol=0, atol=1e-9)


def test_criterion_09_cat_fidelity():
    vac = make_cat_y(0.0, "even")
    assert abs(fidelity_squeezed_vacuum(vac, SqueezedVacuumSpec(0.0)) - 1.0) <= 1e-12
    xis = np.round(np.arange(0, 51) * 0.02, 10)
    for im in (0.05, 0.1, 0.2, 0.3):
        cat = make_cat_y(1j * im, "even")
        best = max(fidelity_squeezed_vacuum(cat, SqueezedVacuumSpec(float(x))) for x in xis)
        assert best >= 0.99


def test_criterion_10_criterion_frame_identity():
    for prep in (MacroSuperposition(1), MacroSuperposition(-1)):
        for r, alpha, tau in _grid():
            frame = CouplingFrame(tau, r)
            if norm_factor(alpha, alpha, frame)[0 if prep.sign == 1 else 1] < 1e-9:
                continue
            s, _ = conditioned_state(alpha, alpha, frame, prep, C)
            lin = change_basis(s, L)
            rhs = 2 * (quadrature_variance(lin, QuadratureSpec(0, "X"))
                       + quadrature_variance(lin, QuadratureSpec(1, "X")))
            assert abs(inseparability(s) - rhs) <= 1e-10


def _observables(s):
    return np.array([*all_variances(s), inseparability(s), linear_entropy(s, 0), linear_entropy(s, 1)])


def test_criterion_11_product_reduction():
    for r in RATIOS:
        for tau in TAUS[::4]:
            frame = CouplingFrame(tau, r)
            macro, p_macro = conditioned_state(0.3j, 0.3j, frame, MacroSuperposition(1))
            prod, p_prod = conditioned_state(0.3j, 0.3j, frame, ProductSuperposition(1))
            np.testing.assert_allclose(_observables(prod), _observables(macro), rtol=0, atol=1e-10)
            assert abs(p_prod - p_macro) <= 1e-10

    ten = ProductSuperposition(10)
    for im in IM_ALPHAS:
        alpha = 1j * im
        s0, p0 = conditioned_state(alpha, alpha, CouplingFrame(0.0), ten)
        np.testing.assert_allclose(all_variances(s0), 0.25, rtol=0, atol=1e-12)
        assert abs(inseparability(s0) - 1.0) <= 1e-12 and abs(linear_entropy(s0)) <= 1e-12
        assert abs(p0 - 1.0) <= 1e-12
        for r in RATIOS:
            for tau in TAUS[::10]:
                s, p = conditioned_state(alpha, alpha, CouplingFrame(tau, r), ten)
                assert 0.0 < p <= 1.0 + 1e-12
                assert abs(state_norm2(s) - 1.0) <= 1e-12
                v = all_variances(s)
                assert v[0] * v[1] >= 1 / 16 - 1e-12 and v[2] * v[3] >= 1 / 16 - 1e-12
                lin = change_basis(s, L)
                rhs = 2 * (quadrature_variance(lin, QuadratureSpec(0, "X"))
                           + quadrature_variance(lin, QuadratureSpec(1, "X")))
                assert abs(inseparability(s) - rhs) <= 1e-10


def test_criterion_12_adiabatic_validation():
    gamma = 1e7
    p = PhysicalParams.symmetric(g=gamma / 1e4, gamma=gamma, delta=25 * gamma)
    init = MeanFieldState.ground(0.3, 0.3j)
    dt = 0.05 / max(p.gamma, abs(p.delta))
    traj = integrate_mean_field(p, init, 50 / gamma, dt, record_every=500)
    rep = stationary_check(traj, p)
    assert rep.coherence_14 <= 1e-3 and rep.coherence_23 <= 1e-3
    assert rep.population_44 <= 0.05 and rep.population_33 <= 0.05
    lam1, lam2 = derived_coupling(p)
    assert lam1 / abs(lam2) == p.gamma / p.delta


def test_criterion_13_suite_runtime():
    elapsed = time.perf_counter() - _T0
    print(f"acceptance module wall time {elapsed:.2f} s")
    assert elapsed < 60.0


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
