"""Tabulated sweeps and figure reproductions, plus CSV output.

A table is a list of column names and a list of rows; rows are always
produced in grid order even when points are evaluated on worker threads.
"""

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace
from typing import Optional

import numpy as np

from . import fock
from .adiabatic import MeanFieldState, PhysicalParams, integrate_mean_field, stationary_check
from .dynamics import CouplingFrame, MacroSuperposition, conditioned_state, initial_product, make_cat_y, parse_prep
from .errors import NumericFailure
from .observables import (
    QuadratureSpec,
    SqueezedVacuumSpec,
    all_variances,
    fidelity_squeezed_vacuum,
    inseparability,
    linear_entropy,
)
from .states import ModeBasis

FIGURES = ("2a", "2b", "3a", "3b", "4a", "4b", "5a", "5b", "6a", "6b", "7")
FIGURE_ALPHAS = (0.3, 0.7, 1.5)
MAX_STEPS = 10 ** 6
MAX_TAU = 100.0


@dataclass(frozen=True)
class SweepConfig:
    subcommand: str = "sweep"
    basis: str = "circular"
    alpha_re: float = 0.0
    alpha_im: float = 0.3
    beta_re: Optional[float] = None
    beta_im: Optional[float] = None
    ratio: float = 0.0
    tau_max: float = math.pi
    steps: int = 400
    parity: str = "even"
    prep: str = "macro+"
    natoms: Optional[int] = None
    cutoff: int = 0
    weighted: bool = False
    theta: float = 0.0
    sign: int = -1
    outcome: int = 1
    xi_max: float = 1.0
    workers: int = 1

    def __post_init__(self):
        if self.steps < 1 or self.steps > MAX_STEPS:
            raise ValueError(f"steps must lie in [1, {MAX_STEPS}]")
        if not (0 <= self.tau_max <= MAX_TAU):
            raise ValueError(f"tau_max must lie in [0, {MAX_TAU}]")
        if self.parity not in ("even", "odd"):
            raise ValueError("parity must be even or odd")
        ModeBasis.parse(self.basis)
        parse_prep(self.prep, self.natoms)
        CouplingFrame(0.0, self.ratio, self.sign)
        if self.cutoff and self.cutoff < 20:
            raise ValueError("cutoff must be 0 (off) or >= 20")

    @property
    def alpha(self):
        return complex(self.alpha_re, self.alpha_im)

    @property
    def beta(self):
        # beta defaults to alpha (symmetric input)
        re = self.alpha_re if self.beta_re is None else self.beta_re
        im = self.alpha_im if self.beta_im is None else self.beta_im
        return complex(re, im)

    @property
    def mode_basis(self):
        return ModeBasis.parse(self.basis)

    @property
    def preparation(self):
        return parse_prep(self.prep, self.natoms)

    def frame(self, tau):
        return CouplingFrame(float(tau), self.ratio, self.sign)


def tau_grid(tau_max, steps):
    """``steps`` equal intervals on [0, tau_max]; a single point when tau_max = 0."""
    if tau_max == 0:
        return np.zeros(1)
    return np.linspace(0.0, tau_max, steps + 1)


def _pmap(fn, items, workers):
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _state_at(cfg, tau, alpha=None, beta=None):
    alpha = cfg.alpha if alpha is None else alpha
    beta = cfg.beta if beta is None else beta
    try:
        return conditioned_state(alpha, beta, cfg.frame(tau), cfg.preparation, cfg.mode_basis,
                                 weighted=cfg.weighted, outcome=cfg.outcome)
    except NumericFailure as exc:
        raise type(exc)(f"{exc} (tau = {tau:.12g})") from exc


def _oracle_point(cfg, tau):
    prep = cfg.preparation
    if not isinstance(prep, MacroSuperposition) or cfg.weighted:
        raise ValueError("Fock cross-check needs a macro preparation without weights")
    basis = cfg.mode_basis
    v0 = fock.to_fock(initial_product(cfg.alpha, cfg.beta, basis), cfg.cutoff)
    branches = fock.evolve_fock(v0, prep, cfg.frame(tau), basis)
    v, prob = fock.condition_fock(branches, prep, cfg.outcome)
    var = [fock.oracle_variance(v, QuadratureSpec(m, ax)) for m in (0, 1) for ax in ("X", "Y")]
    return [prob, *var, fock.oracle_inseparability(v), fock.oracle_linear_entropy(v, 0)]


def _names(cfg):
    m0, m1 = cfg.mode_basis.mode_names
    return m0, m1, f"I_{m0}_{m1}"


def sweep_table(cfg: SweepConfig):
    """Every observable over the tau grid (the ``sweep`` subcommand)."""
    m0, m1, iname = _names(cfg)
    cols = ["tau", "probability", f"var_X_{m0}", f"var_Y_{m0}", f"var_X_{m1}", f"var_Y_{m1}", iname, f"S_{m0}"]
    if cfg.cutoff:
        cols += [c + "_fock" for c in cols[1:]]

    def point(tau):
        s, prob = _state_at(cfg, tau)
        row = [tau, prob, *all_variances(s), inseparability(s), linear_entropy(s, 0)]
        if cfg.cutoff:
            try:
                row += _oracle_point(cfg, tau)
            except NumericFailure as exc:
                raise type(exc)(f"{exc} (tau = {tau:.12g})") from exc
        return row

    return cols, _pmap(point, tau_grid(cfg.tau_max, cfg.steps), cfg.workers)


def _select(cfg, table, keep):
    cols, rows = table
    idx = [cols.index(c) for c in keep]
    return keep, [[r[i] for i in idx] for r in rows]


def variance_table(cfg):
    m0, m1, _ = _names(cfg)
    return _select(cfg, sweep_table(replace(cfg, cutoff=0)),
                   ["tau", f"var_X_{m0}", f"var_Y_{m0}", f"var_X_{m1}", f"var_Y_{m1}"])


def criterion_table(cfg):
    _, _, iname = _names(cfg)
    return _select(cfg, sweep_table(replace(cfg, cutoff=0)), ["tau", iname])


def entropy_table(cfg):
    m0, _, _ = _names(cfg)
    return _select(cfg, sweep_table(replace(cfg, cutoff=0)), ["tau", f"S_{m0}"])


def fidelity_table(cfg):
    """F(cat_y(alpha, parity), xi) over |xi| in [0, xi_max]."""
    cat = make_cat_y(cfg.alpha, cfg.parity)
    grid = np.linspace(0.0, cfg.xi_max, cfg.steps + 1) if cfg.xi_max > 0 else np.zeros(1)
    rows = [[float(x), fidelity_squeezed_vacuum(cat, SqueezedVacuumSpec(float(x), cfg.theta))] for x in grid]
    return ["xi", "F"], rows


FIG7_ALPHA = np.round(np.arange(0, 31) * 0.05, 10)
FIG7_XI = np.round(np.arange(0, 51) * 0.02, 10)


def figure_table(fig_id, cfg: Optional[SweepConfig] = None, overrides=()):
    """Tabulate one figure. ``overrides`` names the config fields the caller set."""
    if fig_id not in FIGURES:
        raise ValueError(f"unknown figure {fig_id!r}; choose from {', '.join(FIGURES)}")
    cfg = cfg or SweepConfig()
    overrides = set(overrides)
    if fig_id == "7":
        alphas = FIG7_ALPHA if cfg.parity == "even" else FIG7_ALPHA[1:]
        if "alpha_im" in overrides:
            alphas = [cfg.alpha_im]
        rows = []
        for a in alphas:
            cat = make_cat_y(complex(0.0, a), cfg.parity)
            for x in FIG7_XI:
                rows.append([float(a), float(x),
                             fidelity_squeezed_vacuum(cat, SqueezedVacuumSpec(float(x), cfg.theta))])
        return ["alpha_im", "xi", "F"], rows

    number, variant = fig_id[0], fig_id[1]
    base = {}
    if "ratio" not in overrides:
        base["ratio"] = 0.0 if variant == "a" else 0.1
    base["basis"] = "linear" if number in ("3", "4") else "circular"
    base["alpha_re"] = 0.0 if "alpha_re" not in overrides else cfg.alpha_re
    for key in ("beta_re", "beta_im"):
        if key not in overrides:
            base[key] = None
    cfg = replace(cfg, **base)
    grid = tau_grid(cfg.tau_max, cfg.steps)
    m0, m1, iname = _names(cfg)

    if number in ("2", "4"):
        mode = 0 if number == "2" else 1
        name = (m0, m1)[mode]
        if "alpha_im" not in overrides:
            cfg = replace(cfg, alpha_im=0.3)

        def point(tau):
            s, _ = _state_at(cfg, tau)
            v = all_variances(s)
            return [tau, v[2 * mode], v[2 * mode + 1]]

        return ["tau", f"var_X_{name}", f"var_Y_{name}"], _pmap(point, grid, cfg.workers)

    alphas = [cfg.alpha_im] if "alpha_im" in overrides else list(FIGURE_ALPHAS)
    if number in ("3", "5"):
        label, fn = iname, inseparability
    else:
        label, fn = f"S_{m0}", linear_entropy

    def point(tau):
        row = [tau]
        for a in alphas:
            s, _ = _state_at(replace(cfg, alpha_im=a), tau)
            row.append(fn(s))
        return row

    cols = ["tau"] + [f"{label}_im{a:g}" for a in alphas]
    return cols, _pmap(point, grid, cfg.workers)


@dataclass(frozen=True)
class AdiabaticConfig:
    g: float = 1e3
    gamma: float = 1e7
    delta: float = 2.5e8
    gamma_par: Optional[float] = None
    a_plus: complex = 0.3
    a_minus: complex = 0.3
    s11: float = 0.5
    t_end: Optional[float] = None
    dt: Optional[float] = None
    record_every: int = 100
    symmetrized: bool = True

    def params(self):
        gpar = self.gamma / 2 if self.gamma_par is None else self.gamma_par
        return PhysicalParams(self.g, self.gamma, gpar, self.gamma - gpar, self.delta)


def adiabatic_table(acfg: AdiabaticConfig):
    """Mean-field trajectory table and its stationary report."""
    p = acfg.params()
    t_end = 50.0 / p.gamma if acfg.t_end is None else acfg.t_end
    dt = 0.05 / max(p.gamma, abs(p.delta)) if acfg.dt is None else acfg.dt
    init = MeanFieldState.ground(acfg.a_plus, acfg.a_minus, acfg.s11)
    traj = integrate_mean_field(p, init, t_end, dt, acfg.record_every, acfg.symmetrized)
    cols = ["t", "s11", "s22", "s33", "s44", "re_s14", "im_s14", "re_s23", "im_s23"]
    rows = [[float(t), *y[:4].real, y[4].real, y[4].imag, y[5].real, y[5].imag]
            for t, y in zip(traj.times, traj.values)]
    report = stationary_check(traj, p) if t_end * p.gamma >= 20 else None
    return cols, rows, report


def _fmt(v):
    if v is None:
        return "nan"
    return format(float(v), ".12g")


def write_csv(stream, cols, rows, meta=None, footer=None):
    """CSV with '#' provenance lines, a header row and 12-significant-digit values."""
    for key in sorted(meta or {}):
        stream.write(f"# {key} = {meta[key]}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(cols)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    for key in sorted(footer or {}):
        stream.write(f"# {key} = {footer[key]}\n")


def config_meta(cfg):
    return {k: v for k, v in asdict(cfg).items()}
