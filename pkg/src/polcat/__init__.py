"""Coherent-state superpositions of a two-mode polarized field coupled to
four-level atoms: cat-state generation, entanglement and squeezing measures.
"""

from .adiabatic import (
    MeanFieldState,
    PhysicalParams,
    StationaryReport,
    coupling_frame,
    derived_coupling,
    integrate_mean_field,
    stationary_check,
)
from .dynamics import (
    CouplingFrame,
    MacroSuperposition,
    ProductSuperposition,
    condition_atoms,
    conditioned_state,
    evolve_joint,
    initial_product,
    make_cat_y,
    make_entangled_coherent,
    norm_factor,
    parse_prep,
)
from .errors import (
    CutoffTooSmall,
    DegenerateState,
    NonPhysical,
    NotStationary,
    NumericFailure,
    PolcatError,
    StepTooLarge,
    UnsupportedBasisCombination,
)
from .observables import (
    QuadratureSpec,
    SqueezedVacuumSpec,
    all_variances,
    best_fidelity,
    covariance_matrix,
    fidelity_squeezed_vacuum,
    inseparability,
    linear_entropy,
    quadrature_variance,
)
from .polarization import change_basis, circular_to_linear, linear_to_circular
from .states import (
    CoherentSuperposition,
    ModeBasis,
    MomentSpec,
    inner_product,
    moment,
    moments,
    normalize,
    state_norm2,
)

__version__ = "0.1.0"
