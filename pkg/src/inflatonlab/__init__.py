"""inflatonlab: single-inflaton background cosmology, primordial spectra and a
finite-dimensional model of the macroscopic-probability postulate."""

__version__ = "0.1.0"

from .background import (
    BackgroundSolution,
    BackgroundState,
    BigBangClass,
    EndCriterion,
    classify_bigbang,
    efolds_to_end,
    end_of_inflation,
    initial_state,
    integrate,
)
from .constants import G_NEWTON, SCALES, UnitScales
from .horizon import (
    DEFAULT_CONSTANTS,
    CosmoConstants,
    HorizonExit,
    solve_exit_general,
    solve_exit_reference,
)
from .observables import (
    SlowRollReport,
    compare_targets,
    power_spectrum,
    slow_roll_functions,
    spectra_report,
)
from .perturbations import (
    GravityMode,
    ScalarMode,
    TensorMode,
    get_gravity_mode,
    integrate_scalar,
    integrate_tensor,
    scalar_initial_data,
    set_gravity_mode,
    vector_mode_decay,
)
from .potential import (
    DerivedConstants,
    PotentialParams,
    derive_constants,
    potential,
    potential_d1,
    potential_d2,
)
from .toymodel import (
    CharacteristicFunction,
    DensitySamples,
    ToyModel,
    apply_kernel,
    characteristic_fn,
    density,
    invert_to_density,
    marginalize,
    propagate,
    reduce_state,
    two_level_model,
)
from .variance import (
    ClassicalCovariance,
    DecayExperiment,
    WeightFunction,
    classical_variance_00,
    covariance_matrix,
    decay_quantum_variance,
    mu_bound,
    sigma_squared,
    weight_overlap,
)

__all__ = [name for name in dir() if not name.startswith("_")]
