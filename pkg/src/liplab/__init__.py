"""liplab: numerical experiments for differentiation along Lipschitz unit vector fields."""

from .averaging import (
    MaximalSpec,
    QuadratureSpec,
    line_average,
    m_t,
    m_t_pushforward,
    m_t_shifted,
    maximal,
)
from .fields import (
    FieldDescriptor,
    PairSampler,
    ScalarField,
    UnitVectorField,
    catalog_scalar_fields,
    catalog_unit_fields,
    constant_field,
    estimate_lipschitz,
    field_from_descriptor,
    make_phase_field,
    shear_field,
    sinusoid_field,
)
from .measure import (
    GridSpec,
    IntervalCollection,
    MeasureEstimate,
    check_distortion,
    distortion_factors,
    greedy_cover_select,
    level_set_measure,
    level_set_sweep,
    measure_image,
    measure_set,
    measure_set_monte_carlo,
)
from .perturb import (
    ContractionError,
    FixedPointError,
    PerturbationMap,
    SolverSpec,
    apply,
    invert,
    pushforward_field,
    roundtrip_error,
)
from .experiments import (
    ExperimentReport,
    SGrid,
    Verdict,
    run_c_alpha,
    run_continuity_in_s,
    run_h_n_decay,
    run_norm_convergence,
    run_pointwise,
    run_weak_type,
    weak_type_constant,
)

__version__ = "0.1.0"
