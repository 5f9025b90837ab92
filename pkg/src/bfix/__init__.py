"""Fixed-point solvers and convergence certification for b-metric spaces.

The package is organized by what each layer measures:

- spaces: distances with a relaxed triangle inequality, axiom fuzzing,
  Hausdorff distance between finite sets.
- comparison: candidate gap-shrinking functions and numerical evidence
  for their summability classes.
- cauchy: chained-triangle and weighted tail bounds that certify orbits
  as Cauchy, with explicit constants.
- solvers: single-valued fixed-point iteration under a potential-descent
  or comparison-contraction condition, with a-priori error bounds.
- multivalued: orbits of finite-set-valued maps under admissibility-gated
  contraction.
- experiments / cli: deterministic, seeded experiment harness.
"""

from .errors import (
    AdmissibleSuccessorNotFound,
    BfixError,
    ConfigError,
    DistanceDomainError,
    DomainError,
    EmptySetError,
    LengthError,
    NotABMetric,
    ParameterError,
    PreconditionError,
    RangeError,
)
from .series import (
    EVIDENCE_AGAINST,
    EVIDENCE_FOR,
    INCONCLUSIVE,
    SeriesCriteria,
    series_verdict,
)
from .spaces import (
    AxiomReport,
    AxiomViolation,
    BMetricSpace,
    DomainDescriptor,
    builtin_space,
    discrete_matrix,
    hausdorff_distance,
    load_discrete_space_csv,
    lp_quasinorm,
    save_discrete_space_csv,
    snowflake,
    verify_b_metric_axioms,
)
from .comparison import (
    AsymptoticReport,
    ClassEvidence,
    ComparisonFunction,
    berinde_membership_check,
    berinde_min_term,
    berinde_min_term_profile,
    check_comparison_axioms,
    example_phi,
    function_from_name,
    gamma_summability_report,
    iterate,
    linear,
    list_function_templates,
    majorization_check,
    power_decay_orbit,
    power_gap_check,
    quadratic_gap,
)
from .cauchy import (
    CauchyCertificate,
    EnvelopeReport,
    GeometricCriterion,
    OrbitTrace,
    PowerCriterion,
    TailEstimate,
    TelescopeCheck,
    WeightedCriterion,
    cauchy_report,
    envelope_check,
    load_trace_csv,
    save_trace_csv,
    tail_bound,
    tail_constant,
    telescope_bound_check,
    trace_from_gaps,
    trace_from_points,
)
from .solvers import (
    OrbitViolation,
    SolveReport,
    UniquenessReport,
    apriori_error,
    boyd_wong_solve,
    caristi_solve,
    uniqueness_probe,
)
from .multivalued import (
    AlphaFunction,
    HypothesisReport,
    MultiMap,
    MultiSolveReport,
    PicardProbeReport,
    alpha_star,
    always_admissible,
    certify_hypotheses,
    half_third,
    is_fixed_point,
    load_multimap_json,
    multimap_from_name,
    multivalued_solve,
    weakly_picard_probe,
)
from .experiments import (
    ExperimentConfig,
    ExperimentReport,
    list_experiments,
    load_config,
    map_from_name,
    potential_from_name,
    run_experiment,
    validate_config,
)

__version__ = "0.1.0"
