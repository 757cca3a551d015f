"""Order-k MGF bounds and Chernoff tail certificates for bounded variables."""

from .bounds import (
    CLASSIC,
    HERTZ,
    ORDER2_MOMENT,
    ORDER4_MOMENT,
    SYMMETRIC_ORDER4,
    BoundedSupport,
    Family,
    FamilyTag,
    MgfBound,
    endpoint_ratio,
    eval_log_mgf_bound,
    mgf_bound,
    moment_caps,
    multiplier_log,
    order_k,
    phi,
    psi,
    upsilon_log,
)
from .oracle import (
    FinitePmf,
    exact_log_mgf,
    extremal_two_point,
    mc_sum_tail,
    moment_matched_pmf,
    moments,
    random_mean_zero_pmf,
    validity_gap,
)
from .scenario import Query, Scenario, ScenarioError, load_scenario, parse_scenario
from .selection import (
    CrossoverTable,
    IterationError,
    KSelection,
    RelaxedSolution,
    SizeGuardError,
    best_k_single,
    best_region_partition,
    crossover_table,
    crossover_threshold,
    optimize_exact,
    optimize_relaxed,
)
from .tails import (
    Side,
    SumScenario,
    TailCertificate,
    chernoff_curve,
    lower_tail,
    mean_tail,
    mirror,
    mirror_scenario,
    one_sided_tail,
    order_k_scenario,
    two_sided_tail,
)

__version__ = "0.1.0"
