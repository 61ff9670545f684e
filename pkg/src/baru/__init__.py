"""Aggregation of subjective-expected-utility preferences by belief
averaging and relative-utility summation, with rival rules and mechanical
axiom checking at desk scale.

States form the continuum [0, 1) carrying piecewise-constant densities;
acts are piecewise-constant outcome assignments; a preference is a
(belief, normalized utility) pair or complete indifference.  `baru`
averages concerned agents' beliefs and sums their normalized utilities;
`swf1` .. `swf6` are deliberately flawed contrasts.  The `axioms` module
checks single scenarios, `harness` runs seeded batteries, `scenarios`
holds worked set pieces, and `cli` wraps it all for the command line.
"""

from .measure import (
    Coarsening,
    Density,
    DyadicPartition,
    EventSet,
    Infeasible,
    TOL_EXACT,
    TOL_MEASURE,
    belief_distance,
    halving_subalgebra,
    lyapunov_event,
    measure,
    merged_breakpoints,
    pushforward_coarsening,
    segment_masses,
)
from .prefs import (
    Act,
    Comparison,
    INDIFFERENT,
    Lottery,
    OutcomeSpace,
    Preference,
    Profile,
    Utility,
    ZeroFunction,
    compare,
    discount_to_belief,
    expected_utility,
    normalize_utility,
    preference_distance,
    pushforward,
    realize_lottery_act,
    simple_reduction,
)
from .geometry import ImagePolytope, image_polytope, direction_set
from .swf import (
    DegenerateNashPoint,
    NullPool,
    RULE_NAMES,
    SwfResult,
    WeightedAggregation,
    baru,
    default_anchor,
    ex_ante_scores,
    geometric_pool,
    prop1_weighted,
    rule_by_name,
    swf1,
    swf2,
    swf3,
    swf4,
    swf5,
    swf6,
    weighted,
)
from .axioms import (
    AxiomVerdict,
    CoRedundancyCertificate,
    ComplementaryIgnoranceReport,
    ContinuityReport,
    Refused,
    ScenarioRejected,
    SpuriousUnanimityReport,
    certify_coredundancy,
    check_anonymity,
    check_faithfulness,
    check_independence_redundant_acts,
    check_no_belief_imposition,
    check_restricted_monotonicity,
    check_restricted_pareto,
    common_belief_feasible,
    complementary_ignorance_demo,
    continuity_probe,
    detect_spurious_unanimity,
)
from .harness import (
    EXPECTED_VIOLATIONS,
    MATRIX_AXIOMS,
    matrix_violations,
    preference_as_dict,
    preference_from_dict,
    profile_as_dict,
    profile_from_dict,
    rerun_witness,
    run_axiom_battery,
    run_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "Act",
    "AxiomVerdict",
    "Coarsening",
    "Comparison",
    "CoRedundancyCertificate",
    "ComplementaryIgnoranceReport",
    "ContinuityReport",
    "DegenerateNashPoint",
    "Density",
    "DyadicPartition",
    "EventSet",
    "EXPECTED_VIOLATIONS",
    "ImagePolytope",
    "INDIFFERENT",
    "Infeasible",
    "Lottery",
    "MATRIX_AXIOMS",
    "NullPool",
    "OutcomeSpace",
    "Preference",
    "Profile",
    "Refused",
    "RULE_NAMES",
    "ScenarioRejected",
    "SpuriousUnanimityReport",
    "SwfResult",
    "TOL_EXACT",
    "TOL_MEASURE",
    "Utility",
    "WeightedAggregation",
    "ZeroFunction",
    "baru",
    "belief_distance",
    "certify_coredundancy",
    "check_anonymity",
    "check_faithfulness",
    "check_independence_redundant_acts",
    "check_no_belief_imposition",
    "check_restricted_monotonicity",
    "check_restricted_pareto",
    "common_belief_feasible",
    "compare",
    "complementary_ignorance_demo",
    "continuity_probe",
    "default_anchor",
    "detect_spurious_unanimity",
    "direction_set",
    "discount_to_belief",
    "ex_ante_scores",
    "expected_utility",
    "geometric_pool",
    "halving_subalgebra",
    "image_polytope",
    "lyapunov_event",
    "matrix_violations",
    "measure",
    "merged_breakpoints",
    "normalize_utility",
    "preference_as_dict",
    "preference_distance",
    "preference_from_dict",
    "profile_as_dict",
    "profile_from_dict",
    "prop1_weighted",
    "pushforward",
    "pushforward_coarsening",
    "realize_lottery_act",
    "rerun_witness",
    "rule_by_name",
    "run_axiom_battery",
    "run_matrix",
    "segment_masses",
    "simple_reduction",
    "swf1",
    "swf2",
    "swf3",
    "swf4",
    "swf5",
    "swf6",
    "weighted",
]
