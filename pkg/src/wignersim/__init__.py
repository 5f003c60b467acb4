"""Multi-agent Wigner's-Friend simulation and contextuality analysis.

Simulate sequential agent measurements under per-agent modeling choices
(unitary memory update vs. definite record), derive certain inference
chains, detect post-selected Liar-cycle paradoxes, build the induced
empirical model, and decide logical / strong contextuality. Includes
n-cycle polytope analysis and randomized verification suites for the
structural theorems.
"""

__version__ = "1.0.0"

from .contextuality import (
    LOGICAL,
    NONCONTEXTUAL,
    STRONG,
    ContextualityVerdict,
    DisturbanceWarning,
    EmpiricalModel,
    EngineDisagreement,
    MeasurementScenario,
    Section,
    has_global_section_extending,
    is_logically_contextual,
    model_from_setup,
    possible_sections,
)
from .hilbert import (
    Layout,
    Operator,
    StateVector,
    apply,
    basis_state,
    born_probability,
    cnot_in_basis,
    commutes,
    embed,
    projector_from_vector,
    record_unitary,
    shift_matrix,
)
from .ncycle import (
    GammaVector,
    NCycleModel,
    expectation,
    extremal_model,
    find_ps_free_paradox,
    is_extremal_vertex,
    max_omega,
    ncycle_from_empirical,
    ncycle_to_empirical,
    omega,
)
from .presets import (
    KCBS_VECTORS,
    compat_demo_setups,
    fr_setup,
    kcbs_setup,
    liar_chain,
    pr_box_model,
    yablo_pattern_setup,
    yablo_prefix,
)
from .reasoning import (
    ATOMIC_INFERENCE,
    ATOMIC_OUTCOME,
    InferenceChain,
    ParadoxCertificate,
    PatternMismatch,
    ReferenceGraph,
    Statement,
    VerificationError,
    YabloVerdict,
    check_deterministic_endpoints,
    check_yablo_blocked,
    consistent_assignment,
    derive_statements,
    find_paradox,
    has_directed_cycle,
    negate_inference,
    reduce_symmetric_chain,
    reduce_triple,
    reference_graph,
)
from .serialize import (
    SchemaError,
    certificate_to_json,
    graph_to_dot,
    graph_to_json,
    model_from_json,
    model_to_json,
    ncycle_from_json,
    ncycle_to_json,
    setup_from_json,
    setup_to_json,
    statement_to_json,
)
from .wigner_setup import (
    UNDEFINED,
    Branch,
    Measurement,
    MultiAgentSetup,
    SettingVector,
    compatible,
    contexts,
    default_settings,
    effective_projectors,
    joint_table,
    predict,
    simulate,
)

__all__ = [
    "__version__",
    # hilbert
    "Layout", "StateVector", "Operator", "basis_state", "embed",
    "projector_from_vector", "shift_matrix", "record_unitary",
    "cnot_in_basis", "apply", "born_probability", "commutes",
    # wigner_setup
    "UNDEFINED", "Measurement", "MultiAgentSetup", "SettingVector", "Branch",
    "default_settings", "simulate", "predict", "joint_table",
    "effective_projectors", "compatible", "contexts",
    # contextuality
    "DisturbanceWarning", "MeasurementScenario", "Section", "EmpiricalModel",
    "EngineDisagreement", "possible_sections", "has_global_section_extending",
    "NONCONTEXTUAL", "LOGICAL", "STRONG", "ContextualityVerdict",
    "is_logically_contextual", "model_from_setup",
    # reasoning
    "ATOMIC_OUTCOME", "ATOMIC_INFERENCE", "Statement", "InferenceChain",
    "ParadoxCertificate", "VerificationError", "PatternMismatch",
    "derive_statements", "find_paradox", "ReferenceGraph", "reference_graph",
    "has_directed_cycle", "negate_inference", "reduce_triple",
    "reduce_symmetric_chain", "check_deterministic_endpoints",
    "YabloVerdict", "check_yablo_blocked", "consistent_assignment",
    # ncycle
    "NCycleModel", "GammaVector", "expectation", "omega", "max_omega",
    "is_extremal_vertex", "extremal_model", "find_ps_free_paradox",
    "ncycle_to_empirical", "ncycle_from_empirical",
    # presets
    "fr_setup", "kcbs_setup", "KCBS_VECTORS", "compat_demo_setups",
    "pr_box_model", "liar_chain", "yablo_prefix", "yablo_pattern_setup",
    # serialize
    "SchemaError", "setup_to_json", "setup_from_json", "model_to_json",
    "model_from_json", "ncycle_to_json", "ncycle_from_json",
    "statement_to_json", "certificate_to_json", "graph_to_dot",
    "graph_to_json",
]
