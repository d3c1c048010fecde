"""Analysis of self-referential acyclic reference graphs.

Nodes carry propositional formulas over their successors; the library
enumerates models of the resulting equation system, detects contradictory
path pairs, classifies elementary contradiction cells, replays the stepwise
construction of Yablo-style structures, and searches for embeddings of
truncations into bare acyclic graphs.
"""

from .cells import (
    ALL_VARIANTS,
    CellVariant,
    InsertionEffect,
    InsertionOutcome,
    TriangleAudit,
    VariantReport,
    classify_all,
    classify_variant,
    diamond_resolved_form,
    insert_tautology,
    insertion_effect,
    resolved_form,
    triangle_sign_audit,
)
from .embedding import (
    BareDag,
    ChainLink,
    EmbeddingError,
    ExtensionReport,
    Injection,
    InjectionCheck,
    SearchConfig,
    SearchOutcome,
    SearchResult,
    check_injection,
    extend_interpretation,
    find_injection,
    strip_signs,
    tautology_chain_eval,
    verify_extension,
)
from .formula import (
    And,
    ConstFalse,
    ConstTrue,
    Dnf,
    DnfSizeError,
    Formula,
    FormulaError,
    FrontierXi,
    NegVar,
    Or,
    Sign,
    TruthValue3,
    Var,
    and3,
    and_dnf,
    dnf_str,
    dnf_to_formula,
    eval2,
    eval2_dnf,
    eval3,
    is_tautology_dnf,
    negate,
    negate_dnf,
    not3,
    or3,
    or_dnf,
    simplify_dnf,
    to_dnf,
)
from .graph import (
    Arrow,
    Cell,
    ContradictionLoopReport,
    GraphError,
    Path,
    RefGraph,
    compose_value,
    contradiction_loop_check,
    enumerate_paths,
    find_contradictory_cells,
    path_value,
)
from .semantics import (
    EscapeWitness,
    ModelSet,
    NodeStatus,
    SinkLimitError,
    StatusKind,
    UnaryKind,
    check_status,
    escape_search,
    eval3_graph,
    models_of,
    node_model_expression,
    partition_check,
    propagate,
    two_terminal_classify,
)
from .yablo import (
    BuildError,
    BuildState,
    BuildStep,
    CellAudit,
    CellLabel,
    CloseC1,
    FinishC2,
    Obligation,
    PairRichness,
    PrepareC2,
    SeedTriangle,
    canonical_script,
    composition_audit,
    dnf_head_obligations,
    inductive_build,
    richness_check,
    yablo_truncation,
)

__version__ = "0.1.0"
