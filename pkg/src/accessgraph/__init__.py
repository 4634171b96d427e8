"""Account access graph engine.

Model an account's sign-in and recovery setup as a typed DAG, score how
hard it is to break in (security) and how easy it is to get locked out
(accessibility), explain minimal lockout scenarios in plain language,
and explore what-if device loss.
"""

from .accessibility import (
    AccessibilityResult,
    AccountAnalysis,
    WhatIfOutcome,
    accessibility_band,
    accessibility_score,
    account_report,
    analyze_account,
    key_access_methods,
    legacy_accessibility_score,
    narrative,
    variable_labels,
    what_if,
)
from .errors import (
    AagError,
    CycleDetected,
    DanglingEdge,
    DuplicateNodeId,
    EmptyOperator,
    IllegalChildKind,
    InvalidDocument,
    InvalidRecord,
    MissingLabel,
    MultiParentNonAccessMethod,
    NotALeaf,
    NotAnAccount,
    NotMinimized,
    RootNotAccount,
    SizeLimitExceeded,
    UnknownAccessMethod,
    UnknownNode,
)
from .formulas import (
    AndList,
    Dnf,
    Formula,
    OrList,
    UNSAT,
    UnmappedLeafPolicy,
    Unsatisfiable,
    Var,
    evaluate,
    extract_formula,
    minimal_hitting_sets,
    minimize_dnf,
    render_dnf,
    render_formula,
    to_dnf,
)
from .graph import (
    AccountAccessGraph,
    MethodCategory,
    Node,
    NodeType,
    OperatorKind,
    build_graph,
    graph_to_json,
    serialize_graph,
    subgraph_of,
)
from .providers import (
    AppleConfig,
    Device,
    GoogleConfig,
    PasswordAccess,
    UserAccountRecord,
    batch_analyze,
    instantiate_user_graph,
    read_survey,
    record_from_json,
    record_to_json,
)
from .security import (
    ScoringPolicy,
    SecurityLevel,
    leaf_security,
    security_band,
    security_score,
)

__version__ = "0.1.0"

__all__ = [
    "AagError",
    "AccessibilityResult",
    "AccountAccessGraph",
    "AccountAnalysis",
    "AndList",
    "AppleConfig",
    "CycleDetected",
    "DanglingEdge",
    "Device",
    "Dnf",
    "DuplicateNodeId",
    "EmptyOperator",
    "Formula",
    "GoogleConfig",
    "IllegalChildKind",
    "InvalidDocument",
    "InvalidRecord",
    "MethodCategory",
    "MissingLabel",
    "MultiParentNonAccessMethod",
    "Node",
    "NodeType",
    "NotALeaf",
    "NotAnAccount",
    "NotMinimized",
    "OperatorKind",
    "OrList",
    "PasswordAccess",
    "RootNotAccount",
    "ScoringPolicy",
    "SecurityLevel",
    "SizeLimitExceeded",
    "UNSAT",
    "UnknownAccessMethod",
    "UnknownNode",
    "UnmappedLeafPolicy",
    "Unsatisfiable",
    "UserAccountRecord",
    "Var",
    "WhatIfOutcome",
    "accessibility_band",
    "accessibility_score",
    "account_report",
    "analyze_account",
    "batch_analyze",
    "build_graph",
    "evaluate",
    "extract_formula",
    "graph_to_json",
    "instantiate_user_graph",
    "key_access_methods",
    "leaf_security",
    "legacy_accessibility_score",
    "minimal_hitting_sets",
    "minimize_dnf",
    "narrative",
    "read_survey",
    "record_from_json",
    "record_to_json",
    "render_dnf",
    "render_formula",
    "security_band",
    "security_score",
    "serialize_graph",
    "subgraph_of",
    "to_dnf",
    "variable_labels",
    "what_if",
]
