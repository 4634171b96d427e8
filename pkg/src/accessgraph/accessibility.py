"""Lockout-risk analysis: accessibility scores, what-if queries, narratives.

The accessibility score measures how hard it is to lose an account. Over
the minimized DNF of an account's reachability formula, each variable
gets weight 1/n_i (n_i = number of implicants containing it, so shared
methods weigh less), each implicant contributes the minimum weight of
its members, and the score is the sum over implicants. A score of 1
means one loss can lock the account; the score never exceeds the size
of the smallest lockout set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import MissingLabel, NotMinimized, UnknownAccessMethod
from .formulas import (
    AndList,
    Dnf,
    Formula,
    OrList,
    UnmappedLeafPolicy,
    Unsatisfiable,
    Var,
    _find_absorbed_pair,
    abstract_variable,
    evaluate,
    extract_formula,
    is_abstract_variable,
    minimal_hitting_sets,
    minimize_dnf,
    render_dnf,
    render_formula,
    to_dnf,
)
from .graph import AccountAccessGraph, NodeType
from .security import ScoringPolicy, SecurityLevel, security_band, security_score

DEFAULT_POLICY = ScoringPolicy()


@dataclass(frozen=True)
class AccessibilityResult:
    """Everything the advisor derives from one reduced DNF.

    `occurrences` maps each variable to the number of implicants holding
    it; `weights` to the exact rational 1/n_i. `safe_loss_bound` is the
    rational score minus one, floored at zero: how many methods the
    score suggests can be lost without risk (see `narrative` for the
    honest version: the bound is a lower-bound reading, fractional
    scores make it fuzzy).
    """

    reduced: Dnf
    occurrences: dict[str, int]
    weights: dict[str, Fraction]
    score: Fraction
    lockout_sets: tuple[frozenset[str], ...]
    safe_loss_bound: Fraction
    satisfiable: bool


def accessibility_score(reduced: Dnf) -> AccessibilityResult:
    """Score a minimized DNF; raises NotMinimized on absorbable input.

    An empty DNF (account unreachable) scores 0 with no lockout sets.
    """
    pair = _find_absorbed_pair(reduced.implicants)
    if pair is not None:
        raise NotMinimized(set(pair[0]), set(pair[1]))

    if not reduced.implicants:
        return AccessibilityResult(
            reduced=reduced,
            occurrences={},
            weights={},
            score=Fraction(0),
            lockout_sets=(),
            safe_loss_bound=Fraction(0),
            satisfiable=False,
        )

    occurrences: dict[str, int] = {}
    for name in reduced.variables():
        occurrences[name] = sum(1 for imp in reduced.implicants if name in imp)
    weights = {name: Fraction(1, n) for name, n in occurrences.items()}
    score = sum(
        (min(weights[m] for m in imp) for imp in reduced.implicants),
        start=Fraction(0),
    )
    lockout = tuple(minimal_hitting_sets(reduced))
    return AccessibilityResult(
        reduced=reduced,
        occurrences=occurrences,
        weights=weights,
        score=score,
        lockout_sets=lockout,
        safe_loss_bound=max(Fraction(0), score - 1),
        satisfiable=True,
    )


def legacy_accessibility_score(f: Formula) -> Fraction:
    """Pre-reduction scoring: fold over the raw formula tree.

    Occurrence counts are taken over raw variable instances (a variable
    used twice in the tree counts twice), then Var folds to 1/n_i, a
    conjunction to the minimum of its children and a disjunction to
    their sum. Kept for comparison with the reduced score; the raw fold
    can undercount shared methods. Reconstructed behavior, labeled
    "legacy (reconstructed)" wherever it is printed.
    """
    counts: dict[str, int] = {}

    def count(node: Formula) -> None:
        if isinstance(node, Var):
            counts[node.name] = counts.get(node.name, 0) + 1
        elif isinstance(node, (AndList, OrList)):
            for child in node.children:
                count(child)

    count(f)

    def fold(node: Formula) -> Fraction:
        if isinstance(node, Unsatisfiable):
            return Fraction(0)
        if isinstance(node, Var):
            return Fraction(1, counts[node.name])
        if isinstance(node, AndList):
            return min(fold(c) for c in node.children)
        return sum((fold(c) for c in node.children), start=Fraction(0))

    return fold(f)


LEGACY_SCORE_LABEL = "legacy (reconstructed)"


@dataclass(frozen=True)
class WhatIfOutcome:
    lost: frozenset[str]
    accessible: bool
    result: AccessibilityResult


def what_if(
    graph: AccountAccessGraph,
    account: str,
    lost: set[str] | frozenset[str],
    policy: UnmappedLeafPolicy = UnmappedLeafPolicy.ABSTRACT,
) -> WhatIfOutcome:
    """Outcome of losing exactly the access methods in `lost`.

    `lost` must name access-method nodes of the graph. The surviving
    analysis drops every implicant touching a lost method and rescores,
    so the result reads as "the account after the loss".
    """
    for node_id in lost:
        if not graph.has_node(node_id) or graph.node(node_id).type is not NodeType.ACCESS_METHOD:
            raise UnknownAccessMethod(node_id)
    lost = frozenset(lost)
    reduced = minimize_dnf(to_dnf(extract_formula(graph, account, policy)))
    surviving = minimize_dnf(Dnf(tuple(i for i in reduced.implicants if not (i & lost))))
    return WhatIfOutcome(
        lost=lost,
        accessible=evaluate(reduced, set(reduced.variables()) - lost),
        result=accessibility_score(surviving),
    )


class AccessMethodKind:
    """Phrasing groups for narrative text."""

    DEVICE = "device"
    PAPER = "paper"
    VAULT = "vault"
    ACCOUNT = "account"
    MEMORY = "memory"


_KIND_RANK = {
    AccessMethodKind.DEVICE: 0,
    AccessMethodKind.PAPER: 1,
    AccessMethodKind.VAULT: 2,
    AccessMethodKind.ACCOUNT: 3,
    AccessMethodKind.MEMORY: 4,
}

# "{labels}" is replaced by the formatted label list; entries without the
# placeholder are complete phrases (the label stays unspoken).
DEFAULT_PHRASING: dict[str, str] = {
    AccessMethodKind.DEVICE: "losing {labels}",
    AccessMethodKind.PAPER: "losing {labels}",
    AccessMethodKind.VAULT: "losing access to {labels}",
    AccessMethodKind.ACCOUNT: "losing access to {labels}",
    AccessMethodKind.MEMORY: "forgetting your password",
}

_MEMORY_TOKENS = {"memory", "memorized", "memorised", "remembered"}
_PAPER_TOKENS = {"paper", "note", "sheet", "card", "printed", "codes"}
_VAULT_TOKENS = {"vault", "manager"}


def infer_kind(variable: str, label: str) -> str:
    """Best-effort phrasing group from the id and display label."""
    if is_abstract_variable(variable):
        return AccessMethodKind.ACCOUNT
    words = set((variable + " " + label).lower().replace("-", " ").replace("_", " ").split())
    if words & _MEMORY_TOKENS:
        return AccessMethodKind.MEMORY
    if words & _PAPER_TOKENS:
        return AccessMethodKind.PAPER
    if words & _VAULT_TOKENS:
        return AccessMethodKind.VAULT
    return AccessMethodKind.DEVICE


def _format_labels(labels: list[str], sole_group: bool) -> str:
    if len(labels) == 1:
        return labels[0] if sole_group else f"your {labels[0]}"
    if len(labels) == 2:
        return f"both {labels[0]} and {labels[1]}"
    return ", ".join(labels[:-1]) + f" and {labels[-1]}"


def _clause_text(
    members: list[tuple[str, str, str]],  # (variable, label, kind), presentation order
    phrasing: Mapping[str, str],
) -> str:
    groups: list[tuple[str, list[str]]] = []  # (template, labels)
    for _, label, kind in members:
        template = phrasing[kind]
        if groups and groups[-1][0] == template and "{labels}" in template:
            groups[-1][1].append(label)
        else:
            groups.append((template, [label]))
    parts: list[str] = []
    for template, labels in groups:
        if "{labels}" in template:
            parts.append(template.replace("{labels}", _format_labels(labels, len(groups) == 1)))
        elif not parts or parts[-1] != template:
            parts.append(template)
    return " and ".join(parts)


def narrative(
    result: AccessibilityResult,
    labels: Mapping[str, str],
    *,
    account_label: str = "your account",
    phrasing: Mapping[str, str] | None = None,
    kinds: Mapping[str, str] | None = None,
) -> str:
    """One plain-language sentence enumerating the lockout scenarios.

    Clauses are ordered for reading (device-only combinations first,
    memorized secrets last) rather than in raw lockout-set order; every
    variable needs an entry in `labels`. `kinds` pins a variable's
    phrasing group, otherwise it is inferred from id and label.
    """
    if not result.lockout_sets:
        return f"Access to {account_label} is not possible with the current setup"
    phrasing = dict(DEFAULT_PHRASING, **(phrasing or {}))

    def describe(variable: str) -> tuple[str, str, str]:
        if variable not in labels:
            raise MissingLabel(variable)
        label = labels[variable]
        kind = kinds.get(variable) if kinds else None
        if kind is None:
            kind = infer_kind(variable, label)
        return (variable, label, kind)

    clauses: list[list[tuple[str, str, str]]] = []
    for lockout in result.lockout_sets:
        members = sorted(
            (describe(v) for v in lockout),
            key=lambda m: (_KIND_RANK[m[2]], m[1], m[0]),
        )
        clauses.append(members)
    clauses.sort(key=lambda ms: (len(ms), [(_KIND_RANK[m[2]], m[1], m[0]) for m in ms]))

    body = ", or ".join(_clause_text(members, phrasing) for members in clauses)
    return f"Access to {account_label} might be lost when {body}"


def key_access_methods(result: AccessibilityResult) -> tuple[str, ...]:
    """Access methods whose single loss locks the account.

    A method qualifies exactly when it sits in every implicant of the
    reduced term, i.e. its singleton is a minimal hitting set.
    """
    if not result.satisfiable:
        return ()
    total = len(result.reduced.implicants)
    return tuple(sorted(v for v, n in result.occurrences.items() if n == total))


ACCESSIBILITY_BANDS = ((Fraction(2), "red"), (Fraction(3), "yellow"))


def accessibility_band(score: Fraction) -> str:
    """Risk color: below 2 red, below 3 yellow, 3 and up green."""
    for limit, color in ACCESSIBILITY_BANDS:
        if score < limit:
            return color
    return "green"


def render_score(score: Fraction) -> str:
    """Exact text: "2", "3/2"."""
    return str(score)


def human_score(score: Fraction) -> str:
    """Exact rational with decimal alongside when fractional: "3/2 (1.5)"."""
    if score.denominator == 1:
        return str(score)
    return f"{score} ({float(score):g})"


@dataclass(frozen=True)
class AccountAnalysis:
    """Bundle of everything computed for one account."""

    account: str
    label: str
    security: SecurityLevel
    formula: Formula
    result: AccessibilityResult
    narrative: str
    legacy_score: Fraction
    variable_labels: dict[str, str]


def analyze_account(
    graph: AccountAccessGraph,
    account: str,
    *,
    scoring_policy: ScoringPolicy = DEFAULT_POLICY,
    leaf_policy: UnmappedLeafPolicy = UnmappedLeafPolicy.ABSTRACT,
) -> AccountAnalysis:
    """Full security + accessibility analysis of one account."""
    node = graph.node(account)
    formula = extract_formula(graph, account, leaf_policy)
    result = accessibility_score(minimize_dnf(to_dnf(formula)))
    labels = variable_labels(graph)
    return AccountAnalysis(
        account=account,
        label=node.label,
        security=security_score(graph, account, scoring_policy),
        formula=formula,
        result=result,
        narrative=narrative(result, labels, account_label=node.label),
        legacy_score=legacy_accessibility_score(formula),
        variable_labels=labels,
    )


def variable_labels(graph: AccountAccessGraph) -> dict[str, str]:
    """Labels for every possible formula variable of this graph.

    Abstract variables inherit the label of the node they stand for.
    """
    labels: dict[str, str] = {}
    for node in graph.nodes:
        if node.type is NodeType.ACCESS_METHOD:
            labels[node.id] = node.label
        else:
            labels[abstract_variable(node.id)] = node.label
    return labels


def _term_lists(implicants: tuple[frozenset[str], ...]) -> list[list[str]]:
    return [sorted(imp) for imp in implicants]


def accessibility_report(result: AccessibilityResult, narrative_text: str) -> dict:
    """JSON-ready accessibility section of an account report."""
    return {
        "score": render_score(result.score),
        "score_decimal": float(result.score),
        "band": accessibility_band(result.score),
        "satisfiable": result.satisfiable,
        "reduced_term": _term_lists(result.reduced.implicants),
        "lockout_sets": _term_lists(result.lockout_sets),
        "occurrences": dict(result.occurrences),
        "weights": {name: str(w) for name, w in result.weights.items()},
        "safe_loss_bound": math.floor(result.safe_loss_bound),
        "safe_loss_bound_fractional": result.score.denominator != 1,
        "narrative": narrative_text,
    }


def account_report(analysis: AccountAnalysis, *, include_legacy: bool = False) -> dict:
    """JSON-ready report for one account."""
    report = {
        "account": analysis.account,
        "label": analysis.label,
        "security": analysis.security.token,
        "security_band": security_band(analysis.security),
        "formula": render_formula(analysis.formula, analysis.variable_labels),
        "reduced_formula": render_dnf(analysis.result.reduced, analysis.variable_labels),
        "accessibility": accessibility_report(analysis.result, analysis.narrative),
    }
    if include_legacy:
        report["legacy_accessibility"] = {
            "score": render_score(analysis.legacy_score),
            "score_decimal": float(analysis.legacy_score),
            "label": LEGACY_SCORE_LABEL,
        }
    return report
