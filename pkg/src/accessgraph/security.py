"""Ordinal security scoring over account access graphs.

Each authentication method carries an assurance level taken from its
category. Levels combine structurally: a conjunction is as strong as its
strongest member (an attacker must defeat every branch), a disjunction as
weak as its weakest (one branch suffices). Accounts with children behave
as disjunctions of their alternatives.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import IntEnum

from .errors import InvalidDocument, NotALeaf
from .graph import AccountAccessGraph, MethodCategory, NodeType, OperatorKind


class SecurityLevel(IntEnum):
    """Ordered assurance levels; comparisons follow attack difficulty."""

    LOW = 0
    MEDIUM = 1
    HIGH = 2

    @property
    def token(self) -> str:
        return _LEVEL_TOKENS[self]

    @classmethod
    def from_token(cls, token: str) -> "SecurityLevel":
        for level, name in _LEVEL_TOKENS.items():
            if name == token:
                return level
        raise InvalidDocument(f"unknown security level {token!r}")


_LEVEL_TOKENS = {
    SecurityLevel.LOW: "low",
    SecurityLevel.MEDIUM: "medium",
    SecurityLevel.HIGH: "high",
}

DEFAULT_CATEGORY_LEVELS: dict[MethodCategory, SecurityLevel] = {
    MethodCategory.KNOWLEDGE_BASED: SecurityLevel.LOW,
    MethodCategory.SOFTWARE_BASED: SecurityLevel.MEDIUM,
    MethodCategory.HARDWARE_BASED: SecurityLevel.HIGH,
    # Referenced accounts are scored by their weakest possible setup:
    # without visibility into the other account, assume the worst.
    MethodCategory.ACCOUNT_REFERENCE: SecurityLevel.LOW,
}


@dataclass(frozen=True)
class ScoringPolicy:
    """Maps method categories to assurance levels.

    `defaults` starts from the built-in category table; `overrides` pins
    levels for individual node ids (auth methods or leaf accounts) and
    wins over the category default.
    """

    defaults: dict[MethodCategory, SecurityLevel] = field(
        default_factory=lambda: dict(DEFAULT_CATEGORY_LEVELS)
    )
    overrides: dict[str, SecurityLevel] = field(default_factory=dict)

    @classmethod
    def from_document(cls, document: dict | str | bytes) -> "ScoringPolicy":
        if isinstance(document, (str, bytes)):
            try:
                document = json.loads(document)
            except json.JSONDecodeError as exc:
                raise InvalidDocument(f"not valid JSON: {exc}") from None
        if not isinstance(document, dict):
            raise InvalidDocument("scoring policy must be a JSON object")
        for key in document:
            if key not in ("defaults", "overrides"):
                raise InvalidDocument(f"unknown policy field {key!r}")

        defaults = dict(DEFAULT_CATEGORY_LEVELS)
        raw_defaults = document.get("defaults", {})
        if not isinstance(raw_defaults, dict):
            raise InvalidDocument("'defaults' must be an object")
        for cat_token, level_token in raw_defaults.items():
            try:
                category = MethodCategory(cat_token)
            except ValueError:
                raise InvalidDocument(f"unknown category {cat_token!r}") from None
            defaults[category] = SecurityLevel.from_token(level_token)

        overrides: dict[str, SecurityLevel] = {}
        raw_overrides = document.get("overrides", {})
        if not isinstance(raw_overrides, dict):
            raise InvalidDocument("'overrides' must be an object")
        for node_id, level_token in raw_overrides.items():
            overrides[node_id] = SecurityLevel.from_token(level_token)

        return cls(defaults=defaults, overrides=overrides)

    def to_document(self) -> dict:
        return {
            "defaults": {cat.value: lvl.token for cat, lvl in self.defaults.items()},
            "overrides": {nid: lvl.token for nid, lvl in self.overrides.items()},
        }


DEFAULT_POLICY = ScoringPolicy()


def leaf_security(
    graph: AccountAccessGraph,
    node_id: str,
    policy: ScoringPolicy = DEFAULT_POLICY,
) -> SecurityLevel:
    """Level of a leaf: an auth method, or an account with no children.

    Childless accounts stand for external accounts (a recovery email)
    whose internals are invisible; they take the account-reference
    default unless overridden.
    """
    node = graph.node(node_id)
    if node.type is NodeType.AUTH_METHOD:
        if node_id in policy.overrides:
            return policy.overrides[node_id]
        category = node.category or MethodCategory.KNOWLEDGE_BASED
        return policy.defaults[category]
    if node.type is NodeType.ACCOUNT and not graph.children_of(node_id):
        if node_id in policy.overrides:
            return policy.overrides[node_id]
        return policy.defaults[MethodCategory.ACCOUNT_REFERENCE]
    raise NotALeaf(node_id, f"kind {node.type.value} with children is not scoreable as a leaf")


def security_score(
    graph: AccountAccessGraph,
    node_id: str,
    policy: ScoringPolicy = DEFAULT_POLICY,
) -> SecurityLevel:
    """Assurance level of the subtree rooted at `node_id` under `policy`.

    Folds over the structure: and-operators take the max of their
    children, or-operators the min, and an account with children is an
    implicit disjunction of its alternatives. Leaves score through
    :func:`leaf_security`.
    """
    graph.node(node_id)
    memo: dict[str, SecurityLevel] = {}

    def fold(nid: str) -> SecurityLevel:
        if nid in memo:
            return memo[nid]
        node = graph.node(nid)
        if node.type is NodeType.AUTH_METHOD:
            result = leaf_security(graph, nid, policy)
        else:
            children = graph.children_of(nid)
            if not children:
                result = leaf_security(graph, nid, policy)
            elif node.type is NodeType.OPERATOR and node.op is OperatorKind.AND:
                result = max(fold(c) for c in children)
            else:
                # or-operators and accounts: any one alternative suffices.
                result = min(fold(c) for c in children)
        memo[nid] = result
        return result

    return fold(node_id)


SECURITY_BANDS = {
    SecurityLevel.LOW: "red",
    SecurityLevel.MEDIUM: "yellow",
    SecurityLevel.HIGH: "green",
}


def security_band(level: SecurityLevel) -> str:
    """Traffic-light color for a security level."""
    return SECURITY_BANDS[level]
