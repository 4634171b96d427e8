"""Monotone boolean machinery behind accessibility analysis.

An account's reachability is a negation-free formula over access-method
variables: which combinations of devices, memorized secrets, and notes
still open the account. This module extracts that formula from a graph,
expands it to DNF, minimizes by absorption (which yields exactly the
prime implicants, since nothing is negated), evaluates it, and computes
minimal hitting sets: the smallest sets of access methods whose combined
loss locks the account.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Union

from .errors import NotAnAccount, SizeLimitExceeded
from .graph import ABSTRACT_PREFIX, AccountAccessGraph, NodeType, OperatorKind

MAX_IMPLICANTS = 10_000
MAX_HITTING_SET_VARIABLES = 20


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class AndList:
    children: tuple["Formula", ...]

    def __post_init__(self) -> None:
        if not self.children:
            raise ValueError("AndList requires at least one child")


@dataclass(frozen=True)
class OrList:
    children: tuple["Formula", ...]

    def __post_init__(self) -> None:
        if not self.children:
            raise ValueError("OrList requires at least one child")


@dataclass(frozen=True)
class Unsatisfiable:
    pass


UNSAT = Unsatisfiable()

Formula = Union[Var, AndList, OrList, Unsatisfiable]


def and_of(children: Iterable[Formula]) -> Formula:
    """Conjunction; collapses singletons, absorbs unsatisfiable branches."""
    items = tuple(children)
    if not items:
        raise ValueError("conjunction of nothing")
    if any(isinstance(c, Unsatisfiable) for c in items):
        return UNSAT
    if len(items) == 1:
        return items[0]
    return AndList(items)


def or_of(children: Iterable[Formula]) -> Formula:
    """Disjunction; drops unsatisfiable branches, collapses singletons."""
    items = tuple(c for c in children if not isinstance(c, Unsatisfiable))
    if not items:
        return UNSAT
    if len(items) == 1:
        return items[0]
    return OrList(items)


class UnmappedLeafPolicy(str, Enum):
    """What a leaf with no access methods contributes to the formula.

    ABSTRACT treats the leaf as reachable through an access method of its
    own (a referenced recovery account is reachable *somehow*); the
    synthesized variable is the node id under a reserved prefix.
    UNSATISFIABLE drops the branch entirely.
    """

    ABSTRACT = "abstract"
    UNSATISFIABLE = "unsatisfiable"


def abstract_variable(node_id: str) -> str:
    return ABSTRACT_PREFIX + node_id


def is_abstract_variable(name: str) -> bool:
    return name.startswith(ABSTRACT_PREFIX)


def extract_formula(
    graph: AccountAccessGraph,
    account: str,
    policy: UnmappedLeafPolicy = UnmappedLeafPolicy.ABSTRACT,
) -> Formula:
    """Reachability formula of `account` over access-method variables.

    Structural mapping: and-operators become conjunctions, or-operators
    and multi-child accounts disjunctions, and an auth method is the
    disjunction of its access methods (any one of them exercises the
    method). Leaves without access methods follow `policy`.
    """
    node = graph.node(account)
    if node.type is not NodeType.ACCOUNT:
        raise NotAnAccount(account)

    def unmapped(node_id: str) -> Formula:
        if policy is UnmappedLeafPolicy.ABSTRACT:
            return Var(abstract_variable(node_id))
        return UNSAT

    def walk(node_id: str) -> Formula:
        node = graph.node(node_id)
        if node.type is NodeType.AUTH_METHOD:
            methods = graph.children_of(node_id)
            if not methods:
                return unmapped(node_id)
            return or_of(Var(m) for m in methods)
        children = graph.children_of(node_id)
        if node.type is NodeType.ACCOUNT:
            if not children:
                return unmapped(node_id)
            return or_of(walk(c) for c in children)
        if node.op is OperatorKind.AND:
            return and_of(walk(c) for c in children)
        return or_of(walk(c) for c in children)

    return walk(account)


def formula_variables(f: Formula) -> tuple[str, ...]:
    """Distinct variables in first-occurrence order."""
    seen: dict[str, None] = {}

    def visit(node: Formula) -> None:
        if isinstance(node, Var):
            seen.setdefault(node.name)
        elif isinstance(node, (AndList, OrList)):
            for child in node.children:
                visit(child)

    visit(f)
    return tuple(seen)


@dataclass(frozen=True)
class Dnf:
    """Disjunction of implicants; each implicant a set of variable names.

    Implicant order is deterministic (construction order) so downstream
    reports are stable; equality ignores order. An empty implicant list
    denotes an unsatisfiable formula.
    """

    implicants: tuple[frozenset[str], ...]

    def __post_init__(self) -> None:
        for imp in self.implicants:
            if not imp:
                raise ValueError("implicants must be non-empty")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dnf):
            return NotImplemented
        return set(self.implicants) == set(other.implicants)

    def __hash__(self) -> int:
        return hash(frozenset(self.implicants))

    @property
    def satisfiable(self) -> bool:
        return bool(self.implicants)

    def variables(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for imp in self.implicants:
            for name in sorted(imp):
                seen.setdefault(name)
        return tuple(seen)

    def is_antichain(self) -> bool:
        return _find_absorbed_pair(self.implicants) is None


def _find_absorbed_pair(
    implicants: tuple[frozenset[str], ...],
) -> tuple[frozenset[str], frozenset[str]] | None:
    """A (superset, subset) pair witnessing non-minimality, if any."""
    for i, a in enumerate(implicants):
        for j, b in enumerate(implicants):
            if i != j and b <= a:
                return (a, b)
    return None


def to_dnf(f: Formula, *, max_implicants: int = MAX_IMPLICANTS) -> Dnf:
    """Expand to disjunctive normal form by distributing AND over OR.

    Duplicate variables within an implicant and duplicate implicants are
    dropped (first occurrence kept). Raises SizeLimitExceeded when the
    intermediate implicant count passes `max_implicants`; the bound
    guards against adversarial formulas, not realistic account setups.
    """

    def dedup(items: list[frozenset[str]]) -> list[frozenset[str]]:
        seen: set[frozenset[str]] = set()
        out: list[frozenset[str]] = []
        for imp in items:
            if imp not in seen:
                seen.add(imp)
                out.append(imp)
        return out

    def guard(items: list[frozenset[str]]) -> list[frozenset[str]]:
        if len(items) > max_implicants:
            raise SizeLimitExceeded("DNF implicants", len(items), max_implicants)
        return items

    def expand(node: Formula) -> list[frozenset[str]]:
        if isinstance(node, Unsatisfiable):
            return []
        if isinstance(node, Var):
            return [frozenset((node.name,))]
        if isinstance(node, OrList):
            merged: list[frozenset[str]] = []
            for child in node.children:
                merged.extend(expand(child))
            return guard(dedup(merged))
        acc: list[frozenset[str]] = [frozenset()]
        for child in node.children:
            child_imps = expand(child)
            acc = guard(dedup([a | b for a in acc for b in child_imps]))
        return acc

    return Dnf(tuple(expand(f)))


def minimize_dnf(d: Dnf) -> Dnf:
    """Remove implicants that are supersets of others (absorption).

    For negation-free formulas the survivors are exactly the prime
    implicants; relative order is preserved.
    """
    kept: list[frozenset[str]] = []
    for i, imp in enumerate(d.implicants):
        absorbed = False
        for j, other in enumerate(d.implicants):
            if i == j:
                continue
            if other < imp or (other == imp and j < i):
                absorbed = True
                break
        if not absorbed:
            kept.append(imp)
    return Dnf(tuple(kept))


def evaluate(f: Formula | Dnf, available: Iterable[str]) -> bool:
    """Whether the formula holds when exactly `available` variables are true."""
    have = set(available)
    if isinstance(f, Dnf):
        return any(imp <= have for imp in f.implicants)

    def walk(node: Formula) -> bool:
        if isinstance(node, Unsatisfiable):
            return False
        if isinstance(node, Var):
            return node.name in have
        if isinstance(node, AndList):
            return all(walk(c) for c in node.children)
        return any(walk(c) for c in node.children)

    return walk(f)


def minimal_hitting_sets(
    d: Dnf,
    *,
    max_variables: int = MAX_HITTING_SET_VARIABLES,
) -> list[frozenset[str]]:
    """All inclusion-minimal sets intersecting every implicant of `d`.

    Losing exactly the access methods of such a set locks the account,
    and no proper subset does. Expects a minimized antichain (callers
    minimize first); output is ordered by size, then lexicographically
    by sorted member ids. An unsatisfiable input yields the empty set as
    the sole answer: the account is lost without losing anything.
    """
    variables = d.variables()
    if len(variables) > max_variables:
        raise SizeLimitExceeded("hitting-set variables", len(variables), max_variables)

    transversals: list[frozenset[str]] = [frozenset()]
    for imp in d.implicants:
        extended: list[frozenset[str]] = []
        for hs in transversals:
            if hs & imp:
                extended.append(hs)
            else:
                extended.extend(hs | {v} for v in sorted(imp))
        # Absorption keeps only inclusion-minimal candidates.
        transversals = [
            hs
            for i, hs in enumerate(extended)
            if not any(
                (other < hs) or (other == hs and j < i)
                for j, other in enumerate(extended)
            )
        ]
    return sorted(transversals, key=lambda s: (len(s), tuple(sorted(s))))


def render_formula(f: Formula, labels: dict[str, str] | None = None) -> str:
    """Infix debug text, "∧"/"∨" with composite children parenthesized."""
    names = labels or {}

    def display(name: str) -> str:
        return names.get(name, name)

    def walk(node: Formula, nested: bool) -> str:
        if isinstance(node, Unsatisfiable):
            return "⊥"
        if isinstance(node, Var):
            return display(node.name)
        symbol = " ∧ " if isinstance(node, AndList) else " ∨ "
        text = symbol.join(walk(c, True) for c in node.children)
        return f"({text})" if nested else text

    return walk(f, False)


def render_dnf(d: Dnf, labels: dict[str, str] | None = None) -> str:
    """Implicants joined with "∨", members sorted by display name."""
    if not d.implicants:
        return "⊥"
    names = labels or {}

    def display(name: str) -> str:
        return names.get(name, name)

    parts: list[str] = []
    for imp in d.implicants:
        members = sorted((display(m) for m in imp))
        text = " ∧ ".join(members)
        parts.append(f"({text})" if len(members) > 1 else text)
    return " ∨ ".join(parts)
