"""Exception hierarchy shared by every accessgraph module.

All graph, scoring, and survey errors derive from AagError so callers can
catch one base class at API boundaries (CLI exit code 1, HTTP 400).
"""

from __future__ import annotations


class AagError(Exception):
    """Base class for all accessgraph errors."""


class InvalidDocument(AagError):
    """The graph document is malformed (bad shape, unknown field in strict
    mode, reserved id prefix, empty operator, duplicate edge in strict mode)."""


class DuplicateNodeId(InvalidDocument):
    def __init__(self, node_id: str):
        super().__init__(f"duplicate node id {node_id!r}")
        self.node_id = node_id


class DanglingEdge(InvalidDocument):
    def __init__(self, parent: str, child: str, missing: str):
        super().__init__(f"edge ({parent!r}, {child!r}) references unknown node {missing!r}")
        self.parent = parent
        self.child = child
        self.missing = missing


class CycleDetected(InvalidDocument):
    """Raised on cyclic edge relations; carries one witness cycle."""

    def __init__(self, cycle: list[str]):
        super().__init__("cycle detected: " + " -> ".join(cycle))
        self.cycle = list(cycle)


class IllegalChildKind(InvalidDocument):
    def __init__(self, parent: str, child: str, detail: str):
        super().__init__(f"node {parent!r} may not have child {child!r}: {detail}")
        self.parent = parent
        self.child = child


class MultiParentNonAccessMethod(InvalidDocument):
    def __init__(self, node_id: str, parents: list[str]):
        super().__init__(
            f"node {node_id!r} has multiple parents {parents!r}; "
            "only access-method nodes may be shared"
        )
        self.node_id = node_id
        self.parents = list(parents)


class RootNotAccount(InvalidDocument):
    def __init__(self, node_id: str):
        super().__init__(f"root {node_id!r} is not an account node")
        self.node_id = node_id


class EmptyOperator(InvalidDocument):
    def __init__(self, node_id: str):
        super().__init__(f"operator node {node_id!r} has no children")
        self.node_id = node_id


class UnknownNode(AagError):
    def __init__(self, node_id: str):
        super().__init__(f"unknown node id {node_id!r}")
        self.node_id = node_id


class NotAnAccount(AagError):
    def __init__(self, node_id: str):
        super().__init__(f"node {node_id!r} is not an account")
        self.node_id = node_id


class NotALeaf(AagError):
    """The node has no leaf security level (operator, access method, or an
    account with children)."""

    def __init__(self, node_id: str, detail: str = ""):
        msg = f"node {node_id!r} is not a scoreable leaf"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.node_id = node_id


class SizeLimitExceeded(AagError):
    def __init__(self, what: str, size: int, limit: int):
        super().__init__(f"{what} ({size}) exceeds the configured limit of {limit}")
        self.what = what
        self.size = size
        self.limit = limit


class NotMinimized(AagError):
    """The DNF still contains an implicant that absorbs another."""

    def __init__(self, superset: frozenset, subset: frozenset):
        super().__init__(
            f"implicant {sorted(superset)} is a superset of {sorted(subset)}; "
            "minimize the DNF first"
        )
        self.superset = superset
        self.subset = subset


class UnknownAccessMethod(AagError):
    def __init__(self, node_id: str):
        super().__init__(f"unknown access method {node_id!r}")
        self.node_id = node_id


class MissingLabel(AagError):
    def __init__(self, node_id: str):
        super().__init__(f"no display label for variable {node_id!r}")
        self.node_id = node_id


class InvalidRecord(AagError):
    """A survey record violates a field constraint; `path` names the field."""

    def __init__(self, path: str, detail: str):
        super().__init__(f"{path}: {detail}")
        self.path = path
        self.detail = detail
