"""Account access graphs: typed DAGs describing how accounts can be reached.

A graph has four node kinds: accounts, authentication methods, logical
operators (and/or), and access methods (the physical things a method needs:
a device, human memory, a paper note). Access methods are the only nodes
that may be shared between branches; everything else forms a tree hanging
off the account roots.

Graphs are immutable after :func:`build_graph`; every operation here is a
pure function, so values are safe to share between threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

from .errors import (
    CycleDetected,
    DanglingEdge,
    DuplicateNodeId,
    EmptyOperator,
    IllegalChildKind,
    InvalidDocument,
    MultiParentNonAccessMethod,
    NotAnAccount,
    RootNotAccount,
    UnknownNode,
)

# Namespace reserved for variables synthesized by formula extraction
# (unmapped leaves). Document node ids must stay out of it.
ABSTRACT_PREFIX = "abstract::"


class NodeType(str, Enum):
    ACCOUNT = "account"
    AUTH_METHOD = "auth_method"
    OPERATOR = "operator"
    ACCESS_METHOD = "access_method"


class OperatorKind(str, Enum):
    AND = "and"
    OR = "or"


class MethodCategory(str, Enum):
    """Assurance category of an authentication method."""

    KNOWLEDGE_BASED = "knowledge_based"
    SOFTWARE_BASED = "software_based"
    HARDWARE_BASED = "hardware_based"
    ACCOUNT_REFERENCE = "account_reference"


@dataclass(frozen=True)
class Node:
    id: str
    type: NodeType
    label: str
    category: MethodCategory | None = None  # auth_method nodes only
    op: OperatorKind | None = None  # operator nodes only


@dataclass(frozen=True)
class AccountAccessGraph:
    """Validated, immutable account access graph.

    Node and edge order mirror the source document, and every traversal
    follows that order, so downstream reports are byte-stable.
    """

    nodes: tuple[Node, ...]
    edges: tuple[tuple[str, str], ...]
    roots: tuple[str, ...]
    warnings: tuple[str, ...] = field(default=(), compare=False)

    # Derived indices, filled in __post_init__.
    _by_id: dict = field(default_factory=dict, init=False, repr=False, compare=False)
    _children: dict = field(default_factory=dict, init=False, repr=False, compare=False)
    _parents: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        by_id: dict[str, Node] = {}
        children: dict[str, list[str]] = {n.id: [] for n in self.nodes}
        parents: dict[str, list[str]] = {n.id: [] for n in self.nodes}
        for n in self.nodes:
            by_id[n.id] = n
        for parent, child in self.edges:
            children[parent].append(child)
            parents[child].append(parent)
        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "_children", {k: tuple(v) for k, v in children.items()})
        object.__setattr__(self, "_parents", {k: tuple(v) for k, v in parents.items()})

    def node(self, node_id: str) -> Node:
        try:
            return self._by_id[node_id]
        except KeyError:
            raise UnknownNode(node_id) from None

    def has_node(self, node_id: str) -> bool:
        return node_id in self._by_id

    def children_of(self, node_id: str) -> tuple[str, ...]:
        if node_id not in self._by_id:
            raise UnknownNode(node_id)
        return self._children[node_id]

    def parents_of(self, node_id: str) -> tuple[str, ...]:
        if node_id not in self._by_id:
            raise UnknownNode(node_id)
        return self._parents[node_id]

    def node_ids(self) -> tuple[str, ...]:
        return tuple(n.id for n in self.nodes)

    def access_method_ids(self) -> tuple[str, ...]:
        return tuple(n.id for n in self.nodes if n.type is NodeType.ACCESS_METHOD)

    def labels(self) -> dict[str, str]:
        return {n.id: n.label for n in self.nodes}

    def reachable_from(self, start: str) -> tuple[str, ...]:
        """Nodes reachable from `start` (inclusive), in document order."""
        self.node(start)
        seen = {start}
        stack = [start]
        while stack:
            for child in self._children[stack.pop()]:
                if child not in seen:
                    seen.add(child)
                    stack.append(child)
        return tuple(n.id for n in self.nodes if n.id in seen)


_NODE_FIELDS = {"id", "kind", "label", "category", "op"}
_TOP_FIELDS = {"nodes", "edges", "roots"}


def build_graph(document: dict | str | bytes, *, strict: bool = False) -> AccountAccessGraph:
    """Parse and validate a graph document (dict or JSON text).

    Unknown fields are rejected when `strict` is set and collected as
    warnings otherwise. The returned graph satisfies every structural
    invariant: unique ids, edges between known nodes, acyclic, legal
    child kinds, single parent except for access methods, account roots,
    and non-empty operators.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise InvalidDocument(f"not valid JSON: {exc}") from None
    if not isinstance(document, dict):
        raise InvalidDocument("graph document must be a JSON object")

    warnings: list[str] = []

    def complain(message: str) -> None:
        if strict:
            raise InvalidDocument(message)
        warnings.append(message)

    for key in document:
        if key not in _TOP_FIELDS:
            complain(f"unknown top-level field {key!r} ignored")

    raw_nodes = document.get("nodes")
    raw_edges = document.get("edges", [])
    raw_roots = document.get("roots", [])
    if not isinstance(raw_nodes, list):
        raise InvalidDocument("'nodes' must be a list")
    if not isinstance(raw_edges, list):
        raise InvalidDocument("'edges' must be a list")
    if not isinstance(raw_roots, list):
        raise InvalidDocument("'roots' must be a list")

    nodes: list[Node] = []
    seen_ids: set[str] = set()
    for i, item in enumerate(raw_nodes):
        if not isinstance(item, dict):
            raise InvalidDocument(f"nodes[{i}] must be an object")
        for key in item:
            if key not in _NODE_FIELDS:
                complain(f"nodes[{i}]: unknown field {key!r} ignored")
        node_id = item.get("id")
        if not isinstance(node_id, str) or not node_id:
            raise InvalidDocument(f"nodes[{i}]: 'id' must be a non-empty string")
        if node_id.startswith(ABSTRACT_PREFIX):
            raise InvalidDocument(
                f"nodes[{i}]: id {node_id!r} uses the reserved prefix {ABSTRACT_PREFIX!r}"
            )
        if node_id in seen_ids:
            raise DuplicateNodeId(node_id)
        seen_ids.add(node_id)

        kind_token = item.get("kind")
        try:
            node_type = NodeType(kind_token)
        except ValueError:
            raise InvalidDocument(f"nodes[{i}]: unknown kind {kind_token!r}") from None

        label = item.get("label")
        if label is None:
            complain(f"nodes[{i}]: missing 'label', using id {node_id!r}")
            label = node_id
        elif not isinstance(label, str):
            raise InvalidDocument(f"nodes[{i}]: 'label' must be a string")

        category: MethodCategory | None = None
        if "category" in item:
            if node_type is not NodeType.AUTH_METHOD:
                complain(f"nodes[{i}]: 'category' is only valid on auth_method nodes; ignored")
            else:
                try:
                    category = MethodCategory(item["category"])
                except ValueError:
                    raise InvalidDocument(
                        f"nodes[{i}]: unknown category {item['category']!r}"
                    ) from None
        elif node_type is NodeType.AUTH_METHOD:
            # Worst-case default: an uncategorized method scores low.
            complain(
                f"nodes[{i}]: auth_method {node_id!r} has no 'category'; "
                "defaulting to knowledge_based"
            )
            category = MethodCategory.KNOWLEDGE_BASED

        op: OperatorKind | None = None
        if "op" in item:
            if node_type is not NodeType.OPERATOR:
                complain(f"nodes[{i}]: 'op' is only valid on operator nodes; ignored")
            else:
                try:
                    op = OperatorKind(item["op"])
                except ValueError:
                    raise InvalidDocument(f"nodes[{i}]: unknown op {item['op']!r}") from None
        elif node_type is NodeType.OPERATOR:
            raise InvalidDocument(f"nodes[{i}]: operator node {node_id!r} requires 'op'")

        nodes.append(Node(id=node_id, type=node_type, label=label, category=category, op=op))

    by_id = {n.id: n for n in nodes}

    edges: list[tuple[str, str]] = []
    seen_edges: set[tuple[str, str]] = set()
    for i, item in enumerate(raw_edges):
        if not (isinstance(item, (list, tuple)) and len(item) == 2):
            raise InvalidDocument(f"edges[{i}] must be a [parent, child] pair")
        parent, child = item
        if not isinstance(parent, str) or not isinstance(child, str):
            raise InvalidDocument(f"edges[{i}] endpoints must be strings")
        if parent not in by_id:
            raise DanglingEdge(parent, child, parent)
        if child not in by_id:
            raise DanglingEdge(parent, child, child)
        if (parent, child) in seen_edges:
            complain(f"edges[{i}]: duplicate edge ({parent!r}, {child!r}) dropped")
            continue
        seen_edges.add((parent, child))
        edges.append((parent, child))

    roots: list[str] = []
    for i, root in enumerate(raw_roots):
        if not isinstance(root, str):
            raise InvalidDocument(f"roots[{i}] must be a string")
        if root not in by_id:
            raise UnknownNode(root)
        if by_id[root].type is not NodeType.ACCOUNT:
            raise RootNotAccount(root)
        if root in roots:
            complain(f"roots[{i}]: duplicate root {root!r} dropped")
            continue
        roots.append(root)

    _check_child_kinds(by_id, edges)
    _check_parent_counts(by_id, edges)
    _check_acyclic(list(by_id), edges)

    children_count = {n.id: 0 for n in nodes}
    for parent, _ in edges:
        children_count[parent] += 1
    for n in nodes:
        if n.type is NodeType.OPERATOR and children_count[n.id] == 0:
            raise EmptyOperator(n.id)

    graph = AccountAccessGraph(
        nodes=tuple(nodes),
        edges=tuple(edges),
        roots=tuple(roots),
        warnings=tuple(warnings),
    )
    orphans = _orphaned_access_methods(graph)
    if orphans:
        graph = AccountAccessGraph(
            nodes=graph.nodes,
            edges=graph.edges,
            roots=graph.roots,
            warnings=graph.warnings
            + (f"access methods not reachable from any root: {', '.join(orphans)}",),
        )
    return graph


def _check_child_kinds(by_id: dict[str, Node], edges: list[tuple[str, str]]) -> None:
    for parent, child in edges:
        p, c = by_id[parent], by_id[child]
        if p.type is NodeType.ACCESS_METHOD:
            raise IllegalChildKind(parent, child, "access methods are leaves")
        if p.type is NodeType.AUTH_METHOD:
            if c.type is not NodeType.ACCESS_METHOD:
                raise IllegalChildKind(
                    parent, child, "auth methods may only have access-method children"
                )
        elif c.type is NodeType.ACCESS_METHOD:
            raise IllegalChildKind(
                parent, child, "access methods may only hang off auth methods"
            )


def _check_parent_counts(by_id: dict[str, Node], edges: list[tuple[str, str]]) -> None:
    parents: dict[str, list[str]] = {}
    for parent, child in edges:
        parents.setdefault(child, []).append(parent)
    for child, plist in parents.items():
        if len(plist) > 1 and by_id[child].type is not NodeType.ACCESS_METHOD:
            raise MultiParentNonAccessMethod(child, plist)


def _check_acyclic(node_ids: list[str], edges: list[tuple[str, str]]) -> None:
    children: dict[str, list[str]] = {nid: [] for nid in node_ids}
    for parent, child in edges:
        children[parent].append(child)

    WHITE, GRAY, BLACK = 0, 1, 2
    color = {nid: WHITE for nid in node_ids}

    for start in node_ids:
        if color[start] != WHITE:
            continue
        # Iterative DFS keeping the gray path for cycle reporting.
        path: list[str] = []
        stack: list[tuple[str, int]] = [(start, 0)]
        color[start] = GRAY
        path.append(start)
        while stack:
            node, idx = stack[-1]
            if idx < len(children[node]):
                stack[-1] = (node, idx + 1)
                child = children[node][idx]
                if color[child] == GRAY:
                    cycle = path[path.index(child):] + [child]
                    raise CycleDetected(cycle)
                if color[child] == WHITE:
                    color[child] = GRAY
                    path.append(child)
                    stack.append((child, 0))
            else:
                color[node] = BLACK
                path.pop()
                stack.pop()


def _orphaned_access_methods(graph: AccountAccessGraph) -> list[str]:
    reachable: set[str] = set()
    for root in graph.roots:
        reachable.update(graph.reachable_from(root))
    return [
        n.id
        for n in graph.nodes
        if n.type is NodeType.ACCESS_METHOD and n.id not in reachable
    ]


def serialize_graph(graph: AccountAccessGraph) -> dict:
    """Graph back to its document form; inverse of :func:`build_graph`."""
    nodes = []
    for n in graph.nodes:
        item: dict = {"id": n.id, "kind": n.type.value, "label": n.label}
        if n.category is not None:
            item["category"] = n.category.value
        if n.op is not None:
            item["op"] = n.op.value
        nodes.append(item)
    return {
        "nodes": nodes,
        "edges": [[p, c] for p, c in graph.edges],
        "roots": list(graph.roots),
    }


def graph_to_json(graph: AccountAccessGraph) -> str:
    return json.dumps(serialize_graph(graph), ensure_ascii=False, indent=2) + "\n"


def subgraph_of(graph: AccountAccessGraph, account: str) -> AccountAccessGraph:
    """Induced graph of everything reachable from `account`.

    Shared access methods are kept; edges among retained nodes are neither
    added nor removed. The result's sole root is `account`.
    """
    node = graph.node(account)
    if node.type is not NodeType.ACCOUNT:
        raise NotAnAccount(account)
    keep = set(graph.reachable_from(account))
    return AccountAccessGraph(
        nodes=tuple(n for n in graph.nodes if n.id in keep),
        edges=tuple(e for e in graph.edges if e[0] in keep and e[1] in keep),
        roots=(account,),
    )
