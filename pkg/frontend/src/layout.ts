import type { GraphDocument, GraphNode } from "./api.js";

export interface PlacedNode {
  node: GraphNode;
  /** center coordinates */
  x: number;
  y: number;
  layer: number;
}

export interface GraphLayout {
  width: number;
  height: number;
  nodes: Map<string, PlacedNode>;
  edges: { from: string; to: string }[];
}

const CELL_WIDTH = 150;
const ROW_HEIGHT = 110;
const MARGIN = 60;

/**
 * Layered top-down placement: accounts at the top, access methods pinned
 * to the bottom row, everything else at 1 + max(parent layer). Order
 * within a row follows document order, so the same document always
 * yields the same picture.
 */
export function layoutGraph(document: GraphDocument): GraphLayout {
  const parents = new Map<string, string[]>();
  for (const node of document.nodes) parents.set(node.id, []);
  for (const [from, to] of document.edges) parents.get(to)?.push(from);

  const layers = new Map<string, number>();
  const visiting = new Set<string>();

  const layerOf = (id: string): number => {
    const known = layers.get(id);
    if (known !== undefined) return known;
    if (visiting.has(id)) return 0; // cycles are rejected server-side
    visiting.add(id);
    const above = (parents.get(id) ?? []).map(layerOf);
    const layer = above.length === 0 ? 0 : Math.max(...above) + 1;
    visiting.delete(id);
    layers.set(id, layer);
    return layer;
  };

  let deepest = 0;
  for (const node of document.nodes) {
    if (node.kind !== "access_method") deepest = Math.max(deepest, layerOf(node.id));
  }
  const bottom = deepest + 1;
  for (const node of document.nodes) {
    if (node.kind === "access_method") layers.set(node.id, bottom);
  }

  const rows = new Map<number, GraphNode[]>();
  for (const node of document.nodes) {
    const layer = layers.get(node.id) ?? 0;
    const row = rows.get(layer);
    if (row) row.push(node);
    else rows.set(layer, [node]);
  }

  const widest = Math.max(1, ...[...rows.values()].map((row) => row.length));
  const width = widest * CELL_WIDTH + 2 * MARGIN;
  const height = (bottom + 1) * ROW_HEIGHT + 2 * MARGIN;

  const placed = new Map<string, PlacedNode>();
  for (const [layer, row] of rows) {
    const span = row.length * CELL_WIDTH;
    const left = (width - span) / 2;
    row.forEach((node, index) => {
      placed.set(node.id, {
        node,
        x: left + index * CELL_WIDTH + CELL_WIDTH / 2,
        y: MARGIN + layer * ROW_HEIGHT + ROW_HEIGHT / 2,
        layer,
      });
    });
  }

  return {
    width,
    height,
    nodes: placed,
    edges: document.edges.map(([from, to]) => ({ from, to })),
  };
}
