import type { GraphDocument, WhatIfResponse } from "./api.js";
import { layoutGraph } from "./layout.js";

export interface CanvasDecorations {
  lost: ReadonlySet<string>;
  whatIf: WhatIfResponse | null;
}

const NONE: CanvasDecorations = { lost: new Set(), whatIf: null };

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/**
 * Draw the graph as an SVG string. Accounts are rectangles, auth
 * methods rounded rectangles, operators circles carrying & or |, access
 * methods pills on the bottom row. During a what-if, decoration comes
 * straight from the service response: methods in the surviving reduced
 * term (and the paths above them) are marked live, selected methods are
 * marked lost, the rest fades.
 */
export function renderCanvas(
  document: GraphDocument | null,
  decorations: CanvasDecorations = NONE,
): string {
  if (document === null || document.nodes.length === 0) {
    return '<div class="canvas-empty">No graph yet. Build an account in the wizard.</div>';
  }
  const layout = layoutGraph(document);
  const surviving = new Set<string>();
  for (const implicant of decorations.whatIf?.reduced_term ?? []) {
    for (const id of implicant) surviving.add(id);
  }

  // Parents of surviving methods, up to the account: the live paths.
  const parents = new Map<string, string[]>();
  for (const [from, to] of document.edges) {
    const existing = parents.get(to);
    if (existing) existing.push(from);
    else parents.set(to, [from]);
  }
  const live = new Set<string>();
  const climb = (id: string) => {
    if (live.has(id)) return;
    live.add(id);
    for (const parent of parents.get(id) ?? []) climb(parent);
  };
  if (decorations.whatIf) for (const id of surviving) climb(id);

  const nodeClass = (id: string, kind: string): string => {
    const classes = ["node", `kind-${kind}`];
    if (decorations.lost.has(id)) classes.push("lost");
    else if (decorations.whatIf) classes.push(live.has(id) ? "live" : "faded");
    return classes.join(" ");
  };

  const parts: string[] = [];
  for (const { from, to } of layout.edges) {
    const a = layout.nodes.get(from);
    const b = layout.nodes.get(to);
    if (!a || !b) continue;
    const classes = ["edge"];
    if (decorations.lost.has(to)) classes.push("edge-lost");
    else if (decorations.whatIf && live.has(to) && live.has(from)) classes.push("edge-live");
    else if (decorations.whatIf) classes.push("edge-faded");
    parts.push(
      `<line class="${classes.join(" ")}" x1="${a.x}" y1="${a.y + 22}" ` +
        `x2="${b.x}" y2="${b.y - 22}" />`,
    );
  }

  for (const placed of layout.nodes.values()) {
    const { node, x, y } = placed;
    const label = escapeXml(node.label ?? node.id);
    const cls = nodeClass(node.id, node.kind);
    if (node.kind === "operator") {
      const symbol = node.op === "and" ? "&amp;" : "|";
      parts.push(
        `<g class="${cls}" data-node="${escapeXml(node.id)}">` +
          `<circle cx="${x}" cy="${y}" r="16" />` +
          `<text x="${x}" y="${y + 5}" text-anchor="middle">${symbol}</text></g>`,
      );
      continue;
    }
    const width = node.kind === "access_method" ? 110 : 124;
    const height = node.kind === "account" ? 44 : 38;
    const radius =
      node.kind === "account" ? 0 : node.kind === "auth_method" ? 10 : 19;
    parts.push(
      `<g class="${cls}" data-node="${escapeXml(node.id)}">` +
        `<rect x="${x - width / 2}" y="${y - height / 2}" width="${width}" ` +
        `height="${height}" rx="${radius}" />` +
        `<text x="${x}" y="${y + 4}" text-anchor="middle">${label}</text></g>`,
    );
  }

  return (
    `<svg viewBox="0 0 ${layout.width} ${layout.height}" ` +
    `width="${layout.width}" height="${layout.height}" ` +
    `xmlns="http://www.w3.org/2000/svg">${parts.join("")}</svg>`
  );
}
