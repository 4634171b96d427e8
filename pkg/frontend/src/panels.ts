import type { AccountReport, WhatIfResponse } from "./api.js";
import { escapeXml as esc } from "./canvas.js";

export interface MethodEntry {
  id: string;
  label: string;
}

/** Security badge + accessibility score + lockout summary, all taken
 * verbatim from the last analysis response. */
export function scorePanelHtml(
  report: AccountReport | null,
  labels: Map<string, string>,
  stale = false,
): string {
  if (report === null) {
    return '<p class="empty">No account yet.</p>';
  }
  const name = (id: string) => esc(labels.get(id) ?? id);
  const lockouts = report.accessibility.lockout_sets
    .map((set) => `<li>${set.map(name).join(" + ")}</li>`)
    .join("");
  const legacy = report.legacy_accessibility
    ? `<p class="legacy">${esc(report.legacy_accessibility.label)}: ` +
      `${esc(report.legacy_accessibility.score)}</p>`
    : "";
  return [
    stale ? '<p class="stale">Graph changed, re-analyzing…</p>' : "",
    `<h3>${esc(report.label)}</h3>`,
    `<p>Security: <span class="badge band-${report.security_band}">` +
      `${esc(report.security)}</span></p>`,
    `<p>Accessibility: <span class="badge band-${report.accessibility.band}">` +
      `${esc(report.accessibility.score)}</span></p>`,
    `<p class="formula">${esc(report.reduced_formula)}</p>`,
    `<p class="narrative">${esc(report.accessibility.narrative)}</p>`,
    `<h4>Lockout sets</h4><ul class="lockouts">${lockouts}</ul>`,
    legacy,
  ].join("");
}

/** Checkbox per access method plus the service's verdict for the
 * current selection. Toggles never alter the analysis report; clearing
 * the selection simply falls back to it. */
export function whatIfPanelHtml(
  methods: MethodEntry[],
  lost: ReadonlySet<string>,
  whatIf: WhatIfResponse | null,
): string {
  const rows = methods
    .map(
      (method) =>
        `<label><input type="checkbox" data-method="${esc(method.id)}"` +
        `${lost.has(method.id) ? " checked" : ""}/> ${esc(method.label)}</label>`,
    )
    .join("");
  let verdict = "";
  if (whatIf !== null) {
    verdict = whatIf.accessible
      ? `<p class="verdict ok">still accessible</p>` +
        `<p>score after loss: <span class="badge band-${whatIf.band}">` +
        `${esc(whatIf.score)}</span></p>`
      : '<p class="verdict bad">locked out</p>';
  }
  const clear =
    lost.size > 0 ? '<button type="button" id="clear-lost">clear</button>' : "";
  return `<div class="methods">${rows}</div>${verdict}${clear}`;
}
