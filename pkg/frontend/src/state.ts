import type {
  AccountReport,
  GraphDocument,
  WhatIfResponse,
} from "./api.js";

/**
 * Client-side session state.
 *
 * Two invariants are enforced here rather than in the views:
 * the what-if selection only ever contains access-method ids of the
 * current document, and `dirty` flags a report computed from an older
 * revision than the document on screen (every edit round-trips through
 * the service, so the flag only spans the in-flight gap).
 *
 * What-if is non-destructive by construction: toggles never touch
 * `report`, they only swap `whatIf` in and out, so clearing the
 * selection restores the exact pre-toggle analysis object.
 */
export class ClientState {
  sessionId: string | null = null;
  document: GraphDocument | null = null;
  revision = 0;
  report: AccountReport | null = null;
  reportRevision = 0;
  whatIf: WhatIfResponse | null = null;
  private selection = new Set<string>();

  get dirty(): boolean {
    return this.report !== null && this.reportRevision !== this.revision;
  }

  get lost(): ReadonlySet<string> {
    return this.selection;
  }

  accessMethodIds(): Set<string> {
    const ids = new Set<string>();
    for (const node of this.document?.nodes ?? []) {
      if (node.kind === "access_method") ids.add(node.id);
    }
    return ids;
  }

  loadDocument(sessionId: string, revision: number, document: GraphDocument): void {
    this.sessionId = sessionId;
    this.document = document;
    this.revision = revision;
    this.whatIf = null;
    // Keep whatever part of the selection survived the edit.
    const methods = this.accessMethodIds();
    this.selection = new Set([...this.selection].filter((id) => methods.has(id)));
  }

  setReport(report: AccountReport, revision: number): void {
    this.report = report;
    this.reportRevision = revision;
  }

  toggleLost(id: string): void {
    if (!this.accessMethodIds().has(id)) {
      throw new Error(`not an access method of the current graph: ${id}`);
    }
    if (this.selection.has(id)) {
      this.selection.delete(id);
    } else {
      this.selection.add(id);
    }
    if (this.selection.size === 0) this.whatIf = null;
  }

  setWhatIf(response: WhatIfResponse): void {
    this.whatIf = response;
  }

  clearSelection(): void {
    this.selection = new Set();
    this.whatIf = null;
  }
}
