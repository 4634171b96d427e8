// Types mirror the service's JSON responses field for field; the UI
// renders them as-is and computes nothing itself.

export type NodeKind = "account" | "auth_method" | "operator" | "access_method";

export interface GraphNode {
  id: string;
  kind: NodeKind;
  label?: string;
  category?: string;
  op?: "and" | "or";
}

export interface GraphDocument {
  nodes: GraphNode[];
  edges: [string, string][];
  roots: string[];
}

export interface CreateResponse {
  id: string;
  revision: number;
  warnings: string[];
}

export interface GetResponse {
  id: string;
  revision: number;
  document: GraphDocument;
}

export interface AccessibilityReport {
  score: string;
  score_decimal: number;
  band: "red" | "yellow" | "green";
  satisfiable: boolean;
  reduced_term: string[][];
  lockout_sets: string[][];
  occurrences: Record<string, number>;
  weights: Record<string, string>;
  safe_loss_bound: number;
  safe_loss_bound_fractional: boolean;
  narrative: string;
}

export interface AccountReport {
  account: string;
  label: string;
  security: "low" | "medium" | "high";
  security_band: "red" | "yellow" | "green";
  formula: string;
  reduced_formula: string;
  accessibility: AccessibilityReport;
  legacy_accessibility?: {
    score: string;
    score_decimal: number;
    label: string;
  };
}

export interface AnalyzeResponse {
  revision: number;
  accounts: AccountReport[];
}

export interface WhatIfResponse {
  revision: number;
  account: string;
  lost: string[];
  accessible: boolean;
  score: string;
  score_decimal: number;
  band: "red" | "yellow" | "green";
  reduced_term: string[][];
  lockout_sets: string[][];
}

export interface TemplateField {
  path: string;
  kind: "bool" | "device_id" | "device_ids";
  label: string;
  categories?: string[];
}

export interface TemplateManifest {
  provider: string;
  device_categories: string[];
  record: Record<string, unknown>;
  fields: TemplateField[];
}

export interface ErrorBody {
  code: string;
  message: string;
  path: string | null;
}

/** A 4xx/5xx answer from the service, carrying its error envelope. */
export class ServiceError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly path: string | null,
  ) {
    super(message);
  }
}

/** fetch() itself failed: wrong URL, server down, network gone. */
export class ServiceUnreachable extends Error {
  constructor(readonly baseUrl: string) {
    super(`service unreachable at ${baseUrl}`);
  }
}

export class AccessGraphClient {
  constructor(readonly baseUrl: string) {}

  healthz(): Promise<{ status: string }> {
    return this.request("GET", "/healthz");
  }

  createGraph(document: GraphDocument): Promise<CreateResponse> {
    return this.request("POST", "/graphs", document);
  }

  getGraph(sessionId: string): Promise<GetResponse> {
    return this.request("GET", `/graphs/${sessionId}`);
  }

  replaceGraph(
    sessionId: string,
    document: GraphDocument,
    ifMatch?: number,
  ): Promise<CreateResponse> {
    const headers =
      ifMatch === undefined ? undefined : { "If-Match": String(ifMatch) };
    return this.request("PUT", `/graphs/${sessionId}`, document, headers);
  }

  analyze(sessionId: string, accounts?: string[]): Promise<AnalyzeResponse> {
    return this.request(
      "POST",
      `/graphs/${sessionId}/analyze`,
      accounts ? { accounts } : {},
    );
  }

  whatIf(
    sessionId: string,
    lose: string[],
    account?: string,
  ): Promise<WhatIfResponse> {
    const body: Record<string, unknown> = { lose };
    if (account !== undefined) body.account = account;
    return this.request("POST", `/graphs/${sessionId}/what-if`, body);
  }

  template(provider: string): Promise<TemplateManifest> {
    return this.request("GET", `/templates/${provider}`);
  }

  instantiate(record: Record<string, unknown>): Promise<GraphDocument> {
    return this.request("POST", "/instantiate", record);
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    extraHeaders?: Record<string, string>,
  ): Promise<T> {
    let response: Response;
    try {
      response = await fetch(this.baseUrl + path, {
        method,
        headers: {
          ...(body !== undefined ? { "Content-Type": "application/json" } : {}),
          ...extraHeaders,
        },
        body: body !== undefined ? JSON.stringify(body) : undefined,
      });
    } catch {
      throw new ServiceUnreachable(this.baseUrl);
    }
    if (!response.ok) {
      let envelope: ErrorBody;
      try {
        envelope = (await response.json()) as ErrorBody;
      } catch {
        envelope = { code: "internal", message: response.statusText, path: null };
      }
      throw new ServiceError(
        response.status,
        envelope.code,
        envelope.message,
        envelope.path,
      );
    }
    return (await response.json()) as T;
  }
}
