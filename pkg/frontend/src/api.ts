/**
 * Typed HTTP client for the building-metadata server.
 *
 * Every number and string shown in the console comes out of these responses
 * unchanged; the client never re-derives a quantity the server already
 * computed. The one exception is coordinate mapping for the SVG charts,
 * which is pure screen geometry.
 */

/** One RDF term inside a query solution, SPARQL-JSON style. */
export interface Binding {
  type: "uri" | "literal" | "bnode";
  value: string;
  "xml:lang"?: string;
  datatype?: string;
}

export type Row = Record<string, Binding>;

export interface QueryResult {
  head: { vars: string[] };
  results: { bindings: Row[] };
}

export interface Health {
  status: string;
  graphs: number;
  triples: number;
  samples: number;
}

export interface SeriesResponse {
  id: string;
  samples: [number, number][];
}

export interface ModelReport {
  triples: number;
  entailed: number;
  warnings: string[];
}

export interface IngestReport {
  accepted: number;
  rejected: number;
  errors: { row: number; kind: string; detail: string }[];
}

export interface LinearFit {
  kind: "linear";
  n: number;
  sse: number;
  r_squared: number;
  intercept: number;
  slope: number;
}

export interface ChangepointFit {
  kind: "changepoint";
  n: number;
  sse: number;
  r_squared: number;
  base_load: number;
  breakpoint_temp: number;
  cooling_slope: number;
}

export type Fit = LinearFit | ChangepointFit;

export interface ZoneEntry {
  points: string[];
  fit?: Fit;
  pairs?: [number, number][];
  times?: number[];
  error?: string;
}

export interface BaselineReport {
  graph?: string;
  window: [number, number];
  interval: number;
  method: string;
  zones: Record<string, ZoneEntry>;
}

export interface BaselineRequest {
  graph: string;
  window: [number, number];
  interval?: number;
  method?: "linear" | "changepoint";
  grid?: number;
}

/** Raised for any non-2xx response; carries the decoded error body. */
export class ApiError extends Error {
  readonly status: number;
  readonly body: Record<string, unknown>;

  constructor(status: number, body: Record<string, unknown>) {
    super(ApiError.describe(status, body));
    this.name = "ApiError";
    this.status = status;
    this.body = body;
  }

  static describe(status: number, body: Record<string, unknown>): string {
    const code = typeof body.error === "string" ? body.error : `HTTP ${status}`;
    const detail = typeof body.detail === "string" ? body.detail : "";
    const where =
      typeof body.line === "number" && typeof body.column === "number"
        ? ` (line ${body.line}, column ${body.column})`
        : "";
    return detail ? `${code}: ${detail}${where}` : `${code}${where}`;
  }
}

async function decode(response: Response): Promise<unknown> {
  const text = await response.text();
  try {
    return text ? JSON.parse(text) : {};
  } catch {
    return { error: "BadResponse", detail: text.slice(0, 200) };
  }
}

export class Client {
  constructor(readonly base: string = "") {}

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    const response = await fetch(this.base + path, init);
    const body = await decode(response);
    if (!response.ok) {
      throw new ApiError(response.status, body as Record<string, unknown>);
    }
    return body;
  }

  async health(): Promise<Health> {
    return (await this.request("/healthz")) as Health;
  }

  async query(text: string, graph?: string): Promise<QueryResult> {
    const headers: Record<string, string> = {
      "Content-Type": "application/sparql-query",
    };
    if (graph) {
      headers["X-Graph"] = graph;
    }
    return (await this.request("/query", {
      method: "POST",
      headers,
      body: text,
    })) as QueryResult;
  }

  async series(id: string, start = 0, end?: number): Promise<SeriesResponse> {
    const params = new URLSearchParams({ id, start: String(start) });
    if (end !== undefined) {
      params.set("end", String(end));
    }
    return (await this.request(`/series?${params}`)) as SeriesResponse;
  }

  async baseline(request: BaselineRequest): Promise<BaselineReport> {
    return (await this.request("/analysis/baseline", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
    })) as BaselineReport;
  }

  async putModel(graph: string, turtle: string): Promise<ModelReport> {
    const params = new URLSearchParams({ graph });
    return (await this.request(`/model?${params}`, {
      method: "POST",
      headers: { "Content-Type": "text/turtle" },
      body: turtle,
    })) as ModelReport;
  }

  async ingest(text: string, format: "csv" | "ndjson"): Promise<IngestReport> {
    const type = format === "csv" ? "text/csv" : "application/x-ndjson";
    return (await this.request("/data", {
      method: "POST",
      headers: { "Content-Type": type },
      body: text,
    })) as IngestReport;
  }
}

/**
 * Guards a panel against out-of-order responses. Each new request takes a
 * ticket; a response is only rendered when its ticket is still the latest
 * one issued, so a slow earlier response can never overwrite the result of
 * the query the user ran last.
 */
export class SequenceGate {
  private issued = 0;

  next(): number {
    this.issued += 1;
    return this.issued;
  }

  isCurrent(ticket: number): boolean {
    return ticket === this.issued;
  }
}
