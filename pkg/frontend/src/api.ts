/** Typed client for the /v1 query service.
 *
 * The UI never computes relevance itself; every number it shows comes out
 * of one of these calls verbatim.
 */

import type {
  AdjacencyResponse,
  ErrorBody,
  HealthResponse,
  NeighborsResponse,
  SimilarityResponse,
  TreeResponse,
} from "./types.js";

export interface ClientConfig {
  baseUrl: string;
  /** Server-side cap on neighbor counts; the UI clamps k to it. */
  maxK: number;
}

export const DEFAULT_CONFIG: ClientConfig = {
  baseUrl: "http://127.0.0.1:8756",
  maxK: 100,
};

export class ApiError extends Error {
  readonly status: number;
  readonly body: ErrorBody | undefined;

  constructor(status: number, body: ErrorBody | undefined) {
    super(body?.error ?? `request failed with status ${status}`);
    this.status = status;
    this.body = body;
  }
}

export type FetchLike = (
  url: string,
  init?: RequestInit,
) => Promise<Response>;

async function readError(response: Response): Promise<ApiError> {
  let body: ErrorBody | undefined;
  try {
    body = (await response.json()) as ErrorBody;
  } catch {
    body = undefined;
  }
  return new ApiError(response.status, body);
}

export class TermnetClient {
  private readonly config: ClientConfig;
  private readonly fetchFn: FetchLike;

  constructor(config: Partial<ClientConfig> = {}, fetchFn?: FetchLike) {
    this.config = { ...DEFAULT_CONFIG, ...config };
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  get maxK(): number {
    return this.config.maxK;
  }

  private async getJson<T>(path: string, query: Record<string, string>): Promise<T> {
    const params = new URLSearchParams(query);
    const url = `${this.config.baseUrl}${path}?${params.toString()}`;
    const response = await this.fetchFn(url, {
      headers: { accept: "application/json" },
    });
    if (!response.ok) {
      throw await readError(response);
    }
    return (await response.json()) as T;
  }

  health(): Promise<HealthResponse> {
    return this.getJson<HealthResponse>("/v1/health", {});
  }

  similarity(t1: string, t2: string): Promise<SimilarityResponse> {
    return this.getJson<SimilarityResponse>("/v1/similarity", { t1, t2 });
  }

  neighbors(
    term: string,
    k: number,
    exclude?: readonly string[],
  ): Promise<NeighborsResponse> {
    const query: Record<string, string> = {
      term,
      k: String(this.clampK(k)),
    };
    if (exclude && exclude.length > 0) {
      query.exclude = exclude.join(",");
    }
    return this.getJson<NeighborsResponse>("/v1/neighbors", query);
  }

  tree(root: string, breadth: number, depth: number): Promise<TreeResponse> {
    return this.getJson<TreeResponse>("/v1/tree", {
      root,
      breadth: String(breadth),
      depth: String(depth),
    });
  }

  async adjacency(text: string): Promise<AdjacencyResponse> {
    const response = await this.fetchFn(`${this.config.baseUrl}/v1/adjacency`, {
      method: "POST",
      headers: { "content-type": "application/json", accept: "application/json" },
      body: JSON.stringify({ text }),
    });
    if (!response.ok) {
      throw await readError(response);
    }
    return (await response.json()) as AdjacencyResponse;
  }

  /** The service's own CSV rendering, passed through untouched. */
  async adjacencyCsv(text: string): Promise<string> {
    const response = await this.fetchFn(`${this.config.baseUrl}/v1/adjacency`, {
      method: "POST",
      headers: { "content-type": "application/json", accept: "text/csv" },
      body: JSON.stringify({ text }),
    });
    if (!response.ok) {
      throw await readError(response);
    }
    return response.text();
  }

  clampK(k: number): number {
    if (!Number.isFinite(k) || k < 1) return 1;
    return Math.min(Math.floor(k), this.config.maxK);
  }
}
