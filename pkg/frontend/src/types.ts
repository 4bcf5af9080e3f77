/** Wire shapes of the /v1 query service. */

export interface SimilarityResponse {
  t1: string;
  t2: string;
  relevance: number;
}

export interface NeighborEntry {
  term: string;
  relevance: number;
}

export interface NeighborsResponse {
  term: string;
  neighbors: NeighborEntry[];
}

export interface AdjacencyResponse {
  terms: string[];
  matrix: number[][];
}

export interface TreeResponse {
  term: string;
  relevance?: number;
  children: TreeResponse[];
}

export interface HealthResponse {
  status: string;
  term_count: number;
  dim: number;
}

export interface ErrorBody {
  error: string;
  detail?: Record<string, unknown>;
}
