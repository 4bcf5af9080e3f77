/** Adjacency heatmap: free text in, color-coded relevance matrix out.
 * Lighter cells mean higher relevance; the scale is monotone over
 * relevance clamped to [0, 1]. */

import { ApiError, TermnetClient } from "./api.js";
import { RequestGate, escapeHtml } from "./sequence.js";
import type { AdjacencyResponse } from "./types.js";

const LIGHTNESS_FLOOR = 25;
const LIGHTNESS_SPAN = 70;

export function clampRelevance(value: number): number {
  if (Number.isNaN(value)) return 0;
  return Math.min(1, Math.max(0, value));
}

/** Monotone lightness ramp; 0 -> dark, 1 -> lightest. */
export function cellLightness(value: number): number {
  return LIGHTNESS_FLOOR + LIGHTNESS_SPAN * clampRelevance(value);
}

export function cellColor(value: number): string {
  return `hsl(210 60% ${cellLightness(value)}%)`;
}

export function renderHeatmapTable(data: AdjacencyResponse): string {
  const { terms, matrix } = data;
  if (terms.length === 0) {
    return `<p class="muted">no known terms in that text</p>`;
  }
  const header = terms
    .map((t) => `<th scope="col">${escapeHtml(t)}</th>`)
    .join("");
  const rows = terms
    .map((term, i) => {
      const row = matrix[i] ?? [];
      const cells = row
        .map((value, j) => {
          const text = value.toFixed(3);
          return (
            `<td class="cell" data-row="${i}" data-col="${j}" ` +
            `data-value="${text}" style="background:${cellColor(value)}" ` +
            `title="${escapeHtml(term)} / ${escapeHtml(terms[j] ?? "")}: ${text}">` +
            `${text}</td>`
          );
        })
        .join("");
      return `<tr><th scope="row">${escapeHtml(term)}</th>${cells}</tr>`;
    })
    .join("");
  return (
    `<table class="heatmap"><thead><tr><th></th>${header}</tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}

export interface HeatmapState {
  text: string;
  data: AdjacencyResponse | null;
  message: string;
  loading: boolean;
}

export class HeatmapPanel {
  private readonly client: TermnetClient;
  private readonly gate = new RequestGate();
  state: HeatmapState = { text: "", data: null, message: "", loading: false };

  constructor(client: TermnetClient) {
    this.client = client;
  }

  async submit(text: string): Promise<void> {
    const token = this.gate.next();
    this.state = { ...this.state, text, loading: true, message: "" };
    try {
      const data = await this.client.adjacency(text);
      if (!this.gate.isCurrent(token)) return;
      this.state = { ...this.state, data, loading: false };
    } catch (err) {
      if (!this.gate.isCurrent(token)) return;
      const message =
        err instanceof ApiError ? err.message : "service unreachable";
      this.state = { ...this.state, data: null, loading: false, message };
    }
  }

  /** Raw service CSV for the download button; not re-serialized here. */
  downloadCsv(): Promise<string> {
    return this.client.adjacencyCsv(this.state.text);
  }

  render(): string {
    const { data, loading, message } = this.state;
    if (loading) return `<p class="muted">extracting…</p>`;
    if (message) return `<p class="error" role="alert">${escapeHtml(message)}</p>`;
    if (!data) return `<p class="muted">paste text to see its term graph</p>`;
    const download = data.terms.length
      ? `<button data-action="download-csv">download CSV</button>`
      : "";
    return renderHeatmapTable(data) + download;
  }
}
