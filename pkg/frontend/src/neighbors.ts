/** Neighbor browser: ranked list where clicking an entry re-queries it,
 * so each answer feeds the next lookup. */

import { ApiError, TermnetClient } from "./api.js";
import { RequestGate, escapeHtml } from "./sequence.js";
import type { NeighborEntry } from "./types.js";

export interface NeighborState {
  term: string;
  k: number;
  items: NeighborEntry[];
  history: string[];
  message: string;
  loading: boolean;
}

export class NeighborPanel {
  private readonly client: TermnetClient;
  private readonly gate = new RequestGate();
  state: NeighborState = {
    term: "",
    k: 20,
    items: [],
    history: [],
    message: "",
    loading: false,
  };

  constructor(client: TermnetClient) {
    this.client = client;
  }

  setK(k: number): void {
    this.state = { ...this.state, k: this.client.clampK(k) };
  }

  async query(term: string): Promise<void> {
    const token = this.gate.next();
    this.state = { ...this.state, term, loading: true, message: "" };
    try {
      const body = await this.client.neighbors(term, this.state.k);
      if (!this.gate.isCurrent(token)) return;
      // response order is the ranking; it is preserved exactly
      this.state = {
        ...this.state,
        items: body.neighbors,
        history: [...this.state.history, term],
        loading: false,
      };
    } catch (err) {
      if (!this.gate.isCurrent(token)) return;
      const message =
        err instanceof ApiError ? err.message : "service unreachable";
      this.state = { ...this.state, items: [], loading: false, message };
    }
  }

  /** The click-through feedback loop. */
  follow(term: string): Promise<void> {
    return this.query(term);
  }

  render(): string {
    const { items, loading, message, history } = this.state;
    if (loading) return `<p class="muted">searching…</p>`;
    if (message) return `<p class="error" role="alert">${escapeHtml(message)}</p>`;
    if (items.length === 0) return `<p class="muted">no results yet</p>`;
    const rows = items
      .map(
        (entry, rank) =>
          `<li><button class="neighbor" data-term="${escapeHtml(entry.term)}">` +
          `<span class="rank">${rank + 1}.</span> ${escapeHtml(entry.term)}` +
          `</button><span class="score">${entry.relevance.toFixed(3)}</span></li>`,
      )
      .join("");
    const crumbs = history.map(escapeHtml).join(" → ");
    return `<ol class="neighbor-list">${rows}</ol>` +
      `<p class="history">${crumbs}</p>`;
  }
}
