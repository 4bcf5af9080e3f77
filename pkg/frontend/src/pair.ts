/** Pairwise relevance card: two term inputs, one number out. */

import { ApiError, TermnetClient } from "./api.js";
import { RequestGate, escapeHtml } from "./sequence.js";

export type PairStatus = "idle" | "loading" | "done" | "error";

export interface PairState {
  status: PairStatus;
  t1: string;
  t2: string;
  relevance: number | null;
  message: string;
  retryable: boolean;
}

export class PairPanel {
  private readonly client: TermnetClient;
  private readonly gate = new RequestGate();
  state: PairState = {
    status: "idle",
    t1: "",
    t2: "",
    relevance: null,
    message: "",
    retryable: false,
  };

  constructor(client: TermnetClient) {
    this.client = client;
  }

  async lookup(t1: string, t2: string): Promise<void> {
    const token = this.gate.next();
    this.state = { ...this.state, status: "loading", t1, t2, message: "" };
    try {
      const body = await this.client.similarity(t1, t2);
      if (!this.gate.isCurrent(token)) return;
      this.state = {
        status: "done",
        t1: body.t1,
        t2: body.t2,
        relevance: body.relevance,
        message: "",
        retryable: false,
      };
    } catch (err) {
      if (!this.gate.isCurrent(token)) return;
      if (err instanceof ApiError) {
        const term = err.body?.detail?.term;
        this.state = {
          ...this.state,
          status: "error",
          relevance: null,
          message: term ? `${err.message}: ${String(term)}` : err.message,
          retryable: false,
        };
      } else {
        this.state = {
          ...this.state,
          status: "error",
          relevance: null,
          message: "service unreachable",
          retryable: true,
        };
      }
    }
  }

  retry(): Promise<void> {
    return this.lookup(this.state.t1, this.state.t2);
  }

  render(): string {
    const { status, relevance, message, retryable } = this.state;
    if (status === "loading") {
      return `<p class="muted">looking up…</p>`;
    }
    if (status === "error") {
      const retry = retryable
        ? `<button class="retry" data-action="pair-retry">retry</button>`
        : "";
      return `<p class="error" role="alert">${escapeHtml(message)}${retry}</p>`;
    }
    if (status === "done" && relevance !== null) {
      return `<p class="relevance-value">${relevance.toFixed(3)}</p>`;
    }
    return `<p class="muted">enter two terms</p>`;
  }
}
