/** Interactive concept tree: the user decides which leaf to expand next.
 *
 * The first layer comes from /v1/tree with depth 1; every later expansion
 * asks /v1/neighbors for the chosen node, excluding every term already on
 * screen, so no term ever appears twice in the visible tree.
 */

import { ApiError, TermnetClient } from "./api.js";
import { escapeHtml } from "./sequence.js";
import type { TreeResponse } from "./types.js";

export interface TreeNodeState {
  term: string;
  relevance: number | null;
  children: TreeNodeState[];
  /** false hides children without discarding fetched data */
  expanded: boolean;
  loaded: boolean;
}

export class TreeExplorer {
  private readonly client: TermnetClient;
  readonly breadth: number;
  root: TreeNodeState | null = null;
  message = "";
  private busy = false;

  constructor(client: TermnetClient, breadth = 3) {
    this.client = client;
    this.breadth = breadth;
  }

  async start(rootTerm: string): Promise<void> {
    if (this.busy) return;
    this.busy = true;
    try {
      const body = await this.client.tree(rootTerm, this.breadth, 1);
      this.root = fromResponse(body);
      this.root.loaded = true;
      this.message = "";
    } catch (err) {
      this.root = null;
      this.message =
        err instanceof ApiError ? err.message : "service unreachable";
    } finally {
      this.busy = false;
    }
  }

  /** Every term currently part of the tree, fetched or visible. */
  shownTerms(): string[] {
    const terms: string[] = [];
    const walk = (node: TreeNodeState | null): void => {
      if (!node) return;
      terms.push(node.term);
      node.children.forEach(walk);
    };
    walk(this.root);
    return terms;
  }

  find(term: string): TreeNodeState | null {
    const walk = (node: TreeNodeState | null): TreeNodeState | null => {
      if (!node) return null;
      if (node.term === term) return node;
      for (const child of node.children) {
        const hit = walk(child);
        if (hit) return hit;
      }
      return null;
    };
    return walk(this.root);
  }

  /** Expand one node by at most `breadth` unseen children. A failed call
   * leaves the tree exactly as it was. */
  async expand(term: string): Promise<void> {
    const node = this.find(term);
    if (!node || this.busy) return;
    if (node.loaded) {
      node.expanded = true;
      return;
    }
    this.busy = true;
    const shown = this.shownTerms();
    try {
      const body = await this.client.neighbors(term, this.breadth, shown);
      const seen = new Set(shown);
      const children: TreeNodeState[] = [];
      for (const entry of body.neighbors) {
        if (seen.has(entry.term)) continue; // duplicate suppression
        seen.add(entry.term);
        children.push({
          term: entry.term,
          relevance: entry.relevance,
          children: [],
          expanded: false,
          loaded: false,
        });
        if (children.length === this.breadth) break;
      }
      node.children = children;
      node.loaded = true;
      node.expanded = true;
      this.message = "";
    } catch (err) {
      this.message =
        err instanceof ApiError ? err.message : "service unreachable";
    } finally {
      this.busy = false;
    }
  }

  collapse(term: string): void {
    const node = this.find(term);
    if (node) node.expanded = false;
  }

  /** Terms the user can currently see (collapsed subtrees excluded). */
  visibleTerms(): string[] {
    const seen: string[] = [];
    const walk = (node: TreeNodeState | null): void => {
      if (!node) return;
      seen.push(node.term);
      if (node.expanded) node.children.forEach(walk);
    };
    walk(this.root);
    return seen;
  }

  render(): string {
    if (this.message && !this.root) {
      return `<p class="error" role="alert">${escapeHtml(this.message)}</p>`;
    }
    if (!this.root) return `<p class="muted">pick a root term</p>`;
    const banner = this.message
      ? `<p class="error" role="alert">${escapeHtml(this.message)}</p>`
      : "";
    return banner + `<ul class="tree">${renderNode(this.root)}</ul>`;
  }
}

function fromResponse(body: TreeResponse): TreeNodeState {
  return {
    term: body.term,
    relevance: body.relevance ?? null,
    children: body.children.map(fromResponse),
    expanded: true,
    loaded: body.children.length > 0,
  };
}

function renderNode(node: TreeNodeState): string {
  const score =
    node.relevance === null
      ? ""
      : `<span class="score">${node.relevance.toFixed(3)}</span>`;
  const action = node.expanded && node.children.length
    ? `data-action="collapse"`
    : `data-action="expand"`;
  const children =
    node.expanded && node.children.length
      ? `<ul>${node.children.map(renderNode).join("")}</ul>`
      : "";
  return (
    `<li><button class="node" ${action} data-term="${escapeHtml(node.term)}">` +
    `${escapeHtml(node.term)}</button>${score}${children}</li>`
  );
}
