/** DOM wiring for the four panels. Pure logic lives in the panel modules;
 * this file only moves values between inputs and renderers. */

import { TermnetClient } from "./api.js";
import { HeatmapPanel } from "./heatmap.js";
import { NeighborPanel } from "./neighbors.js";
import { PairPanel } from "./pair.js";
import { TreeExplorer } from "./tree.js";

declare global {
  interface Window {
    TERMNET_BASE_URL?: string;
  }
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function main(): void {
  const client = new TermnetClient({
    baseUrl: window.TERMNET_BASE_URL ?? "",
  });
  const pair = new PairPanel(client);
  const neighbors = new NeighborPanel(client);
  const heatmap = new HeatmapPanel(client);
  const tree = new TreeExplorer(client);

  const pairOut = el<HTMLDivElement>("pair-result");
  const neighborOut = el<HTMLDivElement>("neighbor-result");
  const heatmapOut = el<HTMLDivElement>("heatmap-result");
  const treeOut = el<HTMLDivElement>("tree-result");

  const drawPair = () => (pairOut.innerHTML = pair.render());
  const drawNeighbors = () => (neighborOut.innerHTML = neighbors.render());
  const drawHeatmap = () => (heatmapOut.innerHTML = heatmap.render());
  const drawTree = () => (treeOut.innerHTML = tree.render());

  client
    .health()
    .then((h) => {
      el<HTMLSpanElement>("health").textContent =
        `${h.term_count.toLocaleString()} terms, dim ${h.dim}`;
    })
    .catch(() => {
      el<HTMLSpanElement>("health").textContent = "service unreachable";
    });

  el<HTMLFormElement>("pair-form").addEventListener("submit", async (ev) => {
    ev.preventDefault();
    await pair.lookup(
      el<HTMLInputElement>("pair-t1").value,
      el<HTMLInputElement>("pair-t2").value,
    );
    drawPair();
  });
  pairOut.addEventListener("click", async (ev) => {
    const target = ev.target as HTMLElement;
    if (target.dataset.action === "pair-retry") {
      await pair.retry();
      drawPair();
    }
  });

  const kInput = el<HTMLInputElement>("neighbor-k");
  kInput.max = String(client.maxK);
  el<HTMLFormElement>("neighbor-form").addEventListener(
    "submit",
    async (ev) => {
      ev.preventDefault();
      neighbors.setK(Number(kInput.value));
      await neighbors.query(el<HTMLInputElement>("neighbor-term").value);
      drawNeighbors();
    },
  );
  neighborOut.addEventListener("click", async (ev) => {
    const button = (ev.target as HTMLElement).closest<HTMLElement>(".neighbor");
    const term = button?.dataset.term;
    if (term) {
      el<HTMLInputElement>("neighbor-term").value = term;
      await neighbors.follow(term);
      drawNeighbors();
    }
  });

  el<HTMLFormElement>("heatmap-form").addEventListener(
    "submit",
    async (ev) => {
      ev.preventDefault();
      await heatmap.submit(el<HTMLTextAreaElement>("heatmap-text").value);
      drawHeatmap();
    },
  );
  heatmapOut.addEventListener("click", async (ev) => {
    const target = ev.target as HTMLElement;
    if (target.dataset.action === "download-csv") {
      const csv = await heatmap.downloadCsv();
      const blob = new Blob([csv], { type: "text/csv" });
      const link = document.createElement("a");
      link.href = URL.createObjectURL(blob);
      link.download = "adjacency.csv";
      link.click();
      URL.revokeObjectURL(link.href);
    }
  });

  el<HTMLFormElement>("tree-form").addEventListener("submit", async (ev) => {
    ev.preventDefault();
    await tree.start(el<HTMLInputElement>("tree-root").value);
    drawTree();
  });
  treeOut.addEventListener("click", async (ev) => {
    const button = (ev.target as HTMLElement).closest<HTMLElement>(".node");
    const term = button?.dataset.term;
    if (!term) return;
    if (button?.dataset.action === "collapse") {
      tree.collapse(term);
    } else {
      await tree.expand(term);
    }
    drawTree();
  });
}

document.addEventListener("DOMContentLoaded", main);
