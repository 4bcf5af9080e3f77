/** Per-panel request sequencing: each panel keeps one of these and drops
 * any response that is not the latest issued request. */

export class RequestGate {
  private counter = 0;

  next(): number {
    this.counter += 1;
    return this.counter;
  }

  isCurrent(token: number): boolean {
    return token === this.counter;
  }
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
