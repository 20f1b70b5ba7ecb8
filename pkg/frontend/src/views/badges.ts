// Small shared DOM helpers: status badges, flag icon, element builder.

import type { TermStatus } from "../types.js";

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className = "",
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

// vernacular grey, canonical green, deprecated red
export function statusBadge(status: TermStatus): HTMLElement {
  const badge = el("span", `badge badge-${status}`, status);
  badge.setAttribute("data-status", status);
  return badge;
}

export function flaggedIcon(): HTMLElement {
  const icon = el("span", "flag-icon", "⚠");
  icon.title = "source audit mismatch: the source document changed";
  icon.setAttribute("data-flagged", "true");
  return icon;
}

export function scoreline(consensus: number, stability: number, applicability: number): HTMLElement {
  return el(
    "span",
    "scores",
    `consensus ${consensus.toFixed(2)} · stability ${stability.toFixed(2)} · ` +
      `applicability ${applicability.toFixed(2)}`,
  );
}
