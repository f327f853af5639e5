/**
 * Inspector panel formatting: the exact strings the UI displays.
 *
 * Rationals are rendered exactly (as fractions), with any decimal
 * approximation explicitly marked; all values come straight from server
 * payloads.
 */

import type { CornerTypePayload, EnergyPayload, GermPayload, NodePayload } from "./api.js";
import { displayExact } from "./fraction.js";

export function cornerTypeText(ct: CornerTypePayload): string {
  if (ct.error) return `type unavailable: ${ct.error}`;
  return `(${ct.d},${ct.p},${ct.q_class})`;
}

export function energyText(e: EnergyPayload): string {
  if (e.status === "exact") return `e = ${displayExact(e.value!)}`;
  if (e.status === "upper_bound") return `e ≤ ${displayExact(e.value!)}`;
  return "unknown (left open on the node ray)";
}

export function germText(g: GermPayload): string {
  const terms = g.germ.gradients
    .slice()
    .sort((a, b) => {
      const ax = Number(a[0]), bx = Number(b[0]);
      if (ax !== bx) return bx - ax;
      return Number(a[1]) - Number(b[1]);
    })
    .map(([gx, gy]) => {
      const parts: string[] = [];
      if (gx !== "0") parts.push(gx === "1" ? "b1" : gx === "-1" ? "-b1" : `${gx}*b1`);
      if (gy !== "0") {
        const term = gy === "1" ? "b2" : gy === "-1" ? "-b2" : `${gy}*b2`;
        parts.push(parts.length && !term.startsWith("-") ? `+ ${term}` : term);
      }
      return parts.length ? parts.join(" ") : "0";
    });
  const body = terms.length === 1 ? terms[0] : `min{${terms.join(", ")}}`;
  const klass =
    g.class.k >= 1
      ? `k=${g.class.k}, p=${g.class.p}, q=${g.class.q_class}`
      : "k=0";
  return `${g.germ.a} + ${body}   [${klass}]`;
}

/** Tree-panel label: the sorted triple of corner p-values, when defined. */
export function markovLabel(node: NodePayload): string | null {
  const ps: number[] = [];
  for (const ct of node.corner_types) {
    if (ct.error || ct.p === undefined) return null;
    ps.push(ct.p);
  }
  if (ps.length === 0) return null;
  ps.sort((a, b) => a - b);
  return `(${ps.join(",")})`;
}

export function validationText(node: NodePayload): string {
  if (node.validation.length === 0) return "valid";
  return node.validation.map((v) => `${v.kind}: ${v.detail}`).join("; ");
}
