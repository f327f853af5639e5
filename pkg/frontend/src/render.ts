/**
 * Optional client-side re-rendering of a diagram payload, for offline
 * inspection when the server's SVG is unavailable. Pure coordinate
 * conversion of the values the server already supplied; no geometry is
 * computed here (the model kinds fall back to the node ray only).
 */

import type { DiagramPayload } from "./api.js";
import { parseFrac } from "./fraction.js";

const SCALE = 100;

interface Box {
  xmin: number;
  ymin: number;
  xmax: number;
  ymax: number;
}

function toNumber(text: string): number {
  const f = parseFrac(text);
  return Number(f.num) / Number(f.den);
}

function pointOf(pair: [string, string]): { x: number; y: number } {
  return { x: toNumber(pair[0]), y: toNumber(pair[1]) };
}

function viewBoxFor(diagram: DiagramPayload): Box {
  const pts: { x: number; y: number }[] = [];
  for (const v of diagram.vertices ?? []) pts.push(pointOf(v));
  for (const c of diagram.corners ?? []) pts.push(pointOf(c.anchor));
  if (diagram.bdpq) {
    const { p, q, nodes } = diagram.bdpq;
    for (const t of nodes) {
      const tt = toNumber(t);
      pts.push({ x: tt * p, y: tt * q });
    }
    pts.push({ x: 0, y: 0 });
  }
  if (pts.length === 0) pts.push({ x: 0, y: 0 }, { x: 1, y: 1 });
  const xs = pts.map((p) => p.x);
  const ys = pts.map((p) => p.y);
  const pad = Math.max(Math.max(...xs) - Math.min(...xs), Math.max(...ys) - Math.min(...ys), 1) / 8;
  return {
    xmin: Math.min(...xs) - pad,
    ymin: Math.min(...ys) - pad,
    xmax: Math.max(...xs) + pad,
    ymax: Math.max(...ys) + pad,
  };
}

function sx(box: Box, x: number): string {
  return ((x - box.xmin) * SCALE).toFixed(3);
}

function sy(box: Box, y: number): string {
  return ((box.ymax - y) * SCALE).toFixed(3);
}

/** Render the diagram JSON into a standalone SVG string. */
export function clientRender(diagram: DiagramPayload): string {
  const box = viewBoxFor(diagram);
  const width = ((box.xmax - box.xmin) * SCALE).toFixed(3);
  const height = ((box.ymax - box.ymin) * SCALE).toFixed(3);
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
  ];

  if (diagram.kind === "compact" && diagram.vertices?.length) {
    const clip = new Set(diagram.clip_edges ?? []);
    const coords = diagram.vertices
      .map((v) => {
        const p = pointOf(v);
        return `${sx(box, p.x)},${sy(box, p.y)}`;
      })
      .join(" ");
    parts.push(`<polygon points="${coords}" fill="#f5f1e8" stroke="none"/>`);
    const n = diagram.vertices.length;
    for (let i = 0; i < n; i++) {
      const a = pointOf(diagram.vertices[i]!);
      const b = pointOf(diagram.vertices[(i + 1) % n]!);
      const dash = clip.has(i) ? ' stroke-dasharray="2,6"' : "";
      const color = clip.has(i) ? "#bbbbbb" : "#222222";
      parts.push(
        `<line x1="${sx(box, a.x)}" y1="${sy(box, a.y)}" x2="${sx(box, b.x)}" y2="${sy(box, b.y)}" stroke="${color}" stroke-width="2"${dash}/>`,
      );
    }
  }

  const crosses: { x: number; y: number }[] = [];
  const cuts: { ax: number; ay: number; bx: number; by: number }[] = [];
  for (const corner of diagram.corners ?? []) {
    const anchor = pointOf(corner.anchor);
    const [vx, vy] = corner.v;
    for (const t of corner.nodes) {
      const tt = toNumber(t);
      crosses.push({ x: anchor.x + tt * vx, y: anchor.y + tt * vy });
    }
    const top = toNumber(corner.nodes[corner.nodes.length - 1]!);
    cuts.push({ ax: anchor.x, ay: anchor.y, bx: anchor.x + top * vx, by: anchor.y + top * vy });
  }
  if (diagram.bdpq && !(diagram.corners ?? []).length) {
    const { p, q, nodes, cut_side } = diagram.bdpq;
    for (const t of nodes) {
      const tt = toNumber(t);
      crosses.push({ x: tt * p, y: tt * q });
    }
    if (cut_side === "outward" && nodes.length) {
      const t0 = toNumber(nodes[0]!);
      cuts.push({ ax: t0 * p, ay: t0 * q, bx: box.xmax, by: (box.xmax / p) * q });
    }
  }

  for (const cut of cuts) {
    parts.push(
      `<line x1="${sx(box, cut.ax)}" y1="${sy(box, cut.ay)}" x2="${sx(box, cut.bx)}" y2="${sy(box, cut.by)}" stroke="#b03030" stroke-width="2" stroke-dasharray="6,4"/>`,
    );
  }
  const r = (Math.min(box.xmax - box.xmin, box.ymax - box.ymin) * SCALE) / 70;
  for (const node of crosses) {
    const cx = Number(sx(box, node.x));
    const cy = Number(sy(box, node.y));
    for (const [dx, dy] of [
      [1, 1],
      [1, -1],
    ] as const) {
      parts.push(
        `<line x1="${(cx - r * dx).toFixed(3)}" y1="${(cy - r * dy).toFixed(3)}" x2="${(cx + r * dx).toFixed(3)}" y2="${(cy + r * dy).toFixed(3)}" stroke="#b03030" stroke-width="2"/>`,
      );
    }
  }
  parts.push("</svg>");
  return parts.join("\n");
}
