/**
 * Thin browser glue: server-rendered SVG with a client-side overlay for
 * hover/selection, a tree panel, and the inspector. All mathematics stays
 * on the server; this file only positions overlays from the diagram JSON
 * the server already returned.
 */

import { ApiClient, NodePayload } from "./api.js";
import { cornerTypeText, markovLabel, validationText } from "./inspector.js";
import { parseFrac } from "./fraction.js";
import { ExplorerStore } from "./state.js";

function toNumber(text: string): number {
  const f = parseFrac(text);
  return Number(f.num) / Number(f.den);
}

export class ExplorerView {
  constructor(
    private store: ExplorerStore,
    private api: ApiClient,
    private root: HTMLElement,
  ) {}

  async refresh(): Promise<void> {
    const sid = this.store.view.sessionId;
    if (!sid) return;
    const nodeId = this.store.view.currentNode;
    const payload =
      this.store.nodePayload(nodeId) ?? (await this.store.refreshNode(nodeId));
    const svg = await this.api.renderSvg(sid, nodeId, this.queryString());
    this.renderCanvas(svg, payload);
    this.renderTree();
    this.renderInspector(payload);
  }

  private queryString(): string {
    const overlays = this.store.view.overlays;
    const params = new URLSearchParams();
    if (overlays.levels.length) params.set("levels", overlays.levels.join(","));
    if (overlays.crease) params.set("crease", "1");
    const text = params.toString();
    return text ? `?${text}` : "";
  }

  private renderCanvas(svg: string, payload: NodePayload): void {
    const canvas = this.section("canvas");
    canvas.innerHTML = svg;
    const svgEl = canvas.querySelector("svg");
    if (!svgEl || payload.diagram.kind !== "compact") return;
    const overlay = document.createElementNS("http://www.w3.org/2000/svg", "g");
    svgEl.appendChild(overlay);
    (payload.diagram.corners ?? []).forEach((corner, idx) => {
      const marker = document.createElementNS("http://www.w3.org/2000/svg", "circle");
      marker.setAttribute("r", "10");
      marker.setAttribute("fill", "rgba(176,48,48,0.25)");
      marker.setAttribute("data-corner", String(idx));
      marker.style.cursor = "pointer";
      marker.addEventListener("click", () => {
        void this.store.clickCorner(idx).then(() => this.refresh());
      });
      overlay.appendChild(marker);
      this.position(marker, corner.anchor);
    });
    payload.vertex_kinds.forEach((vk, idx) => {
      if (vk.kind !== "delzant") return;
      const vert = payload.diagram.vertices?.[idx];
      if (!vert) return;
      const marker = document.createElementNS("http://www.w3.org/2000/svg", "circle");
      marker.setAttribute("r", "8");
      marker.setAttribute("fill", "rgba(40,90,160,0.25)");
      marker.setAttribute("data-vertex", String(idx));
      marker.style.cursor = "pointer";
      marker.setAttribute("data-kind", "trade");
      marker.addEventListener("click", () => {
        void this.store.clickVertex(idx).then(() => this.refresh());
      });
      overlay.appendChild(marker);
      this.position(marker, vert);
    });
    svgEl.addEventListener("click", (event) => {
      if ((event.target as Element).hasAttribute("data-corner")) return;
      const rect = svgEl.getBoundingClientRect();
      const x = (event.clientX - rect.left) / 100;
      const y = (rect.bottom - event.clientY) / 100;
      void this.store.inspectPoint(x, y).then(() => this.renderTranscript());
    });
  }

  private position(el: SVGElement, point: [string, string]): void {
    // the server's SVG uses a fixed 100x scale with the viewport origin at
    // the top-left; overlays reuse the same convention via the viewBox
    el.setAttribute("cx", String(toNumber(point[0]) * 100));
    el.setAttribute("cy", String(toNumber(point[1]) * -100));
  }

  private renderTree(): void {
    const panel = this.section("tree");
    panel.innerHTML = "";
    for (const [id, parent] of this.store
      .structure()
      .map(([i, p]) => [i, p] as const)) {
      const row = document.createElement("div");
      const payload = this.store.nodePayload(id);
      const label = payload ? markovLabel(payload) : null;
      row.textContent = `${"".padStart(parent === null ? 0 : 2)}#${id}${label ? " " + label : ""}`;
      row.style.cursor = "pointer";
      if (id === this.store.view.currentNode) row.style.fontWeight = "bold";
      row.addEventListener("click", () => {
        void this.store.treeNavigate(id).then(() => this.refresh());
      });
      panel.appendChild(row);
    }
  }

  private renderInspector(payload: NodePayload): void {
    const panel = this.section("inspector");
    panel.innerHTML = "";
    const status = document.createElement("div");
    status.textContent = validationText(payload);
    panel.appendChild(status);
    payload.corner_types.forEach((ct, idx) => {
      const row = document.createElement("div");
      row.textContent = `corner ${idx}: ${cornerTypeText(ct)}`;
      panel.appendChild(row);
    });
    if (this.store.lastError) {
      const err = document.createElement("div");
      err.textContent = this.store.lastError;
      err.style.color = "#b03030";
      panel.appendChild(err);
    }
    this.renderTranscript();
  }

  private renderTranscript(): void {
    const panel = this.section("transcript");
    panel.textContent = this.store.transcript.join("\n");
  }

  private section(name: string): HTMLElement {
    let el = this.root.querySelector<HTMLElement>(`[data-panel="${name}"]`);
    if (!el) {
      el = document.createElement("div");
      el.setAttribute("data-panel", name);
      this.root.appendChild(el);
    }
    return el;
  }
}
