/**
 * Typed client for the diagram service. Every number the explorer shows
 * originates from these responses; the client performs no geometry.
 */

export interface CornerTypePayload {
  d?: number;
  p?: number;
  q_class?: number;
  error?: string;
  detail?: string;
}

export interface VertexKindPayload {
  kind: "delzant" | "hosts_corners" | "non_delzant_bare";
  corners: number[];
}

export interface DiagramPayload {
  kind: "compact" | "bdpq";
  vertices?: [string, string][];
  corners?: { anchor: [string, string]; v: [number, number]; nodes: string[] }[];
  clip_edges?: number[];
  bdpq?: { d: number; p: number; q: number; cut_side: string; nodes: string[] };
}

export interface NodePayload {
  diagram: DiagramPayload;
  corner_types: CornerTypePayload[];
  vertex_kinds: VertexKindPayload[];
  validation: { kind: string; detail: string }[];
  digest: string;
}

export interface TreeNodePayload {
  id: number;
  parent: number | null;
  move: Record<string, unknown> | null;
  children: number[];
}

export interface TreePayload {
  session_id: string;
  current: number;
  revision: number;
  nodes: TreeNodePayload[];
}

export interface MoveResult {
  node: number;
  record: Record<string, unknown> | null;
}

export interface EnergyPayload {
  status: "exact" | "upper_bound" | "unknown";
  value?: string;
}

export interface GermPayload {
  germ: { a: string; gradients: [string, string][] };
  class: { a: string; k: number; p?: number; q_class?: number };
  on_ray: boolean;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public payload: { error?: string; detail?: string },
  ) {
    super(`${status}: ${payload.error ?? "request failed"}`);
  }
}

export class ApiClient {
  constructor(private base: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await fetch(this.base + path, init);
    const text = await resp.text();
    if (!resp.ok) {
      let payload: { error?: string; detail?: string } = {};
      try {
        payload = JSON.parse(text);
      } catch {
        payload = { error: text };
      }
      throw new ApiError(resp.status, payload);
    }
    return JSON.parse(text) as T;
  }

  createSession(body: {
    preset?: string;
    params?: Record<string, unknown>;
    diagram?: DiagramPayload;
  }): Promise<{ session_id: string; root: number }> {
    return this.request("/session", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  tree(sessionId: string): Promise<TreePayload> {
    return this.request(`/session/${sessionId}/tree`);
  }

  node(sessionId: string, nodeId: number): Promise<NodePayload> {
    return this.request(`/session/${sessionId}/node/${nodeId}`);
  }

  move(
    sessionId: string,
    nodeId: number,
    move: Record<string, unknown>,
  ): Promise<MoveResult> {
    return this.request(`/session/${sessionId}/node/${nodeId}/move`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(move),
    });
  }

  energy(sessionId: string, nodeId: number, x: string, y: string): Promise<EnergyPayload> {
    const q = new URLSearchParams({ x, y });
    return this.request(`/session/${sessionId}/node/${nodeId}/energy?${q}`);
  }

  germ(
    sessionId: string,
    nodeId: number,
    x: string,
    y: string,
    k?: number,
  ): Promise<GermPayload> {
    const q = new URLSearchParams({ x, y });
    if (k !== undefined) q.set("k", String(k));
    return this.request(`/session/${sessionId}/node/${nodeId}/germ?${q}`);
  }

  async renderSvg(sessionId: string, nodeId: number, query = ""): Promise<string> {
    const resp = await fetch(
      `${this.base}/session/${sessionId}/node/${nodeId}/render.svg${query}`,
    );
    if (!resp.ok) throw new ApiError(resp.status, { error: "render failed" });
    return resp.text();
  }
}
