/**
 * Explorer state machine: a client-side mirror of the server session tree
 * plus the view state, with one in-flight mutation at a time.
 *
 * The store is deliberately mathematics-free: every displayed value is a
 * string taken from a server response, collected in `transcript` in
 * display order (the golden-transcript test diffs this against CLI
 * output for the same move sequence).
 */

import { ApiClient, ApiError, NodePayload, TreePayload } from "./api.js";
import { cornerTypeText, energyText, germText, markovLabel } from "./inspector.js";
import { snapToGrid } from "./fraction.js";

export interface ViewState {
  sessionId: string | null;
  currentNode: number;
  selection: { kind: "corner"; id: number } | { kind: "point"; x: string; y: string } | null;
  overlays: { levels: string[]; crease: boolean; labels: boolean };
  expanded: Set<number>;
}

export interface MirrorNode {
  id: number;
  parent: number | null;
  children: number[];
  move: Record<string, unknown> | null;
}

export class ExplorerStore {
  view: ViewState = {
    sessionId: null,
    currentNode: 0,
    selection: null,
    overlays: { levels: [], crease: false, labels: true },
    expanded: new Set([0]),
  };
  tree = new Map<number, MirrorNode>();
  payloads = new Map<number, NodePayload>();
  transcript: string[] = [];
  lastError: string | null = null;
  private inflight: Promise<unknown> = Promise.resolve();

  constructor(private api: ApiClient) {}

  /** Serialize mutations: at most one in-flight request per session. */
  private enqueue<T>(task: () => Promise<T>): Promise<T> {
    const next = this.inflight.then(task, task);
    this.inflight = next.then(
      () => undefined,
      () => undefined,
    );
    return next;
  }

  private show(line: string) {
    this.transcript.push(line);
  }

  async createSession(preset: string, params: Record<string, unknown>): Promise<void> {
    const created = await this.api.createSession({ preset, params });
    this.view.sessionId = created.session_id;
    this.view.currentNode = created.root;
    this.tree.clear();
    this.tree.set(0, { id: 0, parent: null, children: [], move: null });
    await this.refreshNode(0);
  }

  async refreshNode(nodeId: number): Promise<NodePayload> {
    const payload = await this.api.node(this.view.sessionId!, nodeId);
    this.payloads.set(nodeId, payload);
    return payload;
  }

  nodePayload(nodeId: number): NodePayload | undefined {
    return this.payloads.get(nodeId);
  }

  /** Apply a move to the current node; the new child becomes current. */
  applyMove(move: Record<string, unknown>): Promise<number | null> {
    return this.enqueue(async () => {
      const sid = this.view.sessionId!;
      const from = this.view.currentNode;
      try {
        const result = await this.api.move(sid, from, move);
        const parent = this.tree.get(from);
        if (parent && !parent.children.includes(result.node)) {
          parent.children.push(result.node);
        }
        this.tree.set(result.node, {
          id: result.node,
          parent: from,
          children: [],
          move,
        });
        this.view.currentNode = result.node;
        this.view.expanded.add(result.node);
        const payload = await this.refreshNode(result.node);
        this.show(`node ${result.node} digest=${payload.digest}`);
        this.lastError = null;
        return result.node;
      } catch (err) {
        if (err instanceof ApiError && err.status === 409) {
          // non-blocking explanation; the server rejected the move and the
          // state is unchanged (a corner merge offers the restart option)
          this.lastError = `${err.payload.error}: ${err.payload.detail ?? ""}`;
          this.show(`move rejected: ${err.payload.error}`);
          return null;
        }
        throw err;
      }
    });
  }

  /** Click a corner: inspect its type, then mutate at it. */
  async clickCorner(cornerId: number): Promise<number | null> {
    const payload =
      this.nodePayload(this.view.currentNode) ??
      (await this.refreshNode(this.view.currentNode));
    const ct = payload.corner_types[cornerId];
    if (ct) {
      this.view.selection = { kind: "corner", id: cornerId };
      this.show(`corner ${cornerId} type=${cornerTypeText(ct)}`);
    }
    return this.applyMove({ kind: "mutate", corner: cornerId });
  }

  /** Click a bare Delzant vertex: a trade is offered instead of a mutation. */
  async clickVertex(vertexIndex: number): Promise<number | null> {
    const payload =
      this.nodePayload(this.view.currentNode) ??
      (await this.refreshNode(this.view.currentNode));
    const kind = payload.vertex_kinds[vertexIndex];
    if (kind && kind.kind === "delzant") {
      return this.applyMove({ kind: "trade", vertex: vertexIndex });
    }
    if (kind && kind.kind === "hosts_corners" && kind.corners.length > 0) {
      return this.clickCorner(kind.corners[0]!);
    }
    this.show(`vertex ${vertexIndex} is not tradeable`);
    return null;
  }

  prepare(): Promise<number | null> {
    return this.applyMove({ kind: "prepare" });
  }

  /** Read-only switch of the displayed node. */
  async treeNavigate(nodeId: number): Promise<string | null> {
    if (!this.tree.has(nodeId)) {
      const remote = await this.api.tree(this.view.sessionId!);
      this.adoptTree(remote);
      if (!this.tree.has(nodeId)) {
        this.show(`stale node ${nodeId}: refresh`);
        return null;
      }
    }
    this.view.currentNode = nodeId;
    const payload = this.nodePayload(nodeId) ?? (await this.refreshNode(nodeId));
    const label = markovLabel(payload);
    if (label) this.show(`tree node ${nodeId} label=${label}`);
    return label;
  }

  /** Inspect a picked point (snapped to the rational grid). */
  async inspectPoint(px: number, py: number, denominator = 64): Promise<string | null> {
    const x = snapToGrid(px, denominator);
    const y = snapToGrid(py, denominator);
    this.view.selection = { kind: "point", x, y };
    const sid = this.view.sessionId!;
    const node = this.view.currentNode;
    try {
      const energy = await this.api.energy(sid, node, x, y);
      let line = `point (${x}, ${y}) ${energyText(energy)}`;
      try {
        const germ = await this.api.germ(sid, node, x, y);
        line += `  germ: ${germText(germ)}`;
      } catch (err) {
        if (!(err instanceof ApiError)) throw err;
      }
      this.show(line);
      return line;
    } catch (err) {
      if (err instanceof ApiError && (err.status === 409 || err.status === 400)) {
        return null; // outside the region or not a model node: ignore the pick
      }
      throw err;
    }
  }

  adoptTree(remote: TreePayload): void {
    this.tree.clear();
    for (const node of remote.nodes) {
      this.tree.set(node.id, {
        id: node.id,
        parent: node.parent,
        children: [...node.children],
        move: node.move,
      });
    }
  }

  /** Structure as (id, parent, sorted children) triples for comparisons. */
  structure(): [number, number | null, number[]][] {
    return [...this.tree.values()]
      .sort((a, b) => a.id - b.id)
      .map((n) => [n.id, n.parent, [...n.children].sort((a, b) => a - b)]);
  }
}
