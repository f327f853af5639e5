"""Append-only exploration trees of diagrams.

A session is a tree whose nodes are diagram states and whose edges are move
records; mutation choices branch, so navigating the tree of a prepared
triangle session walks the mutation tree.  Nodes are immutable once
created; each session serializes its writes behind one lock.  Sessions can
be persisted to (and replayed from) plain JSON files.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from dataclasses import dataclass, field

from .diagram import Diagram, diagram_from_dict, diagram_to_dict, preset, validate
from .errors import AtfError, BadParams, IndexOutOfRange
from .moves import (
    MoveRecord,
    change_branch_cut,
    mutate,
    mutate_with_clearing,
    nodal_slide,
    nodal_trade,
)
from .rat import rat
from .walker import prepare


@dataclass(frozen=True)
class SessionNode:
    node_id: int
    parent: int | None
    move: dict | None
    diagram: Diagram

    def to_dict(self):
        return {
            "id": self.node_id,
            "parent": self.parent,
            "move": self.move,
            "diagram": diagram_to_dict(self.diagram),
        }


class Session:
    def __init__(self, session_id: str, root: Diagram):
        self.session_id = session_id
        self.nodes: list[SessionNode] = [SessionNode(0, None, None, root)]
        self.current = 0
        self.revision = 0
        self.lock = threading.Lock()

    def node(self, node_id: int) -> SessionNode:
        if not (0 <= node_id < len(self.nodes)):
            raise IndexOutOfRange(f"node {node_id} of {len(self.nodes)}")
        return self.nodes[node_id]

    def tree_dict(self) -> dict:
        children: dict[int, list[int]] = {}
        for n in self.nodes:
            if n.parent is not None:
                children.setdefault(n.parent, []).append(n.node_id)
        return {
            "session_id": self.session_id,
            "current": self.current,
            "revision": self.revision,
            "nodes": [
                {
                    "id": n.node_id,
                    "parent": n.parent,
                    "move": n.move,
                    "children": children.get(n.node_id, []),
                }
                for n in self.nodes
            ],
        }

    def apply_move(self, node_id: int, move: dict) -> tuple[SessionNode, MoveRecord | None]:
        """Append the move's result as a child of node_id."""
        with self.lock:
            base = self.node(node_id).diagram
            new_dg, record = _dispatch_move(base, move)
            node = SessionNode(len(self.nodes), node_id, dict(move), new_dg)
            self.nodes.append(node)
            self.current = node.node_id
            self.revision += 1
            return node, record

    def to_dict(self):
        return {
            "session_id": self.session_id,
            "current": self.current,
            "revision": self.revision,
            "nodes": [n.to_dict() for n in self.nodes],
        }

    @staticmethod
    def from_dict(d: dict) -> "Session":
        sess = Session(d["session_id"], diagram_from_dict(d["nodes"][0]["diagram"]))
        for nd in d["nodes"][1:]:
            sess.nodes.append(
                SessionNode(nd["id"], nd["parent"], nd.get("move"), diagram_from_dict(nd["diagram"]))
            )
        sess.current = d.get("current", 0)
        sess.revision = d.get("revision", len(sess.nodes) - 1)
        return sess


def _dispatch_move(dg: Diagram, move: dict):
    kind = move.get("kind")
    if kind == "trade":
        out = nodal_trade(
            dg,
            int(move["vertex"]),
            rat(move["epsilon"]) if move.get("epsilon") is not None else None,
        )
        return out, MoveRecord(kind="trade", target=int(move["vertex"]), params={})
    if kind == "slide":
        return nodal_slide(dg, int(move["corner"]), int(move["node"]), rat(move["to"]))
    if kind == "cut-change":
        out = change_branch_cut(dg, int(move["corner"]))
        return out, MoveRecord(kind="cut-change", target=int(move["corner"]), params={})
    if kind == "mutate":
        eps = rat(move["epsilon"]) if move.get("epsilon") is not None else None
        if move.get("clear", True):
            return mutate_with_clearing(dg, int(move["corner"]), eps)
        return mutate(dg, int(move["corner"]), eps)
    if kind == "prepare":
        out = prepare(dg)
        return out, MoveRecord(kind="prepare", target=-1, params={})
    raise BadParams(f"unknown move kind {kind!r}")


class SessionStore:
    """In-memory sessions with optional JSON persistence under a state dir."""

    def __init__(self, state_dir: str | None = None):
        self.state_dir = state_dir
        self.sessions: dict[str, Session] = {}
        self.lock = threading.Lock()
        if state_dir:
            os.makedirs(state_dir, exist_ok=True)
            for name in sorted(os.listdir(state_dir)):
                if name.endswith(".json"):
                    with open(os.path.join(state_dir, name)) as fh:
                        sess = Session.from_dict(json.load(fh))
                    self.sessions[sess.session_id] = sess

    def create(self, diagram: Diagram) -> Session:
        problems = validate(diagram)
        if problems:
            raise BadParams(
                "diagram is invalid: " + "; ".join(v.kind for v in problems)
            )
        sid = uuid.uuid4().hex[:12]
        sess = Session(sid, diagram)
        with self.lock:
            self.sessions[sid] = sess
        self.persist(sess)
        return sess

    def get(self, session_id: str) -> Session:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise IndexOutOfRange(f"unknown session {session_id}") from None

    def apply_move(self, session_id: str, node_id: int, move: dict):
        sess = self.get(session_id)
        result = sess.apply_move(node_id, move)
        self.persist(sess)
        return result

    def persist(self, sess: Session):
        if not self.state_dir:
            return
        path = os.path.join(self.state_dir, f"{sess.session_id}.json")
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(sess.to_dict(), fh, indent=1, sort_keys=True)
        os.replace(tmp, path)
