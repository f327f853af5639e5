"""Edge-stretching mutation walks and the CP^2 mutation tree.

A walk fixes a boundary edge and repeatedly mutates the corner at its
clockwise end (with the interior on the left of counterclockwise edges,
that is the edge's start vertex; ties between co-anchored corners are
broken by the smallest exact angle with the edge).  The tracked edge only
ever extends at that end, so it is followed across steps by its fixed
counterclockwise endpoint.

Per step the trace records the mutated label, its corner type before the
mutation, the tracked edge's affine length, clockwise boundary distances
from the first mutation anchor to every corner, and their maximum.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction

from .affine import IVec2, QVec2, affine_length, det, primitive_decompose
from .diagram import (
    DELZANT,
    HOSTS_CORNERS,
    NON_DELZANT_BARE,
    Corner,
    CornerType,
    Diagram,
    corner_type,
    isolate,
    ray_exit,
    validate,
    vertex_kind,
)
from .errors import (
    BadEdge,
    BadParams,
    CornerMerge,
    InsufficientData,
    NonDelzantBareVertex,
    NotACorner,
)
from .moves import MoveRecord, _cut_obstruction, mutate_with_clearing, nodal_trade
from .rat import Rat, rat_str


@dataclass(frozen=True)
class StepRecord:
    n: int
    label: int
    mutated_type: CornerType
    ell: Rat
    g_values: dict[int, Rat]
    a_n: Rat
    digest: str

    def to_dict(self):
        return {
            "n": self.n,
            "label": self.label,
            "d": self.mutated_type.d,
            "p": self.mutated_type.p,
            "q": self.mutated_type.q_class,
            "ell": rat_str(self.ell),
            "g": {str(k): rat_str(v) for k, v in sorted(self.g_values.items())},
            "a_n": rat_str(self.a_n),
            "digest": self.digest,
        }


@dataclass
class WalkTrace:
    initial: Diagram
    steps: list[StepRecord] = field(default_factory=list)
    restart_offsets: list[int] = field(default_factory=list)
    aborted: bool = False
    abort_reason: str = ""
    final: Diagram | None = None

    def labels(self) -> list[int]:
        return [s.label for s in self.steps]

    def to_dict(self):
        return {
            "initial": self.initial.canonical_dict(),
            "steps": [s.to_dict() for s in self.steps],
            "restart_offsets": self.restart_offsets,
            "aborted": self.aborted,
            "abort_reason": self.abort_reason,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "label", "d", "p", "q", "ell", "a_n", "digest"])
        for s in self.steps:
            writer.writerow(
                [
                    s.n,
                    s.label,
                    s.mutated_type.d,
                    s.mutated_type.p,
                    s.mutated_type.q_class,
                    rat_str(s.ell),
                    rat_str(s.a_n),
                    s.digest,
                ]
            )
        return buf.getvalue()


# -- preparation ----------------------------------------------------------------


def prepare(dg: Diagram) -> Diagram:
    """Trade every bare Delzant vertex and shrink every node ladder."""
    if not dg.is_truly_compact():
        raise BadParams("walks need a truly compact diagram")
    if validate(dg):
        raise BadParams("walks need a valid diagram")
    for i in range(len(dg.vertices)):
        kind, _ = vertex_kind(dg, i)
        if kind == NON_DELZANT_BARE:
            raise NonDelzantBareVertex(f"vertex {i} cannot be traded")
    changed = True
    while changed:
        changed = False
        for i in range(len(dg.vertices)):
            if vertex_kind(dg, i)[0] == DELZANT:
                dg = nodal_trade(dg, i)
                changed = True
                break
    return _shrink_all_ladders(dg)


def _shrink_all_ladders(dg: Diagram) -> Diagram:
    corners = list(dg.corners)
    for ci, c in enumerate(corners):
        ex = ray_exit(dg, c.anchor, c.direction)
        room = ex[0] if ex is not None else None
        obs = _cut_obstruction(dg, c.anchor, c.direction, skip=ci)
        if obs is not None and (room is None or obs < room):
            room = obs
        d = c.multiplicity
        if room is None:
            unit = c.nodes[0] / d
        else:
            unit = min(room / 4, c.nodes[0]) / d
        corners[ci] = Corner(
            anchor=c.anchor,
            direction=c.direction,
            nodes=tuple(unit * (i + 1) for i in range(d)),
        )
        dg = Diagram(
            kind=dg.kind,
            vertices=dg.vertices,
            corners=tuple(corners),
            clip_edges=dg.clip_edges,
        )
    return dg


# -- single step ------------------------------------------------------------------


def _pick_corner(dg: Diagram, edge_index: int) -> int:
    """Corner at the clockwise end of the edge (its ccw start vertex);
    ties broken by smallest exact angle with the edge."""
    n = len(dg.vertices)
    if not (0 <= edge_index < n):
        raise BadEdge(f"edge {edge_index} of {n}")
    start, end = dg.edge(edge_index)
    candidates = dg.corners_at(start)
    if not candidates:
        raise NotACorner(f"no corner at the clockwise end {start} of edge {edge_index}")
    e_dir, _ = primitive_decompose(end - start)

    def smaller_angle(i: int, j: int) -> bool:
        vi, vj = dg.corners[i].direction, dg.corners[j].direction
        return e_dir.dot(vi) * det(e_dir, vj) > e_dir.dot(vj) * det(e_dir, vi)

    best = candidates[0]
    for c in candidates[1:]:
        if smaller_angle(c, best):
            best = c
    return best


def _typed(dg: Diagram, corner_id: int) -> CornerType:
    """Type of a corner, isolating a scratch copy first when needed."""
    c = dg.corner(corner_id)
    if len(dg.corners_at(c.anchor)) > 1:
        dg = isolate(dg, corner_id)
    return corner_type(dg, corner_id)


def step(dg: Diagram, edge_index: int):
    """One walk step: (new diagram, mutated corner id, its pre-mutation type,
    the move record).  Raises CornerMerge for the caller's restart policy."""
    corner_id = _pick_corner(dg, edge_index)
    ctype = _typed(dg, corner_id)
    new_dg, record = mutate_with_clearing(dg, corner_id, auto_isolate=False)
    return new_dg, corner_id, ctype, record


# -- walking ----------------------------------------------------------------------


def _locate_on_boundary(dg: Diagram, x: QVec2):
    """(edge index, affine offset from the edge start) for a boundary point."""
    loc = dg.locate_boundary_point(x)
    if loc is None:
        raise BadParams(f"{x} left the boundary")
    kind, idx = loc
    if kind == "vertex":
        return idx, Fraction(0)
    a, _ = dg.edge(idx)
    return idx, affine_length(a, x) if x != a else Fraction(0)


def clockwise_distance(dg: Diagram, start: QVec2, goal: QVec2) -> Rat:
    """Affine length of the boundary arc from start to goal, clockwise."""
    e_s, off_s = _locate_on_boundary(dg, start)
    e_g, off_g = _locate_on_boundary(dg, goal)
    if e_s == e_g and off_g <= off_s:
        return off_s - off_g
    total = off_s
    n = len(dg.vertices)
    e = (e_s - 1) % n
    guard = 0
    while e != e_g:
        total += affine_length(*dg.edge(e))
        e = (e - 1) % n
        guard += 1
        if guard > n + 1:
            raise BadParams("boundary walk did not terminate")
    return total + (affine_length(*dg.edge(e_g)) - off_g)


def _edge_ending_at(dg: Diagram, q_point: QVec2) -> int:
    n = len(dg.vertices)
    for i in range(n):
        if dg.vertices[(i + 1) % n] == q_point:
            return i
    raise BadEdge(f"no edge ends at {q_point}")


MAX_RESTARTS = 3


def walk(dg: Diagram, edge_index: int, n_steps: int) -> WalkTrace:
    """Iterate step() along a fixed edge, restarting on corner merges."""
    trace = WalkTrace(initial=dg)
    if n_steps == 0:
        trace.final = dg
        return trace
    _, end = dg.edge(edge_index)
    q_point = end
    pin: QVec2 | None = None
    restarts = 0
    n = 0
    while n < n_steps:
        e_idx = _edge_ending_at(dg, q_point)
        try:
            new_dg, corner_id, ctype, _rec = step(dg, e_idx)
        except CornerMerge as exc:
            trace.restart_offsets.append(n)
            restarts += 1
            if restarts > MAX_RESTARTS:
                trace.aborted = True
                trace.abort_reason = f"corner merge persisted after {MAX_RESTARTS} restarts: {exc}"
                break
            pin = None  # rebase the distance origin on the next success
            try:
                new_dg, corner_id, ctype, _rec = step(dg, e_idx)
            except CornerMerge as exc2:
                trace.aborted = True
                trace.abort_reason = f"corner merge is persistent: {exc2}"
                break
        if pin is None:
            pin = dg.corner(corner_id).anchor
        dg = new_dg
        g_values = {
            label: clockwise_distance(dg, pin, c.anchor)
            for label, c in enumerate(dg.corners)
        }
        ell = affine_length(*dg.edge(_edge_ending_at(dg, q_point)))
        trace.steps.append(
            StepRecord(
                n=n,
                label=corner_id,
                mutated_type=ctype,
                ell=ell,
                g_values=g_values,
                a_n=max(g_values.values()),
                digest=dg.digest(),
            )
        )
        n += 1
    trace.final = dg
    return trace


# -- mutation tree -----------------------------------------------------------------


@dataclass
class MarkovNode:
    diagram: Diagram
    triple: tuple[int, ...]
    children: list["MarkovNode"] = field(default_factory=list)
    mutated: int | None = None

    def triples_by_depth(self, depth=0, acc=None):
        if acc is None:
            acc = {}
        acc.setdefault(depth, []).append(self.triple)
        for ch in self.children:
            ch.triples_by_depth(depth + 1, acc)
        return acc

    def to_dict(self):
        return {
            "triple": list(self.triple),
            "mutated": self.mutated,
            "children": [c.to_dict() for c in self.children],
        }


def corner_p_triple(dg: Diagram) -> tuple[int, ...]:
    return tuple(sorted(_typed(dg, i).p for i in range(len(dg.corners))))


def markov_tree(lam: Rat, depth: int) -> MarkovNode:
    """Ternary mutation tree of the prepared triangle diagram; every node
    carries the sorted triple of corner p-values."""
    from .diagram import preset

    if depth < 0:
        raise BadParams("depth must be nonnegative")
    root_dg = prepare(preset("cp2", lam=lam))

    def expand(dg: Diagram, level: int, mutated=None) -> MarkovNode:
        node = MarkovNode(diagram=dg, triple=corner_p_triple(dg), mutated=mutated)
        if level < depth:
            for cid in range(len(dg.corners)):
                child_dg, _ = mutate_with_clearing(dg, cid)
                node.children.append(expand(child_dg, level + 1, cid))
        return node

    return expand(root_dg, 0)


# -- the soft two-label report -------------------------------------------------------


@dataclass(frozen=True)
class TwoCornerReport:
    eventually_two: bool
    labels: tuple[int, ...]
    from_step: int | None
    window: int

    def to_dict(self):
        return {
            "eventually_two": self.eventually_two,
            "labels": list(self.labels),
            "from_step": self.from_step,
            "window": self.window,
        }


def two_corner_report(trace: WalkTrace, window: int = 8) -> TwoCornerReport:
    """Does the label sequence settle into a strict 2-cycle over the trailing
    window?  An empirical check, never asserted by the library itself."""
    labels = trace.labels()
    if len(labels) < max(window, 2):
        raise InsufficientData(f"{len(labels)} steps < window {window}")
    tail = labels[-window:]
    two = len(set(tail)) == 2 and all(
        tail[i] == tail[i - 2] for i in range(2, len(tail))
    ) and tail[0] != tail[1]
    from_step = None
    if two:
        from_step = len(labels) - window
        while from_step > 0 and labels[from_step - 1] == labels[from_step + 1]:
            from_step -= 1
    return TwoCornerReport(
        eventually_two=two,
        labels=tuple(sorted(set(tail))) if two else tuple(sorted(set(tail))),
        from_step=from_step,
        window=window,
    )
