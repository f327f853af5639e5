"""Decorated almost toric base diagrams.

Two kinds are supported:

* ``compact`` -- a rational convex polygon given by counterclockwise
  vertices (interior on the left of each directed edge), decorated with
  corners.  Edges may be flagged as *clip* edges: they bound the drawing
  only, the true region extends past them (this is how the unbounded
  quadrant is modelled).
* ``bdpq`` -- the half-plane model with d nodes on the ray of slope q/p.
  ``cut_side = "outward"`` is the half-plane {x >= 0} with the cut running
  from the nodes to infinity; ``cut_side = "inward"`` is the normalized
  cone presentation with a corner at the origin, boundary rays (0, -1) and
  (d*p^2, d*p*q + 1), and the cut running from the origin to the
  outermost node.

A corner is a boundary anchor, a primitive eigendirection pointing into
the interior, and a strictly increasing list of positive node parameters
(node i sits at anchor + t_i * eigendirection).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd

from .affine import (
    HalfPlane,
    IVec2,
    QVec2,
    affine_length,
    complete_basis,
    det,
    primitive_decompose,
    qvec,
    translate,
)
from .errors import (
    AtfError,
    BadParams,
    EigenlineGrazesBoundary,
    IndexOutOfRange,
    NotACorner,
    NotCoprime,
    NotIsolated,
)
from .rat import Rat, rat, rat_str

OUTWARD = "outward"
INWARD = "inward"


@dataclass(frozen=True)
class Corner:
    """An ATF-corner: boundary anchor, interior eigendirection, node ladder."""

    anchor: QVec2
    direction: IVec2
    nodes: tuple[Rat, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(Fraction(t) for t in self.nodes))

    @property
    def multiplicity(self) -> int:
        return len(self.nodes)

    def node_position(self, i: int) -> QVec2:
        return translate(self.anchor, self.direction, self.nodes[i])

    def node_positions(self) -> tuple[QVec2, ...]:
        return tuple(self.node_position(i) for i in range(len(self.nodes)))

    def cut_end(self) -> QVec2:
        """Far endpoint of the cut segment (the outermost node)."""
        return self.node_position(len(self.nodes) - 1)


@dataclass(frozen=True)
class BdpqParams:
    d: int
    p: int
    q: int
    cut_side: str
    nodes: tuple[Rat, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(Fraction(t) for t in self.nodes))

    def eigendirection(self) -> IVec2:
        return IVec2(self.p, self.q)


@dataclass(frozen=True)
class Diagram:
    kind: str
    vertices: tuple[QVec2, ...] = ()
    corners: tuple[Corner, ...] = ()
    clip_edges: frozenset[int] = frozenset()
    bdpq: BdpqParams | None = None

    # -- construction ---------------------------------------------------

    @staticmethod
    def compact(vertices, corners=(), clip_edges=()) -> "Diagram":
        """Build a compact diagram, normalizing the vertex-cycle rotation."""
        verts = tuple(QVec2(v.x, v.y) if isinstance(v, QVec2) else qvec(*v) for v in vertices)
        clips = frozenset(clip_edges)
        if verts:
            start = min(range(len(verts)), key=lambda i: (verts[i].x, verts[i].y))
            n = len(verts)
            verts = verts[start:] + verts[:start]
            clips = frozenset((i - start) % n for i in clips)
        return Diagram(kind="compact", vertices=verts, corners=tuple(corners), clip_edges=clips)

    @staticmethod
    def bdpq_model(d, p, q, nodes=None, cut_side=OUTWARD) -> "Diagram":
        if not (isinstance(d, int) and d >= 1):
            raise BadParams(f"d must be a positive integer, got {d!r}")
        if not (isinstance(p, int) and p >= 1):
            raise BadParams(f"p must be a positive integer, got {p!r}")
        if not isinstance(q, int):
            raise BadParams(f"q must be an integer, got {q!r}")
        if gcd(p, abs(q)) != 1:
            raise NotCoprime(f"gcd({p}, {q}) != 1")
        if cut_side not in (OUTWARD, INWARD):
            raise BadParams(f"cut_side must be outward/inward, got {cut_side!r}")
        if nodes is None:
            nodes = tuple(Fraction(i) for i in range(1, d + 1))
        nodes = tuple(Fraction(t) for t in nodes)
        if len(nodes) != d:
            raise BadParams(f"expected {d} node parameters, got {len(nodes)}")
        params = BdpqParams(d=d, p=p, q=q, cut_side=cut_side, nodes=nodes)
        corners = ()
        if cut_side == INWARD:
            corners = (Corner(anchor=qvec(0, 0), direction=IVec2(p, q), nodes=nodes),)
        return Diagram(kind="bdpq", corners=corners, bdpq=params)

    # -- basic geometry ---------------------------------------------------

    def is_compact_kind(self) -> bool:
        return self.kind == "compact"

    def is_truly_compact(self) -> bool:
        return self.kind == "compact" and not self.clip_edges

    def vertex(self, i: int) -> QVec2:
        if self.kind != "compact":
            raise IndexOutOfRange("bdpq models have no vertex list")
        if not (0 <= i < len(self.vertices)):
            raise IndexOutOfRange(f"vertex {i} of {len(self.vertices)}")
        return self.vertices[i]

    def edge_count(self) -> int:
        return len(self.vertices) if self.kind == "compact" else 0

    def edge(self, i: int) -> tuple[QVec2, QVec2]:
        n = len(self.vertices)
        if not (0 <= i < n):
            raise IndexOutOfRange(f"edge {i} of {n}")
        return self.vertices[i], self.vertices[(i + 1) % n]

    def edge_direction(self, i: int) -> IVec2:
        a, b = self.edge(i)
        u, _ = primitive_decompose(b - a)
        return u

    def halfplanes(self) -> list[HalfPlane]:
        """Closed half-planes whose intersection is the true region.

        Clip edges contribute no constraint: the true region extends
        beyond them.
        """
        if self.kind == "bdpq":
            params = self.bdpq
            planes = [HalfPlane(IVec2(1, 0), Fraction(0))]
            if params.cut_side == INWARD:
                d, p, q = params.d, params.p, params.q
                planes.append(HalfPlane(IVec2(d * p * q + 1, -d * p * p), Fraction(0)))
            return planes
        planes = []
        n = len(self.vertices)
        for i in range(n):
            if i in self.clip_edges:
                continue
            a, b = self.edge(i)
            direction, _ = primitive_decompose(b - a)
            normal = direction.rot90()
            offset = -(normal.x * a.x + normal.y * a.y)
            planes.append(HalfPlane(normal, offset))
        return planes

    def contains(self, x: QVec2, strict: bool = False) -> bool:
        for hp in self.halfplanes():
            v = hp.value(x)
            if v < 0 or (strict and v == 0):
                return False
        return True

    def area(self) -> Rat:
        """Enclosed area (shoelace); only for truly compact diagrams."""
        if not self.is_truly_compact():
            raise BadParams("area is defined for truly compact diagrams only")
        total = Fraction(0)
        n = len(self.vertices)
        for i in range(n):
            a, b = self.edge(i)
            total += det(a, b)
        return total / 2

    def boundary_affine_length(self) -> Rat:
        if not self.is_truly_compact():
            raise BadParams("boundary length is defined for truly compact diagrams only")
        return sum((affine_length(*self.edge(i)) for i in range(len(self.vertices))), Fraction(0))

    # -- boundary classification -------------------------------------------

    def locate_boundary_point(self, x: QVec2):
        """(kind, index) where kind is "vertex" or "edge"; None if not on boundary.

        For clipped diagrams only genuine boundary counts: a point on a
        clip edge is interior to the true region.
        """
        if self.kind == "bdpq":
            for hp in self.halfplanes():
                if hp.value(x) == 0 and self.contains(x):
                    return ("edge", 0)
            return None
        n = len(self.vertices)
        for i, v in enumerate(self.vertices):
            if v == x:
                return ("vertex", i)
        for i in range(n):
            if i in self.clip_edges:
                continue
            a, b = self.edge(i)
            if det(b - a, x - a) == 0:
                it = (x - a).dot(b - a)
                if 0 < it < (b - a).dot(b - a):
                    return ("edge", i)
        return None

    def true_boundary_edge(self, x: QVec2):
        """Locate x on the boundary of the *true* region, which may extend
        past clip edges: ("vertex", i) at genuine vertices, ("edge", i)
        referencing the real edge whose line carries x, else None."""
        if self.kind == "bdpq":
            return self.locate_boundary_point(x)
        if not self.contains(x):
            return None
        n = len(self.vertices)
        for i, v in enumerate(self.vertices):
            if v == x:
                if i in self.clip_edges or (i - 1) % n in self.clip_edges:
                    break  # artificial junction: fall through to edge search
                return ("vertex", i)
        for i in range(n):
            if i in self.clip_edges:
                continue
            a, b = self.edge(i)
            direction, _ = primitive_decompose(b - a)
            normal = direction.rot90()
            if normal.x * (x.x - a.x) + normal.y * (x.y - a.y) == 0:
                return ("edge", i)
        return None

    def corners_at(self, point: QVec2) -> list[int]:
        return [i for i, c in enumerate(self.corners) if c.anchor == point]

    def corner(self, corner_id: int) -> Corner:
        if not (0 <= corner_id < len(self.corners)):
            raise IndexOutOfRange(f"corner {corner_id} of {len(self.corners)}")
        return self.corners[corner_id]

    def boundary_dirs_at_vertex(self, i: int) -> tuple[IVec2, IVec2]:
        """(toward next vertex, toward previous vertex), both primitive."""
        n = len(self.vertices)
        v = self.vertex(i)
        nxt = self.vertices[(i + 1) % n]
        prv = self.vertices[(i - 1) % n]
        u_next, _ = primitive_decompose(nxt - v)
        u_prev, _ = primitive_decompose(prv - v)
        return u_next, u_prev

    def ccw_outgoing_at(self, anchor: QVec2) -> IVec2:
        """Primitive boundary direction from `anchor` with the interior on its left."""
        if self.kind == "bdpq":
            # On the y-axis (outward) and on both inward rays the ccw
            # traversal with interior on the left moves in direction (0,-1)
            # at the origin and along each ray accordingly.
            params = self.bdpq
            if params.cut_side == OUTWARD:
                return IVec2(0, -1)
            if anchor == qvec(0, 0):
                return IVec2(0, -1)
            d, p, q = params.d, params.p, params.q
            upper = IVec2(d * p * p, d * p * q + 1)
            if det(upper, anchor) == 0:
                return -upper  # on the upper ray, ccw heads toward the origin
            return IVec2(0, -1)
        loc = self.locate_boundary_point(anchor)
        if loc is None:
            raise BadParams(f"{anchor} is not on the boundary")
        kind, idx = loc
        if kind == "vertex":
            u_next, _ = self.boundary_dirs_at_vertex(idx)
            return u_next
        return self.edge_direction(idx)

    # -- canonical form, equality, digest -----------------------------------

    def canonical_dict(self) -> dict:
        return diagram_to_dict(self)

    def digest(self) -> str:
        blob = json.dumps(self.canonical_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def diagrams_equal(d1: Diagram, d2: Diagram, ignore_corner_order: bool = True) -> bool:
    """Equality up to vertex-list rotation (compact lists are stored
    rotation-normalized) and, optionally, corner order."""
    if d1.kind != d2.kind:
        return False
    if d1.kind == "bdpq":
        return d1.bdpq == d2.bdpq
    if d1.vertices != d2.vertices or d1.clip_edges != d2.clip_edges:
        return False
    if ignore_corner_order:
        key = lambda c: (c.anchor.x, c.anchor.y, c.direction.x, c.direction.y, c.nodes)
        return sorted(d1.corners, key=key) == sorted(d2.corners, key=key)
    return d1.corners == d2.corners


# -- validation -------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def to_dict(self):
        return {"kind": self.kind, "detail": self.detail}


def validate(dg: Diagram) -> list[Violation]:
    """Check every structural invariant; violations are data, not errors."""
    out: list[Violation] = []
    if dg.kind == "bdpq":
        _validate_bdpq(dg, out)
        return out
    if dg.kind != "compact":
        return [Violation("BadKind", f"unknown kind {dg.kind!r}")]
    _validate_polygon(dg, out)
    if not out:
        _validate_corners(dg, out)
    return out


def _validate_bdpq(dg: Diagram, out: list[Violation]):
    params = dg.bdpq
    if params is None:
        out.append(Violation("BadParams", "bdpq diagram without parameters"))
        return
    if params.d < 1:
        out.append(Violation("BadMultiplicity", f"d = {params.d} < 1"))
    if params.p < 1:
        out.append(Violation("BadParams", f"p = {params.p} < 1"))
    if gcd(params.p, abs(params.q)) != 1:
        out.append(Violation("NotCoprime", f"gcd({params.p}, {params.q}) != 1"))
    if len(params.nodes) != params.d:
        out.append(Violation("BadMultiplicity", f"{len(params.nodes)} node parameters for d = {params.d}"))
    if any(t <= 0 for t in params.nodes):
        out.append(Violation("BadNodeOrder", "node parameters must be positive"))
    if any(a >= b for a, b in zip(params.nodes, params.nodes[1:])):
        out.append(Violation("BadNodeOrder", "node parameters must be strictly increasing"))
    if params.cut_side not in (OUTWARD, INWARD):
        out.append(Violation("BadParams", f"cut_side {params.cut_side!r}"))


def _validate_polygon(dg: Diagram, out: list[Violation]):
    n = len(dg.vertices)
    if n < 3:
        out.append(Violation("TooFewVertices", f"{n} vertices"))
        return
    if len(set((v.x, v.y) for v in dg.vertices)) != n:
        out.append(Violation("DuplicateVertex", "repeated vertex"))
        return
    for i in range(n):
        a, b = dg.edge(i)
        c = dg.vertices[(i + 2) % n]
        turn = det(b - a, c - b)
        if turn <= 0:
            out.append(Violation("NotConvex", f"non-left turn at vertex {(i + 1) % n}"))
            return


def _validate_corners(dg: Diagram, out: list[Violation]):
    seen_at_vertex: dict[tuple, list[IVec2]] = {}
    cuts: list[tuple[QVec2, QVec2, int]] = []
    for ci, c in enumerate(dg.corners):
        if c.multiplicity < 1:
            out.append(Violation("BadMultiplicity", f"corner {ci} has no nodes"))
            continue
        if not c.direction.is_primitive():
            out.append(Violation("NotPrimitive", f"corner {ci} eigendirection {c.direction}"))
            continue
        if dg.locate_boundary_point(c.anchor) is None:
            out.append(Violation("AnchorNotOnBoundary", f"corner {ci} anchor {c.anchor}"))
            continue
        if any(t <= 0 for t in c.nodes) or any(a >= b for a, b in zip(c.nodes, c.nodes[1:])):
            out.append(Violation("BadNodeOrder", f"corner {ci} parameters {[rat_str(t) for t in c.nodes]}"))
            continue
        for i in range(c.multiplicity):
            if not dg.contains(c.node_position(i), strict=True):
                out.append(Violation("NodeOutsideRegion", f"corner {ci} node {i}"))
        # the open cut segment must stay strictly inside
        try:
            exit_t = _ray_exit_param(dg, c.anchor, c.direction)
        except EigenlineGrazesBoundary:
            out.append(Violation("CutLeavesRegion", f"corner {ci} cut runs along the boundary"))
            continue
        if exit_t is None:
            pass  # unbounded direction: the cut never leaves
        elif exit_t == 0:
            out.append(Violation("CutLeavesRegion", f"corner {ci} eigendirection exits immediately"))
            continue
        elif c.nodes[-1] >= exit_t:
            out.append(Violation("CutLeavesRegion", f"corner {ci} cut reaches the boundary"))
            continue
        key = (c.anchor.x, c.anchor.y)
        for other in seen_at_vertex.get(key, []):
            if other == c.direction:
                out.append(Violation("DuplicateEigendirection", f"at anchor {c.anchor}"))
        seen_at_vertex.setdefault(key, []).append(c.direction)
        cuts.append((c.anchor, c.cut_end(), ci))
    for i in range(len(cuts)):
        for j in range(i + 1, len(cuts)):
            if _cuts_cross(cuts[i], cuts[j]):
                out.append(Violation("CutsCross", f"corners {cuts[i][2]} and {cuts[j][2]}"))


def _cuts_cross(s1, s2) -> bool:
    a, b, _ = s1
    c, d, _ = s2
    shared_anchor = a == c
    inter = _segment_intersection(a, b, c, d)
    if inter is None:
        return False
    if shared_anchor and inter == [a]:
        return False
    return True


def _segment_intersection(a, b, c, d):
    """List of intersection points of [a,b] and [c,d] (None if disjoint,
    a two-point list marks an overlapping stretch)."""
    r = b - a
    s = d - c
    denom = det(r, s)
    if denom != 0:
        t = det(c - a, s) / denom
        u = det(c - a, r) / denom
        if 0 <= t <= 1 and 0 <= u <= 1:
            return [a + r.scale(t)]
        return None
    if det(c - a, r) != 0:
        return None  # parallel, different lines
    rr = r.dot(r)
    t0 = (c - a).dot(r) / rr
    t1 = (d - a).dot(r) / rr
    lo, hi = min(t0, t1), max(t0, t1)
    lo = max(lo, Fraction(0))
    hi = min(hi, Fraction(1))
    if lo > hi:
        return None
    if lo == hi:
        return [a + r.scale(lo)]
    return [a + r.scale(lo), a + r.scale(hi)]


def _ray_exit_param(dg: Diagram, origin: QVec2, w: IVec2):
    """Smallest t > 0 where origin + t*w leaves the true region.

    Returns None when the ray never exits (clip edges and the unbounded
    half-plane/cone impose no constraint).  Raises EigenlineGrazesBoundary
    when the ray runs inside a boundary line.
    """
    best = None
    for hp in dg.halfplanes():
        a = w.x * hp.normal.x + w.y * hp.normal.y
        b = hp.value(origin)
        if a == 0:
            if b == 0:
                raise EigenlineGrazesBoundary(
                    f"ray from {origin} along {w} runs along the boundary"
                )
            continue
        if a > 0:
            continue
        t = Fraction(-b, a)
        if t <= 0:
            return Fraction(0)
        if best is None or t < best:
            best = t
    return best


def ray_exit(dg: Diagram, origin: QVec2, w: IVec2):
    """(t_exit, exit_point) for a ray from a boundary/interior point, or None."""
    t = _ray_exit_param(dg, origin, w)
    if t is None:
        return None
    return t, translate(origin, w, t)


# -- vertex kinds, corner types ---------------------------------------------

DELZANT = "delzant"
HOSTS_CORNERS = "hosts_corners"
NON_DELZANT_BARE = "non_delzant_bare"


def vertex_kind(dg: Diagram, vertex_index: int):
    """("delzant", None) | ("hosts_corners", [ids]) | ("non_delzant_bare", None).

    Vertices touching a clip edge are artificial and never Delzant.
    """
    v = dg.vertex(vertex_index)
    hosted = dg.corners_at(v)
    if hosted:
        return HOSTS_CORNERS, hosted
    n = len(dg.vertices)
    if vertex_index in dg.clip_edges or (vertex_index - 1) % n in dg.clip_edges:
        return NON_DELZANT_BARE, None
    u_next, u_prev = dg.boundary_dirs_at_vertex(vertex_index)
    if det(u_next, u_prev) == 1:
        return DELZANT, None
    return NON_DELZANT_BARE, None


@dataclass(frozen=True)
class CornerType:
    d: int
    p: int
    q_class: int

    def to_dict(self):
        return {"d": self.d, "p": self.p, "q_class": self.q_class}


def q_class_of(q: int, p: int) -> int:
    """Representative of q in Z_p / +-1, normalized into [0, floor(p/2)]."""
    if p < 1:
        raise BadParams(f"p must be positive, got {p}")
    qm = q % p
    return min(qm, (p - qm) % p)


def corner_type(dg: Diagram, corner_id: int) -> CornerType:
    """Type (d, p, q_class) of an isolated corner.

    u1 is the primitive boundary direction from the anchor with the
    interior on its left, u2 completes it to a positively oriented basis;
    p = det(u1, v), q = det(u2, v) reduced into Z_p / +-1.
    """
    if dg.kind == "bdpq" and dg.bdpq.cut_side == OUTWARD:
        raise NotACorner("the outward model has no corner (cut runs to infinity)")
    c = dg.corner(corner_id)
    if len(dg.corners_at(c.anchor)) > 1:
        raise NotIsolated(f"corner {corner_id} shares its anchor")
    u1 = dg.ccw_outgoing_at(c.anchor)
    p = det(u1, c.direction)
    if p <= 0:
        raise NotACorner(f"eigendirection {c.direction} does not point into the interior past {u1}")
    u2 = complete_basis(u1)
    q = det(u2, c.direction)
    return CornerType(d=c.multiplicity, p=p, q_class=q_class_of(q, p))


def isolate(dg: Diagram, corner_id: int) -> Diagram:
    """Re-anchor every other corner sharing the anchor, via branch-cut changes.

    Cuts obstructing a sibling's eigenline are slid inward first (nodal
    slides keep every fibre off their supports untouched)."""
    from . import moves  # local import: moves builds on diagrams

    c = dg.corner(corner_id)
    anchor = c.anchor
    while True:
        sharing = [i for i in dg.corners_at(anchor) if i != corner_id]
        if not sharing:
            return dg
        dg = moves.shrink_cuts_off_eigenline(dg, sharing[0])
        dg = moves.change_branch_cut(dg, sharing[0])


# -- presets ------------------------------------------------------------------


def preset(name: str, **params) -> Diagram:
    """Built-in diagrams: cp2(lam), quadrant(cap), rectangle(width, height),
    bdpq(d, p, q, nodes, cut_side)."""
    if name == "cp2":
        lam = rat(params.get("lam", 3))
        if lam <= 0:
            raise BadParams("cp2 needs lam > 0")
        return Diagram.compact([qvec(0, 0), qvec(lam, 0), qvec(0, lam)])
    if name == "quadrant":
        cap = rat(params.get("cap", 4))
        if cap <= 0:
            raise BadParams("quadrant needs cap > 0")
        verts = [qvec(0, 0), qvec(cap, 0), qvec(cap, cap), qvec(0, cap)]
        # edges 1 (right) and 2 (top) only clip the drawing
        return Diagram.compact(verts, clip_edges={1, 2})
    if name == "rectangle":
        w = rat(params.get("width", 4))
        h = rat(params.get("height", 1))
        if w <= 0 or h <= 0:
            raise BadParams("rectangle needs positive width and height")
        return Diagram.compact([qvec(0, 0), qvec(w, 0), qvec(w, h), qvec(0, h)])
    if name == "bdpq":
        return Diagram.bdpq_model(
            d=int(params.get("d", 1)),
            p=int(params.get("p", 1)),
            q=int(params.get("q", 0)),
            nodes=params.get("nodes"),
            cut_side=params.get("cut_side", OUTWARD),
        )
    raise BadParams(f"unknown preset {name!r}")


# -- JSON ---------------------------------------------------------------------


def _point_to_json(p: QVec2):
    return [rat_str(p.x), rat_str(p.y)]


def _point_from_json(pair) -> QVec2:
    return qvec(rat(pair[0]), rat(pair[1]))


def corner_to_dict(c: Corner) -> dict:
    return {
        "anchor": _point_to_json(c.anchor),
        "v": [c.direction.x, c.direction.y],
        "nodes": [rat_str(t) for t in c.nodes],
    }


def corner_from_dict(d: dict) -> Corner:
    return Corner(
        anchor=_point_from_json(d["anchor"]),
        direction=IVec2(int(d["v"][0]), int(d["v"][1])),
        nodes=tuple(rat(t) for t in d["nodes"]),
    )


def diagram_to_dict(dg: Diagram) -> dict:
    if dg.kind == "bdpq":
        params = dg.bdpq
        return {
            "kind": "bdpq",
            "bdpq": {
                "d": params.d,
                "p": params.p,
                "q": params.q,
                "cut_side": params.cut_side,
                "nodes": [rat_str(t) for t in params.nodes],
            },
        }
    out = {
        "kind": "compact",
        "vertices": [_point_to_json(v) for v in dg.vertices],
        "corners": [corner_to_dict(c) for c in dg.corners],
    }
    if dg.clip_edges:
        out["clip_edges"] = sorted(dg.clip_edges)
    return out


def diagram_from_dict(d: dict) -> Diagram:
    kind = d.get("kind")
    if kind == "bdpq":
        b = d["bdpq"]
        return Diagram.bdpq_model(
            d=int(b["d"]),
            p=int(b["p"]),
            q=int(b["q"]),
            nodes=tuple(rat(t) for t in b["nodes"]) if b.get("nodes") else None,
            cut_side=b.get("cut_side", OUTWARD),
        )
    if kind == "compact":
        return Diagram.compact(
            [_point_from_json(v) for v in d.get("vertices", [])],
            corners=tuple(corner_from_dict(c) for c in d.get("corners", [])),
            clip_edges=set(d.get("clip_edges", [])),
        )
    raise BadParams(f"unknown diagram kind {kind!r}")


def diagram_to_json(dg: Diagram) -> str:
    return json.dumps(diagram_to_dict(dg), indent=2, sort_keys=True)


def diagram_from_json(text: str) -> Diagram:
    return diagram_from_dict(json.loads(text))
