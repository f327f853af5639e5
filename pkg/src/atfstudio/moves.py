"""Move calculus on decorated diagrams.

Nodal trade, nodal slide, change of branch cut, mutation, and
region-clearing slides.  All moves are pure: they return new diagrams and
re-validate the result, so a sequence of successful moves can never leave
the space of valid diagrams.

The change of branch cut applies the piecewise shear fixing the corner's
eigenline: the half {det(v, x - anchor) >= 0} moves, vertices and other
corners transform covariantly, nodes stay put (they sit on the eigenline),
and the corner re-anchors at the other boundary intersection of the
eigenline.  On the half-plane model the operation is the exact cut-side
toggle between the outward and inward normal presentations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .affine import IVec2, QVec2, det, piecewise_shear, qvec, shear_matrix, translate
from .diagram import (
    DELZANT,
    INWARD,
    NON_DELZANT_BARE,
    OUTWARD,
    Corner,
    Diagram,
    ray_exit,
    validate,
    vertex_kind,
)
from .errors import (
    BadParams,
    CornerMerge,
    EigenlineNoExit,
    EpsilonTooLarge,
    HitsNode,
    IndexOutOfRange,
    LeavesRegion,
    MoveInvalid,
    NodeOrderViolated,
    NotDelzant,
    ObstructedCut,
    Unclearable,
)
from .rat import Rat, rat_str


@dataclass(frozen=True)
class MoveRecord:
    """What a move did; crossed_points lists tracked base points swept by a
    slide support (the fibres over them change type)."""

    kind: str
    target: int
    params: dict
    crossed_points: tuple[QVec2, ...] = ()

    def to_dict(self):
        return {
            "kind": self.kind,
            "target": self.target,
            "params": self.params,
            "crossed": [[rat_str(p.x), rat_str(p.y)] for p in self.crossed_points],
        }


def _postcheck(dg: Diagram, move: str) -> Diagram:
    """Moves must produce valid diagrams with no orbifold (bare non-Delzant)
    vertices; anything else is a bug in the caller's diagram or an illegal
    composite, reported as MoveInvalid."""
    violations = validate(dg)
    if violations:
        raise MoveInvalid(f"{move} produced an invalid diagram", violations)
    if dg.kind == "compact":
        n = len(dg.vertices)
        for i in range(n):
            if i in dg.clip_edges or (i - 1) % n in dg.clip_edges:
                continue
            kind, _ = vertex_kind(dg, i)
            if kind == NON_DELZANT_BARE:
                raise MoveInvalid(f"{move} left an orbifold vertex at index {i}", [])
    return dg


# -- small geometric helpers --------------------------------------------------


def _ray_param_of_point(origin: QVec2, w: IVec2, x: QVec2):
    """t with x == origin + t*w, or None if x is off the ray's line."""
    rel = x - origin
    if det(w.as_q(), rel) != 0:
        return None
    if w.x != 0:
        return rel.x / w.x
    return rel.y / w.y


def _segment_ray_params(origin: QVec2, w: IVec2, a: QVec2, b: QVec2):
    """Parameter interval (lo, hi) of [a, b] along the ray, or a single
    crossing parameter, or None.  Returns ("interval", lo, hi) or
    ("point", t) in ray parameters (unbounded: full line parameters)."""
    seg = b - a
    wq = w.as_q()
    denom = det(seg, wq)
    if a == b:
        t = _ray_param_of_point(origin, w, a)
        return None if t is None else ("point", t)
    if denom != 0:
        # unique line crossing; check it lies within [a, b]
        t = det(seg, a - origin) / denom
        u = det(wq, a - origin) / det(wq, seg)
        if 0 <= u <= 1:
            return ("point", t)
        return None
    if det(seg, a - origin) != 0:
        return None
    ta = _ray_param_of_point(origin, w, a)
    tb = _ray_param_of_point(origin, w, b)
    return ("interval", min(ta, tb), max(ta, tb))


def _cut_obstruction(dg: Diagram, origin: QVec2, w: IVec2, skip: int | None):
    """Smallest positive ray parameter at which another corner's cut
    segment meets the ray from origin along w (None if unobstructed)."""
    best = None
    for j, c2 in enumerate(dg.corners):
        if j == skip:
            continue
        hit = _segment_ray_params(origin, w, c2.anchor, c2.cut_end())
        if hit is None:
            continue
        if hit[0] == "point":
            ts = [hit[1]]
        else:
            ts = [hit[1], hit[2]]
        for t in ts:
            if t > 0 and (best is None or t < best):
                best = t
    return best


def _points_on_sweep(anchor: QVec2, v: IVec2, lo: Rat, hi: Rat, tracked) -> list[QVec2]:
    """Tracked points lying on the closed eigenline sweep [lo, hi]."""
    out = []
    for x in tracked:
        x = x if isinstance(x, QVec2) else qvec(*x)
        t = _ray_param_of_point(anchor, v, x)
        if t is not None and lo <= t <= hi:
            out.append(x)
    return out


# -- nodal trade ---------------------------------------------------------------


def trade_epsilon_bound(dg: Diagram, vertex_index: int):
    """Largest admissible node parameter scale at a Delzant vertex
    (None when the eigenray is unobstructed and never exits)."""
    v0 = dg.vertex(vertex_index)
    u_next, u_prev = dg.boundary_dirs_at_vertex(vertex_index)
    v = u_next + u_prev
    ex = ray_exit(dg, v0, v)
    bound = ex[0] if ex is not None else None
    obs = _cut_obstruction(dg, v0, v, skip=None)
    if obs is not None and (bound is None or obs < bound):
        bound = obs
    return bound


def default_trade_epsilon(dg: Diagram, vertex_index: int) -> Rat:
    bound = trade_epsilon_bound(dg, vertex_index)
    if bound is None:
        return Fraction(1)
    return bound / 4


def nodal_trade(dg: Diagram, vertex_index: int, epsilon: Rat | None = None) -> Diagram:
    """Replace a bare Delzant vertex with a corner: eigendirection is the
    sum of the two primitive edge directions, one node at parameter epsilon."""
    kind, _ = vertex_kind(dg, vertex_index)
    if kind != DELZANT:
        raise NotDelzant(f"vertex {vertex_index} is {kind}")
    v0 = dg.vertex(vertex_index)
    u_next, u_prev = dg.boundary_dirs_at_vertex(vertex_index)
    v = u_next + u_prev
    bound = trade_epsilon_bound(dg, vertex_index)
    if epsilon is None:
        epsilon = Fraction(1) if bound is None else bound / 4
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise BadParams("epsilon must be positive")
    if bound is not None and epsilon >= bound:
        raise EpsilonTooLarge(
            f"epsilon {rat_str(epsilon)} reaches an obstruction at {rat_str(bound)}"
        )
    corner = Corner(anchor=v0, direction=v, nodes=(epsilon,))
    out = Diagram.compact(dg.vertices, dg.corners + (corner,), dg.clip_edges)
    return _postcheck(out, "nodal_trade")


# -- nodal slide ---------------------------------------------------------------


def _slide_corner_node(dg: Diagram, corner_id: int, node_index: int, new_t: Rat, tracked):
    c = dg.corner(corner_id)
    if not (0 <= node_index < c.multiplicity):
        raise IndexOutOfRange(f"node {node_index} of {c.multiplicity}")
    new_t = Fraction(new_t)
    if new_t <= 0:
        raise LeavesRegion("node parameter must stay positive")
    for i, t in enumerate(c.nodes):
        if i != node_index and t == new_t:
            raise HitsNode(f"parameter {rat_str(new_t)} is occupied")
    if node_index > 0 and new_t < c.nodes[node_index - 1]:
        raise NodeOrderViolated("slide past the inner neighbour")
    if node_index + 1 < c.multiplicity and new_t > c.nodes[node_index + 1]:
        raise NodeOrderViolated("slide past the outer neighbour")
    old_t = c.nodes[node_index]
    nodes = list(c.nodes)
    nodes[node_index] = new_t
    new_corner = Corner(anchor=c.anchor, direction=c.direction, nodes=tuple(nodes))
    corners = list(dg.corners)
    corners[corner_id] = new_corner
    out = Diagram(
        kind=dg.kind,
        vertices=dg.vertices,
        corners=tuple(corners),
        clip_edges=dg.clip_edges,
        bdpq=dg.bdpq,
    )
    crossed = _points_on_sweep(
        c.anchor, c.direction, min(old_t, new_t), max(old_t, new_t), tracked
    )
    return out, old_t, crossed


def nodal_slide(dg: Diagram, corner_id: int, node_index: int, new_t: Rat, tracked=()):
    """Move one node along its eigenline; report tracked base points swept."""
    if dg.kind == "bdpq":
        params = dg.bdpq
        if corner_id != 0:
            raise IndexOutOfRange("the half-plane model has a single node family (id 0)")
        if not (0 <= node_index < params.d):
            raise IndexOutOfRange(f"node {node_index} of {params.d}")
        new_t = Fraction(new_t)
        if new_t <= 0:
            raise LeavesRegion("node parameter must stay positive")
        for i, t in enumerate(params.nodes):
            if i != node_index and t == new_t:
                raise HitsNode(f"parameter {rat_str(new_t)} is occupied")
        if node_index > 0 and new_t < params.nodes[node_index - 1]:
            raise NodeOrderViolated("slide past the inner neighbour")
        if node_index + 1 < params.d and new_t > params.nodes[node_index + 1]:
            raise NodeOrderViolated("slide past the outer neighbour")
        old_t = params.nodes[node_index]
        nodes = list(params.nodes)
        nodes[node_index] = new_t
        out = Diagram.bdpq_model(params.d, params.p, params.q, tuple(nodes), params.cut_side)
        crossed = _points_on_sweep(
            qvec(0, 0), params.eigendirection(), min(old_t, new_t), max(old_t, new_t), tracked
        )
        record = MoveRecord(
            kind="slide",
            target=corner_id,
            params={"node": node_index, "from": rat_str(old_t), "to": rat_str(new_t)},
            crossed_points=tuple(crossed),
        )
        return _postcheck(out, "nodal_slide"), record

    out, old_t, crossed = _slide_corner_node(dg, corner_id, node_index, new_t, tracked)
    record = MoveRecord(
        kind="slide",
        target=corner_id,
        params={"node": node_index, "from": rat_str(old_t), "to": rat_str(Fraction(new_t))},
        crossed_points=tuple(crossed),
    )
    try:
        return _postcheck(out, "nodal_slide"), record
    except MoveInvalid as exc:
        kinds = {v.kind for v in exc.violations}
        if kinds & {"NodeOutsideRegion", "CutLeavesRegion"}:
            raise LeavesRegion("slide target leaves the region") from None
        if "CutsCross" in kinds:
            raise ObstructedCut("slide target runs the cut into another cut") from None
        raise


# -- change of branch cut -------------------------------------------------------


def change_branch_cut(dg: Diagram, corner_id: int) -> Diagram:
    """Re-choose the cut on the other side of a corner's nodes.

    Half-plane model: exact toggle between the outward and inward normal
    presentations (an involution on the nose).  Compact diagrams: the
    piecewise shear of weight = node multiplicity is applied to the whole
    decorated diagram; the corner re-anchors at the eigenline's other
    boundary intersection.
    """
    if dg.kind == "bdpq":
        params = dg.bdpq
        new_side = INWARD if params.cut_side == OUTWARD else OUTWARD
        return Diagram.bdpq_model(params.d, params.p, params.q, params.nodes, new_side)

    c = dg.corner(corner_id)
    anchor, v, weight = c.anchor, c.direction, c.multiplicity
    ex = ray_exit(dg, anchor, v)  # raises EigenlineGrazesBoundary when parallel
    if ex is None:
        raise EigenlineNoExit("the eigenline never exits through a genuine boundary edge")
    length, new_anchor = ex

    for j, c2 in enumerate(dg.corners):
        if j == corner_id:
            continue
        if c2.anchor == new_anchor and det(v, c2.direction) == 0:
            raise CornerMerge(
                f"eigenline exits through corner {j} with the same eigenline"
            )
        side_a = det(v.as_q(), c2.anchor - anchor)
        side_b = det(v.as_q(), c2.cut_end() - anchor)
        if (side_a > 0 and side_b < 0) or (side_a < 0 and side_b > 0):
            raise ObstructedCut(f"cut of corner {j} crosses the eigenline")

    # boundary as (vertex, clip flag of outgoing edge), with both eigenline
    # endpoints present as ring entries (the shear bends the boundary there)
    ring: list[tuple[QVec2, bool]] = [
        (vtx, i in dg.clip_edges) for i, vtx in enumerate(dg.vertices)
    ]

    def insert_point(ring, point):
        for idx in range(len(ring)):
            cur, flag = ring[idx]
            nxt, _ = ring[(idx + 1) % len(ring)]
            if cur == point:
                return ring
            seg = nxt - cur
            rel = point - cur
            if det(seg, rel) == 0 and 0 < rel.dot(seg) < seg.dot(seg):
                return ring[: idx + 1] + [(point, flag)] + ring[idx + 1 :]
        raise EigenlineNoExit("eigenline endpoint is outside the drawn boundary")

    ring = insert_point(ring, new_anchor)
    ring = insert_point(ring, anchor)

    mat = shear_matrix(v, weight)
    moved_ring = [(piecewise_shear(v, weight, anchor, vtx), flag) for vtx, flag in ring]

    new_corners: list[Corner] = []
    for j, c2 in enumerate(dg.corners):
        if j == corner_id:
            new_params = tuple(length - t for t in reversed(c2.nodes))
            new_corners.append(Corner(anchor=new_anchor, direction=-v, nodes=new_params))
            continue
        side = det(v.as_q(), c2.anchor - anchor)
        if side > 0:
            new_corners.append(
                Corner(
                    anchor=piecewise_shear(v, weight, anchor, c2.anchor),
                    direction=mat.apply(c2.direction),
                    nodes=c2.nodes,
                )
            )
        elif side == 0 and det(v, c2.direction) > 0:
            new_corners.append(
                Corner(anchor=c2.anchor, direction=mat.apply(c2.direction), nodes=c2.nodes)
            )
        else:
            new_corners.append(c2)

    moved_ring = _collapse_collinear(moved_ring)
    out = Diagram.compact(
        [vtx for vtx, _ in moved_ring],
        tuple(new_corners),
        {i for i, (_, flag) in enumerate(moved_ring) if flag},
    )
    return _postcheck(out, "change_branch_cut")


def _collapse_collinear(ring):
    """Drop vertices whose adjacent edges are collinear and equally flagged."""
    changed = True
    while changed and len(ring) > 3:
        changed = False
        n = len(ring)
        for i in range(n):
            prev_v, prev_flag = ring[(i - 1) % n]
            cur_v, cur_flag = ring[i]
            next_v, _ = ring[(i + 1) % n]
            if det(cur_v - prev_v, next_v - cur_v) == 0 and prev_flag == cur_flag:
                del ring[i]
                changed = True
                break
    return ring


# -- mutation -------------------------------------------------------------------


def mutation_epsilon_bound(dg: Diagram, corner_id: int):
    """Admissible unit for the post-flip node ladder: room along the new
    eigenray divided by the multiplicity."""
    c = dg.corner(corner_id)
    room = None
    if dg.kind == "bdpq":
        room = None
    else:
        ex = ray_exit(dg, c.anchor, c.direction)
        room = ex[0] if ex is not None else None
    obs = _cut_obstruction(dg, c.anchor, c.direction, skip=corner_id)
    if obs is not None and (room is None or obs < room):
        room = obs
    return room


def mutate(
    dg: Diagram,
    corner_id: int,
    epsilon: Rat | None = None,
    tracked=(),
    auto_isolate: bool = True,
):
    """Change the branch cut at a corner, then shrink the new cut: nodes are
    slid to parameters epsilon, 2*epsilon, ..., d*epsilon from the new anchor.

    With auto_isolate=False co-anchored corners ride along passively under
    the shear instead of being re-anchored first; a walk along an edge needs
    this so that steps at multi-corner vertices keep the edge length fixed.
    """
    from .diagram import isolate

    if auto_isolate and dg.kind != "bdpq":
        dg = isolate(dg, corner_id)
    flipped = change_branch_cut(dg, corner_id)

    if flipped.kind == "bdpq":
        params = flipped.bdpq
        if params.cut_side == OUTWARD:
            record = MoveRecord(kind="mutate", target=corner_id, params={"epsilon": None})
            return flipped, record
        anchor, v = qvec(0, 0), params.eigendirection()
        current = params.nodes
    else:
        c = flipped.corner(corner_id)
        anchor, v = c.anchor, c.direction
        current = c.nodes

    d = len(current)
    if epsilon is None:
        room = mutation_epsilon_bound(flipped, corner_id)
        unit = current[0] if room is None else min(room / 4, current[0])
        epsilon = unit / d
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise BadParams("epsilon must be positive")
    targets = tuple(epsilon * (i + 1) for i in range(d))
    room = mutation_epsilon_bound(flipped, corner_id)
    if room is not None and targets[-1] >= room:
        raise EpsilonTooLarge(
            f"ladder top {rat_str(targets[-1])} reaches an obstruction at {rat_str(room)}"
        )

    crossed: list[QVec2] = []
    for old_t, new_t in zip(current, targets):
        crossed.extend(
            _points_on_sweep(anchor, v, min(old_t, new_t), max(old_t, new_t), tracked)
        )

    if flipped.kind == "bdpq":
        params = flipped.bdpq
        out = Diagram.bdpq_model(params.d, params.p, params.q, targets, params.cut_side)
    else:
        corners = list(flipped.corners)
        corners[corner_id] = Corner(anchor=anchor, direction=v, nodes=targets)
        out = Diagram(
            kind="compact",
            vertices=flipped.vertices,
            corners=tuple(corners),
            clip_edges=flipped.clip_edges,
        )
    out = _postcheck(out, "mutate")
    seen = []
    for pt in crossed:
        if pt not in seen:
            seen.append(pt)
    record = MoveRecord(
        kind="mutate",
        target=corner_id,
        params={"epsilon": rat_str(epsilon)},
        crossed_points=tuple(seen),
    )
    return out, record


def shrink_cuts_off_eigenline(dg: Diagram, corner_id: int) -> Diagram:
    """Slide other corners' nodes inward until no cut crosses the given
    corner's eigenline (the "cuts negligibly small" maintenance step)."""
    if dg.kind == "bdpq":
        return dg
    c = dg.corner(corner_id)
    anchor, v = c.anchor, c.direction
    corners = list(dg.corners)
    changed = False
    for j, c2 in enumerate(corners):
        if j == corner_id:
            continue
        side_a = det(v.as_q(), c2.anchor - anchor)
        side_b = det(v.as_q(), c2.cut_end() - anchor)
        if (side_a > 0 and side_b < 0) or (side_a < 0 and side_b > 0):
            dv = det(v, c2.direction)
            s_star = -side_a / dv  # positive: where c2's ray meets the line
            d = c2.multiplicity
            targets = tuple(s_star * (i + 1) / (d + 1) for i in range(d))
            corners[j] = Corner(anchor=c2.anchor, direction=c2.direction, nodes=targets)
            changed = True
    if not changed:
        return dg
    out = Diagram(
        kind=dg.kind,
        vertices=dg.vertices,
        corners=tuple(corners),
        clip_edges=dg.clip_edges,
        bdpq=dg.bdpq,
    )
    return _postcheck(out, "shrink_cuts_off_eigenline")


def mutate_with_clearing(
    dg: Diagram,
    corner_id: int,
    epsilon: Rat | None = None,
    tracked=(),
    auto_isolate: bool = True,
):
    """mutate(), sliding obstructing cuts out of the way first."""
    for _ in range(3):
        try:
            return mutate(dg, corner_id, epsilon, tracked, auto_isolate)
        except ObstructedCut:
            dg = shrink_cuts_off_eigenline(dg, corner_id)
    return mutate(dg, corner_id, epsilon, tracked, auto_isolate)


# -- clearing a region ----------------------------------------------------------


def _region_hull_halfplane_interval(points, origin: QVec2, w: IVec2):
    """Parameter interval of (convex hull of points) ∩ ray(origin, w),
    or None.  Points may be collinear (segment region)."""
    pts = [p if isinstance(p, QVec2) else qvec(*p) for p in points]
    if not pts:
        return None
    if len(pts) == 1:
        t = _ray_param_of_point(origin, w, pts[0])
        return None if t is None else (t, t)
    collinear = all(det(pts[1] - pts[0], p - pts[0]) == 0 for p in pts[2:]) if len(pts) > 2 else True
    if collinear and len(pts) >= 2:
        far = max(pts[1:], key=lambda p: (p - pts[0]).dot(p - pts[0]))
        hit = _segment_ray_params(origin, w, pts[0], far)
        if hit is None:
            return None
        if hit[0] == "point":
            return (hit[1], hit[1])
        return (hit[1], hit[2])
    hull = _convex_hull(pts)
    lo, hi = None, None
    n = len(hull)
    # clip the ray line against the hull edges (interior on the left)
    t_lo, t_hi = None, None
    wq = w.as_q()
    for i in range(n):
        a, b = hull[i], hull[(i + 1) % n]
        edge = b - a
        den = det(edge, wq)
        num = det(edge, a - origin)
        if den == 0:
            if det(edge, origin - a) < 0:
                return None  # line outside this edge's halfplane
            continue
        t = num / den
        if den > 0:
            t_lo = t if t_lo is None else max(t_lo, t)
        else:
            t_hi = t if t_hi is None else min(t_hi, t)
    if t_lo is None or t_hi is None or t_lo > t_hi:
        return None
    return (t_lo, t_hi)


def _convex_hull(pts):
    pts = sorted(set((p.x, p.y) for p in pts))
    pts = [qvec(x, y) for x, y in pts]
    if len(pts) <= 2:
        return pts
    def half(points):
        out = []
        for p in points:
            while len(out) >= 2 and det(out[-1] - out[-2], p - out[-1]) <= 0:
                out.pop()
            out.append(p)
        return out
    lower = half(pts)
    upper = half(pts[::-1])
    return lower[:-1] + upper[:-1]


def clear_region(dg: Diagram, region) -> Diagram:
    """Slide nodes so that every node and cut segment avoids the region."""
    out, _ = clear_region_tracked(dg, region)
    return out


def clear_region_tracked(dg: Diagram, region):
    """clear_region plus the list of slide supports (anchor, v, lo, hi)."""
    supports = []
    if dg.kind == "bdpq":
        params = dg.bdpq
        v = params.eigendirection()
        interval = _region_hull_halfplane_interval(region, qvec(0, 0), v)
        if interval is None:
            return dg, supports
        lo, hi = interval
        if hi < 0:
            return dg, supports
        if params.cut_side == OUTWARD:
            if params.nodes[0] > hi:
                return dg, supports
            targets = tuple(hi + hi * (i + 1) / (params.d + 1) for i in range(params.d))
        else:
            if params.nodes[-1] < lo:
                return dg, supports
            if lo <= 0:
                raise Unclearable("region pins the inward cut at the origin")
            targets = tuple(lo * (i + 1) / (params.d + 1) for i in range(params.d))
        for old_t, new_t in zip(params.nodes, targets):
            if old_t != new_t:
                supports.append((qvec(0, 0), v, min(old_t, new_t), max(old_t, new_t)))
        out = Diagram.bdpq_model(params.d, params.p, params.q, targets, params.cut_side)
        return _postcheck(out, "clear_region"), supports

    corners = list(dg.corners)
    for ci, c in enumerate(corners):
        interval = _region_hull_halfplane_interval(region, c.anchor, c.direction)
        if interval is None:
            continue
        lo, hi = interval
        if hi < 0:
            continue
        if lo <= 0:
            raise Unclearable(f"region touches the anchor of corner {ci}")
        if c.nodes[-1] < lo:
            continue
        d = c.multiplicity
        targets = tuple(lo * (i + 1) / (d + 1) for i in range(d))
        for old_t, new_t in zip(c.nodes, targets):
            if old_t != new_t:
                supports.append((c.anchor, c.direction, min(old_t, new_t), max(old_t, new_t)))
        corners[ci] = Corner(anchor=c.anchor, direction=c.direction, nodes=targets)
    out = Diagram(
        kind=dg.kind,
        vertices=dg.vertices,
        corners=tuple(corners),
        clip_edges=dg.clip_edges,
        bdpq=dg.bdpq,
    )
    return _postcheck(out, "clear_region"), supports
