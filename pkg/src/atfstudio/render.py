"""Deterministic SVG rendering of diagrams.

Output is a pure function of (diagram, spec): fixed element order, fixed
attribute order, and every coordinate printed at exactly 12 decimal places
(the only place the toolkit leaves exact rationals).  Unbounded regions are
clipped to the viewport and hatched along the open sides.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .affine import IMat2, IVec2, QVec2, det, qvec
from .diagram import Diagram, INWARD, OUTWARD
from .errors import BadParams
from .rat import Rat, rat_decimal

SCALE = 100


@dataclass(frozen=True)
class RenderSpec:
    viewport: tuple[Rat, Rat, Rat, Rat]  # xmin, ymin, xmax, ymax
    cuts: bool = True
    nodes: bool = True
    levels: tuple[Rat, ...] = ()
    crease: bool = False

    def __post_init__(self):
        object.__setattr__(self, "viewport", tuple(Fraction(v) for v in self.viewport))
        object.__setattr__(self, "levels", tuple(Fraction(v) for v in self.levels))
        if any(v <= 0 for v in self.levels):
            raise BadParams("level-set values must be positive")


def _mapper(spec: RenderSpec):
    xmin, ymin, xmax, ymax = spec.viewport
    if xmin >= xmax or ymin >= ymax:
        raise BadParams("EmptyViewport: degenerate viewport")

    def to_svg(p: QVec2) -> tuple[str, str]:
        return (
            rat_decimal((p.x - xmin) * SCALE),
            rat_decimal((ymax - p.y) * SCALE),
        )

    width = rat_decimal((xmax - xmin) * SCALE)
    height = rat_decimal((ymax - ymin) * SCALE)
    return to_svg, width, height


def _viewport_halfplanes(spec: RenderSpec):
    xmin, ymin, xmax, ymax = spec.viewport
    return [
        (IVec2(1, 0), -xmin),
        (IVec2(-1, 0), xmax),
        (IVec2(0, 1), -ymin),
        (IVec2(0, -1), ymax),
    ]


def _clip_polygon(points, normal: IVec2, offset: Rat):
    """Sutherland-Hodgman step against <x, normal> + offset >= 0, exact."""
    out = []
    n = len(points)
    for i in range(n):
        cur, nxt = points[i], points[(i + 1) % n]
        vc = cur.x * normal.x + cur.y * normal.y + offset
        vn = nxt.x * normal.x + nxt.y * normal.y + offset
        if vc >= 0:
            out.append(cur)
        if (vc > 0 and vn < 0) or (vc < 0 and vn > 0):
            t = vc / (vc - vn)
            out.append(cur + (nxt - cur).scale(t))
    dedup = []
    for p in out:
        if not dedup or dedup[-1] != p:
            dedup.append(p)
    if dedup and dedup[0] == dedup[-1]:
        dedup.pop()
    return dedup


def _region_polygon(dg: Diagram, spec: RenderSpec):
    """Region ∩ viewport as an exact polygon, plus flags marking which of
    its edges lie on the genuine region boundary (False = open/clip side)."""
    xmin, ymin, xmax, ymax = spec.viewport
    box = [qvec(xmin, ymin), qvec(xmax, ymin), qvec(xmax, ymax), qvec(xmin, ymax)]
    if dg.kind == "compact" and not dg.clip_edges:
        pts = list(dg.vertices)
        for normal, offset in _viewport_halfplanes(spec):
            pts = _clip_polygon(pts, normal, offset)
            if not pts:
                return [], []
    else:
        pts = box
        for hp in dg.halfplanes():
            pts = _clip_polygon(pts, hp.normal, hp.offset)
            if not pts:
                return [], []
    flags = []
    planes = dg.halfplanes()
    for i in range(len(pts)):
        a, b = pts[i], pts[(i + 1) % len(pts)]
        mid = (a + b).scale(Fraction(1, 2))
        on_real = any(hp.value(mid) == 0 for hp in planes)
        flags.append(on_real)
    return pts, flags


def _ray_clip_param(origin: QVec2, w, constraints):
    """Largest t >= 0 keeping origin + t*w inside all (normal, offset)."""
    best = None
    for normal, offset in constraints:
        a = w.x * normal.x + w.y * normal.y
        b = origin.x * normal.x + origin.y * normal.y + offset
        if a >= 0:
            continue
        t = Fraction(-b, a)
        if t < 0:
            return Fraction(0)
        if best is None or t < best:
            best = t
    return best


def _constraints(dg: Diagram, spec: RenderSpec):
    cons = [(hp.normal, hp.offset) for hp in dg.halfplanes()]
    cons.extend(_viewport_halfplanes(spec))
    return cons


def render_svg(dg: Diagram, spec: RenderSpec) -> str:
    to_svg, width, height = _mapper(spec)
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
    ]

    pts, flags = _region_polygon(dg, spec)
    if pts:
        coords = " ".join("%s,%s" % to_svg(p) for p in pts)
        parts.append(
            f'<polygon points="{coords}" fill="#f5f1e8" stroke="none" id="region"/>'
        )
        for i in range(len(pts)):
            a, b = pts[i], pts[(i + 1) % len(pts)]
            ax, ay = to_svg(a)
            bx, by = to_svg(b)
            if flags[i]:
                parts.append(
                    f'<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" '
                    f'stroke="#222222" stroke-width="2" id="boundary-{i}"/>'
                )
            else:
                parts.append(
                    f'<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" '
                    f'stroke="#bbbbbb" stroke-width="1" stroke-dasharray="2,6" id="open-{i}"/>'
                )

    if spec.crease and dg.kind == "bdpq":
        params = dg.bdpq
        w = params.eigendirection()
        t = _ray_clip_param(qvec(0, 0), w, _constraints(dg, spec))
        if t is None:
            t = Fraction(10 ** 6)
        if t > 0:
            ax, ay = to_svg(qvec(0, 0))
            bx, by = to_svg(qvec(t * w.x, t * w.y))
            parts.append(
                f'<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" '
                f'stroke="#c0c0c0" stroke-width="1" stroke-dasharray="1,4" id="crease"/>'
            )

    for li, value in enumerate(sorted(spec.levels)):
        for seg_id, seg in enumerate(_level_set_segments(dg, spec, value)):
            (a, b) = seg
            ax, ay = to_svg(a)
            bx, by = to_svg(b)
            parts.append(
                f'<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" '
                f'stroke="#7a7a7a" stroke-width="1" id="level-{li}-{seg_id}"/>'
            )

    if spec.cuts:
        for ci, (a, b) in enumerate(_cut_segments(dg, spec)):
            ax, ay = to_svg(a)
            bx, by = to_svg(b)
            parts.append(
                f'<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" '
                f'stroke="#b03030" stroke-width="2" stroke-dasharray="6,4" id="cut-{ci}"/>'
            )

    if spec.nodes:
        xmin, ymin, xmax, ymax = spec.viewport
        r = min(xmax - xmin, ymax - ymin) * Fraction(3, 200)
        for ni, pos in enumerate(_node_positions(dg)):
            for seg_id, (dx, dy) in enumerate(((1, 1), (1, -1))):
                a = qvec(pos.x - r * dx, pos.y - r * dy)
                b = qvec(pos.x + r * dx, pos.y + r * dy)
                ax, ay = to_svg(a)
                bx, by = to_svg(b)
                parts.append(
                    f'<line x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" '
                    f'stroke="#b03030" stroke-width="2" id="node-{ni}-{seg_id}"/>'
                )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _node_positions(dg: Diagram):
    out = []
    if dg.kind == "bdpq":
        w = dg.bdpq.eigendirection()
        for t in dg.bdpq.nodes:
            out.append(qvec(t * w.x, t * w.y))
        return out
    for c in dg.corners:
        out.extend(c.node_positions())
    return out


def _cut_segments(dg: Diagram, spec: RenderSpec):
    segs = []
    if dg.kind == "bdpq":
        params = dg.bdpq
        w = params.eigendirection()
        if params.cut_side == OUTWARD:
            start = qvec(params.nodes[0] * w.x, params.nodes[0] * w.y)
            t = _ray_clip_param(start, w, _viewport_halfplanes(spec))
            if t is not None and t > 0:
                segs.append((start, qvec(start.x + t * w.x, start.y + t * w.y)))
        else:
            end = qvec(params.nodes[-1] * w.x, params.nodes[-1] * w.y)
            segs.append((qvec(0, 0), end))
        return segs
    for c in dg.corners:
        segs.append((c.anchor, c.cut_end()))
    return segs


def _level_set_segments(dg: Diagram, spec: RenderSpec, value: Rat):
    """Level set of the displacement-energy field in the model's own chart:
    a polyline with one bend on the node ray."""
    if dg.kind != "bdpq":
        return []
    params = dg.bdpq
    p, q, d = params.p, params.q, params.d
    bend = qvec(value, value * Fraction(q, p))
    cons = _constraints(dg, spec)
    segs = []
    if params.cut_side == OUTWARD:
        up, down = IVec2(0, 1), IVec2(0, -1)
    else:
        # upper branch follows the inverse shear image of the vertical
        mat_inv = IMat2(1 - d * p * q, d * p * p, -d * q * q, d * p * q + 1)
        up = mat_inv.apply(IVec2(0, 1))
        down = IVec2(0, -1)
    for w in (up, down):
        t = _ray_clip_param(bend, w, cons)
        if t is None:
            t = Fraction(10 ** 6)
        if t > 0:
            segs.append((bend, qvec(bend.x + t * w.x, bend.y + t * w.y)))
    return segs
