"""Displacement-energy computations.

* Germs of almost toric fibres: pointed piecewise-linear functions
  b |-> a + min over gradients g of <g, b>.  The fibre with k nodes on the
  inner side of its base point in the (d, p, q) half-plane model has
  gradients {(1, 0), (1 - k*p*q, k*p^2)}.
* Normal form and GL(2, Z)-equivalence of such germs, plus an exhaustive
  brute-force witness search used as an independent oracle.
* Probe upper bounds on displacement energy (exact rational arithmetic,
  entry must be integrally transversal, half-length rule for finite
  probes).
* The exact energy field on the half-plane model through its cut-changed
  presentations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .affine import IMat2, IVec2, QVec2, basis_change_to, det, qvec
from .diagram import Diagram, OUTWARD
from .errors import (
    BadParams,
    NotAModelGerm,
    NotIntegrallyTransversal,
    OutOfRegion,
    Unclearable,
)
from .moves import clear_region_tracked, _ray_param_of_point
from .rat import Rat, rat, rat_str


@dataclass(frozen=True)
class PLGerm:
    """base + min over gradients of <g, b>; gradients pairwise distinct."""

    base: Rat
    gradients: tuple[QVec2, ...]

    def __post_init__(self):
        object.__setattr__(self, "base", Fraction(self.base))
        grads = []
        for g in self.gradients:
            if isinstance(g, IVec2):
                g = g.as_q()
            elif not isinstance(g, QVec2):
                g = qvec(*g)
            if g not in grads:
                grads.append(g)
        grads.sort(key=lambda g: (g.x, g.y))
        if not grads:
            raise BadParams("a germ needs at least one gradient")
        object.__setattr__(self, "gradients", tuple(grads))

    def __call__(self, b: QVec2) -> Rat:
        return self.base + min(g.dot(b) for g in self.gradients)

    def integral_gradients(self) -> tuple[IVec2, ...]:
        out = []
        for g in self.gradients:
            if g.x.denominator != 1 or g.y.denominator != 1:
                raise NotAModelGerm(f"non-integral gradient {g}")
            out.append(IVec2(g.x.numerator, g.y.numerator))
        return tuple(out)

    def compose(self, phi: IMat2) -> "PLGerm":
        """The germ b |-> self(phi @ b); gradients pull back by phi^T."""
        pt = phi.transpose()
        return PLGerm(self.base, tuple(pt.apply(g) for g in self.integral_gradients()))

    def to_dict(self):
        return {
            "a": rat_str(self.base),
            "gradients": [[rat_str(g.x), rat_str(g.y)] for g in self.gradients],
        }

    @staticmethod
    def from_dict(d) -> "PLGerm":
        return PLGerm(rat(d["a"]), tuple(qvec(rat(g[0]), rat(g[1])) for g in d["gradients"]))


@dataclass(frozen=True)
class GermClass:
    """Normal form (a, k, p, q_class); p and q_class carry no information
    when k = 0."""

    a: Rat
    k: int
    p: int | None = None
    q_class: int | None = None

    def to_dict(self):
        out = {"a": rat_str(self.a), "k": self.k}
        if self.k >= 1:
            out["p"] = self.p
            out["q_class"] = self.q_class
        return out


@dataclass(frozen=True)
class EnergyValue:
    """Exact value, an upper bound, or unknown (crease points are left open)."""

    status: str  # "exact" | "upper_bound" | "unknown"
    value: Rat | None = None

    def to_dict(self):
        out = {"status": self.status}
        if self.value is not None:
            out["value"] = rat_str(self.value)
        return out


def germ_of_fibre(p: int, q: int, k: int, a: Rat) -> PLGerm:
    """Displacement-energy germ of the fibre with k inner nodes in the
    (d, p, q) model at area parameter a: a + min{b1, b1(1-kpq) + b2*k*p^2}."""
    if not (isinstance(p, int) and p >= 1):
        raise BadParams(f"p must be a positive integer, got {p!r}")
    if not isinstance(q, int):
        raise BadParams(f"q must be an integer, got {q!r}")
    if gcd(p, abs(q)) != 1:
        raise BadParams(f"gcd({p}, {q}) != 1")
    if not (isinstance(k, int) and k >= 0):
        raise BadParams(f"k must be a nonnegative integer, got {k!r}")
    a = Fraction(a)
    if a <= 0:
        raise BadParams("the area parameter a must be positive")
    g1 = qvec(1, 0)
    g2 = qvec(1 - k * p * q, k * p * p)
    return PLGerm(a, (g1, g2))


def germ_normal_form(g: PLGerm) -> GermClass:
    """Recover (a, k, p, q_class) from a germ in the model family.

    One gradient: k = 0 (the gradient must be primitive, as in the family).
    Two gradients: p and k come from the gradient difference and the
    determinant; q_class from canonicalizing one gradient to (1, 0) by a
    unimodular change and reading the other modulo k*p^2.
    """
    grads = g.integral_gradients()
    if len(grads) == 1:
        if not grads[0].is_primitive():
            raise NotAModelGerm(f"single gradient {grads[0]} is not primitive")
        return GermClass(a=g.base, k=0)
    if len(grads) != 2:
        raise NotAModelGerm(f"{len(grads)} gradients")
    h1, h2 = grads
    if not (h1.is_primitive() and h2.is_primitive()):
        raise NotAModelGerm("gradients must be primitive")
    diff = h1 - h2
    m = diff.content()  # k*p in the family
    dd = abs(h1.cross(h2))  # k*p^2 in the family
    if dd == 0 or m == 0 or dd % m != 0:
        raise NotAModelGerm("gradient pair does not match the family")
    p = dd // m
    if p < 1 or m % p != 0:
        raise NotAModelGerm("determinant is not k*p^2 for integral k")
    k = m // p
    if k * p != m or k * p * p != dd:
        raise NotAModelGerm("inconsistent (k, p) extraction")
    w = basis_change_to(h1)
    s_vec = w.apply(h2)
    s, t = s_vec.x, s_vec.y
    if t < 0:
        t = -t
    if t != k * p * p:
        raise NotAModelGerm("canonicalized pair has the wrong determinant")
    if (1 - s) % (k * p) != 0:
        raise NotAModelGerm("gradient offset is not a multiple of k*p")
    q_rep = (1 - s) // (k * p)
    if p > 1 and gcd(p, q_rep % p) != 1:
        raise NotAModelGerm("recovered q is not coprime to p")
    from .diagram import q_class_of

    return GermClass(a=g.base, k=k, p=p, q_class=q_class_of(q_rep, p))


@lru_cache(maxsize=None)
def _unimodular_matrices(entry_bound: int) -> tuple[IMat2, ...]:
    """All integer matrices with entries in [-B, B] and determinant +-1,
    in lexicographic order."""
    rng = range(-entry_bound, entry_bound + 1)
    out = []
    for a in rng:
        for b in rng:
            for c in rng:
                if a == 0:
                    if b * c in (1, -1):  # det = -b*c = -+1, any d works
                        out.extend(IMat2(a, b, c, d) for d in rng)
                    continue
                for target in (1, -1):
                    ad = target + b * c
                    if ad % a == 0 and -entry_bound <= ad // a <= entry_bound:
                        out.append(IMat2(a, b, c, ad // a))
    seen = set()
    unique = []
    for m in sorted(out, key=lambda m: (m.a, m.b, m.c, m.d)):
        key = (m.a, m.b, m.c, m.d)
        if key not in seen:
            seen.add(key)
            unique.append(m)
    return tuple(unique)


def brute_force_equiv(g1: PLGerm, g2: PLGerm, entry_bound: int = 8) -> IMat2 | None:
    """Exhaustive search for unimodular Phi with g1 ∘ Phi == g2 as functions.

    Functions agree exactly iff the bases match and the pulled-back gradient
    set {Phi^T g : g in g1} equals g2's gradient set.  Returns the first
    witness in lexicographic order, or None.
    """
    if g1.base != g2.base:
        return None
    try:
        grads1 = g1.integral_gradients()
        grads2 = set((h.x, h.y) for h in g2.integral_gradients())
    except NotAModelGerm:
        return None
    if len(grads1) != len(grads2):
        return None
    pairs1 = tuple((h.x, h.y) for h in grads1)
    for m in _unimodular_matrices(entry_bound):
        a, b, c, d = m.a, m.b, m.c, m.d
        # Phi^T g = (a*gx + c*gy, b*gx + d*gy)
        ok = True
        for gx, gy in pairs1:
            if (a * gx + c * gy, b * gx + d * gy) not in grads2:
                ok = False
                break
        if ok:
            return m
    return None


def germ_equivalent(
    g1: PLGerm, g2: PLGerm, entry_bound: int = 8, with_witness: bool = False
):
    """Decide GL(2, Z)-equivalence of two germs.

    Both in the model family: equivalent iff a = a' and either k = k' = 0 or
    (k, p, q_class) agree.  Otherwise fall back to the brute-force search.
    Returns (bool, witness | None); the witness is only searched for when
    requested.
    """
    try:
        c1 = germ_normal_form(g1)
        c2 = germ_normal_form(g2)
    except NotAModelGerm:
        w = brute_force_equiv(g1, g2, entry_bound)
        return (w is not None, w)
    if c1.a != c2.a:
        return (False, None)
    if c1.k == 0 and c2.k == 0:
        eq = True
    else:
        eq = (c1.k, c1.p, c1.q_class) == (c2.k, c2.p, c2.q_class)
    if eq and with_witness:
        return (True, brute_force_equiv(g1, g2, entry_bound))
    return (eq, None)


# -- probes -----------------------------------------------------------------


def probe_bound(dg: Diagram, x: QVec2, w: IVec2) -> Rat | None:
    """Upper bound for the displacement energy of the fibre over x from the
    probe through x in direction w.

    The probe enters through the boundary point behind x, must be integrally
    transversal there, and must be clearable of nodes and cuts without any
    slide support sweeping x itself.  Returns the affine distance t from the
    entry when t < L/2 (L = probe length, infinite when the probe never
    exits the true region); None when the probe does not displace x.
    """
    from .diagram import ray_exit

    if not w.is_primitive():
        raise BadParams(f"probe direction must be primitive, got {w}")
    if not dg.contains(x, strict=True):
        raise OutOfRegion(f"{x} is not interior")

    back = ray_exit(dg, x, -w)
    if back is None:
        return None  # no boundary behind: nothing to enter from
    t_entry, entry = back
    loc = dg.true_boundary_edge(entry)
    if loc is None or loc[0] == "vertex":
        raise NotIntegrallyTransversal("probe enters at a vertex or outside the boundary")
    if dg.kind == "bdpq":
        if dg.bdpq.cut_side != OUTWARD and entry == qvec(0, 0):
            raise NotIntegrallyTransversal("probe enters at the model's vertex")
        edge_dir = IVec2(0, 1)
        if dg.bdpq.cut_side != OUTWARD:
            d, p, q = dg.bdpq.d, dg.bdpq.p, dg.bdpq.q
            upper = IVec2(d * p * p, d * p * q + 1)
            if det(upper, entry) == 0 and entry.dot(upper.as_q()) > 0:
                edge_dir = upper
    else:
        edge_dir = dg.edge_direction(loc[1])
    if abs(det(edge_dir, w)) != 1:
        raise NotIntegrallyTransversal(
            f"|det(edge {edge_dir}, probe {w})| = {abs(det(edge_dir, w))}"
        )

    fwd = ray_exit(dg, x, w)
    length = None if fwd is None else t_entry + fwd[0]

    # clearing: the probe chord (or ray) must avoid nodes and cuts, and no
    # node may sweep across x itself
    far = fwd[1] if fwd is not None else _far_point(dg, x, w)
    cleared, supports = clear_region_tracked(dg, [entry, far])
    for anchor, v, lo, hi in supports:
        t = _ray_param_of_point(anchor, v, x)
        if t is not None and lo <= t <= hi:
            raise Unclearable("clearing would slide a node across the probed point")
    _assert_probe_clean(cleared, entry, far)

    if length is not None and 2 * t_entry >= length:
        return None
    return t_entry


def _far_point(dg: Diagram, x: QVec2, w: IVec2) -> QVec2:
    """A point far along an unbounded probe, beyond every node and cut."""
    scale = Fraction(1)
    for c in dg.corners:
        end = c.cut_end()
        scale = max(scale, abs(end.x), abs(end.y))
    if dg.kind == "bdpq":
        for t in dg.bdpq.nodes:
            scale = max(scale, t * max(abs(dg.bdpq.p), abs(dg.bdpq.q), 1))
    scale = 4 * (scale + abs(x.x) + abs(x.y) + 1)
    return QVec2(x.x + scale * w.x, x.y + scale * w.y)


def _assert_probe_clean(dg: Diagram, a: QVec2, b: QVec2):
    """After clearing, no node or cut may meet the probe segment."""
    from .moves import _segment_ray_params
    from .affine import primitive_decompose

    u, total = primitive_decompose(b - a)
    cuts = []
    if dg.kind == "bdpq":
        params = dg.bdpq
        v = params.eigendirection()
        if params.cut_side == OUTWARD:
            cut_lo, cut_hi = params.nodes[0], None
        else:
            cut_lo, cut_hi = Fraction(0), params.nodes[-1]
        cuts.append((qvec(0, 0), v, cut_lo, cut_hi))
    else:
        for c in dg.corners:
            cuts.append((c.anchor, c.direction, Fraction(0), c.nodes[-1]))
    for anchor, v, lo, hi in cuts:
        hit = _segment_ray_params(anchor, v, a, b)
        if hit is None:
            continue
        ts = [hit[1]] if hit[0] == "point" else [hit[1], hit[2]]
        for t in ts:
            if (hi is None and t >= lo) or (hi is not None and lo <= t <= hi):
                raise Unclearable("probe still meets a cut after clearing")


def best_probe_bound(dg: Diagram, x: QVec2, search_bound: int = 5) -> Rat | None:
    """Minimum probe bound over all primitive directions of max-norm at most
    search_bound (both orientations)."""
    if search_bound < 1:
        raise BadParams("search bound must be at least 1")
    best = None
    for wx in range(-search_bound, search_bound + 1):
        for wy in range(-search_bound, search_bound + 1):
            w = IVec2(wx, wy)
            if w.is_zero() or not w.is_primitive():
                continue
            try:
                t = probe_bound(dg, x, w)
            except (NotIntegrallyTransversal, Unclearable):
                continue
            if t is not None and (best is None or t < best):
                best = t
    return best


# -- exact energy on the half-plane model ------------------------------------


def _inverse_flip_matrix(p: int, q: int, k: int) -> IMat2:
    """Inverse of the weight-k cut-change shear of the model."""
    return IMat2(1 - k * p * q, k * p * p, -k * q * q, k * p * q + 1)


def energy_at(model: Diagram, y: QVec2, flipped_k: int) -> EnergyValue:
    """Displacement energy of the fibre over y in the k-fold cut-changed
    presentation of the half-plane model.

    Coordinates: the presentation obtained from the outward half-plane by
    changing the cut at k of the d nodes (the moving half {q*y1 - p*y2 >= 0}
    is sheared).  Off the ray image the energy is the first coordinate of
    the piecewise preimage, exactly; on it the value is left unknown.
    """
    if model.kind != "bdpq":
        raise BadParams("energy_at needs the half-plane model")
    params = model.bdpq
    if not (0 <= flipped_k <= params.d):
        raise BadParams(f"flipped_k must lie in [0, {params.d}]")
    p, q = params.p, params.q
    crease = p * y.y - q * y.x  # det((p, q), y) up to sign convention
    if crease < 0:
        x = _inverse_flip_matrix(p, q, flipped_k).apply(y)
    else:
        x = y
    if x.x <= 0:
        raise OutOfRegion(f"{y} is not interior to the presentation")
    if crease == 0:
        return EnergyValue(status="unknown")
    return EnergyValue(status="exact", value=x.x)


def energy_field(model: Diagram, y: QVec2) -> EnergyValue:
    """Energy in the model's own stored presentation: outward = identity
    chart, inward = the normalized cone chart (upper half sheared there)."""
    if model.kind != "bdpq":
        raise BadParams("energy_field needs the half-plane model")
    params = model.bdpq
    p, q, d = params.p, params.q, params.d
    crease = p * y.y - q * y.x
    if params.cut_side == OUTWARD:
        x = y
    else:
        if crease > 0:
            mat = IMat2(d * p * q + 1, -d * p * p, d * q * q, 1 - d * p * q)
            x = mat.apply(y)
        else:
            x = y
    if x.x <= 0:
        raise OutOfRegion(f"{y} is not interior")
    if crease == 0:
        return EnergyValue(status="unknown")
    return EnergyValue(status="exact", value=x.x)
