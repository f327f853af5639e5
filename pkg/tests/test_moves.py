from fractions import Fraction as F

import pytest

from atfstudio.affine import IVec2, det, qvec, shear_matrix
from atfstudio.diagram import (
    Corner,
    Diagram,
    corner_type,
    diagrams_equal,
    preset,
    validate,
    vertex_kind,
)
from atfstudio.errors import (
    CornerMerge,
    EigenlineNoExit,
    EpsilonTooLarge,
    HitsNode,
    LeavesRegion,
    NodeOrderViolated,
    NotDelzant,
    Unclearable,
)
from atfstudio.moves import (
    change_branch_cut,
    clear_region,
    clear_region_tracked,
    mutate,
    mutate_with_clearing,
    nodal_slide,
    nodal_trade,
)
from atfstudio.walker import prepare


def global_shear_image(dg: Diagram, corner_id: int) -> Diagram:
    """Closed-form image of a compact diagram under the global shear fixing
    the given corner's eigenline (what a double cut-change produces)."""
    c = dg.corner(corner_id)
    m = shear_matrix(c.direction, c.multiplicity)
    a = c.anchor

    def mapped(x):
        rel = x - a
        return qvec(
            a.x + m.a * rel.x + m.b * rel.y,
            a.y + m.c * rel.x + m.d * rel.y,
        )

    corners = tuple(
        Corner(anchor=mapped(cc.anchor), direction=m.apply(cc.direction), nodes=cc.nodes)
        for cc in dg.corners
    )
    return Diagram.compact([mapped(v) for v in dg.vertices], corners, dg.clip_edges)


class TestNodalTrade:
    def test_quadrant_origin(self):
        dg = preset("quadrant", cap=4)
        origin = list(dg.vertices).index(qvec(0, 0))
        out = nodal_trade(dg, origin)
        assert validate(out) == []
        assert out.corners[0].anchor == qvec(0, 0)
        assert out.corners[0].direction == IVec2(1, 1)
        assert out.corners[0].multiplicity == 1
        assert corner_type(out, 0).p == 1

    def test_cp2_all_three(self):
        dg = preset("cp2", lam=3)
        for i in range(3):
            dg = nodal_trade(dg, i)
        assert validate(dg) == []
        assert len(dg.corners) == 3
        assert dg.vertices == preset("cp2", lam=3).vertices  # shape unchanged

    def test_occupied_vertex_rejected(self):
        dg = nodal_trade(preset("cp2", lam=3), 0)
        with pytest.raises(NotDelzant):
            nodal_trade(dg, 0)

    def test_epsilon_too_large(self):
        dg = preset("cp2", lam=3)
        with pytest.raises(EpsilonTooLarge):
            nodal_trade(dg, 0, epsilon=F(3, 2))  # the eigenray exits at 3/2


class TestNodalSlide:
    def test_slide_without_crossings(self):
        dg = prepare(preset("cp2", lam=3))
        out, record = nodal_slide(dg, 0, 0, F(1, 2), tracked=[qvec(2, 2)])
        assert record.crossed_points == ()
        assert out.corners[0].nodes == (F(1, 2),)
        assert validate(out) == []

    def test_bdpq_crossing_reported(self):
        # sliding the single node across its base point is reported
        dg = preset("bdpq", d=1, p=2, q=1, nodes=(F(1),))
        x_a = qvec(3, F(3, 2))  # on the node ray, parameter 3/2
        out, record = nodal_slide(dg, 0, 0, F(2), tracked=[x_a])
        assert record.crossed_points == (x_a,)
        assert out.bdpq.nodes == (F(2),)

    def test_point_off_support_not_reported(self):
        dg = preset("bdpq", d=1, p=2, q=1, nodes=(F(1),))
        out, record = nodal_slide(dg, 0, 0, F(2), tracked=[qvec(7, F(7, 2))])
        assert record.crossed_points == ()

    def test_node_order_violated(self):
        dg = preset("bdpq", d=2, p=1, q=0)  # nodes 1, 2
        with pytest.raises(NodeOrderViolated):
            nodal_slide(dg, 0, 0, F(3))

    def test_hits_node(self):
        dg = preset("bdpq", d=2, p=1, q=0)
        with pytest.raises(HitsNode):
            nodal_slide(dg, 0, 0, F(2))

    def test_leaves_region(self):
        dg = prepare(preset("cp2", lam=3))
        with pytest.raises(LeavesRegion):
            nodal_slide(dg, 0, 0, F(5))

    def test_polygon_never_changes(self):
        dg = prepare(preset("cp2", lam=3))
        out, _ = nodal_slide(dg, 0, 0, F(1, 2))
        assert out.vertices == dg.vertices
        assert out.corners[0].anchor == dg.corners[0].anchor
        assert out.corners[0].direction == dg.corners[0].direction


class TestChangeBranchCut:
    def test_bdpq_outward_inward_toggle(self):
        dg = preset("bdpq", d=2, p=1, q=1)
        flipped = change_branch_cut(dg, 0)
        assert flipped.bdpq.cut_side == "inward"
        assert flipped.bdpq.nodes == dg.bdpq.nodes
        back = change_branch_cut(flipped, 0)
        assert diagrams_equal(back, dg)  # exact involution on the model

    def test_compact_flip_preserves_area_boundary_nodes(self):
        dg = prepare(preset("cp2", lam=3))
        out = change_branch_cut(dg, 0)
        assert validate(out) == []
        assert out.area() == dg.area()
        assert out.boundary_affine_length() == dg.boundary_affine_length()
        assert sum(c.multiplicity for c in out.corners) == sum(
            c.multiplicity for c in dg.corners
        )

    def test_compact_flip_fixes_node_positions(self):
        dg = prepare(preset("cp2", lam=3))
        out = change_branch_cut(dg, 0)
        old_nodes = sorted((p.x, p.y) for p in dg.corners[0].node_positions())
        new_nodes = sorted((p.x, p.y) for p in out.corners[0].node_positions())
        assert old_nodes == new_nodes

    def test_compact_double_flip_is_global_shear(self):
        # the second change undoes the first up to the closed-form global
        # shear along the eigenline; all decorations return exactly
        dg = prepare(preset("cp2", lam=3))
        twice = change_branch_cut(change_branch_cut(dg, 0), 0)
        assert diagrams_equal(twice, global_shear_image(dg, 0))
        assert twice.corners[0] == dg.corners[0]

    def test_unflipped_corner_types_preserved(self):
        dg = prepare(preset("cp2", lam=3))
        before = [corner_type(dg, i) for i in (1, 2)]
        out = change_branch_cut(dg, 0)
        after = [corner_type(out, i) for i in (1, 2)]
        assert before == after

    def test_corner_merge_detected(self):
        # square: the (1,1)-eigenline from one corner exits at the opposite
        # corner with the same eigenline
        dg = prepare(preset("rectangle", width=1, height=1))
        origin = [i for i, c in enumerate(dg.corners) if c.anchor == qvec(0, 0)][0]
        with pytest.raises(CornerMerge):
            change_branch_cut(dg, origin)

    def test_no_exit_on_unbounded(self):
        dg = nodal_trade(preset("quadrant", cap=4), 0)
        with pytest.raises(EigenlineNoExit):
            change_branch_cut(dg, 0)

    def test_old_anchor_straightens_for_traded_corner(self):
        dg = nodal_trade(preset("cp2", lam=3), 0)
        out = change_branch_cut(dg, 0)
        # (0,0) disappears into the interior of the long bottom edge
        assert qvec(0, 0) not in out.vertices
        assert qvec(-3, 0) in out.vertices and qvec(3, 0) in out.vertices

    def test_horizontal_cut_shear_matches_matrix(self):
        # a horizontal cut at a consistent vertex shears the top half of the
        # plane by [[1,-1],[0,1]] and straightens the old anchor
        dg = Diagram.compact(
            [qvec(0, 0), qvec(0, -2), qvec(4, -2), qvec(4, 4)],
            corners=(Corner(anchor=qvec(0, 0), direction=IVec2(1, 0), nodes=(F(1),)),),
        )
        assert validate(dg) == []
        m = shear_matrix(IVec2(1, 0), 1)
        assert m.rows() == ((1, -1), (0, 1))
        out = change_branch_cut(dg, 0)
        assert validate(out) == []
        # lower half fixed, upper vertex sheared by the matrix, old anchor
        # straightened into the left edge
        assert m.apply(qvec(4, 4)) == qvec(0, 4)
        assert set(out.vertices) == {qvec(0, -2), qvec(4, -2), qvec(4, 0), qvec(0, 4)}
        # the corner re-anchored across the region with its node fixed
        c = out.corners[0]
        assert c.anchor == qvec(4, 0)
        assert c.direction == IVec2(-1, 0)
        assert c.node_positions() == (qvec(1, 0),)


class TestMutate:
    def test_cp2_bottom_edge_extends(self):
        dg = prepare(preset("cp2", lam=3))
        out, record = mutate(dg, 0)
        assert validate(out) == []
        assert qvec(-3, 0) in out.vertices and qvec(3, 0) in out.vertices

    def test_double_mutation_affinely_equivalent(self):
        dg = prepare(preset("cp2", lam=3))
        once, _ = mutate(dg, 0)
        twice, _ = mutate(once, 0)
        expect = global_shear_image(dg, 0)
        assert twice.vertices == expect.vertices
        assert twice.area() == dg.area()

    def test_bdpq_mutation_is_toggle_plus_slides(self):
        dg = preset("bdpq", d=2, p=1, q=0)
        out, record = mutate(dg, 0)
        assert out.bdpq.cut_side == "inward"
        eps = out.bdpq.nodes[0]
        assert out.bdpq.nodes == (eps, 2 * eps)

    def test_area_and_multiplicity_conserved(self):
        dg = prepare(preset("rectangle", width=4, height=1))
        out, _ = mutate(dg, 0)
        assert out.area() == dg.area()
        assert sum(c.multiplicity for c in out.corners) == 4

    def test_mutation_epsilon_too_large(self):
        dg = prepare(preset("cp2", lam=3))
        with pytest.raises(EpsilonTooLarge):
            mutate(dg, 0, epsilon=F(10))

    @pytest.mark.parametrize(
        "name,params",
        [("cp2", {"lam": 3}), ("rectangle", {"width": 4, "height": 1})],
    )
    def test_isolated_mutation_strictly_extends_fixed_edge(self, name, params):
        from atfstudio.affine import affine_length

        dg = prepare(preset(name, **params))
        # mutate the corner at the clockwise end (ccw start) of edge 0
        corner = dg.corners_at(dg.edge(0)[0])[0]
        q_point = dg.edge(0)[1]
        before = affine_length(*dg.edge(0))
        out, _ = mutate(dg, corner)
        n = len(out.vertices)
        new_idx = next(i for i in range(n) if out.edge(i)[1] == q_point)
        assert affine_length(*out.edge(new_idx)) > before


class TestClearRegion:
    def test_bdpq_probe_strip(self):
        dg = preset("bdpq", d=2, p=1, q=0, nodes=(F(1), F(2)))
        region = [qvec(0, F(1, 2)), qvec(5, F(1, 2)), qvec(5, -F(1, 2)), qvec(0, -F(1, 2))]
        out = clear_region(dg, region)
        assert out.bdpq.cut_side == "outward"
        assert all(t > 5 for t in out.bdpq.nodes)

    def test_disjoint_region_is_identity(self):
        dg = preset("bdpq", d=2, p=1, q=0)
        region = [qvec(1, 5), qvec(2, 5), qvec(2, 6), qvec(1, 6)]
        out = clear_region(dg, region)
        assert diagrams_equal(out, dg)

    def test_region_containing_anchor_unclearable(self):
        dg = prepare(preset("cp2", lam=3))
        region = [qvec(-F(1, 2), -F(1, 2)), qvec(F(1, 2), -F(1, 2)), qvec(F(1, 2), F(1, 2)), qvec(-F(1, 2), F(1, 2))]
        with pytest.raises(Unclearable):
            clear_region(dg, region)

    def test_compact_clear_slides_inward(self):
        dg = prepare(preset("cp2", lam=3))
        # region around the midpoint of corner 0's eigenray
        region = [qvec(F(3, 4), F(3, 4)), qvec(F(5, 4), F(5, 4)), qvec(F(5, 4), F(3, 4))]
        out, supports = clear_region_tracked(dg, region)
        assert validate(out) == []
        assert out.corners[0].nodes[-1] < F(3, 4)

    def test_fibre_marker_invariance(self):
        # a tracked point off every slide support is never reported
        dg = preset("bdpq", d=2, p=1, q=0, nodes=(F(1), F(2)))
        region = [qvec(0, F(1, 2)), qvec(5, F(1, 2)), qvec(5, -F(1, 2)), qvec(0, -F(1, 2))]
        _, supports = clear_region_tracked(dg, region)
        off_support = qvec(F(1, 2), 7)
        for anchor, v, lo, hi in supports:
            rel = off_support - anchor
            assert det(v.as_q(), rel) != 0 or not (lo <= rel.x / v.x <= hi)
