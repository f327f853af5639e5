from fractions import Fraction as F
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atfstudio.affine import IMat2, IVec2, complete_basis, det, qvec
from atfstudio.diagram import (
    DELZANT,
    HOSTS_CORNERS,
    NON_DELZANT_BARE,
    Corner,
    Diagram,
    corner_type,
    diagram_from_json,
    diagram_to_json,
    diagrams_equal,
    isolate,
    preset,
    q_class_of,
    validate,
    vertex_kind,
)
from atfstudio.errors import BadParams, NotACorner, NotCoprime, NotIsolated
from atfstudio.moves import change_branch_cut, nodal_trade
from atfstudio.walker import prepare


class TestPresets:
    @pytest.mark.parametrize(
        "name,params",
        [
            ("cp2", {"lam": 3}),
            ("cp2", {"lam": F(5, 2)}),
            ("quadrant", {"cap": 4}),
            ("rectangle", {"width": 4, "height": 1}),
            ("bdpq", {"d": 1, "p": 1, "q": 0}),
            ("bdpq", {"d": 2, "p": 1, "q": 0}),
            ("bdpq", {"d": 1, "p": 2, "q": 5}),
            ("bdpq", {"d": 3, "p": 5, "q": 3, "cut_side": "inward"}),
        ],
    )
    def test_presets_valid(self, name, params):
        assert validate(preset(name, **params)) == []

    def test_cp2_all_delzant(self):
        dg = preset("cp2", lam=3)
        for i in range(3):
            assert vertex_kind(dg, i)[0] == DELZANT

    def test_bdpq_t_star_s2_model(self):
        dg = preset("bdpq", d=2, p=1, q=0)
        assert dg.bdpq.d == 2 and dg.bdpq.p == 1 and dg.bdpq.q == 0

    def test_bdpq_coprime_enforced(self):
        preset("bdpq", d=1, p=2, q=5)  # gcd(2, 5) = 1: fine
        with pytest.raises(NotCoprime):
            preset("bdpq", d=1, p=2, q=4)

    def test_unknown_preset(self):
        with pytest.raises(BadParams):
            preset("pentagon")


class TestValidate:
    def test_cut_leaving_region(self):
        # corner whose eigenray exits through the anchoring edge immediately
        dg = Diagram.compact(
            [qvec(0, 0), qvec(3, 0), qvec(0, 3)],
            corners=(Corner(anchor=qvec(0, 0), direction=IVec2(1, -1), nodes=(F(1, 4),)),),
        )
        kinds = {v.kind for v in validate(dg)}
        assert "CutLeavesRegion" in kinds or "NodeOutsideRegion" in kinds

    def test_bdpq_not_coprime_surfaces_as_violation(self):
        dg = Diagram(
            kind="bdpq",
            bdpq=preset("bdpq", d=1, p=1, q=0).bdpq.__class__(
                d=1, p=2, q=4, cut_side="outward", nodes=(F(1),)
            ),
        )
        assert any(v.kind == "NotCoprime" for v in validate(dg))

    def test_node_order_violation(self):
        dg = Diagram.compact(
            [qvec(0, 0), qvec(3, 0), qvec(0, 3)],
            corners=(Corner(anchor=qvec(0, 0), direction=IVec2(1, 1), nodes=(F(1), F(1, 2))),),
        )
        assert any(v.kind == "BadNodeOrder" for v in validate(dg))

    def test_crossing_cuts(self):
        dg = Diagram.compact(
            [qvec(0, 0), qvec(4, 0), qvec(4, 4), qvec(0, 4)],
            corners=(
                Corner(anchor=qvec(1, 0), direction=IVec2(0, 1), nodes=(F(2),)),
                Corner(anchor=qvec(0, 1), direction=IVec2(1, 0), nodes=(F(2),)),
            ),
        )
        assert any(v.kind == "CutsCross" for v in validate(dg))

    def test_nonconvex_rejected(self):
        dg = Diagram.compact([qvec(0, 0), qvec(2, 0), qvec(1, 1), qvec(2, 2), qvec(0, 2)])
        assert any(v.kind == "NotConvex" for v in validate(dg))


class TestVertexKind:
    def test_traded_vertex_hosts_corner(self):
        dg = nodal_trade(preset("cp2", lam=3), 0)
        anchor = dg.vertices[0]
        kind, hosted = vertex_kind(dg, 0)
        assert kind == HOSTS_CORNERS
        assert hosted == [0]
        assert dg.corners[0].anchor == anchor

    def test_non_delzant_bare(self):
        # the (0,1)-vertex of this triangle has edge basis of determinant 2
        dg = Diagram.compact([qvec(0, 0), qvec(2, 0), qvec(0, 1)])
        idx = list(dg.vertices).index(qvec(0, 1))
        assert vertex_kind(dg, idx)[0] == NON_DELZANT_BARE
        idx_ok = list(dg.vertices).index(qvec(2, 0))
        assert vertex_kind(dg, idx_ok)[0] == DELZANT

    def test_quadrant_clip_vertices_not_tradeable(self):
        dg = preset("quadrant", cap=4)
        idx_origin = list(dg.vertices).index(qvec(0, 0))
        assert vertex_kind(dg, idx_origin)[0] == DELZANT
        idx_fake = list(dg.vertices).index(qvec(4, 4))
        assert vertex_kind(dg, idx_fake)[0] == NON_DELZANT_BARE


class TestCornerType:
    def test_bdpq_inward_origin_corner(self):
        # with u1 = (0,-1), u2 = (1,0), v = (p,q): p = det(u1,v), q = det(u2,v)
        for (d, p, q) in [(1, 1, 0), (2, 1, 0), (1, 2, 1), (3, 5, 2), (2, 5, 4)]:
            dg = preset("bdpq", d=d, p=p, q=q, cut_side="inward")
            ct = corner_type(dg, 0)
            assert (ct.d, ct.p, ct.q_class) == (d, p, q_class_of(q, p))

    def test_bdpq_outward_has_no_corner(self):
        dg = preset("bdpq", d=1, p=2, q=1)
        with pytest.raises(NotACorner):
            corner_type(dg, 0)

    def test_traded_cp2_origin_is_1_1_0(self):
        dg = nodal_trade(preset("cp2", lam=3), 0)
        ct = corner_type(dg, 0)
        assert (ct.d, ct.p, ct.q_class) == (1, 1, 0)

    def test_invariant_under_basis_completion_choice(self):
        # shifting u2 by multiples of u1 shifts q by multiples of p
        for (d, p, q) in [(1, 3, 2), (2, 5, 3), (1, 4, 1)]:
            u1 = IVec2(0, -1)
            v = IVec2(p, q)
            u2 = complete_basis(u1)
            for shift in range(-4, 5):
                u2_alt = u2 + shift * u1
                assert det(u1, u2_alt) == 1
                q_alt = det(u2_alt, v)
                assert q_class_of(q_alt, p) == q_class_of(q, p)

    def test_invariant_under_global_unimodular_and_translation(self):
        dg = prepare(preset("cp2", lam=3))
        base_types = [corner_type(dg, i) for i in range(3)]
        mat = IMat2(2, 1, 1, 1)  # det 1
        shift = qvec(F(7, 3), -2)
        verts = [mat.apply(v) + shift for v in dg.vertices]
        corners = tuple(
            Corner(
                anchor=mat.apply(c.anchor) + shift,
                direction=mat.apply(c.direction),
                nodes=c.nodes,
            )
            for c in dg.corners
        )
        moved = Diagram.compact(verts, corners)
        assert validate(moved) == []
        assert [corner_type(moved, i) for i in range(3)] == base_types

    def test_delzant_vertex_is_not_a_corner(self):
        dg = preset("cp2", lam=3)
        with pytest.raises(Exception):
            corner_type(dg, 0)


def two_corner_vertex_diagram():
    """Rectangle with two flips landing both corners on the same vertex."""
    dg = prepare(preset("rectangle", width=2, height=1))
    origin = list(dg.vertices).index(qvec(0, 0))
    c0 = vertex_kind(dg, origin)[1][0]
    dg = change_branch_cut(dg, c0)  # re-anchors c0 at (1, 1)
    hosted = dg.corners_at(qvec(1, 1))
    assert hosted == [c0]
    far = dg.corners_at(qvec(2, 0))[0]
    dg = change_branch_cut(dg, far)  # re-anchors the (2,0)-corner at (1, 1) too
    assert len(dg.corners_at(qvec(1, 1))) == 2
    return dg


class TestIsolate:
    def test_already_isolated_identity(self):
        dg = prepare(preset("cp2", lam=3))
        assert isolate(dg, 0) is dg

    def test_two_corner_vertex_separates(self):
        dg = two_corner_vertex_diagram()
        ids = dg.corners_at(qvec(1, 1))
        target = ids[0]
        out = isolate(dg, target)
        assert validate(out) == []
        assert out.corners_at(out.corner(target).anchor) == [target]

    def test_corner_type_requires_isolation(self):
        dg = two_corner_vertex_diagram()
        ids = dg.corners_at(qvec(1, 1))
        with pytest.raises(NotIsolated):
            corner_type(dg, ids[0])
        out = isolate(dg, ids[0])
        corner_type(out, ids[0])  # now well-defined

    def test_bdpq_is_isolated_by_construction(self):
        dg = preset("bdpq", d=2, p=1, q=0, cut_side="inward")
        assert isolate(dg, 0) is dg


class TestJsonRoundTrip:
    @pytest.mark.parametrize(
        "dg",
        [
            preset("cp2", lam=3),
            preset("quadrant", cap=4),
            preset("bdpq", d=2, p=3, q=2),
            preset("bdpq", d=2, p=3, q=2, cut_side="inward"),
            prepare(preset("cp2", lam=F(7, 2))),
        ],
    )
    def test_round_trip(self, dg):
        again = diagram_from_json(diagram_to_json(dg))
        assert diagrams_equal(dg, again)
        assert again.digest() == dg.digest()

    def test_rationals_as_strings(self):
        text = diagram_to_json(prepare(preset("cp2", lam=3)))
        assert '"3/8"' in text
