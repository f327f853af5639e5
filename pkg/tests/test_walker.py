from fractions import Fraction as F

import pytest

from atfstudio.affine import qvec
from atfstudio.diagram import Diagram, corner_type, preset, validate, vertex_kind
from atfstudio.errors import BadParams, InsufficientData, NonDelzantBareVertex, NotACorner
from atfstudio.moves import change_branch_cut
from atfstudio.walker import (
    clockwise_distance,
    corner_p_triple,
    markov_tree,
    prepare,
    step,
    two_corner_report,
    walk,
)


def vieta_tree_triples(depth):
    """Independent oracle: ternary Vieta-jumping tree from (1, 1, 1).

    Child of (a, b, c) mutating slot i replaces that entry by
    3 * (product of the others) - entry.
    """
    levels = {0: [(1, 1, 1)]}
    frontier = [(1, 1, 1)]
    for level in range(1, depth + 1):
        new_frontier = []
        for triple in frontier:
            for i in range(3):
                a, b, c = triple
                vals = [a, b, c]
                others = [vals[j] for j in range(3) if j != i]
                vals[i] = 3 * others[0] * others[1] - vals[i]
                new_frontier.append(tuple(sorted(vals)))
        levels[level] = new_frontier
        frontier = new_frontier
    return levels


class TestPrepare:
    def test_cp2(self):
        dg = prepare(preset("cp2", lam=3))
        assert len(dg.corners) == 3
        assert validate(dg) == []
        for i in range(3):
            ct = corner_type(dg, i)
            assert (ct.d, ct.p) == (1, 1)

    def test_idempotent_up_to_ladder(self):
        dg = prepare(preset("cp2", lam=3))
        again = prepare(dg)
        assert again.vertices == dg.vertices
        assert [c.anchor for c in again.corners] == [c.anchor for c in dg.corners]
        assert [c.direction for c in again.corners] == [c.direction for c in dg.corners]

    def test_non_delzant_rejected(self):
        dg = Diagram.compact([qvec(0, 0), qvec(2, 0), qvec(0, 1)])
        with pytest.raises(NonDelzantBareVertex):
            prepare(dg)

    def test_unbounded_rejected(self):
        with pytest.raises(BadParams):
            prepare(preset("quadrant", cap=4))


class TestStep:
    def test_first_step_extends_bottom_edge(self):
        dg = prepare(preset("cp2", lam=3))
        out, label, ctype, _ = step(dg, 0)
        assert label == 0
        assert (ctype.d, ctype.p, ctype.q_class) == (1, 1, 0)
        assert qvec(-3, 0) in out.vertices and qvec(3, 0) in out.vertices

    def test_no_corner_at_clockwise_end(self):
        dg = preset("cp2", lam=3)
        with pytest.raises(NotACorner):
            step(dg, 0)

    def test_ell_stalls_at_non_isolated_vertex(self):
        # build a two-corner vertex by two flips on the prepared rectangle,
        # then step at it: the edge length must not change
        dg = prepare(preset("rectangle", width=2, height=1))
        origin = dg.corners_at(qvec(0, 0))[0]
        dg = change_branch_cut(dg, origin)
        far = dg.corners_at(qvec(2, 0))[0]
        dg = change_branch_cut(dg, far)
        shared = qvec(1, 1)
        assert len(dg.corners_at(shared)) == 2
        # the edge whose ccw start is the shared vertex
        n = len(dg.vertices)
        edge_idx = next(i for i in range(n) if dg.edge(i)[0] == shared)
        from atfstudio.affine import affine_length

        before = affine_length(*dg.edge(edge_idx))
        out, label, _, _ = step(dg, edge_idx)
        assert label in dg.corners_at(shared)
        # the tracked edge still ends at the same ccw endpoint with equal length
        q_point = dg.edge(edge_idx)[1]
        n2 = len(out.vertices)
        new_idx = next(i for i in range(n2) if out.edge(i)[1] == q_point)
        assert affine_length(*out.edge(new_idx)) == before


class TestWalk:
    def test_zero_steps(self):
        dg = prepare(preset("cp2", lam=3))
        trace = walk(dg, 0, 0)
        assert trace.steps == [] and trace.final is dg

    def test_markov_p_sequence(self):
        dg = prepare(preset("cp2", lam=3))
        trace = walk(dg, 0, 10)
        ps = [s.mutated_type.p for s in trace.steps]
        assert ps == [1, 1, 2, 5, 13, 34, 89, 233, 610, 1597]
        # the recurrence for the path of triples containing a one
        for i in range(2, len(ps)):
            assert ps[i] == 3 * ps[i - 1] - ps[i - 2]

    def test_ell_monotone_bounded(self):
        dg = prepare(preset("cp2", lam=3))
        bound = dg.boundary_affine_length()
        trace = walk(dg, 0, 15)
        ells = [s.ell for s in trace.steps]
        assert all(a <= b for a, b in zip(ells, ells[1:]))
        assert any(a < b for a, b in zip(ells, ells[1:]))
        assert all(e <= bound for e in ells)

    def test_a_n_monotone_and_dominates(self):
        dg = prepare(preset("cp2", lam=3))
        ell0 = F(3)
        trace = walk(dg, 0, 12)
        a_vals = [s.a_n for s in trace.steps]
        assert all(x <= y for x, y in zip(a_vals, a_vals[1:]))
        for s in trace.steps:
            assert s.a_n >= s.ell - ell0

    def test_area_constant_along_walk(self):
        dg = prepare(preset("rectangle", width=4, height=1))
        area = dg.area()
        trace = walk(dg, 0, 8)
        assert not trace.aborted
        assert trace.final.area() == area

    def test_labels_inherited(self):
        dg = prepare(preset("cp2", lam=3))
        trace = walk(dg, 0, 12)
        assert set(trace.labels()) == {0, 2}

    def test_square_walk_aborts_on_persistent_merge(self):
        dg = prepare(preset("rectangle", width=1, height=1))
        trace = walk(dg, 0, 5)
        assert trace.aborted
        assert trace.restart_offsets


class TestClockwiseDistance:
    def test_triangle_distances(self):
        dg = preset("cp2", lam=3)
        # clockwise from (0,0): to (0,3) is 3; to (3,0) is 3 + 3 = 6
        assert clockwise_distance(dg, qvec(0, 0), qvec(0, 3)) == F(3)
        assert clockwise_distance(dg, qvec(0, 0), qvec(3, 0)) == F(6)
        assert clockwise_distance(dg, qvec(0, 0), qvec(0, 0)) == F(0)

    def test_edge_interior_points(self):
        dg = preset("cp2", lam=3)
        assert clockwise_distance(dg, qvec(2, 0), qvec(1, 0)) == F(1)
        assert clockwise_distance(dg, qvec(1, 0), qvec(2, 0)) == F(8)


class TestMarkovTree:
    def test_depth_zero(self):
        tree = markov_tree(F(3), 0)
        assert tree.triple == (1, 1, 1)
        assert tree.children == []

    def test_depth_two_triples(self):
        tree = markov_tree(F(3), 2)
        by_depth = tree.triples_by_depth()
        assert set(by_depth[0]) == {(1, 1, 1)}
        assert set(by_depth[1]) == {(1, 1, 2)}
        assert set(by_depth[2]) == {(1, 1, 1), (1, 2, 5)}

    def test_matches_vieta_oracle_multisets(self):
        depth = 3
        tree = markov_tree(F(3), depth)
        by_depth = tree.triples_by_depth()
        oracle = vieta_tree_triples(depth)
        for level in range(depth + 1):
            assert sorted(by_depth[level]) == sorted(oracle[level])

    def test_markov_equation_holds(self):
        tree = markov_tree(F(3), 3)
        for triples in tree.triples_by_depth().values():
            for (a, b, c) in triples:
                assert a * a + b * b + c * c == 3 * a * b * c


class TestTwoCornerReport:
    def test_cp2_alternation(self):
        dg = prepare(preset("cp2", lam=3))
        trace = walk(dg, 0, 12)
        report = two_corner_report(trace, window=8)
        assert report.eventually_two
        assert report.labels == (0, 2)
        assert report.from_step == 0

    def test_insufficient_data(self):
        dg = prepare(preset("cp2", lam=3))
        trace = walk(dg, 0, 1)
        with pytest.raises(InsufficientData):
            two_corner_report(trace, window=8)

    def test_rectangle_report_emitted(self):
        dg = prepare(preset("rectangle", width=4, height=1))
        trace = walk(dg, 0, 12)
        if len(trace.steps) >= 8:
            report = two_corner_report(trace, window=8)
            assert isinstance(report.eventually_two, bool)
