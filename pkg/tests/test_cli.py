import json
import os

import pytest

from atfstudio.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGermCommands:
    def test_clifford_text(self, capsys):
        code, out, _ = run(capsys, "germ", "--p", "1", "--q", "1", "--k", "1", "--a", "1")
        assert code == 0
        assert out.strip() == "1 + min{b1, b2}"

    def test_chekanov_text(self, capsys):
        code, out, _ = run(capsys, "germ", "--p", "1", "--q", "1", "--k", "0", "--a", "1")
        assert code == 0
        assert out.strip() == "1 + b1"

    def test_json_output(self, capsys):
        code, out, _ = run(
            capsys, "germ", "--p", "1", "--q", "0", "--k", "2", "--a", "1", "--json", "--normal-form"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["germ"]["gradients"] == [["1", "0"], ["1", "2"]]
        assert payload["class"] == {"a": "1", "k": 2, "p": 1, "q_class": 0}

    def test_equiv_exit_codes(self, capsys, tmp_path):
        left = tmp_path / "cl.json"
        right = tmp_path / "ch.json"
        run(capsys, "germ", "--p", "1", "--q", "1", "--k", "1", "--a", "1", "-o", str(left))
        run(capsys, "germ", "--p", "1", "--q", "1", "--k", "0", "--a", "1", "-o", str(right))
        code, out, _ = run(capsys, "equiv", "--left", str(left), "--right", str(right))
        assert code == 1  # Clifford vs Chekanov: inequivalent
        code, out, _ = run(capsys, "equiv", "--left", str(left), "--right", str(left))
        assert code == 0

    def test_equiv_witness_printed(self, capsys, tmp_path):
        left = tmp_path / "a.json"
        right = tmp_path / "b.json"
        run(capsys, "germ", "--p", "1", "--q", "1", "--k", "1", "--a", "1", "-o", str(left))
        run(capsys, "germ", "--p", "1", "--q", "0", "--k", "1", "--a", "1", "-o", str(right))
        code, out, _ = run(capsys, "equiv", "--left", str(left), "--right", str(right), "--json")
        assert code == 0
        assert json.loads(out)["witness"] is not None


class TestDiagramCommands:
    def test_new_validate_roundtrip(self, capsys, tmp_path):
        path = tmp_path / "cp2.json"
        code, _, _ = run(capsys, "new", "--preset", "cp2", "--lam", "3", "-o", str(path))
        assert code == 0
        code, out, _ = run(capsys, "validate", str(path))
        assert code == 0 and out.strip() == "valid"

    def test_move_pipeline(self, capsys, tmp_path):
        src = tmp_path / "a.json"
        mid = tmp_path / "b.json"
        out_path = tmp_path / "c.json"
        run(capsys, "new", "--preset", "cp2", "--lam", "3", "-o", str(src))
        code, _, _ = run(capsys, "move", "trade", "--vertex", "0", "-i", str(src), "-o", str(mid))
        assert code == 0
        code, _, _ = run(
            capsys, "move", "mutate", "--corner", "0", "-i", str(mid), "-o", str(out_path)
        )
        assert code == 0
        code, _, _ = run(capsys, "validate", str(out_path))
        assert code == 0

    def test_corner_merge_exit_code(self, capsys, tmp_path):
        src = tmp_path / "sq.json"
        out_path = tmp_path / "x.json"
        run(
            capsys, "new", "--preset", "rectangle", "--width", "1", "--height", "1",
            "--prepare", "-o", str(src),
        )
        code, _, err = run(
            capsys, "move", "cut-change", "--corner", "0", "-i", str(src), "-o", str(out_path)
        )
        assert code == 3
        assert "merge" in err.lower()

    def test_validation_exit_code_on_bad_input(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(
            json.dumps(
                {
                    "kind": "compact",
                    "vertices": [["0", "0"], ["2", "0"], ["1", "1"], ["2", "2"], ["0", "2"]],
                    "corners": [],
                }
            )
        )
        code, _, _ = run(capsys, "validate", str(bad))
        assert code == 2


class TestPresetRoundTrips:
    @pytest.mark.parametrize(
        "new_args,move_args",
        [
            (["--preset", "cp2", "--lam", "3"], ["trade", "--vertex", "0"]),
            (["--preset", "rectangle", "--width", "4", "--height", "1"], ["trade", "--vertex", "0"]),
            (["--preset", "quadrant"], ["trade", "--vertex", "0"]),
            (["--preset", "bdpq", "--d", "2", "--p", "1", "--q", "0"], ["cut-change", "--corner", "0"]),
            (["--preset", "bdpq", "--d", "2", "--p", "3", "--q", "2"], ["slide", "--corner", "0", "--node", "1", "--to", "5"]),
            (["--preset", "cp2", "--lam", "3", "--prepare"], ["mutate", "--corner", "0"]),
        ],
    )
    def test_new_move_validate_chain(self, capsys, tmp_path, new_args, move_args):
        src = tmp_path / "in.json"
        dst = tmp_path / "out.json"
        assert run(capsys, "new", *new_args, "-o", str(src))[0] == 0
        assert run(capsys, "validate", str(src))[0] == 0
        assert run(capsys, "move", *move_args, "-i", str(src), "-o", str(dst))[0] == 0
        assert run(capsys, "validate", str(dst))[0] == 0


class TestWalkAndMarkov:
    def test_walk_csv(self, capsys, tmp_path):
        src = tmp_path / "p.json"
        csv_path = tmp_path / "t.csv"
        run(capsys, "new", "--preset", "cp2", "--lam", "3", "--prepare", "-o", str(src))
        code, _, _ = run(
            capsys, "walk", "--steps", "6", "--edge", "0", "-i", str(src), "--csv", str(csv_path)
        )
        assert code == 0
        lines = csv_path.read_text().strip().splitlines()
        assert lines[0] == "n,label,d,p,q,ell,a_n,digest"
        ps = [int(line.split(",")[3]) for line in lines[1:]]
        assert ps == [1, 1, 2, 5, 13, 34]

    def test_markov_depth_two(self, capsys):
        code, out, _ = run(capsys, "markov", "--depth", "2", "--lambda", "3", "--json")
        assert code == 0
        payload = json.loads(out)
        assert payload["by_depth"]["2"] == [[1, 1, 1], [1, 2, 5]]

    def test_auto_prepare_in_walk(self, capsys, tmp_path):
        src = tmp_path / "raw.json"
        run(capsys, "new", "--preset", "cp2", "--lam", "3", "-o", str(src))
        code, out, _ = run(capsys, "walk", "--steps", "2", "--edge", "0", "-i", str(src), "--json")
        assert code == 0
        assert len(json.loads(out)["steps"]) == 2


class TestEnergyAndProbe:
    def test_energy(self, capsys, tmp_path):
        src = tmp_path / "m.json"
        run(capsys, "new", "--preset", "bdpq", "--d", "2", "--p", "1", "--q", "0", "-o", str(src))
        code, out, _ = run(
            capsys, "energy", "--model", str(src), "--at", "2,1", "--flipped", "0", "--json"
        )
        assert code == 0
        assert json.loads(out) == {"status": "exact", "value": "2"}
        code, out, _ = run(
            capsys, "energy", "--model", str(src), "--at", "2,0", "--flipped", "1", "--json"
        )
        assert json.loads(out) == {"status": "unknown"}

    def test_probe(self, capsys, tmp_path):
        src = tmp_path / "q.json"
        run(capsys, "new", "--preset", "quadrant", "-o", str(src))
        code, out, _ = run(capsys, "probe", "--at", "1,2", "--search", "5", "-i", str(src), "--json")
        assert code == 0
        assert json.loads(out)["bound"] == "1"
        code, out, _ = run(capsys, "probe", "--at", "1,2", "--dir", "0,1", "-i", str(src), "--json")
        assert json.loads(out)["bound"] == "2"


class TestRenderCommand:
    def test_render_deterministic(self, capsys, tmp_path):
        src = tmp_path / "m.json"
        out1 = tmp_path / "a.svg"
        out2 = tmp_path / "b.svg"
        run(capsys, "new", "--preset", "bdpq", "--d", "2", "--p", "1", "--q", "1", "-o", str(src))
        run(
            capsys, "render", "-i", str(src), "--levels", "1/2,1,3/2",
            "--viewport=-1,-3,4,4", "-o", str(out1),
        )
        run(
            capsys, "render", "-i", str(src), "--levels", "1/2,1,3/2",
            "--viewport=-1,-3,4,4", "-o", str(out2),
        )
        assert out1.read_bytes() == out2.read_bytes()
        assert out1.read_bytes().startswith(b"<?xml")
