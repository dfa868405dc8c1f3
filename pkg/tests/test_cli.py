import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from society_bsg.cli import main
from society_bsg.ilp import highs_available
from society_bsg.serialize import read_trace

from conftest import data_path

EXAMPLE = data_path("example1.json")
TWO_VOTERS = data_path("two_voters.json")


def run(capsys, *argv):
    code = main(list(map(str, argv)))
    out, err = capsys.readouterr()
    return code, out, err


class TestUsage:
    def test_no_arguments(self, capsys):
        code, _, err = run(capsys)
        assert code == 1 and "usage" in err

    def test_unknown_flag(self, capsys):
        code, _, err = run(capsys, "diffuse", EXAMPLE, "--bogus")
        assert code == 1 and "usage" in err

    def test_missing_file(self, capsys):
        assert run(capsys, "solve", "/nonexistent.json")[0] == 1

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "society_bsg.cli"], capture_output=True, text=True)
        assert proc.returncode == 1 and "usage" in proc.stderr


class TestDiffuse:
    def test_sync_trace(self, capsys):
        code, out, _ = run(capsys, "diffuse", EXAMPLE, "--mode", "sync")
        assert code == 0
        steps = read_trace(out.splitlines())
        assert list(steps[-1][1]) == [0, 0, 0, 0, 73, 73]

    def test_async_order(self, capsys):
        # ids 2, 3, 5, 1 are the printed labels 3, 4, 6, 2
        code, out, _ = run(capsys, "diffuse", EXAMPLE, "--mode", "async", "--order", "2,3,5,1")
        assert code == 0 and list(read_trace(out.splitlines())[-1][1]) == [31, 0, 0, 0, 115, 0]

    def test_async_explore(self, capsys, tmp_path):
        out_path = tmp_path / "ex.json"
        assert run(capsys, "diffuse", EXAMPLE, "--mode", "async", "-o", out_path)[0] == 0
        doc = json.loads(out_path.read_text())
        assert [31, 0, 0, 0, 115, 0] in doc["finals"] and doc["max_depth"] <= 6
        assert run(capsys, "diffuse", EXAMPLE, "--mode", "async", "--max-states", "2")[0] == 3

    def test_process(self, capsys):
        code, out, _ = run(capsys, "diffuse", EXAMPLE, "--mode", "process", "--rounds", "4")
        assert code == 0 and list(read_trace(out.splitlines())[-1][1]) == [0, 0, 0, 0, 73, 73]


class TestSolve:
    def test_two_voters(self, capsys):
        code, out, _ = run(capsys, "solve", TWO_VOTERS)
        assert code == 0
        assert out.splitlines() == ["cost 1", "plan [[1, 4, 1]]"]

    def test_lp_export_and_import(self, capsys, tmp_path):
        lp = tmp_path / "m.lp"
        code, out, _ = run(capsys, "solve", TWO_VOTERS, "--backend", "lp-export", "--lp-out", lp)
        assert code == 0 and lp.exists() and out.startswith("wrote")
        sol = tmp_path / "s.txt"
        sol.write_text("x_0_0 1\n")
        # an arbitrary assignment fails verification
        assert run(capsys, "solve", TWO_VOTERS, "--backend", "lp-export", "--lp-out", lp, "--solution", sol)[0] == 2
        assert run(capsys, "solve", TWO_VOTERS, "--backend", "lp-export")[0] == 1

    def test_infeasible_budget(self, capsys, tmp_path):
        doc = json.loads(open(TWO_VOTERS).read())
        doc["budget"] = 0
        path = tmp_path / "b0.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run(capsys, "solve", path)
        assert code == 2 and out.strip() == "infeasible"

    def test_node_limit(self, capsys):
        assert run(capsys, "solve", EXAMPLE, "--rule", "borda", "--p", "1", "--node-limit", "1")[0] == 3

    @pytest.mark.skipif(not highs_available(), reason="highspy not installed")
    def test_highs_backend(self, capsys):
        code, out, _ = run(capsys, "solve", TWO_VOTERS, "--backend", "highs")
        assert code == 0 and out.splitlines()[0] == "cost 1"


class TestOtherCommands:
    def test_generate_ic(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert run(capsys, "generate", "ic", "--n", 50, "--seed", 3, "-o", a)[0] == 0
        run(capsys, "generate", "ic", "--n", 50, "--seed", 3, "-o", b)
        assert a.read_text() == b.read_text()
        assert sum(json.loads(a.read_text())["weights"]) == 50

    def test_generate_gadget_and_oracle(self, capsys, tmp_path):
        path = tmp_path / "g.json"
        assert run(capsys, "generate", "gadget", "--vertices", 3, "--edges", "0-1,1-2,0-2", "--k", 2, "-o", path)[0] == 0
        code, out, _ = run(capsys, "oracle", path, "--mode", "optimistic")
        assert code == 0 and out.strip() == "optimistic true"
        assert run(capsys, "generate", "gadget", "--vertices", 3)[0] == 1

    def test_oracle_modes(self, capsys):
        assert run(capsys, "oracle", EXAMPLE, "--mode", "optimistic")[1].strip() == "optimistic true"
        assert run(capsys, "oracle", EXAMPLE, "--mode", "pessimistic")[1].strip() == "pessimistic false"
        code, out, _ = run(capsys, "oracle", TWO_VOTERS)
        assert code == 0 and out.splitlines()[0] == "cost 1"
        assert run(capsys, "oracle", EXAMPLE, "--mode", "optimistic", "--max-states", "2")[0] == 3

    def test_heuristic(self, capsys):
        code, out, _ = run(capsys, "heuristic", TWO_VOTERS, "--method", "greedy", "--search")
        assert code == 0 and "budget 1" in out
        code, out, _ = run(capsys, "heuristic", TWO_VOTERS, "--budget", "0")
        assert code == 2 and "success false" in out
        assert run(capsys, "heuristic", TWO_VOTERS)[0] == 1

    def test_experiment_and_plot(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"m": 3, "n": 20, "count": 2, "methods": ["ilp", "oracle"]}))
        csv_path, svg = tmp_path / "r.csv", tmp_path / "r.svg"
        assert run(capsys, "experiment", cfg, "-o", csv_path)[0] == 0
        assert len(csv_path.read_text().splitlines()) == 5
        code, out, _ = run(capsys, "experiment", cfg)
        assert code == 0 and out.splitlines()[0] == "instance,seed,method,cost,success,wall_ms,plan_digest"
        assert run(capsys, "plot", csv_path, "-o", svg)[0] == 0
        assert ET.parse(svg).getroot().tag.endswith("svg")
        cfg.write_text(json.dumps({"m": 7}))
        assert run(capsys, "experiment", cfg)[0] == 1
