import json

import pytest

from ftspanner.cli import main
from ftspanner.graphs import Graph, read_graph, write_graph


@pytest.fixture
def cycle_file(tmp_path):
    path = tmp_path / "c4.txt"
    write_graph(Graph(4, [(i, (i + 1) % 4, 1.0) for i in range(4)]), str(path))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestBuild:
    def test_cycle_build(self, capsys, cycle_file, tmp_path):
        spanner_out = str(tmp_path / "h.txt")
        code, out, _ = run(capsys, "build", "--input", cycle_file,
                           "--k", "2", "--f", "0", "--mode", "vertex",
                           "--spanner-out", spanner_out, "--format", "json")
        assert code == 0
        report = json.loads(out)
        assert report["config"]["schema"] == "ftspanner/1"
        assert report["edges_added"] == 3
        assert len(report["trace"]) == 4
        assert read_graph(spanner_out).m == 3

    def test_trace_out(self, capsys, cycle_file, tmp_path):
        trace_out = tmp_path / "trace.json"
        code, _, _ = run(capsys, "build", "--input", cycle_file,
                         "--k", "2", "--f", "1", "--trace-out", str(trace_out))
        assert code == 0
        doc = json.loads(trace_out.read_text())
        assert any(r["decision"] == "added" and r["witness"] for r in doc["trace"])

    def test_json_reports_byte_identical(self, capsys, cycle_file, tmp_path):
        args = ("build", "--input", cycle_file, "--k", "2", "--f", "1",
                "--format", "json")
        _, first, _ = run(capsys, *args)
        _, second, _ = run(capsys, *args)
        assert first == second


class TestVerify:
    def test_pass_and_fail_exit_codes(self, capsys, cycle_file, tmp_path):
        spanner_out = str(tmp_path / "h.txt")
        run(capsys, "build", "--input", cycle_file, "--k", "2", "--f", "0",
            "--spanner-out", spanner_out)
        code, _, _ = run(capsys, "verify", "--input", cycle_file,
                         "--spanner", spanner_out, "--f", "0", "--k", "2",
                         "--method", "exhaustive")
        assert code == 0
        code, out, _ = run(capsys, "verify", "--input", cycle_file,
                           "--spanner", spanner_out, "--f", "1", "--k", "2",
                           "--method", "exhaustive", "--format", "json")
        assert code == 1
        assert json.loads(out)["result"]["verdict"] == "fail"

    def test_truncated_blowup_fails_exhaustive(self, capsys, tmp_path):
        inst_out = str(tmp_path / "inst.txt")
        code, _, _ = run(capsys, "generate", "--k", "2", "--f", "4",
                         "--mode", "vertex", "--base", "heawood",
                         "--instance-out", inst_out)
        assert code == 0
        blown = read_graph(inst_out)
        truncated = blown.subgraph_with_edges(sorted(blown.edge_keys())[:-1])
        trunc_path = str(tmp_path / "trunc.txt")
        write_graph(truncated, trunc_path)
        code, out, _ = run(capsys, "verify", "--input", inst_out,
                           "--spanner", trunc_path, "--f", "4", "--k", "2",
                           "--method", "exhaustive", "--format", "json")
        assert code == 1
        assert json.loads(out)["result"]["counterexample"] is not None

    def test_work_cap_usage_error(self, capsys, cycle_file):
        code, _, err = run(capsys, "verify", "--input", cycle_file,
                           "--spanner", cycle_file, "--f", "2", "--k", "2",
                           "--method", "exhaustive", "--work-cap", "1")
        assert code == 2 and "exceeds cap" in err


class TestGenerate:
    def test_heawood_instance(self, capsys, tmp_path):
        code, out, _ = run(capsys, "generate", "--k", "2", "--f", "4",
                           "--mode", "vertex", "--base", "heawood",
                           "--format", "json")
        assert code == 0
        report = json.loads(out)
        assert report["edges"] == 84
        assert report["criticality"]["verdict"] == "pass"

    def test_seeded_random_base_reproducible(self, capsys, tmp_path):
        args = ("generate", "--k", "2", "--f", "2", "--mode", "edge",
                "--target-n", "40", "--seed", "7", "--format", "json")
        _, first, _ = run(capsys, *args)
        _, second, _ = run(capsys, *args)
        assert first == second
        assert json.loads(first)["criticality"]["verdict"] == "pass"

    def test_usage_error_without_base_or_target(self, capsys):
        code, _, err = run(capsys, "generate", "--k", "2", "--f", "2")
        assert code == 2 and "error" in err


class TestAnalyze:
    def test_walks_blockades_density(self, capsys, cycle_file, tmp_path):
        spanner_out = str(tmp_path / "h.txt")
        run(capsys, "build", "--input", cycle_file, "--k", "2", "--f", "0",
            "--spanner-out", spanner_out)
        code, out, _ = run(capsys, "analyze", "--input", cycle_file,
                           "--walks", "2", "--closed-lengths", "4",
                           "--blockades", "--k", "3", "--phi", "0.25", "--f", "1",
                           "--density", "--spanner", spanner_out,
                           "--format", "json")
        assert code == 0
        report = json.loads(out)
        assert report["closed_walks"]["4"] == 32
        assert report["blockades"]["level_sizes"]["2"] == 4
        assert report["walk_stats"]["total_walks"] == 16
        assert report["density"]["spanner_edges"] == 3

    def test_regularize(self, capsys, cycle_file):
        code, out, _ = run(capsys, "analyze", "--input", cycle_file,
                           "--regularize", "--format", "json")
        assert code == 0
        report = json.loads(out)
        assert report["regularize"]["cases"] == ["a"]
        assert report["regularize"]["retention"] == 1.0

    def test_requires_an_action(self, capsys, cycle_file):
        code, _, err = run(capsys, "analyze", "--input", cycle_file)
        assert code == 2


class TestBench:
    def test_backend_comparison_table(self, capsys):
        code, out, _ = run(capsys, "bench", "--n", "24", "--p", "0.3",
                           "--seed", "5", "--f-list", "1", "--repeat", "1",
                           "--format", "json")
        assert code == 0
        report = json.loads(out)
        from ftspanner.engine import available_backends

        assert {r["backend"] for r in report["timings"]} == set(available_backends())
        sizes = {r["spanner_edges"] for r in report["timings"]}
        assert len(sizes) == 1  # same spanner from every backend


class TestErrors:
    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "build", "--input", "/nonexistent.txt",
                           "--k", "2", "--f", "0")
        assert code == 2 and "error" in err

    def test_malformed_graph(self, capsys, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("2 1\n0 0 1.0\n")
        code, _, err = run(capsys, "build", "--input", str(bad),
                           "--k", "2", "--f", "0")
        assert code == 2 and "self-loop" in err

    def test_unknown_flag(self, capsys):
        assert run(capsys, "build", "--nope")[0] == 2
