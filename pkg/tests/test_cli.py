import json
import math
from pathlib import Path

import pytest

from conefix.cli import main

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def report(out):
    return json.loads(out)


class TestClassify:
    def test_linear_pair_holds(self, capsys):
        code, out, _ = run(
            capsys, "classify", "--scenario", SCENARIOS / "linear-pair.json"
        )
        assert code == 0
        rep = report(out)
        assert rep["scenario"] == "linear-pair"
        jungck, singh = rep["records"]
        assert jungck["holds_on_checked"] is True
        assert jungck["mode"] == "sampled"
        assert jungck["fit"]["feasible"] is True
        assert jungck["fit"]["value"] == 0.5
        assert singh["holds_on_checked"] is True

    def test_below_rate_fails_with_worst_pair(self, capsys):
        code, out, _ = run(
            capsys, "classify", "--scenario", SCENARIOS / "linear-pair-below.json"
        )
        assert code == 2
        rec = report(out)["records"][0]
        assert rec["holds_on_checked"] is False
        assert rec["worst_pair"] is not None
        assert rec["worst_pair"]["slack"] < 0

    def test_dyadic_fit_is_exact(self, capsys):
        code, out, _ = run(
            capsys, "classify", "--scenario", SCENARIOS / "dyadic-chain.json"
        )
        assert code == 0
        rep = report(out)
        assert rep["records"][0]["mode"] == "exhaustive"
        assert rep["records"][0]["fit"]["value"] == 0.5
        assert rep["records"][0]["fit"]["method"] == "coordinate-ratio"

    def test_parameter_bound_message(self, capsys, tmp_path):
        data = json.loads((SCENARIOS / "dyadic-chain.json").read_text())
        data["conditions"] = [{"family": "kannan", "b": 0.6}]
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(data))
        code, _, err = run(capsys, "classify", "--scenario", bad)
        assert code == 1
        assert "conditions[0]" in err
        assert "b must lie in [0, 1/2)" in err

    def test_byte_identical_reports(self, capsys):
        _, first, _ = run(
            capsys, "classify", "--scenario", SCENARIOS / "linear-pair.json"
        )
        _, second, _ = run(
            capsys, "classify", "--scenario", SCENARIOS / "linear-pair.json"
        )
        assert first == second

    def test_variant_flag_changes_the_inequality(self, capsys, tmp_path):
        data = {
            "name": "variant-demo",
            "space": {
                "domain": {"kind": "finite", "count": 2},
                "cone": {"kind": "orthant", "dim": 1},
                "norm": {"kind": "euclidean"},
                "metric": {
                    "kind": "table",
                    "values": [[[0.0], [0.3]], [[0.3], [0.0]]],
                },
            },
            "maps": {
                "s": {"kind": "table", "images": [1, 0]},
                "t": {"kind": "table", "images": [0, 1]},
            },
            "conditions": [{"family": "singh", "a": 0.0, "b": 0.0, "c": 0.3}],
        }
        path = tmp_path / "variant.json"
        path.write_text(json.dumps(data))
        _, classic, _ = run(
            capsys, "classify", "--scenario", path, "--variant", "classic"
        )
        _, printed, _ = run(
            capsys, "classify", "--scenario", path, "--variant", "as-printed"
        )
        rhs_classic = report(classic)["records"][0]["worst_pair"]["rhs"]
        rhs_printed = report(printed)["records"][0]["worst_pair"]["rhs"]
        assert rhs_classic != rhs_printed


class TestSolve:
    def test_linear_pair_certificate(self, capsys, tmp_path):
        code, out, _ = run(
            capsys, "solve",
            "--scenario", SCENARIOS / "linear-pair.json",
            "--out", tmp_path,
        )
        assert code == 0
        rep = report(out)
        assert rep["converged"] is True
        cert = rep["certificate"]
        assert abs(cert["z"][0]) < 1e-7
        assert cert["residual_s"] <= 1e-8
        assert cert["residual_t"] <= 1e-8
        assert cert["accepted"] is True
        assert rep["rate_consistent"] is True
        assert Path(rep["trace_file"]).exists()

    def test_trace_rows_and_roundtrip(self, capsys, tmp_path):
        _, out, _ = run(
            capsys, "solve",
            "--scenario", SCENARIOS / "linear-pair.json",
            "--out", tmp_path,
        )
        rep = report(out)
        lines = Path(rep["trace_file"]).read_text().splitlines()
        header = lines[0].split("\t")
        assert header == ["iter", "x0", "s0", "step_norm", "ratio"]
        assert len(lines) - 1 == rep["iterations"]
        for line in lines[1:]:
            cells = dict(zip(header, line.split("\t")))
            for key in ("x0", "s0", "step_norm"):
                value = float(cells[key])
                assert repr(value) == cells[key]
            if cells["ratio"]:
                assert float(cells["ratio"]) == 0.5
        # geometric halving, written exactly
        first = float(lines[1].split("\t")[1])
        second = float(lines[2].split("\t")[1])
        assert second == first / 2

    def test_max_iter_exhaustion_exits_3(self, capsys, tmp_path):
        data = json.loads((SCENARIOS / "linear-pair.json").read_text())
        data["solver"]["max_iter"] = 3
        path = tmp_path / "short.json"
        path.write_text(json.dumps(data))
        code, out, _ = run(capsys, "solve", "--scenario", path, "--out", tmp_path)
        assert code == 3
        rep = report(out)
        assert rep["converged"] is False
        lines = Path(rep["trace_file"]).read_text().splitlines()
        assert len(lines) - 1 == 3

    def test_missing_preimage_exits_4(self, capsys, tmp_path):
        code, out, _ = run(
            capsys, "solve",
            "--scenario", SCENARIOS / "range-violation.json",
            "--out", tmp_path,
        )
        assert code == 4
        rep = report(out)
        assert rep["error"] == "preimage failure"
        assert rep["breaking_point"] == 1

    def test_finite_chain_solves_to_terminal_point(self, capsys, tmp_path):
        code, out, _ = run(
            capsys, "solve",
            "--scenario", SCENARIOS / "dyadic-chain.json",
            "--out", tmp_path,
        )
        assert code == 0
        rep = report(out)
        assert rep["certificate"]["z"] == 4
        assert rep["certificate"]["accepted"] is True

    def test_solver_section_required(self, capsys, tmp_path):
        data = json.loads((SCENARIOS / "linear-pair.json").read_text())
        del data["solver"]
        path = tmp_path / "nosolver.json"
        path.write_text(json.dumps(data))
        code, _, err = run(capsys, "solve", "--scenario", path)
        assert code == 1
        assert "solver" in err


class TestVerify:
    def test_certified_fixture_all_green(self, capsys):
        code, out, _ = run(
            capsys, "verify", "--scenario", SCENARIOS / "dyadic-chain.json"
        )
        assert code == 0
        rep = report(out)
        assert rep["axioms"]["passed"] is True
        assert rep["axioms"]["exhaustive"] is True
        assert rep["commuting"]["commutes"] is True
        assert rep["commuting"]["mode"] == "exact"
        assert rep["range_inclusion"]["included"] is True

    def test_noncommuting_pair_exits_2_with_witness(self, capsys):
        code, out, _ = run(
            capsys, "verify", "--scenario", SCENARIOS / "noncommuting-affine.json"
        )
        assert code == 2
        rep = report(out)
        assert rep["commuting"]["commutes"] is False
        assert rep["commuting"]["witness"] is not None
        assert rep["commuting"]["deviation"] == 1.0
        assert rep["axioms"]["passed"] is True

    def test_asymmetric_table_reports_cm2(self, capsys):
        code, out, _ = run(
            capsys, "verify", "--scenario", SCENARIOS / "asymmetric-table.json"
        )
        assert code == 2
        rep = report(out)
        assert rep["axioms"]["passed"] is False
        axioms = [v["axiom"] for v in rep["axioms"]["violations"]]
        assert "CM2" in axioms


class TestGenAndEstimate:
    def test_gen_writes_a_verifiable_scenario(self, capsys, tmp_path):
        code, out, _ = run(
            capsys, "gen", "--out", tmp_path, "--seed", "5", "--n", "4", "--m", "2"
        )
        assert code == 0
        written = report(out)["written"]
        code, out, _ = run(capsys, "verify", "--scenario", written)
        assert code == 0
        assert report(out)["axioms"]["exhaustive"] is True

    def test_gen_is_deterministic(self, capsys, tmp_path):
        a_dir = tmp_path / "a"
        b_dir = tmp_path / "b"
        run(capsys, "gen", "--out", a_dir, "--seed", "8", "--name", "twin")
        run(capsys, "gen", "--out", b_dir, "--seed", "8", "--name", "twin")
        assert (a_dir / "twin.json").read_bytes() == (b_dir / "twin.json").read_bytes()

    def test_estimate_k_orthant_is_analytic_one(self, capsys):
        code, out, _ = run(capsys, "estimate-k", "--cone-kind", "orthant", "--dim", "4")
        assert code == 0
        rep = report(out)
        assert rep["value"] == 1.0
        assert rep["is_analytic"] is True

    def test_estimate_k_second_order_sampled(self, capsys):
        code, first, _ = run(
            capsys, "estimate-k",
            "--cone-kind", "second_order", "--dim", "3",
            "--samples", "2000", "--seed", "1",
        )
        assert code == 0
        rep = report(first)
        assert rep["is_analytic"] is False
        assert rep["value"] >= 1.0
        assert math.isfinite(rep["value"])
        _, second, _ = run(
            capsys, "estimate-k",
            "--cone-kind", "second_order", "--dim", "3",
            "--samples", "2000", "--seed", "1",
        )
        assert first == second


class TestErrors:
    def test_missing_scenario_flag(self, capsys):
        code, _, err = run(capsys, "classify")
        assert code == 1
        assert "--scenario" in err

    def test_unknown_subcommand(self, capsys):
        code, _, err = run(capsys, "frobnicate")
        assert code == 1
        assert err.startswith("error:")

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "verify", "--scenario", tmp_path / "ghost.json")
        assert code == 1
        assert "cannot read" in err
