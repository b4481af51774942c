import json

import numpy as np
import pytest

from conftest import observable_from_basis

from fockborn.cli import main
from fockborn.linalg import ProjectorFamily
from fockborn.report import run_equivalence, run_simulate, run_verify
from fockborn.representation import ObservableSpec
from fockborn.scenario import Scenario, Tolerances, bundled_scenarios, load_scenario


def commuting_scenario():
    return Scenario(
        dim=2,
        observable_a=observable_from_basis(np.eye(2), [5.0, 6.0]),
        observable_psi=observable_from_basis(np.eye(2), [0.0, 1.0], prefix="p"),
        initial_outcome="p0",
        fock_cutoff=3,
        trials=1000,
        seed=4,
        tolerances=Tolerances(),
    )


def corrupted_scenario():
    # test hook: bypass family validation to inject non-orthogonal projectors
    v1 = np.array([1.0, 0.0], dtype=complex)
    v2 = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2)
    family = ProjectorFamily.__new__(ProjectorFamily)
    family.projectors = (np.outer(v1, v1.conj()), np.outer(v2, v2.conj()))
    family.dim = 2
    broken = ObservableSpec.__new__(ObservableSpec)
    broken.labels = ("b0", "b1")
    broken.values = np.array([0.0, 1.0])
    broken.family = family
    good = observable_from_basis(np.eye(2), [0.0, 1.0], prefix="p")
    return Scenario(
        dim=2,
        observable_a=broken,
        observable_psi=good,
        initial_outcome="p0",
        fock_cutoff=2,
        trials=100,
        seed=4,
        tolerances=Tolerances(),
    )


class TestRunners:
    def test_verify_commuting_scenario_passes(self):
        report = run_verify(commuting_scenario(), seed=4)
        assert report.overall_pass
        names = {r.check_name for r in report.records}
        assert "born/three-way-agreement" in names
        assert "pue/counting-invariance" in names
        assert "conjugation/cross-term-averages" in names
        assert "second-quantization/derivation" in names

    def test_verify_commuting_scenario_born_is_delta(self):
        scenario = commuting_scenario()
        from fockborn.fock import FockSpace
        from fockborn.verifier import InvariantAverage, born_probability

        space = FockSpace(2, scenario.fock_cutoff)
        avg = InvariantAverage(scenario.observable_psi, 0, 3, space)
        probs = [born_probability(avg, scenario.observable_a, n) for n in range(2)]
        assert np.allclose(probs, [1.0, 0.0], atol=1e-12)

    def test_corrupted_scenario_yields_failing_records_not_crashes(self):
        report = run_verify(corrupted_scenario(), seed=4)
        assert not report.overall_pass
        failing = [r for r in report.records if not r.passed]
        assert failing
        for record in failing:
            assert record.check_name
            assert record.anchor != "" or record.detail != ""

    def test_corrupted_scenario_simulate_and_all_degrade_gracefully(self):
        from fockborn.report import run_all

        report, csv_text = run_simulate(corrupted_scenario(), seed=4)
        assert not report.overall_pass
        assert csv_text.startswith("n,outcome_label,count,frequency")
        report_all, _ = run_all(corrupted_scenario(), seed=4)
        assert not report_all.overall_pass
        assert any(not r.passed for r in report_all.records)

    def test_equivalence_commuting_pair(self):
        report = run_equivalence(commuting_scenario(), seed=4)
        assert report.overall_pass
        verdict = next(r for r in report.records if r.check_name == "equivalence/commutation")
        assert "not equivalent" not in verdict.detail

    def test_equivalence_rotated_pair_reports_witness(self):
        scenario = load_scenario(bundled_scenarios()["hadamard_d2"])
        report = run_equivalence(scenario, seed=4)
        assert report.overall_pass
        names = {r.check_name for r in report.records}
        assert "intertwiner/probability-witness" in names
        verdict = next(r for r in report.records if r.check_name == "equivalence/commutation")
        assert "not equivalent" in verdict.detail

    def test_hadamard_scenario_probabilities_are_half_half(self):
        scenario = load_scenario(bundled_scenarios()["hadamard_d2"])
        from fockborn.fock import FockSpace
        from fockborn.verifier import InvariantAverage, born_probability

        space = FockSpace(2, scenario.fock_cutoff)
        avg = InvariantAverage(
            scenario.observable_psi, scenario.initial_index, scenario.fock_cutoff, space
        )
        probs = [born_probability(avg, scenario.observable_a, n) for n in range(2)]
        assert np.allclose(probs, [0.5, 0.5], atol=1e-12)
        report = run_verify(scenario, seed=4)
        assert report.overall_pass

    def test_simulate_degenerate_distribution_is_exact(self):
        scenario = commuting_scenario()
        report, csv_text = run_simulate(scenario, seed=4)
        assert report.overall_pass
        record = next(
            r for r in report.records if r.check_name == "simulate/born-frequency/a0"
        )
        assert record.measured_value == 0.0
        assert csv_text.startswith("n,outcome_label,count,frequency")


class TestCli:
    @pytest.mark.parametrize("name", ["hadamard_d2", "random_d3"])
    def test_all_command_passes_and_is_byte_reproducible(self, tmp_path, name):
        config = str(bundled_scenarios()[name])
        outputs = []
        for run in range(2):
            out = tmp_path / f"report_{run}.json"
            code = main(["all", "--config", config, "--output", str(out)])
            assert code == 0
            outputs.append(out.read_bytes())
            trace = out.with_name(out.stem + ".traces.csv")
            outputs.append(trace.read_bytes())
        assert outputs[0] == outputs[2]
        assert outputs[1] == outputs[3]

    def test_verify_both_bundles_within_time_budget(self):
        import time

        start = time.perf_counter()
        for path in bundled_scenarios().values():
            report = run_verify(load_scenario(path), seed=1)
            assert report.overall_pass
        assert time.perf_counter() - start < 60.0

    def test_report_schema(self, tmp_path, capsys):
        config = str(bundled_scenarios()["hadamard_d2"])
        code = main(["verify", "--config", config])
        captured = capsys.readouterr()
        assert code == 0
        data = json.loads(captured.out)
        assert data["overall_pass"] is True
        assert data["command"] == "verify"
        assert data["provenance"]["seed"] == 20260809
        for record in data["records"]:
            assert set(record) == {
                "check_name",
                "anchor",
                "measured_value",
                "threshold",
                "pass",
                "detail",
            }
        # stderr carries the human-readable table
        assert "overall: pass" in captured.err

    def test_seed_flag_overrides_config(self, tmp_path, capsys):
        config = str(bundled_scenarios()["hadamard_d2"])
        code = main(["simulate", "--config", config, "--seed", "99"])
        captured = capsys.readouterr()
        assert code == 0
        assert json.loads(captured.out)["provenance"]["seed"] == 99

    def test_env_seed_is_lowest_priority(self, tmp_path, capsys, monkeypatch):
        data = json.loads(
            (bundled_scenarios()["hadamard_d2"]).read_text()
        )
        del data["seed"]
        config = tmp_path / "no_seed.json"
        config.write_text(json.dumps(data))
        monkeypatch.setenv("FOCKBORN_SEED", "1234")
        code = main(["simulate", "--config", str(config)])
        captured = capsys.readouterr()
        assert code == 0
        assert json.loads(captured.out)["provenance"]["seed"] == 1234

    def test_parse_failure_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{")
        assert main(["verify", "--config", str(bad)]) == 2
        assert "fockborn:" in capsys.readouterr().err

    def test_tiny_tolerance_scale_fails_with_exit_1(self, tmp_path, capsys):
        config = str(bundled_scenarios()["hadamard_d2"])
        code = main(["verify", "--config", config, "--tolerance-scale", "1e-12"])
        capsys.readouterr()
        assert code == 1
