import json

import pandas as pd
import pytest

from regnet_complexity.pipeline import (
    EXIT_INVALID,
    EXIT_INVARIANT,
    EXIT_OK,
    EXIT_TRUNCATED,
    RunConfig,
    RunOutcome,
    execute,
    main,
)


def _names(outcome):
    return sorted(path.name for path in outcome.artifacts)


def test_complexity_command_writes_trace(tmp_path):
    outcome = execute(RunConfig(command="complexity", preset="self_inhibitor", t_max=10, output_dir=tmp_path))
    assert outcome.status == EXIT_OK
    assert _names(outcome) == ["self_inhibitor_trace.csv", "self_inhibitor_trace.json"]
    frame = pd.read_csv(tmp_path / "self_inhibitor_trace.csv")
    assert frame["C"].tolist() == [2] * 10
    summary = json.loads((tmp_path / "self_inhibitor_trace.json").read_text(encoding="utf-8"))
    assert summary["truncation_reason"] is None


def test_atom_dump_is_optional(tmp_path):
    outcome = execute(
        RunConfig(command="complexity", preset="self_inhibitor", t_max=3, output_dir=tmp_path, dump_atoms=True)
    )
    dump = json.loads((tmp_path / "self_inhibitor_atoms.json").read_text(encoding="utf-8"))
    assert outcome.status == EXIT_OK
    assert dump["t"] == 3 and len(dump["atoms"]) == 2


def test_invalid_network_file(tmp_path):
    network = tmp_path / "broken.json"
    network.write_text(json.dumps({"a": "3/2", "K": [[1]], "T": [["1/2"]], "s": [[-1]]}), encoding="utf-8")
    outcome = execute(RunConfig(command="validate", network=network, output_dir=tmp_path))
    assert outcome.status == EXIT_INVALID
    report = json.loads((tmp_path / "broken_validation.json").read_text(encoding="utf-8"))
    assert [v["rule"] for v in report["violations"]] == ["contraction"]
    assert execute(RunConfig(command="complexity", network=network, output_dir=tmp_path)).status == EXIT_INVALID


def test_valid_network_file(tmp_path):
    network = tmp_path / "rotating.json"
    network.write_text(json.dumps({"a": "1/3", "K": [[1]], "T": [["1/5"]], "s": [[-1]]}), encoding="utf-8")
    outcome = execute(RunConfig(command="rotation", network=network, t_max=30, output_dir=tmp_path))
    assert outcome.status == EXIT_OK
    report = json.loads((tmp_path / "rotating_rotation.json").read_text(encoding="utf-8"))
    assert report["exact"] == "1/3"


def test_atom_cap_is_reported_as_truncation(tmp_path):
    outcome = execute(
        RunConfig(command="complexity", preset="negative_2_circuit", a="0.93", t_max=20, max_atoms=3, output_dir=tmp_path)
    )
    assert outcome.status == EXIT_TRUNCATED
    summary = json.loads((tmp_path / "negative_2_circuit_trace.json").read_text(encoding="utf-8"))
    assert summary["truncated"] and "atom cap" in summary["truncation_reason"]


def test_bounds_command(tmp_path):
    outcome = execute(RunConfig(command="bounds", preset="negative_2_circuit", a="1/4", t_max=12, output_dir=tmp_path))
    assert outcome.status == EXIT_OK
    for provenance in ("negative_2_circuit", "general"):
        table = tmp_path / f"negative_2_circuit_bounds_{provenance}.csv"
        assert table.read_text(encoding="utf-8").splitlines()[0] == "t,C,bound,ok"
        bounds = pd.read_csv(table)
        assert not bounds.empty and bounds["ok"].all()
    summary = json.loads((tmp_path / "negative_2_circuit_bounds.json").read_text(encoding="utf-8"))
    by_provenance = {entry["provenance"]: entry for entry in summary["bounds"]}
    assert {"negative-2-circuit", "general"} <= set(by_provenance)
    assert by_provenance["general"]["table"] == "negative_2_circuit_bounds_general.csv"
    assert by_provenance["general"]["ok"] and by_provenance["general"]["first_violation"] is None
    loglog = pd.read_csv(tmp_path / "negative_2_circuit_loglog.csv")
    assert list(loglog.columns) == ["log10_t", "log10_C", "log10_bound"]
    assert len(loglog) == 12


def test_structure_command(tmp_path):
    outcome = execute(RunConfig(command="structure", preset="p53", output_dir=tmp_path))
    assert outcome.status == EXIT_OK
    report = json.loads((tmp_path / "p53_structure.json").read_text(encoding="utf-8"))
    assert {"base": ["p53", "m"], "bundle": ["b", "c"]} in report["base_bundle"]


def test_attractor_command(tmp_path):
    outcome = execute(RunConfig(command="attractor", preset="toggle_switch", t_max=10, x0=("0", "0"), output_dir=tmp_path))
    assert outcome.status == EXIT_OK
    assert _names(outcome) == ["toggle_switch_attractor.json", "toggle_switch_orbit.csv"]
    orbit = pd.read_csv(tmp_path / "toggle_switch_orbit.csv", dtype=str)
    assert list(orbit.columns) == ["t", "x_1", "x_2", "atom"]
    assert len(orbit) == 10
    bad = execute(RunConfig(command="attractor", preset="toggle_switch", x0=("0",), output_dir=tmp_path))
    assert bad.status == EXIT_INVALID


def test_sweep_command(tmp_path):
    outcome = execute(
        RunConfig(
            command="sweep",
            preset="self_inhibitor",
            t_max=6,
            a_values=("1/4", "1/3"),
            threshold_values=("1/5", "1/2"),
            output_dir=tmp_path,
        )
    )
    assert outcome.status == EXIT_OK
    frame = pd.read_csv(tmp_path / "self_inhibitor_sweep.csv", dtype={"a": str, "threshold": str})
    assert len(frame) == 4
    assert frame["a"].tolist() == ["1/4", "1/4", "1/3", "1/3"]
    assert frame["injective"].all()


@pytest.mark.parametrize(
    "run_config",
    [
        RunConfig(command="complexity"),
        RunConfig(command="complexity", preset="lorenz"),
        RunConfig(command="complexity", preset="self_inhibitor", t_max=0),
        RunConfig(command="sweep", network="net.json"),
    ],
)
def test_rejected_invocations(run_config, tmp_path):
    run_config.output_dir = tmp_path
    outcome = execute(run_config)
    assert outcome.status == EXIT_INVALID
    assert outcome.messages and not outcome.artifacts


def test_escalation_keeps_invariant_status():
    outcome = RunOutcome()
    outcome.escalate(EXIT_TRUNCATED)
    outcome.escalate(EXIT_INVARIANT)
    outcome.escalate(EXIT_TRUNCATED)
    assert outcome.status == EXIT_INVARIANT


def test_main_entry_point(tmp_path, capsys):
    status = main(["complexity", "--preset", "circuit", "--dimension", "2", "--signs", "1,-1", "--t-max", "5", "--out", str(tmp_path)])
    assert status == EXIT_OK
    assert "C(5)" in capsys.readouterr().out
    assert (tmp_path / "circuit_trace.csv").exists()


def test_same_seed_reproduces_outputs(tmp_path):
    runs = []
    for name in ("first", "second"):
        out = tmp_path / name
        argv = ["complexity", "--preset", "random", "--dimension", "2", "--seed", "7", "--t-max", "4", "--out", str(out)]
        assert main(argv) in (EXIT_OK, EXIT_TRUNCATED)
        runs.append({path.name: path.read_bytes() for path in sorted(out.iterdir())})
    assert runs[0] and runs[0] == runs[1]
