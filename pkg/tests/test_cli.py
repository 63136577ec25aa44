import json
import math
import subprocess
import sys

import numpy as np
import pytest

from qexpect.cli import (
    COLUMNS,
    ConfigError,
    ExperimentConfig,
    InstanceSpec,
    TrialRecord,
    build_instance,
    format_records,
    load_config,
    loglog_slope,
    main,
    oea_u_uses,
    parse_records,
    run,
    run_trial,
    trial_seed,
)
from qexpect.amp_overlap import overlap_estimate
from qexpect.eea import TailModel
from qexpect.oracles import save_matrix
from qexpect.statevec import DenseUnitary


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_identity_oea_full_confidence():
    records, summary = run(ExperimentConfig(algorithm="oea", trials=5, instance=InstanceSpec("identity")))
    assert summary.empirical_confidence == 1.0
    assert all(r.error == 0 or r.error < 1e-9 for r in records)


@pytest.mark.parametrize("algorithm,instance", [
    ("pea", "rotation"), ("pea_modified", "random-unitary"), ("aea", "bit-flip"),
    ("oea", "random-unitary"), ("eea", "random-hermitian"), ("eea_stage1log", "rotation"),
    ("one_ancilla", "random-unitary"), ("direct_sample", "random-hermitian"),
])
def test_every_algorithm_runs(algorithm, instance):
    tail = TailModel.bounded(2.0, 1.0) if algorithm.startswith("eea") else None
    config = ExperimentConfig(algorithm=algorithm, p=0.1, trials=3, seed=5,
                              instance=InstanceSpec(instance), tail=tail)
    records, summary = run(config)
    assert len(records) == 3 and summary.trials == 3
    for rec in records:
        assert rec.error >= 0 and rec.wall_ms is None


def test_trial_seed_is_counter_based():
    assert trial_seed(1, (0,)) == trial_seed(1, (0,))
    assert len({trial_seed(1, (i,)) for i in range(100)}) == 100
    assert trial_seed(1, (0, 3)) != trial_seed(1, (3,))
    assert 0 <= trial_seed(2**40, (5,)) < 2**63


def test_run_trial_independent_of_order():
    config = ExperimentConfig(algorithm="oea", p=0.1, trials=4, seed=9, instance=InstanceSpec("random-unitary"))
    records, _ = run(config)
    again = run_trial(config, 0.1, 2, (2,))
    assert again == records[2]


def test_workers_do_not_change_output():
    base = ExperimentConfig(algorithm="oea", p=0.1, trials=6, seed=3, instance=InstanceSpec("random-unitary"))
    one, _ = run(base)
    many, _ = run(ExperimentConfig(**{**base.__dict__, "workers": 3}))
    assert format_records(one) == format_records(many)


def test_oea_u_uses_matches_ledger():
    rng = np.random.default_rng(0)
    u = DenseUnitary.random(1, rng)
    from qexpect.oracles import StatePrep
    v = StatePrep(DenseUnitary.random(1, rng))
    for c in (None, 0.9):
        assert overlap_estimate(u, v, 0.1, c, rng).ledger.u_uses == oea_u_uses(0.1, c)


def test_one_ancilla_default_samples_match_oea():
    config = ExperimentConfig(algorithm="one_ancilla", p=0.1, trials=1, instance=InstanceSpec("random-unitary"))
    (rec,), _ = run(config)
    assert rec.u_uses == oea_u_uses(0.1, 0.9)


def test_builtin_instances():
    rng = np.random.default_rng(0)
    inst = build_instance(InstanceSpec("rotation", alpha=0.3), rng)
    assert inst.tail is not None
    fixed = InstanceSpec("random-hermitian", seed=4)
    a, b = build_instance(fixed, np.random.default_rng(1)), build_instance(fixed, np.random.default_rng(2))
    assert np.array_equal(a.hamiltonian, b.hamiltonian)


def test_format_round_trip():
    recs = [TrialRecord(0, 12, 0.5, -0.25, 0.5, 0.0, 0.1, True, 3, 0, 0.0, 7, 2),
            TrialRecord(1, 99, 1 / 3, 0.0, 0.1, 2e-17, 1e-300, False, 1, 4, 0.125, 0, 1, 3.5)]
    for fmt in ("csv", "jsonl"):
        assert parse_records(format_records(recs, fmt), fmt) == recs


def test_empty_records_header_only():
    assert format_records([], "csv") == ",".join(COLUMNS) + "\n"
    assert format_records([], "jsonl") == ""


def test_jsonl_field_names():
    rec = TrialRecord(0, 1, 0.0, 0.0, 0.0, 0.0, 0.0, True, 1, 0, 0.0, 1, 1)
    line = format_records([rec], "jsonl").splitlines()[0]
    assert tuple(json.loads(line)) == COLUMNS


def test_loglog_slope():
    x = np.array([1.0, 2.0, 4.0, 8.0])
    assert loglog_slope(x, 3 / x) == pytest.approx(-1.0)
    assert math.isnan(loglog_slope([1.0], [1.0]))


def test_load_config(tmp_path):
    save_matrix(tmp_path / "A.txt", np.diag([0.5, -0.5]))
    save_matrix(tmp_path / "psi.txt", np.array([1.0, 0.0]))
    path = write(tmp_path, "exp.ini", """
[experiment]
algorithm = eea   ; inline comment
p = 0.1
trials = 2
sweep = 0.2, 0.1

[instance]
hamiltonian = A.txt
state = psi.txt

[tail]
kind = point
""")
    config = load_config(path)
    assert config.algorithm == "eea" and config.sweep == (0.2, 0.1)
    assert config.tail == TailModel.point()
    batches, summary = run(config)
    assert len(batches) == 2
    assert all(r.within_p for batch in batches for r in batch)


@pytest.mark.parametrize("body,line", [
    ("[experiment]\np = abc\n", 2),
    ("[experiment]\nalgorithm = oea\nbogus = 1\n", 3),
    ("[experiment]\n\nc = 1.5\n", 3),
])
def test_config_errors_report_line(tmp_path, body, line):
    with pytest.raises(ConfigError) as err:
        load_config(write(tmp_path, "bad.ini", body))
    assert err.value.line == line


def test_main_exit_codes(tmp_path, capsys):
    assert main(["--algorithm", "oea", "--instance", "identity", "--trials", "2",
                 "--out", str(tmp_path / "o.csv")]) == 0
    assert "within_p=1.0000" in capsys.readouterr().err
    assert main(["--algorithm", "oea", "--p", "2"]) == 2
    assert main(["--config", str(tmp_path / "missing.ini")]) == 2
    ini = write(tmp_path, "inf.ini", "[experiment]\nalgorithm = eea\np = 1e-150\ntrials = 1\n"
                "[instance]\nname = rotation\n[tail]\nkind = polynomial\nbeta = 0\ncoefficient = 1e150\n")
    assert main(["--config", str(ini)]) == 3


def test_main_sweep_files(tmp_path):
    out = tmp_path / "res.csv"
    assert main(["--algorithm", "oea", "--instance", "random-unitary", "--trials", "2",
                 "--sweep", "0.2,0.1", "--out", str(out)]) == 0
    for p in (0.2, 0.1):
        recs = parse_records((tmp_path / f"res_p{p!r}.csv").read_text())
        assert len(recs) == 2


def test_timing_flag(tmp_path):
    out = tmp_path / "t.jsonl"
    main(["--instance", "identity", "--trials", "1", "--timing", "--format", "jsonl", "--out", str(out)])
    (rec,) = parse_records(out.read_text(), "jsonl")
    assert rec.wall_ms is not None and rec.wall_ms >= 0


def test_module_entry_point(tmp_path):
    out = tmp_path / "m.csv"
    proc = subprocess.run([sys.executable, "-m", "qexpect", "--instance", "identity", "--trials", "1",
                           "--out", str(out)], capture_output=True, text=True)
    assert proc.returncode == 0
    assert out.read_text().startswith("trial,seed,")
