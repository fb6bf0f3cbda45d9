import json
import math
from pathlib import Path

import pytest

from kloosterlab.harness import identity, sweeps
from kloosterlab.harness.calibration import (
    CalibrationStore,
    MissingCalibration,
    calibrate,
    next_pow2,
)
from kloosterlab.harness.reports import RatioRecord, make_record, write_reports
from kloosterlab.harness.rng import rng_for
from kloosterlab.harness.targets import all_target_names, get_target, next_prime


def test_next_pow2():
    assert next_pow2(0.3) == 0.5
    assert next_pow2(1.0) == 1.0
    assert next_pow2(1.1) == 2.0
    assert next_pow2(0.0) == 1.0


def test_rng_is_order_independent():
    a = rng_for(7, "x", 1, 2).random(4)
    rng_for(7, "other", 5).random(10)
    b = rng_for(7, "x", 1, 2).random(4)
    assert (a == b).all()
    c = rng_for(8, "x", 1, 2).random(4)
    assert not (a == c).all()


def test_next_prime():
    assert next_prime(1000) == 1009
    assert next_prime(2) == 2
    assert next_prime(10**4) == 10007


def test_calibration_store_roundtrip(tmp_path):
    path = tmp_path / "c.json"
    store = CalibrationStore(path)
    with pytest.raises(MissingCalibration):
        store.get("t-bound")
    entry = calibrate(store, "jcount-average", cap=60, epsilon=0.05, seed=1)
    assert entry["constant"] >= entry["max_ratio"]
    blob1 = path.read_bytes()
    # identical inputs leave the file byte-identical
    calibrate(store, "jcount-average", cap=60, epsilon=0.05, seed=1)
    assert path.read_bytes() == blob1
    again = CalibrationStore(path)
    assert again.constant("jcount-average") == entry["constant"]
    # a different cap rewrites the entry
    calibrate(again, "jcount-average", cap=80, epsilon=0.05, seed=1)
    assert again.get("jcount-average")["cap"] == 80


def test_calibrate_cap_validation(tmp_path):
    store = CalibrationStore(tmp_path / "c.json")
    with pytest.raises(ValueError):
        calibrate(store, "t-bound", cap=4000)
    with pytest.raises(ValueError):
        calibrate(store, "t-bound", cap=1)
    with pytest.raises(KeyError):
        calibrate(store, "no-such-target", cap=100)


def test_all_targets_have_grids_and_calibrate_small(tmp_path):
    store = CalibrationStore(tmp_path / "c.json")
    for name in all_target_names():
        entry = calibrate(store, name, cap=40, epsilon=0.05, seed=1)
        assert entry["constant"] > 0


def _tiny_config(tmp_path, store_path, workers=1):
    return sweeps.SweepConfig(
        seed=11, epsilon=0.05, workers=workers, weights="rademacher",
        calibration=str(store_path), out=str(tmp_path / "out"),
        blocks=[
            {"target": "jcount-small-k", "q_min": 20, "q_max": 80,
             "q_count": 6, "k_exponents": [0.5, 1.0]},
            {"target": "type1-a",
             "moduli": [97, 60], "exponents": [[0.5, 0.5], [0.0, 1.0]],
             "samples": 2},
            {"target": "t-bound", "q_max": 60, "count": 25},
        ])


def test_sweep_requires_calibration(tmp_path):
    store = CalibrationStore(tmp_path / "c.json")
    cfg = _tiny_config(tmp_path, store.path)
    with pytest.raises(MissingCalibration) as exc:
        sweeps.run_sweep(cfg, name="x")
    assert "jcount-small-k" in str(exc.value)


def test_sweep_deterministic_across_workers(tmp_path):
    store = CalibrationStore(tmp_path / "c.json")
    for name in ("jcount-small-k", "type1-a", "t-bound"):
        calibrate(store, name, cap=100, epsilon=0.05, seed=1)
    cfg1 = _tiny_config(tmp_path / "a", store.path, workers=1)
    cfg2 = _tiny_config(tmp_path / "b", store.path, workers=2)
    sweeps.run_sweep(cfg1, name="run")
    sweeps.run_sweep(cfg2, name="run")
    for ext in ("csv", "json"):
        b1 = (Path(cfg1.out) / f"run.{ext}").read_bytes()
        b2 = (Path(cfg2.out) / f"run.{ext}").read_bytes()
        assert b1 == b2
    # and a repeat run is byte-identical too
    sweeps.run_sweep(cfg1, name="run2")
    assert (Path(cfg1.out) / "run2.csv").read_bytes() == \
        (Path(cfg1.out) / "run.csv").read_bytes()


def test_sweep_toml_roundtrip(tmp_path):
    store = CalibrationStore(tmp_path / "c.json")
    calibrate(store, "t-bound", cap=60, epsilon=0.05, seed=1)
    cfg_text = f"""
seed = 5
epsilon = 0.05
workers = 1
weights = "ones"
calibration = "{store.path}"
out = "{tmp_path / 'rep'}"

[[sweep]]
target = "t-bound"
q_max = 40
count = 10
"""
    path = tmp_path / "cfg.toml"
    path.write_text(cfg_text)
    cfg = sweeps.parse_config(path)
    records, summary = sweeps.run_sweep(cfg, name="toml")
    assert len(records) == 10
    assert summary["t-bound"]["violated"] == 0
    payload = json.loads((tmp_path / "rep" / "toml.json").read_text())
    assert payload["schema_version"] == 1
    assert len(payload["records"]) == 10


def test_unknown_config_keys_rejected(tmp_path):
    path = tmp_path / "bad.toml"
    path.write_text("seed = 1\nbogus = 2\n")
    with pytest.raises(ValueError, match="bogus"):
        sweeps.parse_config(path)
    path.write_text("""
[[sweep]]
target = "t-bound"
q_max = 40
bad_key = 3
""")
    cfg = sweeps.parse_config(path)
    with pytest.raises(ValueError, match="bad_key"):
        sweeps.expand_points(cfg)


def test_unknown_target_rejected():
    with pytest.raises(KeyError):
        sweeps.SweepConfig(blocks=[{"target": "nope"}])


def test_skipped_records_name_precondition(tmp_path):
    store = CalibrationStore(tmp_path / "c.json")
    calibrate(store, "set-incomplete-r1", cap=60, epsilon=0.05, seed=1)
    cfg = sweeps.SweepConfig(
        seed=3, workers=1, calibration=str(store.path),
        out=str(tmp_path / "out"),
        blocks=[{"target": "set-incomplete-r1", "primes_near": [101],
                 "k_exponents": [0.9]}])
    records, summary = sweeps.run_sweep(cfg, name="skip")
    assert records and all(r.status == "skipped" for r in records)
    assert all(r.reason == "K >= p^(1/r)" for r in records)


def test_empty_grid_passes(tmp_path):
    store = CalibrationStore(tmp_path / "c.json")
    calibrate(store, "t-bound", cap=60, epsilon=0.05, seed=1)
    cfg = sweeps.SweepConfig(
        calibration=str(store.path), out=str(tmp_path / "out"),
        blocks=[{"target": "t-bound", "q_max": 40, "count": 0}])
    records, summary = sweeps.run_sweep(cfg, name="empty")
    assert records == []


def test_report_layout(tmp_path):
    recs = [make_record("t-bound", lhs=1.0, rhs=2.0, q=10, M=1, N=2, K=3,
                        sample=0),
            RatioRecord("t-bound", q=11, status="skipped", reason="why")]
    recs.sort(key=lambda r: r.sort_key())
    csv_path, json_path = write_reports(recs, tmp_path, "r", {"seed": 0})
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "target,q,M,N,K,r,c,a,variant,sample,lhs,rhs,ratio,status,reason"
    assert lines[1].startswith("t-bound,10,1,2,3,,,,,0,1.0,2.0,0.5,ok,")
    assert lines[2].startswith("t-bound,11,,,,,,,,,,,,skipped,why")


def test_identity_suite_pass_and_fault_detection():
    results = identity.run_identity_suite(120)
    assert results and all(r.passed for r in results)
    faulted = identity.run_identity_suite(60, fault="weil")
    bad = [r for r in faulted if r.name == "weil"]
    assert bad and not bad[0].passed
    # scope filter and tiny-budget edge
    only = identity.run_identity_suite(120, scope="counting")
    assert only and all(r.scope == "counting" for r in only)
    assert identity.run_identity_suite(1) == []


def test_corner_trend_non_increasing(tmp_path):
    # mean measured ratio at the square-root-range corner decays in p;
    # the exponent offset delta comes from the calibration file
    import numpy as np

    store = CalibrationStore(tmp_path / "c.json")
    delta = calibrate(store, "set-type1-corner", cap=100)["constant"]
    spec = get_target("set-type1-corner")
    means = []
    for anchor in (1000, 10000, 100000):
        pts = spec.grid({"primes_near": [anchor], "samples": 32})
        ratios = [spec.evaluate(pt, 1, 0.05, delta, "ones").ratio for pt in pts]
        means.append(float(np.mean(ratios)))
    assert all(means[i + 1] <= means[i] for i in range(len(means) - 1)), means


def test_cli_smoke(tmp_path, capsys):
    from kloosterlab import cli

    assert cli.main(["eval", "kloosterman", "-m", "1", "-n", "1", "-q", "49",
                     "--both"]) == 0
    assert cli.main(["count", "j", "-q", "12", "-a", "1", "-K", "3",
                     "-r", "6", "-c", "5"]) == 0
    assert cli.main(["divisor", "--X", "1000", "--q", "7", "--a", "2"]) == 0
    assert cli.main(["moments", "--p-min", "101", "--p-max", "101",
                     "--n-rule", "pow:0.5", "--r", "2", "--alpha", "2"]) == 0
    store = tmp_path / "c.json"
    assert cli.main(["calibrate", "--target", "t-bound", "--cap", "60",
                     "--file", str(store)]) == 0
    cfg = tmp_path / "cfg.toml"
    cfg.write_text(f"""
calibration = "{store}"
out = "{tmp_path / 'rep'}"

[[sweep]]
target = "t-bound"
q_max = 30
count = 5
""")
    assert cli.main(["sweep", "--config", str(cfg), "--name", "cli"]) == 0
    assert (tmp_path / "rep" / "cli.csv").exists()
    capsys.readouterr()
