"""Sweep configuration and deterministic parallel execution.

A sweep is a list of target blocks; each block expands to grid points,
every point is evaluated by a pure function of (config, seed), and records
are merged by sorted order, so identical (config, seed) produce
byte-identical reports at any worker count.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib  # py >= 3.11
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from kloosterlab.harness import targets as T
from kloosterlab.harness.calibration import CalibrationStore
from kloosterlab.harness.reports import RatioRecord, summarize, write_reports

GLOBAL_KEYS = {"seed", "epsilon", "workers", "weights", "calibration", "out",
               "sweep"}
WEIGHT_SCHEMES = ("rademacher", "ones", "phase")


@dataclass
class SweepConfig:
    seed: int = 1
    epsilon: float = 0.05
    workers: int = 1
    weights: str = "rademacher"
    calibration: str = "calibration.json"
    out: str = "reports"
    blocks: list[dict] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.weights not in WEIGHT_SCHEMES:
            raise ValueError(f"weight scheme must be one of {WEIGHT_SCHEMES}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        for block in self.blocks:
            if "target" not in block:
                raise ValueError("every sweep block needs a target")
            T.get_target(block["target"])  # raises on unknown names


def parse_config(path: "str | Path") -> SweepConfig:
    raw = tomllib.loads(Path(path).read_text())
    unknown = set(raw) - GLOBAL_KEYS
    if unknown:
        raise ValueError(f"unknown config keys {sorted(unknown)}")
    return SweepConfig(
        seed=int(raw.get("seed", 1)),
        epsilon=float(raw.get("epsilon", 0.05)),
        workers=int(raw.get("workers", 1)),
        weights=str(raw.get("weights", "rademacher")),
        calibration=str(raw.get("calibration", "calibration.json")),
        out=str(raw.get("out", "reports")),
        blocks=list(raw.get("sweep", [])),
    )


def expand_points(cfg: SweepConfig) -> list[tuple[str, dict]]:
    """All (target, point) pairs of the configured grids, in block order."""
    jobs = []
    for block in cfg.blocks:
        spec = T.get_target(block["target"])
        for point in spec.grid(block):
            jobs.append((spec.name, point))
    return jobs


def _evaluate_job(args) -> RatioRecord:
    name, point, seed, epsilon, constant, scheme = args
    spec = T.get_target(name)
    return spec.evaluate(point, seed, epsilon, constant, scheme)


def run_sweep(cfg: SweepConfig, store: "CalibrationStore | None" = None,
              name: str = "sweep") -> tuple[list[RatioRecord], dict]:
    """Evaluate every grid point and write the CSV/JSON pair.

    Refuses to run when a configured target lacks a calibration entry.
    """
    store = store or CalibrationStore(cfg.calibration)
    constants: dict[str, float] = {}
    epsilons: dict[str, float] = {}
    for block in cfg.blocks:
        target = block["target"]
        entry = store.get(target)  # raises MissingCalibration with the name
        constants[target] = float(entry["constant"])
        epsilons[target] = float(entry["epsilon"])
    jobs = [(tname, point, cfg.seed, epsilons[tname], constants[tname],
             cfg.weights)
            for tname, point in expand_points(cfg)]
    if cfg.workers > 1 and len(jobs) > 1:
        with multiprocessing.get_context("spawn").Pool(cfg.workers) as pool:
            records = pool.map(_evaluate_job, jobs, chunksize=8)
    else:
        records = [_evaluate_job(job) for job in jobs]
    records.sort(key=lambda r: r.sort_key())
    meta = {
        "seed": cfg.seed,
        "epsilon": cfg.epsilon,
        "weights": cfg.weights,
        "targets": sorted({b["target"] for b in cfg.blocks}),
        "constants": {k: constants[k] for k in sorted(constants)},
    }
    write_reports(records, cfg.out, name, meta)
    return records, summarize(records)
