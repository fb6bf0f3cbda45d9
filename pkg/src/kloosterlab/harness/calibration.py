"""Calibrated constants for the implied-constant bound families.

Each bound with an implied constant is made testable by fixing an explicit
constant: the maximum of LHS over structured-RHS across a deterministic
small-parameter grid, rounded up to the next power of two.  Entries are
versioned in a JSON file; re-running a calibration with identical inputs
leaves the file byte-identical (the creation date is kept from the first
run when nothing else changed).
"""

from __future__ import annotations

import datetime
import json
import math
from pathlib import Path

STORE_VERSION = 1


class MissingCalibration(RuntimeError):
    """A sweep target has no calibration entry yet."""

    def __init__(self, target: str):
        super().__init__(f"no calibration entry for target {target!r}; "
                         f"run: kloosterlab calibrate --target {target}")
        self.target = target


def next_pow2(x: float) -> float:
    """Smallest power of two >= x (x > 0); returns 1.0 for x <= 0."""
    if x <= 0:
        return 1.0
    return float(2.0 ** math.ceil(math.log2(x) - 1e-12))


class CalibrationStore:
    """Versioned JSON file of per-target constants."""

    def __init__(self, path: "str | Path"):
        self.path = Path(path)
        self.entries: dict[str, dict] = {}
        if self.path.exists():
            data = json.loads(self.path.read_text())
            if data.get("store_version") != STORE_VERSION:
                raise ValueError(f"unsupported calibration store version in {path}")
            self.entries = data["entries"]

    def get(self, target: str) -> dict:
        if target not in self.entries:
            raise MissingCalibration(target)
        return self.entries[target]

    def constant(self, target: str) -> float:
        return float(self.get(target)["constant"])

    def epsilon(self, target: str) -> float:
        return float(self.get(target)["epsilon"])

    def put(self, target: str, *, epsilon: float, constant: float, cap: int,
            seed: int, max_ratio: float) -> dict:
        entry = {
            "target": target,
            "epsilon": epsilon,
            "constant": constant,
            "cap": cap,
            "seed": seed,
            "max_ratio": max_ratio,
            "date": datetime.date.today().isoformat(),
        }
        old = self.entries.get(target)
        if old is not None and all(old[k] == entry[k] for k in entry if k != "date"):
            return old  # unchanged: keep the original date, file stays identical
        self.entries[target] = entry
        self._save()
        return entry

    def _save(self) -> None:
        payload = {"store_version": STORE_VERSION, "entries": self.entries}
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


def calibrate(store: CalibrationStore, target: str, cap: int,
              epsilon: float = 0.05, seed: int = 1) -> dict:
    """Run the target's calibration grid and record the constant."""
    from kloosterlab.harness import targets as T

    if cap > 2000:
        raise ValueError(f"calibration cap {cap} above the limit 2000")
    if cap < 2:
        raise ValueError("calibration cap must be >= 2")
    spec = T.get_target(target)
    max_ratio = spec.calibrate(cap=cap, epsilon=epsilon, seed=seed)
    constant = next_pow2(max_ratio) if spec.kind != "parameter" else max_ratio
    return store.put(target, epsilon=epsilon, constant=constant, cap=cap,
                     seed=seed, max_ratio=max_ratio)


def calibrate_all(store: CalibrationStore, cap: int, epsilon: float = 0.05,
                  seed: int = 1, names: "list[str] | None" = None) -> dict[str, dict]:
    from kloosterlab.harness import targets as T

    out = {}
    for name in names or T.all_target_names():
        out[name] = calibrate(store, name, cap, epsilon, seed)
    return out
