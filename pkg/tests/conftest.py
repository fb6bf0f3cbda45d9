import pytest

from kloosterlab.harness.calibration import CalibrationStore, calibrate_all

ACCEPTANCE_CAP = 500
ACCEPTANCE_EPSILON = 0.05
ACCEPTANCE_SEED = 1


@pytest.fixture(scope="session")
def calibration_store(tmp_path_factory) -> CalibrationStore:
    """Constants fixed once per session on the cap-500 grid."""
    path = tmp_path_factory.mktemp("calibration") / "calibration.json"
    store = CalibrationStore(path)
    calibrate_all(store, cap=ACCEPTANCE_CAP, epsilon=ACCEPTANCE_EPSILON,
                  seed=ACCEPTANCE_SEED)
    return store
