"""Side-effecting front end: identity suites, calibration, sweeps, reports."""
