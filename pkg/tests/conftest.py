from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from qsr.serialization import encode_matrix

settings.register_profile("default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def spec_payload(named_channels, **extra) -> dict:
    first = named_channels[0][1]
    payload = {
        "dim_in": first.dim_in,
        "dim_out": first.dim_out,
        "channels": [{"name": n, "kraus": [encode_matrix(k) for k in ch.kraus]} for n, ch in named_channels],
    }
    payload.update(extra)
    return payload


@pytest.fixture
def write_spec(tmp_path):
    def write(named_channels, name="spec.json", **extra):
        path = tmp_path / name
        path.write_text(json.dumps(spec_payload(named_channels, **extra)))
        return path

    return write


_CRITERIA: dict[int, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n = marker.args[0]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = "PASS" if report.outcome == "passed" else "FAIL"
        if _CRITERIA.get(n) != "FAIL":
            _CRITERIA[n] = status


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        terminalreporter.write_line(f"criterion {n:2d}: {_CRITERIA[n]}")
