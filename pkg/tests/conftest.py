import math

import pytest

from facesym.landmarks import LandmarkSet
from facesym.synth import canonical_face


@pytest.fixture
def f0() -> LandmarkSet:
    return canonical_face()


def moved(ls: LandmarkSet, **points) -> LandmarkSet:
    """Copy of ``ls`` with ``p<index>=(x, y)`` replacements."""
    pts = list(ls.points)
    for key, xy in points.items():
        pts[int(key[1:])] = xy
    return ls.with_points(pts)


def angle_diff(a: float, b: float) -> float:
    """Smallest signed difference a - b modulo 360."""
    return (a - b + 180.0) % 360.0 - 180.0


def random_face(rng, image_id="r"):
    """Valid, non-degenerate 70-point set: canonical face with every point
    jittered by up to 8 px."""
    base = canonical_face(image_id)
    return base.with_points((x + rng.uniform(-8, 8), y + rng.uniform(-8, 8)) for x, y in base.points)


def close(a, b, tol):
    return math.isclose(a, b, rel_tol=0.0, abs_tol=tol)


_acceptance_results: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        outcome = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        _acceptance_results.append((outcome, name))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for outcome, name in _acceptance_results:
        terminalreporter.write_line(f"[{outcome}] {name}")
