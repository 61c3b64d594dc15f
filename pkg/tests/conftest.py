import numpy as np
import pytest

# one line per acceptance criterion, printed in the terminal summary
CRITERIA: dict[int, tuple[bool, str]] = {}


def record(number: int, ok: bool, detail: str) -> None:
    CRITERIA[number] = (bool(ok), detail)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, detail = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_convex_pentagon(rng):
    """Five points on a random ellipse, in counterclockwise order."""
    from pentatile import pentagon_from_vertices

    while True:
        t = np.sort(rng.uniform(0, 2 * np.pi, 5))
        gaps = np.diff(np.concatenate([t, [t[0] + 2 * np.pi]]))
        if gaps.min() < 0.25 or gaps.max() > np.pi - 0.25:
            continue
        a, b = rng.uniform(0.6, 1.6, 2)
        pts = np.column_stack([a * np.cos(t), b * np.sin(t)])
        try:
            return pentagon_from_vertices(pts)
        except ValueError:
            continue
