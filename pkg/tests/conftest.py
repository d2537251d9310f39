import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_hermitian(g, n):
    X = g.standard_normal((n, n)) + 1j * g.standard_normal((n, n))
    return (X + X.conj().T) / 2


# acceptance criteria report: number -> [(part, passed, detail)]
CRITERIA: dict[int, list[tuple[str, bool, str]]] = {}


def record_criterion(number: int, part: str, passed: bool, detail: str) -> str:
    CRITERIA.setdefault(number, []).append((part, bool(passed), detail))
    line = f"{'PASS' if passed else 'FAIL'} criterion {number} [{part}]: {detail}"
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        parts = CRITERIA[number]
        ok = all(p for _, p, _ in parts)
        body = "; ".join(f"{name} {'ok' if p else 'FAILED'} ({detail})" for name, p, detail in parts)
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {number}: {body}")
