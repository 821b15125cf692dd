import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from reccs.graph import Graph

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def graphs(draw, max_nodes=12, min_nodes=0, connected=False):
    n = draw(st.integers(min_nodes, max_nodes))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    if connected and n > 1:
        # random spanning tree keeps it connected
        parents = [draw(st.integers(0, i - 1)) for i in range(1, n)]
        chosen = list(set(chosen) | {(p, i) for i, p in zip(range(1, n), parents)})
    return Graph.from_edges(np.asarray(chosen, dtype=np.int64).reshape(-1, 2), nodes=range(n))


@pytest.fixture(scope="session")
def fixtures():
    from synth import fixture_suite
    return fixture_suite(20)


@pytest.fixture(scope="session")
def toy():
    from synth import clustered_network
    return clustered_network(n_nodes=300, n_clusters=8, outlier_frac=0.1, seed=7)


ACCEPTANCE: list[tuple[int, bool, str]] = []


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE.append((criterion, bool(ok), detail))
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} ({detail})")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
