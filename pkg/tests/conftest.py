import pytest
from hypothesis import settings
from hypothesis import strategies as st

from rainbowtri.counting import verify_bound
from rainbowtri.graph import Color, build_graph, k4_proper, rainbow_triangle

from . import suites

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def k4():
    return suites.k4()


@pytest.fixture
def triangle():
    return rainbow_triangle()


@pytest.fixture
def record_criterion():
    def record(number: int, ok: bool, detail: str) -> None:
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
        print(ACCEPTANCE_LINES[-1])

    return record


@st.composite
def colored_graphs(draw, min_n=0, max_n=8):
    """Arbitrary colored simple graphs: each vertex pair is absent or takes a color."""
    n = draw(st.integers(min_n, max_n))
    slots = st.sampled_from([None, Color.RED, Color.GREEN, Color.BLUE])
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            c = draw(slots)
            if c is not None:
                edges.append((u, v, c))
    g = build_graph(n, edges)
    assert verify_bound(g).holds
    return g


def pytest_sessionfinish(session, exitstatus):
    bad = [g for g in suites.GENERATED if not verify_bound(g).holds]
    if bad:
        print(f"\n{len(bad)} generated instances violate T^2 <= 2RGB")
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
    terminalreporter.write_line(
        f"T^2 <= 2RGB re-checked on {len(suites.GENERATED)} suite-generated instances"
    )
