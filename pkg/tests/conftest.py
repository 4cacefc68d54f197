import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from ggmperfect import Graph, complete_graph, cycle_graph, path_graph, random_graph, star_graph


def battery():
    """Graphs used throughout: path3, cycle4, cycle5, K4, star5 and two random d=6 graphs."""
    return {
        "path3": path_graph(3),
        "cycle4": cycle_graph(4),
        "cycle5": cycle_graph(5),
        "K4": complete_graph(4),
        "star5": star_graph(5),
        "random6a": random_graph(6, 0.5, np.random.default_rng(1)),
        "random6b": random_graph(6, 0.5, np.random.default_rng(2)),
    }


@pytest.fixture(scope="session")
def graphs():
    return battery()


@st.composite
def graphs_st(draw, min_d=2, max_d=6):
    d = draw(st.integers(min_d, max_d))
    pairs = list(itertools.combinations(range(1, d + 1), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(d, frozenset(e for e, k in zip(pairs, keep) if k))


_acceptance_items = {}
_acceptance = {}


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("acceptance")
        if m is not None:
            _acceptance_items[item.nodeid] = m.args


def pytest_runtest_logreport(report):
    key = _acceptance_items.get(report.nodeid)
    if key is None or (report.when != "call" and report.passed):
        return
    status = "PASS" if report.passed else "FAIL"
    if _acceptance.get(key, ("PASS",))[0] == "PASS":
        _acceptance[key] = (status, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for (n, title), (status, secs) in sorted(_acceptance.items()):
        terminalreporter.write_line(f"criterion {n}: {status}  {title} ({secs:.1f}s)")
