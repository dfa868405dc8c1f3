import os

import pytest
from hypothesis import strategies as st

from society_bsg.election import Society, build_society_graph, canonical_graph, enumerate_orders, order_id

DATA = os.path.join(os.path.dirname(__file__), "data")

# Six-cycle running example.  The printed labels 1..6 stand for the orders
# below; LABELS[k] is the canonical type id of label k + 1.
LABEL_ORDERS = [(0, 1, 2), (1, 0, 2), (1, 2, 0), (2, 1, 0), (2, 0, 1), (0, 2, 1)]
LABELS = [order_id(o) for o in LABEL_ORDERS]
LABEL_WEIGHTS = [21, 10, 10, 21, 42, 42]


def to_canonical(vec):
    """Vector in printed label order -> canonical type order."""
    out = [0] * 6
    for k, v in enumerate(vec):
        out[LABELS[k]] = v
    return tuple(out)


def to_labels(vec):
    return tuple(vec[LABELS[k]] for k in range(6))


def label_ids(labels):
    """Printed 1-based labels -> canonical type ids."""
    return [LABELS[k - 1] for k in labels]


@pytest.fixture
def example_graph():
    return canonical_graph(3, to_canonical(LABEL_WEIGHTS))


@pytest.fixture
def example_society():
    return Society.canonical(3, to_canonical(LABEL_WEIGHTS))


def data_path(name):
    return os.path.join(DATA, name)


@st.composite
def societies(draw, m=3, max_weight=20, min_total=1):
    tau = len(enumerate_orders(m))
    w = draw(st.lists(st.integers(0, max_weight), min_size=tau, max_size=tau))
    if sum(w) < min_total:
        w[draw(st.integers(0, tau - 1))] = min_total
    return Society.canonical(m, w)


@st.composite
def graphs(draw, m=3, max_weight=20):
    return build_society_graph(draw(societies(m, max_weight)))


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
