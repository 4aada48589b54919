"""Shared fixtures: the small hand-checked instances used across the suite.

Quorum inventories, stated here once and asserted in the tests:

* single_node: quorums {a}.
* two_islands: two self-sufficient nodes; quorums {a}, {b}, {a,b}.
* mutual_pair: each node needs both; the only quorum is {a,b}.
* triangle_pairs: each node accepts either pair containing it; quorums are
  the four subsets of size >= 2.
* chain3: a needs b, b needs c, c is self-sufficient; quorums {c}, {b,c},
  {a,b,c}, so everything funnels into c.
* nested_example: one node with a two-alternative nested declaration over
  eight self-sufficient leaves.
"""

import pytest

from fbaskit import FbasInstance, SliceSpec, ThresholdDef


@pytest.fixture
def single_node():
    return FbasInstance.from_plain({"a": [["a"]]})


@pytest.fixture
def two_islands():
    return FbasInstance.from_plain({"a": [["a"]], "b": [["b"]]})


@pytest.fixture
def mutual_pair():
    return FbasInstance.from_plain({"a": [["a", "b"]], "b": [["a", "b"]]})


@pytest.fixture
def triangle_pairs():
    return FbasInstance.from_plain({
        "a": [["a", "b"], ["a", "c"]],
        "b": [["a", "b"], ["b", "c"]],
        "c": [["a", "c"], ["b", "c"]],
    })


@pytest.fixture
def chain3():
    return FbasInstance.from_plain({
        "a": [["a", "b"]],
        "b": [["b", "c"]],
        "c": [["c"]],
    })


def nested_example_def() -> ThresholdDef:
    """The inner alternative: 1 of { 1 of {v4,v5}, 2 of {v6,v7,v8} }."""
    return ThresholdDef(1, (ThresholdDef(1, ("v4", "v5")),
                            ThresholdDef(2, ("v6", "v7", "v8"))))


@pytest.fixture
def nested_example():
    qf = {f"v{i}": SliceSpec.from_slices([[f"v{i}"]]) for i in range(1, 9)}
    qf["v"] = SliceSpec.from_defs([
        ThresholdDef(2, ("v1", "v2", "v3")),
        nested_example_def(),
    ])
    return FbasInstance(["v"] + [f"v{i}" for i in range(1, 9)], qf)
