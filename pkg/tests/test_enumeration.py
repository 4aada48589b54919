"""Quorum enumeration, shrinking, and minimum-quorum search."""

import pytest

from fbaskit import (MINIMUM, EncodingError, EnumerationStats, FbasInstance,
                     NotAQuorumError, UnknownNodeError, brute_force_min_quorum,
                     brute_force_minimal_quorums, brute_force_quorums,
                     enumerate_quorums, find_min_quorum, is_minimal_quorum,
                     is_quorum, mqp_bounded_search, shrink_to_minimal)

from helpers import corpus, plain_corpus


# streaming enumeration

def test_enumeration_order_on_two_islands(two_islands):
    assert list(enumerate_quorums(two_islands)) == [
        frozenset({"a"}), frozenset({"a", "b"}), frozenset({"b"})]


def test_enumeration_fixtures(mutual_pair, triangle_pairs, chain3):
    assert list(enumerate_quorums(mutual_pair)) == [frozenset({"a", "b"})]
    assert set(enumerate_quorums(triangle_pairs)) == {
        frozenset(s) for s in ({"a", "b"}, {"a", "c"}, {"b", "c"},
                               {"a", "b", "c"})}
    assert set(enumerate_quorums(chain3)) == {
        frozenset(s) for s in ({"c"}, {"b", "c"}, {"a", "b", "c"})}


def test_enumeration_is_complete_and_duplicate_free():
    for inst in corpus(40, 8, seed=331):
        got = list(enumerate_quorums(inst))
        assert len(got) == len(set(got))
        assert set(got) == set(brute_force_quorums(inst))


def test_enumeration_within(chain3, nested_example):
    assert set(enumerate_quorums(chain3, within={"b", "c"})) == {
        frozenset({"c"}), frozenset({"b", "c"})}
    assert set(enumerate_quorums(chain3, within={"a", "b"})) == set()
    got = set(enumerate_quorums(nested_example, within={"v", "v4", "v6"}))
    assert frozenset({"v", "v4"}) in got
    assert all("v5" not in q for q in got)
    with pytest.raises(UnknownNodeError):
        list(enumerate_quorums(chain3, within={"ghost"}))


def test_enumeration_within_matches_filtered_brute_force():
    import random
    rng = random.Random(55)
    for inst in corpus(25, 8, seed=41):
        w = frozenset(v for v in inst.nodes if rng.random() < 0.7)
        expected = {q for q in brute_force_quorums(inst) if q <= w}
        assert set(enumerate_quorums(inst, within=w)) == expected


def test_enumeration_minimal_only():
    for inst in corpus(30, 8, seed=59):
        got = list(enumerate_quorums(inst, minimal_only=True))
        assert set(got) == set(brute_force_minimal_quorums(inst))
        assert len(got) == len(set(got))


def test_enumeration_limit_and_stats(triangle_pairs):
    stats = EnumerationStats()
    got = list(enumerate_quorums(triangle_pairs, limit=2, stats=stats))
    assert len(got) == 2
    assert stats.emitted == 2
    assert stats.branches >= 2
    assert stats.max_work_between_emissions >= 0


def test_enumeration_is_lazy():
    # pulling a few quorums from an instance with ~2^10 of them must not
    # exhaust the stream
    qf = {}
    for i in range(10):
        a, b = f"p{i}a", f"p{i}b"
        qf[a] = [[a, b]]
        qf[b] = [[a, b]]
    inst = FbasInstance.from_plain(qf)
    it = enumerate_quorums(inst)
    first = [next(it) for _ in range(5)]
    assert all(is_quorum(inst, q) for q in first)
    assert len(set(first)) == 5


# minimality and shrinking

def test_is_minimal_quorum(two_islands, mutual_pair, chain3):
    assert is_minimal_quorum(mutual_pair, {"a", "b"})
    assert not is_minimal_quorum(two_islands, {"a", "b"})
    assert is_minimal_quorum(two_islands, {"a"})
    assert not is_minimal_quorum(chain3, {"a", "b"})  # not even a quorum
    assert not is_minimal_quorum(chain3, [])


def test_is_minimal_quorum_matches_brute_force():
    for inst in corpus(25, 8, seed=71):
        minimal = set(brute_force_minimal_quorums(inst))
        for q in brute_force_quorums(inst):
            assert is_minimal_quorum(inst, q) == (q in minimal)


def test_shrink_examples(chain3, two_islands):
    assert shrink_to_minimal(chain3, {"a", "b", "c"}) == {"c"}
    assert shrink_to_minimal(two_islands, {"a", "b"}) == {"b"}
    with pytest.raises(NotAQuorumError):
        shrink_to_minimal(chain3, {"a", "b"})


def test_shrink_yields_contained_minimal_quorums():
    for inst in corpus(30, 9, seed=83):
        full = frozenset(inst.nodes)
        got = shrink_to_minimal(inst, full)
        assert got <= full
        assert is_minimal_quorum(inst, got)


# minimum-quorum search

def test_find_min_quorum_fixtures(single_node, mutual_pair, chain3,
                                  nested_example):
    assert find_min_quorum(single_node).quorums == (frozenset({"a"}),)
    assert find_min_quorum(mutual_pair).quorums == (frozenset({"a", "b"}),)
    assert find_min_quorum(chain3).quorums == (frozenset({"c"}),)
    w = find_min_quorum(nested_example)
    assert w.verdict == MINIMUM
    assert w.quorums == (frozenset({"v1"}),)
    assert set(w.stats) == {"branches", "reference_visits"}


def test_find_min_quorum_matches_brute_force_exactly():
    # same set, not just the same size: both sides break ties in favour of
    # the declaration-order lexicographically least set
    for inst in corpus(60, 9, seed=97):
        assert find_min_quorum(inst).quorums[0] == brute_force_min_quorum(inst)


# bounded-size search

def test_bounded_search_fixtures(triangle_pairs, chain3):
    found = mqp_bounded_search(triangle_pairs, k=2, r=2)
    assert found is not None and len(found) == 2
    assert is_quorum(triangle_pairs, found)
    assert mqp_bounded_search(triangle_pairs, k=1, r=2) is None
    assert mqp_bounded_search(chain3, k=1, r=1) == {"c"}


def test_bounded_search_argument_errors(triangle_pairs, nested_example):
    with pytest.raises(ValueError):
        mqp_bounded_search(triangle_pairs, k=0, r=1)
    with pytest.raises(ValueError):
        mqp_bounded_search(triangle_pairs, k=1, r=0)
    with pytest.raises(EncodingError):
        mqp_bounded_search(nested_example, k=2, r=3)
    crowded = FbasInstance.from_plain(
        {"a": [["a", "b"], ["a", "c"], ["a", "d"]],
         "b": [["b"]], "c": [["c"]], "d": [["d"]]})
    with pytest.raises(ValueError, match="more than r=2"):
        mqp_bounded_search(crowded, k=2, r=2)


def test_bounded_search_agrees_with_brute_force():
    for inst in plain_corpus(40, 8, seed=113):
        r = max(len(spec.plain) for spec in inst.quorum_function.values())
        best = len(brute_force_min_quorum(inst))
        for k in (1, 2, 3):
            found = mqp_bounded_search(inst, k=k, r=r)
            if best <= k:
                assert found is not None
                assert len(found) <= k and is_quorum(inst, found)
            else:
                assert found is None
