"""Dependency graph, strongly connected components, and the intersection
guidelines."""

import pytest

from fbaskit import (DISJOINT, INTERSECTING, FbasInstance, SliceSpec,
                     ThresholdDef, brute_force_dqp, brute_force_quorums,
                     build_graph, check_guidelines, generate_guideline_config,
                     scc_partition, validation_errors)

from helpers import closure_sccs, corpus


def parts(instance):
    return scc_partition(build_graph(instance))


# graph construction

def test_build_graph_edges(chain3, nested_example):
    g = build_graph(chain3)
    assert g.adj == ((0, 1), (1, 2), (2,))
    g2 = build_graph(nested_example)
    assert g2.adj[0] == tuple(range(1, 9))
    assert all(g2.adj[i] == (i,) for i in range(1, 9))


# component structure

def test_partition_chain(chain3):
    part = parts(chain3)
    assert part.components == (frozenset({"a"}), frozenset({"b"}),
                               frozenset({"c"}))
    assert part.successors == ((1,), (2,), ())
    assert part.greatest() == 2
    assert part.reaches(0, 2)
    assert not part.reaches(2, 0)
    # sinks come first in the reverse topological order
    rt = part.reverse_topological
    assert rt.index(2) < rt.index(1) < rt.index(0)


def test_partition_islands_and_cycle(two_islands, triangle_pairs):
    part = parts(two_islands)
    assert len(part.components) == 2
    assert part.greatest() is None
    part2 = parts(triangle_pairs)
    assert part2.components == (frozenset({"a", "b", "c"}),)
    assert part2.greatest() == 0


def test_partition_matches_reachability_oracle():
    for inst in corpus(60, 12, seed=101):
        part = parts(inst)
        assert list(part.components) == closure_sccs(inst)
        for name in inst.nodes:
            assert name in part.components[part.component_of[name]]


def test_components_numbered_by_smallest_node():
    for inst in corpus(30, 12, seed=19):
        part = parts(inst)
        firsts = [min(inst.position[v] for v in comp)
                  for comp in part.components]
        assert firsts == sorted(firsts)


def test_reverse_topological_order_is_consistent():
    for inst in corpus(30, 12, seed=29):
        part = parts(inst)
        rank = {c: i for i, c in enumerate(part.reverse_topological)}
        for c, succ in enumerate(part.successors):
            for d in succ:
                assert rank[d] < rank[c]


def induced_reachable(instance, q, start):
    succ = {v: frozenset(instance.quorum_function[v].referenced_nodes()) & q
            for v in q}
    seen = {start}
    frontier = [start]
    while frontier:
        u = frontier.pop()
        for w in succ[u]:
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return seen


def test_minimal_quorums_are_strongly_connected():
    # every minimal quorum induces a strongly connected subgraph, hence
    # sits inside one component
    for inst in corpus(40, 8, seed=37):
        part = parts(inst)
        quorums = brute_force_quorums(inst)
        for q in quorums:
            if any(q2 < q for q2 in quorums):
                continue
            assert all(induced_reachable(inst, q, v) == q for v in q)
            assert len({part.component_of[v] for v in q}) == 1


# guideline checking

def test_generated_configs_conform():
    for sizes, seed in [((3,), 0), ((1,), 1), ((3, 2), 2), ((4, 3, 2), 3),
                        ((5, 1, 1, 3), 4)]:
        inst = generate_guideline_config(sizes, seed=seed)
        assert validation_errors(inst) == []
        report = check_guidelines(inst)
        assert report.conforms, report.reasons


def test_guideline_configs_have_intersecting_quorums():
    for sizes, seed in [((3,), 5), ((3, 2), 6), ((2, 2, 2), 7), ((5, 3), 8)]:
        inst = generate_guideline_config(sizes, seed=seed)
        assert brute_force_dqp(inst).verdict == INTERSECTING


def test_guideline_rejects_plain_encoding(triangle_pairs):
    report = check_guidelines(triangle_pairs)
    assert not report.conforms
    assert any("single nested declaration" in r for r in report.reasons)


def test_guideline_rejects_two_sinks(two_islands):
    report = check_guidelines(two_islands)
    assert any("no greatest component" in r for r in report.reasons)


def test_guideline_rejects_sub_majority():
    comp = ("c0n0", "c0n1", "c0n2")
    weak = ThresholdDef(1, comp)
    qf = {name: SliceSpec.from_defs([weak]) for name in comp}
    inst = FbasInstance(list(comp), qf)
    report = check_guidelines(inst)
    assert not report.conforms
    assert all("strict majority" in r for r in report.reasons)
    # and the weakness is real: {c0n0} and {c0n1} are disjoint quorums
    assert brute_force_dqp(inst).verdict == DISJOINT


def test_guideline_rejects_partial_link():
    inst = generate_guideline_config((3, 2), seed=0)
    # rebuild c1n0's link so it names only part of the target component
    spec = inst.quorum_function["c1n0"].nested[0]
    own_gate, _ = spec.members
    bad_link = ThresholdDef(1, ("c0n0", "c0n1"))
    qf = dict(inst.quorum_function)
    qf["c1n0"] = SliceSpec.from_defs([ThresholdDef(2, (own_gate, bad_link))])
    tampered = FbasInstance(list(inst.nodes), qf)
    report = check_guidelines(tampered)
    assert not report.conforms
    assert any("exactly one other component" in r for r in report.reasons)


def test_guideline_rejects_link_into_own_component():
    inst = generate_guideline_config((3, 3), seed=1)
    spec = inst.quorum_function["c1n0"].nested[0]
    own_gate, _ = spec.members
    self_link = ThresholdDef(1, ("c1n1",))
    qf = dict(inst.quorum_function)
    qf["c1n0"] = SliceSpec.from_defs([ThresholdDef(2, (own_gate, self_link))])
    tampered = FbasInstance(list(inst.nodes), qf)
    assert not check_guidelines(tampered).conforms


def test_generator_rejects_bad_sizes():
    with pytest.raises(ValueError):
        generate_guideline_config(())
    with pytest.raises(ValueError):
        generate_guideline_config((3, 0))


def test_generator_scales():
    inst = generate_guideline_config((20, 15, 10, 5), seed=9)
    assert len(inst) == 50
    assert check_guidelines(inst).conforms
    part = parts(inst)
    assert part.greatest() == 0
    assert len(part.components) == 4
