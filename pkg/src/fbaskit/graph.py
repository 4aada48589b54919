"""Slice dependency graph, strongly connected components, and the
structural guidelines that force quorum intersection.

The graph has an edge a -> b exactly when b occurs somewhere in a's slice
specification.  Minimal quorums always induce strongly connected subgraphs,
so they live inside single components; the component ordering ("which
component can reach which") tells us where quorums can hide.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .model import FbasInstance, SliceSpec, ThresholdDef


@dataclass
class FbasGraph:
    instance: FbasInstance
    # successor node indices per node index, sorted; deterministic
    adj: tuple[tuple[int, ...], ...]


def build_graph(instance: FbasInstance) -> FbasGraph:
    """Dependency graph: an edge to every node mentioned in the spec."""
    pos = instance.position
    adj = []
    for name in instance.nodes:
        refs = instance.quorum_function[name].referenced_nodes()
        adj.append(tuple(sorted(pos[r] for r in refs)))
    return FbasGraph(instance, tuple(adj))


@dataclass
class SccPartition:
    """Strongly connected components with their condensation order.

    Components are numbered by their smallest contained node index.  The
    condensation is a DAG; `reverse_topological` lists component ids sinks
    first.  The greatest component, when it exists, is the unique sink: the
    one every other component can reach.
    """

    components: tuple[frozenset[str], ...]
    component_of: dict[str, int]
    successors: tuple[tuple[int, ...], ...]
    reverse_topological: tuple[int, ...]

    def reaches(self, a: int, b: int) -> bool:
        if a == b:
            return True
        seen = {a}
        frontier = [a]
        while frontier:
            c = frontier.pop()
            for d in self.successors[c]:
                if d == b:
                    return True
                if d not in seen:
                    seen.add(d)
                    frontier.append(d)
        return False

    def greatest(self) -> int | None:
        sinks = [c for c, succ in enumerate(self.successors) if not succ]
        return sinks[0] if len(sinks) == 1 else None


def scc_partition(graph: FbasGraph) -> SccPartition:
    """Tarjan's algorithm, iterative, scanning nodes in declaration order.

    The emission order of Tarjan is a reverse topological order of the
    condensation (a component is finished only after everything it can
    reach), which we keep alongside the canonical numbering.
    """
    instance = graph.instance
    adj = graph.adj
    n = len(instance.nodes)
    index = [-1] * n
    low = [0] * n
    on_stack = bytearray(n)
    stack: list[int] = []
    raw_components: list[list[int]] = []
    counter = 0

    for root in range(n):
        if index[root] != -1:
            continue
        work: list[list[int]] = [[root, 0]]
        while work:
            frame = work[-1]
            v, pi = frame
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = 1
            descended = False
            neighbors = adj[v]
            while pi < len(neighbors):
                w = neighbors[pi]
                pi += 1
                if index[w] == -1:
                    frame[1] = pi
                    work.append([w, 0])
                    descended = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if descended:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = 0
                    comp.append(w)
                    if w == v:
                        break
                raw_components.append(comp)
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])

    # canonical numbering: by smallest contained node index
    order = sorted(range(len(raw_components)), key=lambda c: min(raw_components[c]))
    renumber = {old: new for new, old in enumerate(order)}
    components = tuple(
        frozenset(instance.nodes[i] for i in raw_components[old]) for old in order)
    component_of: dict[str, int] = {}
    for cid, comp in enumerate(components):
        for name in comp:
            component_of[name] = cid
    succ_sets: list[set[int]] = [set() for _ in components]
    for v in range(n):
        cv = component_of[instance.nodes[v]]
        for w in adj[v]:
            cw = component_of[instance.nodes[w]]
            if cw != cv:
                succ_sets[cv].add(cw)
    successors = tuple(tuple(sorted(s)) for s in succ_sets)
    reverse_topological = tuple(renumber[old] for old in range(len(raw_components)))
    return SccPartition(components, component_of, successors, reverse_topological)


@dataclass
class GuidelineReport:
    conforms: bool
    reasons: list[str]


def _majority_gate_ok(d: ThresholdDef, own: frozenset[str]) -> bool:
    if any(not isinstance(m, str) for m in d.members):
        return False
    return (d.threshold == len(own) // 2 + 1
            and len(d.members) == len(own)
            and set(d.members) == own)


def check_guidelines(instance: FbasInstance) -> GuidelineReport:
    """Check the configuration pattern that guarantees quorum intersection.

    Rule 1: the component condensation has a unique greatest element.
    Rule 2: every node declares exactly the canonical pattern: a strict
    majority of its own component, and, outside the greatest component,
    additionally one node of exactly one other component (one that sits
    closer to the greatest).  Any quorum then drags in a majority of the
    greatest component, and two majorities always overlap.
    """
    part = scc_partition(build_graph(instance))
    reasons: list[str] = []
    greatest = part.greatest()
    if greatest is None:
        sinks = sum(1 for s in part.successors if not s)
        reasons.append(f"no greatest component: {sinks} maximal components")

    for name in instance.nodes:
        cid = part.component_of[name]
        own = part.components[cid]
        spec = instance.quorum_function[name]
        if spec.nested is None or len(spec.nested) != 1:
            reasons.append(f"node {name}: specification is not a single nested declaration")
            continue
        d = spec.nested[0]
        # sink components (the greatest one included) use the majority-only
        # pattern, everything else chains toward the greatest component
        if not part.successors[cid]:
            if not _majority_gate_ok(d, own):
                reasons.append(f"node {name}: slice is not a strict majority of its own component")
            continue
        if (d.threshold != 2 or len(d.members) != 2
                or not all(isinstance(m, ThresholdDef) for m in d.members)):
            reasons.append(f"node {name}: expected majority of own component plus a link")
            continue
        own_gate, link_gate = d.members
        if not _majority_gate_ok(own_gate, own):
            reasons.append(f"node {name}: slice is not a strict majority of its own component")
        if (link_gate.threshold != 1 or not link_gate.members
                or any(not isinstance(m, str) for m in link_gate.members)):
            reasons.append(f"node {name}: link must be one node of another component")
            continue
        target = part.component_of[link_gate.members[0]]
        if target == cid or set(link_gate.members) != part.components[target]:
            reasons.append(f"node {name}: link must name exactly one other component")
    return GuidelineReport(not reasons, reasons)


def generate_guideline_config(scc_sizes: Sequence[int], seed: int = 0) -> FbasInstance:
    """Emit a conforming nested-encoded instance with the given component
    sizes; the first listed component is the greatest one.

    Every node requires a strict majority of its own component; nodes
    outside the first component additionally require one node of a
    component closer to it (picked per node from the seeded generator).
    """
    if not scc_sizes or any(s < 1 for s in scc_sizes):
        raise ValueError("component sizes must be positive")
    rng = random.Random(seed)
    comps = [tuple(f"c{i}n{j}" for j in range(size)) for i, size in enumerate(scc_sizes)]
    qf: dict[str, SliceSpec] = {}
    nodes: list[str] = []
    for i, comp in enumerate(comps):
        majority = ThresholdDef(len(comp) // 2 + 1, comp)
        for name in comp:
            nodes.append(name)
            if i == 0:
                qf[name] = SliceSpec.from_defs([majority])
            else:
                target = comps[rng.randrange(i)]
                link = ThresholdDef(1, target)
                qf[name] = SliceSpec.from_defs([ThresholdDef(2, (majority, link))])
    return FbasInstance(nodes, qf)
