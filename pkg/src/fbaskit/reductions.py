"""Instance generators that embed classic hard problems into quorum
questions, plus the degree-reduction rewriting.

Each generator builds a deterministic instance (node names derive from the
source problem, declaration order is fixed) and returns enough metadata to
map nodes back to their origin.  The module also carries small brute-force
oracles for the source problems themselves; tests use them to confirm the
embeddings preserve the answers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

from .model import EncodingError, FbasInstance, SliceSpec, ThresholdDef


@dataclass(frozen=True)
class SetSplittingInput:
    """A ground set and a family of subsets to split in two."""

    elements: tuple[str, ...]
    family: tuple[tuple[str, ...], ...]

    def __post_init__(self) -> None:
        if not self.elements:
            raise ValueError("ground set is empty")
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("duplicate ground set elements")
        if not self.family:
            raise ValueError("family is empty")
        universe = set(self.elements)
        for f in self.family:
            if not f:
                raise ValueError("empty family member")
            if len(set(f)) != len(f):
                raise ValueError("duplicate element inside a family member")
            if not set(f) <= universe:
                raise ValueError(f"family member {list(f)} not within the ground set")

    @classmethod
    def from_json_dict(cls, doc: Mapping) -> "SetSplittingInput":
        elements = doc.get("elements")
        family = doc.get("family")
        if (not isinstance(elements, list) or not isinstance(family, list)
                or any(not isinstance(x, str) for x in elements)
                or any(not isinstance(f, list) for f in family)
                or any(not isinstance(x, str) for f in family for x in f)):
            raise ValueError('expected {"elements": [str], "family": [[str]]}')
        return cls(tuple(elements), tuple(tuple(f) for f in family))


@dataclass(frozen=True)
class GraphInput:
    """An undirected graph without loops or duplicate edges."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        if not self.vertices:
            raise ValueError("graph has no vertices")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertices")
        declared = set(self.vertices)
        seen: set[frozenset[str]] = set()
        for u, w in self.edges:
            if u not in declared or w not in declared:
                raise ValueError(f"edge ({u}, {w}) uses an undeclared vertex")
            if u == w:
                raise ValueError(f"loop at vertex {u}")
            key = frozenset((u, w))
            if key in seen:
                raise ValueError(f"duplicate edge ({u}, {w})")
            seen.add(key)

    @classmethod
    def from_json_dict(cls, doc: Mapping) -> "GraphInput":
        vertices = doc.get("vertices")
        edges = doc.get("edges")
        if (not isinstance(vertices, list) or not isinstance(edges, list)
                or any(not isinstance(v, str) for v in vertices)
                or any(not (isinstance(e, list) and len(e) == 2
                            and all(isinstance(x, str) for x in e)) for e in edges)):
            raise ValueError('expected {"vertices": [str], "edges": [[str, str]]}')
        return cls(tuple(vertices), tuple((e[0], e[1]) for e in edges))


Gate = tuple  # ("true",) | ("false",) | ("and", j, k) | ("or", j, k), 1-based


@dataclass(frozen=True)
class CircuitInput:
    """A monotone circuit as a gate list; gate i may only read gates < i."""

    gates: tuple[Gate, ...]

    def __post_init__(self) -> None:
        if not self.gates:
            raise ValueError("circuit has no gates")
        for i, gate in enumerate(self.gates, start=1):
            op = gate[0] if gate else None
            if op in ("true", "false"):
                if len(gate) != 1:
                    raise ValueError(f"gate {i}: constant takes no inputs")
            elif op in ("and", "or"):
                if len(gate) != 3:
                    raise ValueError(f"gate {i}: {op} takes two inputs")
                for j in gate[1:]:
                    if not isinstance(j, int) or not 1 <= j < i:
                        raise ValueError(f"gate {i}: input {j} must be an earlier gate")
            else:
                raise ValueError(f"gate {i}: unknown op {op!r}")

    @classmethod
    def from_json_dict(cls, doc: Mapping) -> "CircuitInput":
        gates = doc.get("gates")
        if not isinstance(gates, list):
            raise ValueError('expected {"gates": [...]}')
        parsed: list[Gate] = []
        for g in gates:
            if isinstance(g, str):
                parsed.append((g,))
            elif isinstance(g, list) and g and isinstance(g[0], str):
                parsed.append(tuple(g))
            else:
                raise ValueError(f"bad gate entry {g!r}")
        return cls(tuple(parsed))


def evaluate_circuit(circuit: CircuitInput) -> list[bool]:
    """Gate values in order; the circuit's value is the last one."""
    values: list[bool] = []
    for gate in circuit.gates:
        op = gate[0]
        if op == "true":
            values.append(True)
        elif op == "false":
            values.append(False)
        elif op == "and":
            values.append(values[gate[1] - 1] and values[gate[2] - 1])
        else:
            values.append(values[gate[1] - 1] or values[gate[2] - 1])
    return values


def is_splittable(inp: SetSplittingInput) -> bool:
    """Exhaustive two-colouring check of the ground set."""
    n = len(inp.elements)
    members = [frozenset(f) for f in inp.family]
    for mask in range(1 << n):
        side = {x for i, x in enumerate(inp.elements) if mask >> i & 1}
        if all(f & side and f - side for f in members):
            return True
    return False


def min_vertex_cover_size(graph: GraphInput) -> int:
    """Smallest vertex cover, by exhaustive scan."""
    n = len(graph.vertices)
    best = n
    for mask in range(1 << n):
        chosen = {v for i, v in enumerate(graph.vertices) if mask >> i & 1}
        if len(chosen) < best and all(u in chosen or w in chosen for u, w in graph.edges):
            best = len(chosen)
    return best


def has_clique(graph: GraphInput, k: int) -> bool:
    adjacent = {frozenset(e) for e in graph.edges}
    if k <= 1:
        return k == 1 and bool(graph.vertices)
    for combo in itertools.combinations(graph.vertices, k):
        if all(frozenset((u, w)) in adjacent for u, w in itertools.combinations(combo, 2)):
            return True
    return False


def set_splitting_to_fbas(inp: SetSplittingInput) -> tuple[FbasInstance, dict]:
    """Embed set splitting: the family is splittable iff the instance has
    two disjoint quorums.

    One node per element x with a single slice holding its per-set copies;
    one copy node per (set, element) pair, with one singleton slice per
    element of that set.
    """
    element_node = {x: f"x:{x}" for x in inp.elements}
    nodes: list[str] = [element_node[x] for x in inp.elements]
    metadata: dict[str, dict] = {element_node[x]: {"element": x} for x in inp.elements}
    qf: dict[str, SliceSpec] = {}
    copy_names: dict[tuple[int, str], str] = {}
    for i, f in enumerate(inp.family):
        for x in inp.elements:
            name = f"fx:{i}:{x}"
            copy_names[(i, x)] = name
            nodes.append(name)
            metadata[name] = {"set": i, "element": x}
            qf[name] = SliceSpec.from_slices([[element_node[y]] for y in f])
    for x in inp.elements:
        copies = [copy_names[(i, x)] for i in range(len(inp.family))]
        qf[element_node[x]] = SliceSpec.from_slices([copies])
    return FbasInstance(nodes, qf), metadata


def vertex_cover_to_fbas(graph: GraphInput) -> tuple[FbasInstance, dict]:
    """Embed vertex cover: the minimum quorum has size |E| + cover size.

    Every quorum needs a vertex node, a vertex node drags in all edge
    nodes, and every edge node needs one endpoint: quorums are exactly all
    edge nodes plus a vertex cover.
    """
    if not graph.edges:
        raise ValueError("graph has no edges")
    position = {v: i for i, v in enumerate(graph.vertices)}
    vertex_node = {v: f"v:{v}" for v in graph.vertices}
    edge_nodes: list[str] = []
    metadata: dict[str, dict] = {}
    qf: dict[str, SliceSpec] = {}
    for u, w in graph.edges:
        a, b = sorted((u, w), key=position.__getitem__)
        name = f"edge:{a}-{b}"
        edge_nodes.append(name)
        metadata[name] = {"edge": [a, b]}
        qf[name] = SliceSpec.from_slices([[vertex_node[a]], [vertex_node[b]]])
    for v in graph.vertices:
        metadata[vertex_node[v]] = {"vertex": v}
        qf[vertex_node[v]] = SliceSpec.from_slices([edge_nodes])
    nodes = [vertex_node[v] for v in graph.vertices] + edge_nodes
    return FbasInstance(nodes, qf), metadata


def mcvp_to_qsp(circuit: CircuitInput) -> tuple[FbasInstance, frozenset[str], str]:
    """Embed monotone circuit value: the circuit is true iff the last gate
    node sits inside some quorum within the returned subset.

    Gate nodes require their own presence plus, for AND, both inputs, or,
    for OR, one of them; FALSE constants are left out of the subset.
    """
    names = [f"gate:{i}" for i in range(1, len(circuit.gates) + 1)]
    qf: dict[str, SliceSpec] = {}
    w: list[str] = []
    for i, gate in enumerate(circuit.gates, start=1):
        me = names[i - 1]
        op = gate[0]
        if op in ("true", "false"):
            qf[me] = SliceSpec.from_slices([[me]])
            if op == "true":
                w.append(me)
        elif op == "and":
            qf[me] = SliceSpec.from_slices([{me, names[gate[1] - 1], names[gate[2] - 1]}])
            w.append(me)
        else:
            slices = [{me, names[gate[1] - 1]}, {me, names[gate[2] - 1]}]
            deduped = [slices[0]] if slices[0] == slices[1] else slices
            qf[me] = SliceSpec.from_slices(deduped)
            w.append(me)
    return FbasInstance(names, qf), frozenset(w), names[-1]


def clique_to_xy_fbas(graph: GraphInput, k: int) -> tuple[FbasInstance, dict]:
    """Embed k-clique: the instance has a quorum of size exactly k iff the
    graph has a k-clique.

    High-degree vertices require k-1 of their neighbours; low-degree ones
    require the sink node s, and s requires everything, so neither can sit
    in a small quorum.
    """
    if not 2 <= k <= len(graph.vertices):
        raise ValueError(f"k must be between 2 and the vertex count, got {k}")
    position = {v: i for i, v in enumerate(graph.vertices)}
    vertex_node = {v: f"v:{v}" for v in graph.vertices}
    neighbours: dict[str, list[str]] = {v: [] for v in graph.vertices}
    for u, w in graph.edges:
        neighbours[u].append(w)
        neighbours[w].append(u)
    nodes = [vertex_node[v] for v in graph.vertices] + ["s"]
    metadata: dict[str, dict] = {"s": {"role": "universal sink"}}
    qf: dict[str, SliceSpec] = {}
    for v in graph.vertices:
        metadata[vertex_node[v]] = {"vertex": v}
        if len(neighbours[v]) >= k - 1:
            ordered = sorted(neighbours[v], key=position.__getitem__)
            members = tuple(vertex_node[u] for u in ordered)
            qf[vertex_node[v]] = SliceSpec.from_defs([ThresholdDef(k - 1, members)])
        else:
            qf[vertex_node[v]] = SliceSpec.from_defs([ThresholdDef(1, ("s",))])
    qf["s"] = SliceSpec.from_defs([ThresholdDef(len(nodes), tuple(nodes))])
    return FbasInstance(nodes, qf), metadata


def degree_reduce(instance: FbasInstance) -> FbasInstance:
    """Rewrite a plain instance so every node has at most two slices and
    every slice at most two nodes, preserving which instances have
    disjoint quorums.

    A long slice list {q1, ..., qm} becomes {q1, {aux}} with the rest moved
    to a fresh node, recursively; afterwards, a long slice {v1, ..., vm}
    becomes {v1, aux} with the tail moved to a fresh node.  An instance
    already within the bounds comes back unchanged.
    """
    for name in instance.nodes:
        if instance.quorum_function[name].plain is None:
            raise EncodingError("degree reduction needs the plain encoding")
    names = list(instance.nodes)
    position = dict(instance.position)
    slices: dict[str, list[frozenset[str]]] = {
        name: list(instance.quorum_function[name].plain or ()) for name in names}
    taken = set(names)
    counter = 0
    changed = False

    def fresh() -> str:
        nonlocal counter
        while True:
            candidate = f"aux:{counter}"
            counter += 1
            if candidate not in taken:
                taken.add(candidate)
                position[candidate] = len(position)
                return candidate

    # first pass: slice-list arity
    i = 0
    while i < len(names):
        v = names[i]
        qs = slices[v]
        if len(qs) >= 3:
            aux = fresh()
            slices[v] = [qs[0], frozenset((aux,))]
            slices[aux] = qs[1:]
            names.append(aux)
            changed = True
        i += 1

    # second pass: slice contents
    i = 0
    while i < len(names):
        v = names[i]
        rewritten: list[frozenset[str]] = []
        for q in slices[v]:
            if len(q) >= 3:
                ordered = sorted(q, key=position.__getitem__)
                aux = fresh()
                rewritten.append(frozenset((ordered[0], aux)))
                slices[aux] = [frozenset(ordered[1:])]
                names.append(aux)
                changed = True
            else:
                rewritten.append(q)
        slices[v] = rewritten
        i += 1

    if not changed:
        return instance
    qf = {name: SliceSpec.from_slices(slices[name]) for name in names}
    return FbasInstance(names, qf)
