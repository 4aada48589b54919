"""Corpus builders and tiny independent oracles shared by the test modules.

Everything here is deterministic in its arguments.  The oracles deliberately
take the dumbest correct route (exhaustive scans, definition chasing) so
they share no machinery with the library code they check.
"""

import itertools
import random

from fbaskit import (CircuitInput, FbasInstance, GraphInput, RandomProfile,
                     ThresholdDef, generate_random)


def corpus(count: int, n_max: int, seed: int,
           encodings=("plain", "nested", "mixed")) -> list[FbasInstance]:
    """A reproducible batch of validator-clean random instances."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        profile = RandomProfile(
            encoding=encodings[i % len(encodings)],
            max_slices=rng.randint(1, 4),
            max_slice_size=rng.randint(1, 4),
            include_owner=rng.random() < 0.8,
            max_depth=rng.randint(0, 2),
            max_members=rng.randint(1, 4),
        )
        out.append(generate_random(rng.randint(1, n_max), profile,
                                   seed=rng.randrange(10 ** 9)))
    return out


def plain_corpus(count: int, n_max: int, seed: int) -> list[FbasInstance]:
    return corpus(count, n_max, seed, encodings=("plain",))


def random_graph(rng: random.Random, n_max: int = 5,
                 require_edge: bool = False) -> GraphInput:
    n = rng.randint(2 if require_edge else 1, n_max)
    vertices = tuple(f"u{i}" for i in range(n))
    pairs = list(itertools.combinations(vertices, 2))
    while True:
        edges = tuple(e for e in pairs if rng.random() < 0.5)
        if edges or not require_edge:
            return GraphInput(vertices, edges)


def random_circuit(rng: random.Random, max_gates: int = 20) -> CircuitInput:
    n = rng.randint(1, max_gates)
    gates = [(rng.choice(("true", "false")),)]
    for i in range(2, n + 1):
        op = rng.choice(("true", "false", "and", "or"))
        if op in ("true", "false"):
            gates.append((op,))
        else:
            gates.append((op, rng.randint(1, i - 1), rng.randint(1, i - 1)))
    return CircuitInput(tuple(gates))


def satisfied_by(spec_def: ThresholdDef, w: frozenset) -> bool:
    """Definition-chasing evaluator for nested declarations (oracle side)."""
    hits = 0
    for m in spec_def.members:
        if isinstance(m, str):
            hits += m in w
        else:
            hits += satisfied_by(m, w)
    return hits >= spec_def.threshold


def slow_quorums(instance: FbasInstance) -> list[frozenset]:
    """Every quorum, by scanning all subsets against the definition."""
    names = instance.nodes
    found = []
    for r in range(1, len(names) + 1):
        for combo in itertools.combinations(names, r):
            u = frozenset(combo)
            ok = True
            for v in u:
                spec = instance.quorum_function[v]
                if spec.plain is not None:
                    ok = any(q <= u for q in spec.plain)
                else:
                    ok = any(satisfied_by(d, u) for d in spec.nested or ())
                if not ok:
                    break
            if ok:
                found.append(u)
    return found


def closure_sccs(instance: FbasInstance) -> list[frozenset]:
    """Strongly connected components by pairwise reachability (no Tarjan).

    Components come back ordered by smallest member position, matching the
    library's canonical numbering.
    """
    names = instance.nodes
    succ = {v: instance.quorum_function[v].referenced_nodes() for v in names}
    reach = {}
    for v in names:
        seen = {v}
        frontier = [v]
        while frontier:
            u = frontier.pop()
            for w in succ[u]:
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
        reach[v] = seen
    comps = []
    assigned = set()
    for v in names:
        if v in assigned:
            continue
        comp = frozenset(u for u in names if u in reach[v] and v in reach[u])
        comps.append(comp)
        assigned |= comp
    return comps
