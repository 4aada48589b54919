"""Quorum enumeration and minimum-quorum search.

Enumeration follows a binary branching scheme: walk the nodes in
declaration order, keeping the set of nodes still undecided and the set of
nodes already required.  Each step either drops the current node or moves it
into the required set; a branch is abandoned as soon as the required set is
no longer contained in the greatest quorum of what remains.  Every live
branch still leads to at least one quorum, which is what bounds the work
between two consecutive outputs by a polynomial.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator

from .model import (EncodingError, FbasInstance, NodeSet, NotAQuorumError)
from .satisfaction import SatisfactionIndex, has_slice_in
from .witness import MINIMUM, Witness


@dataclass
class EnumerationStats:
    emitted: int = 0
    branches: int = 0
    # reference visits spent before the first output / between outputs
    max_work_between_emissions: int = 0


def enumerate_quorums(instance: FbasInstance, within: Iterable[str] | None = None,
                      *, limit: int | None = None, minimal_only: bool = False,
                      stats: EnumerationStats | None = None) -> Iterator[NodeSet]:
    """Stream every quorum contained in `within`, each exactly once.

    Quorums come out in the depth-first order induced by declaration order
    (the require-branch is explored first, so {a} precedes every other
    quorum containing a).  With minimal_only, emitted quorums are filtered
    by the shrink criterion: q is kept iff no single removal leaves a
    quorum behind.  `limit` truncates the stream after that many outputs.
    """
    idx = SatisfactionIndex(instance)
    if within is None:
        universe = frozenset(instance.nodes)
    else:
        universe = instance.resolve(within)
    m0 = idx.restrict(universe)
    order = [v for v in instance.nodes if v in m0]
    if stats is None:
        stats = EnumerationStats()
    emitted = 0
    last_emit_work = idx.work
    # frames: (next position in order, required set, greatest quorum of the
    # undecided-plus-required set); the require branch is pushed last so the
    # stack pops it first
    stack: list[tuple[int, NodeSet, NodeSet]] = [(0, frozenset(), m0)]
    while stack:
        i, v2, m = stack.pop()
        stats.branches += 1
        if i == len(order):
            continue
        v = order[i]
        if v not in m:
            stack.append((i + 1, v2, m))
            continue
        m_ex = idx.restrict(m - {v})
        if v2 <= m_ex:
            stack.append((i + 1, v2, m_ex))
        v2r = v2 | {v}
        if idx.restrict(v2r) == v2r:
            ok = True
            if minimal_only:
                ok = all(not idx.restrict(v2r - {u}) for u in v2r)
            if ok:
                stats.emitted += 1
                gap = idx.work - last_emit_work
                if gap > stats.max_work_between_emissions:
                    stats.max_work_between_emissions = gap
                last_emit_work = idx.work
                yield v2r
                emitted += 1
                if limit is not None and emitted >= limit:
                    return
        stack.append((i + 1, v2r, m))


def is_minimal_quorum(instance: FbasInstance, q: Iterable[str]) -> bool:
    """True iff q is a quorum and no proper subset of it is one."""
    idx = SatisfactionIndex(instance)
    qset = instance.resolve(q)
    if not qset or idx.restrict(qset) != qset:
        return False
    return all(not idx.restrict(qset - {v}) for v in qset)


def _shrink(idx: SatisfactionIndex, start: NodeSet) -> NodeSet:
    current = start
    for v in idx.instance.nodes:
        if v not in current:
            continue
        reduced = idx.restrict(current - {v})
        if reduced:
            current = reduced
    return current


def shrink_to_minimal(instance: FbasInstance, u: Iterable[str]) -> NodeSet:
    """Shrink a quorum to a minimal one contained in it.

    Walks nodes in declaration order; dropping v is allowed whenever the
    rest still contains a quorum, in which case we continue from that
    greatest contained quorum.  One pass suffices: a node that could still
    be dropped at the end could already have been dropped at its turn.
    """
    idx = SatisfactionIndex(instance)
    uset = instance.resolve(u)
    if not uset or idx.restrict(uset) != uset:
        raise NotAQuorumError(f"{sorted(uset)} is not a quorum")
    return _shrink(idx, uset)


def find_min_quorum(instance: FbasInstance) -> Witness:
    """Smallest quorum of the instance, ties broken in favour of the set
    that comes first in the declaration-order lexicographic order.

    Branch and bound on the enumeration tree: the shrink of the full fixed
    point seeds the upper bound, branches whose required set can no longer
    beat the bound are cut.
    """
    idx = SatisfactionIndex(instance)
    m0 = idx.restrict(frozenset(instance.nodes))
    if not m0:
        raise NotAQuorumError("instance contains no quorum at all")
    seed = _shrink(idx, m0)
    best_size = len(seed)
    witness = seed
    from_search = False  # seed ties lose to search finds, which come lex-first
    order = [v for v in instance.nodes if v in m0]
    branches = 0
    stack: list[tuple[int, NodeSet, NodeSet]] = [(0, frozenset(), m0)]
    while stack:
        i, v2, m = stack.pop()
        branches += 1
        if i == len(order):
            continue
        v = order[i]
        if v not in m:
            stack.append((i + 1, v2, m))
            continue
        v2r = v2 | {v}
        sz = len(v2r)
        if sz < best_size or (sz == best_size and not from_search):
            if idx.restrict(v2r) == v2r:
                best_size, witness, from_search = sz, v2r, True
        max_useful = best_size - 1 if from_search else best_size
        m_ex = idx.restrict(m - {v})
        if m_ex and v2 <= m_ex and len(v2) < max_useful:
            stack.append((i + 1, v2, m_ex))
        if sz < max_useful:
            stack.append((i + 1, v2r, m))
    result = Witness(MINIMUM, (witness,),
                     {"branches": branches, "reference_visits": idx.work})
    result.verify(instance)
    return result


def mqp_bounded_search(instance: FbasInstance, k: int, r: int) -> NodeSet | None:
    """Search for a quorum of size at most k, for plain instances whose
    nodes declare at most r slices of any one cardinality.

    Grow a candidate set from each start node: while some member lacks a
    slice inside the candidate, branch over that member's slices of size at
    most k and merge one in; cut branches that grow past k.  Any quorum of
    size <= k survives along some branch, so exhaustion means none exists.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if r < 1:
        raise ValueError("r must be at least 1")
    for name in instance.nodes:
        spec = instance.quorum_function[name]
        if spec.plain is None:
            raise EncodingError("bounded search needs the plain encoding")
        multiplicity = Counter(len(q) for q in spec.plain)
        worst = max(multiplicity.values(), default=0)
        if worst > r:
            raise ValueError(
                f"node {name} has {worst} slices of one cardinality, more than r={r}")

    def grow(w: NodeSet) -> NodeSet | None:
        unsatisfied = None
        for v in instance.nodes:
            if v in w and not has_slice_in(instance, v, w):
                unsatisfied = v
                break
        if unsatisfied is None:
            return w
        for q in instance.quorum_function[unsatisfied].plain or ():
            if len(q) > k:
                continue
            w2 = w | q
            if len(w2) > k:
                continue
            found = grow(w2)
            if found is not None:
                return found
        return None

    for start in instance.nodes:
        found = grow(frozenset((start,)))
        if found is not None:
            return found
    return None
