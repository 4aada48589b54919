"""Slice satisfaction and the greatest-quorum fixed point.

The central operation is max_quorum_within(w): the union of all quorums
contained in w, computed as the greatest fixed point of

    f(x) = {v in x : v has a slice satisfied within x}

by deleting unsatisfiable nodes until none are left.  The SatisfactionIndex
makes one deletion pass linear in the instance size: every node keeps a list
of references to the slice positions that mention it, every threshold gate
keeps a counter of still-available members, and deletions propagate through
a FIFO queue.  Each reference is visited at most once per pass.
"""

from __future__ import annotations

from array import array
from collections import deque
from typing import Iterable

from .model import FbasError, FbasInstance, NodeSet, ThresholdDef, UnknownNodeError


def _eval_def(d: ThresholdDef, w: frozenset[str] | set[str]) -> bool:
    needed = d.threshold
    remaining = len(d.members)
    for member in d.members:
        if isinstance(member, str):
            ok = member in w
        else:
            ok = _eval_def(member, w)
        if ok:
            needed -= 1
            if needed == 0:
                return True
        remaining -= 1
        if remaining < needed:
            return False
    return needed <= 0


def has_slice_in(instance: FbasInstance, v: str, w: Iterable[str]) -> bool:
    """True iff node v has a quorum slice satisfied within w.

    Runs in time linear in the size of v's specification.
    """
    spec = instance.spec_of(v)
    wset = w if isinstance(w, (set, frozenset)) else set(w)
    if spec.plain is not None:
        return any(q <= wset for q in spec.plain)
    return any(_eval_def(d, wset) for d in spec.nested or ())


def is_quorum(instance: FbasInstance, u: Iterable[str]) -> bool:
    """True iff u is a nonempty set whose members all have a slice in u."""
    uset = instance.resolve(u)
    if not uset:
        return False
    return all(has_slice_in(instance, v, uset) for v in uset)


class SatisfactionIndex:
    """Compiled per-instance structure for repeated fixed-point runs.

    Every slice or nested declaration becomes a threshold gate; a node with
    several alternatives gets a one-of gate on top.  Gates store how many of
    their members are still available; when the counter drops below the
    threshold the gate dies, and when a node's top gate dies the node is
    deleted and its occurrence references are walked.  Counters are restored
    from a snapshot on every run, so one index serves a whole search.
    """

    def __init__(self, instance: FbasInstance):
        self.instance = instance
        pos = instance.position
        n = len(instance.nodes)
        thresholds: list[int] = []
        counts: list[int] = []
        parents: list[int] = []
        owners: list[int] = []
        occ: list[list[int]] = [[] for _ in range(n)]
        top_gate = [0] * n
        refs = 0

        def new_gate(t: int, count: int, parent: int, owner: int) -> int:
            g = len(thresholds)
            thresholds.append(t)
            counts.append(count)
            parents.append(parent)
            owners.append(owner)
            return g

        def build_def(d: ThresholdDef, parent: int, owner: int) -> int:
            nonlocal refs
            g = new_gate(d.threshold, len(d.members), parent, owner)
            for member in d.members:
                if isinstance(member, str):
                    occ[pos[member]].append(g)
                    refs += 1
                else:
                    build_def(member, g, -1)
            return g

        for i, name in enumerate(instance.nodes):
            spec = instance.quorum_function[name]
            if spec.plain is not None:
                alts = spec.plain
                if len(alts) == 1:
                    # single-slice fast path, inlined: this is the common
                    # shape on very large instances
                    q = alts[0]
                    g = len(thresholds)
                    lq = len(q)
                    thresholds.append(lq)
                    counts.append(lq)
                    parents.append(-1)
                    owners.append(i)
                    for member in q:
                        occ[pos[member]].append(g)
                    refs += lq
                    top_gate[i] = g
                else:
                    top = new_gate(1, len(alts), -1, i)
                    top_gate[i] = top
                    for q in alts:
                        g = new_gate(len(q), len(q), top, -1)
                        for member in q:
                            occ[pos[member]].append(g)
                        refs += len(q)
            else:
                alts = spec.nested or ()
                if len(alts) == 1:
                    top_gate[i] = build_def(alts[0], -1, i)
                else:
                    top = new_gate(1, len(alts), -1, i)
                    top_gate[i] = top
                    for d in alts:
                        build_def(d, top, -1)

        for g, t in enumerate(thresholds):
            if counts[g] < t or t < 1 and counts[g] > 0:
                raise FbasError("invalid instance: unsatisfiable declaration")

        # compact storage keeps the deletion cascade cache-friendly on
        # million-node instances; occurrence lists are flattened with a
        # start-offset table
        self._thresholds = array("q", thresholds)
        self._counts = array("q", counts)
        self._parents = array("q", parents)
        self._owners = array("q", owners)
        occ_start = array("q", [0] * (n + 1))
        for i, lst in enumerate(occ):
            occ_start[i + 1] = occ_start[i] + len(lst)
        self._occ_start = occ_start
        self._occ_flat = array("q", [g for lst in occ for g in lst])
        self._top_gate = array("q", top_gate)
        self.total_references = refs
        self.visits = 0
        self.work = 0

    def restrict(self, within: Iterable[str]) -> NodeSet:
        """Greatest quorum contained in `within` (may be empty)."""
        instance = self.instance
        pos = instance.position
        names = instance.nodes
        if not isinstance(within, (set, frozenset)):
            within = set(within)

        thresholds = self._thresholds
        parents = self._parents
        owners = self._owners
        occ_start = self._occ_start
        occ_flat = self._occ_flat
        avail = array("q", self._counts)
        dead = bytearray(len(avail))
        alive = bytearray(len(names))
        queue: deque[int] = deque()
        hits = 0
        for i, name in enumerate(names):
            if name in within:
                alive[i] = 1
                hits += 1
            else:
                queue.append(i)
        if hits != len(within):
            for name in within:
                if name not in pos:
                    raise UnknownNodeError(f"unknown node {name}")
        visits = 0
        while queue:
            u = queue.popleft()
            for g in occ_flat[occ_start[u]:occ_start[u + 1]]:
                visits += 1
                if dead[g]:
                    continue
                avail[g] -= 1
                if avail[g] < thresholds[g]:
                    gg = g
                    while True:
                        dead[gg] = 1
                        o = owners[gg]
                        if o >= 0:
                            if alive[o]:
                                alive[o] = 0
                                queue.append(o)
                            break
                        p = parents[gg]
                        if dead[p]:
                            break
                        avail[p] -= 1
                        if avail[p] >= thresholds[p]:
                            break
                        gg = p
        self.visits = visits
        self.work += visits
        assert visits <= self.total_references
        return frozenset(name for i, name in enumerate(names) if alive[i])


def max_quorum_within(instance: FbasInstance, w: Iterable[str]) -> NodeSet:
    """Union of all quorums contained in w; empty when w contains none.

    Monotone in w and idempotent; the result is itself a quorum whenever it
    is nonempty.
    """
    return SatisfactionIndex(instance).restrict(w)


def quorum_subset(instance: FbasInstance, w: Iterable[str], v: str) -> bool:
    """True iff some quorum u with v in u satisfies u subset of w."""
    if v not in instance.position:
        raise UnknownNodeError(f"unknown node {v}")
    return v in SatisfactionIndex(instance).restrict(w)
