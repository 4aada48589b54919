"""Deciding whether an instance admits two disjoint quorums.

The exact algorithm works component-wise: minimal quorums induce strongly
connected subgraphs, so they live inside single components.  If two
components each contain a quorum the answer is immediate; otherwise all
quorums meet inside one component and we search it, testing for each
candidate quorum whether its complement within the component still contains
one.  The search prunes a branch as soon as the complement of its required
set has no quorum left, which never loses a witness because complements only
shrink as the required set grows.

The brute-force routines here are the independent oracle: they evaluate
slice semantics directly over all 2^n subsets with numpy and share no code
with the fixed-point engine.
"""

from __future__ import annotations

import logging
import random
from typing import Iterable

import numpy as np

from .graph import build_graph, scc_partition
from .model import FbasError, FbasInstance, NodeSet, NotAQuorumError, ThresholdDef
from .satisfaction import SatisfactionIndex
from .witness import (INTERSECTING, INTERSECTING_UNPROVEN, Witness,
                      disjoint_witness)

logger = logging.getLogger(__name__)

BRUTE_FORCE_LIMIT = 20


class BruteForceSizeError(FbasError):
    """The instance is too large for exhaustive subset scanning."""


def disjoint_quorums(instance: FbasInstance) -> Witness:
    """Exact disjoint-quorum decision with verified witnesses.

    Phase one tests every strongly connected component for a contained
    quorum; two hits give two disjoint quorums right away.  Phase two
    searches the single quorum-bearing component for a quorum whose
    complement within the component still contains one.
    """
    idx = SatisfactionIndex(instance)
    part = scc_partition(build_graph(instance))
    stats: dict[str, int] = {"components": len(part.components), "branches": 0}
    bearing: list[NodeSet] = []
    for comp in part.components:
        q = idx.restrict(comp)
        if q:
            bearing.append(q)
            if len(bearing) == 2:
                logger.debug("two quorum-bearing components")
                stats["reference_visits"] = idx.work
                return disjoint_witness(instance, bearing[0], bearing[1], stats)
    if not bearing:
        raise NotAQuorumError("no component contains a quorum; instance invalid?")

    # all quorums meet the one bearing component; search inside it
    universe = bearing[0]
    order = [v for v in instance.nodes if v in universe]
    stack: list[tuple[int, NodeSet, NodeSet]] = [(0, frozenset(), universe)]
    while stack:
        i, v2, m = stack.pop()
        stats["branches"] += 1
        if i == len(order) or not m:
            continue
        v = order[i]
        if v not in m:
            stack.append((i + 1, v2, m))
            continue
        m_ex = idx.restrict(m - {v})
        if m_ex and v2 <= m_ex:
            stack.append((i + 1, v2, m_ex))
        v2r = v2 | {v}
        rest_req = idx.restrict(universe - v2r)
        if rest_req:
            if idx.restrict(v2r) == v2r:
                stats["reference_visits"] = idx.work
                return disjoint_witness(instance, v2r, rest_req, stats)
            stack.append((i + 1, v2r, m))
        # empty rest_req: no quorum avoids v2r, drop the require branch
    stats["reference_visits"] = idx.work
    return Witness(INTERSECTING, (), stats)


def dqp_k_random(instance: FbasInstance, k: int, trials: int | None = None,
                 seed: int = 0) -> Witness:
    """Random-separation search for a disjoint pair of combined size <= k.

    Each trial colours every node red or green independently; if both
    colour classes contain quorums those are disjoint and we are done.  A
    planted disjoint pair of combined size <= k survives a trial with
    probability at least 2^-k, so the default of 2^k trials finds it with
    constant probability.  A DISJOINT verdict is always sound; exhaustion
    returns INTERSECTING-UNPROVEN, never a claim of intersection.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if trials is None:
        trials = 2 ** k
    idx = SatisfactionIndex(instance)
    nodes = instance.nodes
    for t in range(trials):
        # trial seed derived from (seed, trial); string seeding is stable
        # across processes
        rng = random.Random(f"{seed}:{t}")
        red = frozenset(v for v in nodes if rng.getrandbits(1))
        q_red = idx.restrict(red)
        if not q_red:
            continue
        q_green = idx.restrict(frozenset(nodes) - red)
        if q_green:
            return disjoint_witness(instance, q_red, q_green, {"trials": t + 1})
    return Witness(INTERSECTING_UNPROVEN, (), {"trials": trials})


def _guard(instance: FbasInstance) -> int:
    n = len(instance.nodes)
    if n > BRUTE_FORCE_LIMIT:
        raise BruteForceSizeError(
            f"size guard: brute force limited to n <= {BRUTE_FORCE_LIMIT}, got {n}")
    return n


def _bit_arrays(n: int, masks: np.ndarray) -> list[np.ndarray]:
    return [((masks >> i) & 1).astype(np.int8) for i in range(n)]


def quorum_table(instance: FbasInstance) -> np.ndarray:
    """Boolean table over all 2^n subsets: table[mask] iff mask is a quorum.

    Bit i of a mask stands for the i-th declared node.  Slice semantics are
    evaluated directly (submask tests for plain slices, member counting for
    nested declarations); this is deliberately a second, independent
    implementation of the quorum definition.
    """
    n = _guard(instance)
    size = 1 << n
    masks = np.arange(size, dtype=np.uint32)
    pos = instance.position
    bits = _bit_arrays(n, masks)

    def eval_def(d: ThresholdDef) -> np.ndarray:
        acc = np.zeros(size, dtype=np.int16)
        for member in d.members:
            if isinstance(member, str):
                acc += bits[pos[member]]
            else:
                acc += eval_def(member)
        return acc >= d.threshold

    ok = np.ones(size, dtype=bool)
    for i, name in enumerate(instance.nodes):
        spec = instance.quorum_function[name]
        sat = np.zeros(size, dtype=bool)
        if spec.plain is not None:
            for q in spec.plain:
                qmask = 0
                for member in q:
                    qmask |= 1 << pos[member]
                sat |= (masks & qmask) == qmask
        else:
            for d in spec.nested or ():
                sat |= eval_def(d)
        ok &= ~(bits[i].astype(bool)) | sat
    ok[0] = False
    return ok


def contains_quorum_table(table: np.ndarray, n: int) -> np.ndarray:
    """table2[mask] iff some subset of mask is a quorum (subset closure)."""
    closed = table.copy()
    for i in range(n):
        step = 1 << i
        view = closed.reshape(-1, 2, step)
        view[:, 1, :] |= view[:, 0, :]
        closed = view.reshape(-1)
    return closed


def _mask_to_set(instance: FbasInstance, mask: int) -> NodeSet:
    return frozenset(name for i, name in enumerate(instance.nodes) if mask >> i & 1)


def brute_force_quorums(instance: FbasInstance) -> list[NodeSet]:
    table = quorum_table(instance)
    return [_mask_to_set(instance, int(m)) for m in np.flatnonzero(table)]


def brute_force_minimal_quorums(instance: FbasInstance) -> list[NodeSet]:
    n = _guard(instance)
    table = quorum_table(instance)
    closed = contains_quorum_table(table, n)
    masks = np.arange(1 << n, dtype=np.uint32)
    minimal = table.copy()
    for i in range(n):
        has_bit = ((masks >> i) & 1).astype(bool)
        minimal &= ~(has_bit & closed[masks ^ (1 << i)])
    return [_mask_to_set(instance, int(m)) for m in np.flatnonzero(minimal)]


def brute_force_max_quorum_within(instance: FbasInstance, w: Iterable[str]) -> NodeSet:
    """Union of all quorums contained in w, by exhaustive scan."""
    n = _guard(instance)
    table = quorum_table(instance)
    wmask = 0
    for name in instance.resolve(w):
        wmask |= 1 << instance.position[name]
    masks = np.arange(1 << n, dtype=np.uint32)
    inside = table & ((masks & ~np.uint32(wmask)) == 0)
    union = int(np.bitwise_or.reduce(masks[inside])) if inside.any() else 0
    return _mask_to_set(instance, union)


def brute_force_dqp(instance: FbasInstance) -> Witness:
    """Exhaustive disjoint-quorum decision, the oracle side.

    Scans all subsets: the instance has two disjoint quorums iff some
    quorum's complement still contains one.
    """
    n = _guard(instance)
    size = 1 << n
    table = quorum_table(instance)
    closed = contains_quorum_table(table, n)
    masks = np.arange(size, dtype=np.uint32)
    full = size - 1
    good = table & closed[full ^ masks]
    hits = np.flatnonzero(good)
    stats = {"subsets_scanned": size}
    if len(hits) == 0:
        return Witness(INTERSECTING, (), stats)
    q1_mask = int(hits[0])
    inside = table & ((masks & np.uint32(q1_mask)) == 0)
    q2_mask = int(np.flatnonzero(inside)[0])
    return disjoint_witness(instance, _mask_to_set(instance, q1_mask),
                            _mask_to_set(instance, q2_mask), stats)


def brute_force_min_quorum(instance: FbasInstance) -> NodeSet:
    """Smallest quorum by exhaustive scan, same tie-break as the search:
    among smallest quorums, the one whose sorted member positions come
    lexicographically first."""
    n = _guard(instance)
    table = quorum_table(instance)
    if not table.any():
        raise NotAQuorumError("instance contains no quorum at all")
    masks = np.arange(1 << n, dtype=np.uint32)
    sizes = np.zeros(1 << n, dtype=np.int8)
    for i in range(n):
        sizes += ((masks >> i) & 1).astype(np.int8)
    min_size = int(sizes[table].min())
    candidates = masks[table & (sizes == min_size)]
    for i in range(n):
        with_i = candidates[((candidates >> i) & 1).astype(bool)]
        if len(with_i):
            candidates = with_i
    return _mask_to_set(instance, int(candidates[0]))
