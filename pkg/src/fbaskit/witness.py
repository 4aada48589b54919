"""Result payloads for quorum searches.

A Witness carries the verdict of an analysis together with the quorums that
prove it (one for a minimum-quorum search, two disjoint ones for a
disjointness verdict).  Producers re-verify witnesses before handing them
out, so a returned DISJOINT verdict is always backed by two checked,
non-overlapping quorums.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import FbasError, FbasInstance, NodeSet
from .satisfaction import is_quorum

DISJOINT = "DISJOINT"
INTERSECTING = "INTERSECTING"
INTERSECTING_UNPROVEN = "INTERSECTING-UNPROVEN"
MINIMUM = "MINIMUM"


@dataclass
class Witness:
    verdict: str
    quorums: tuple[NodeSet, ...] = ()
    stats: dict[str, int] = field(default_factory=dict)

    def verify(self, instance: FbasInstance) -> None:
        """Re-check the carried quorums against the instance; raise on lies."""
        for q in self.quorums:
            if not is_quorum(instance, q):
                raise FbasError(f"witness set {sorted(q)} is not a quorum")
        if self.verdict == DISJOINT:
            if len(self.quorums) != 2:
                raise FbasError("DISJOINT verdict needs exactly two quorums")
            q1, q2 = self.quorums
            if q1 & q2:
                raise FbasError(f"witness quorums overlap on {sorted(q1 & q2)}")
        elif self.verdict == MINIMUM:
            if len(self.quorums) != 1:
                raise FbasError("MINIMUM verdict needs exactly one quorum")
        elif self.quorums:
            raise FbasError(f"verdict {self.verdict} carries unexpected quorums")


def disjoint_witness(instance: FbasInstance, q1: NodeSet, q2: NodeSet,
                     stats: dict[str, int]) -> Witness:
    w = Witness(DISJOINT, (q1, q2), stats)
    w.verify(instance)
    return w
