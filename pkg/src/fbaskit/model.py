"""Core data model for federated Byzantine agreement systems.

An instance is a finite set of nodes together with a quorum function that
assigns every node a nonempty description of its quorum slices.  Slices come
in two encodings: an explicit list of node sets ("plain"), or a list of
nested threshold declarations of the form "t of {members}" where members may
themselves be declarations ("nested").  A set of nodes u is a quorum when it
is nonempty and every member of u has a slice contained in u.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

DEFAULT_EXPANSION_CAP = 1_000_000

ERROR = "error"
WARNING = "warning"


class FbasError(Exception):
    """Base class for errors raised by this package."""


class UnknownNodeError(FbasError):
    """A node id was used that the instance does not declare."""


class ExpansionLimitError(FbasError):
    """Expanding a nested declaration would produce too many sets."""


class NotAQuorumError(FbasError):
    """An operation required a quorum and was handed something else."""


class EncodingError(FbasError):
    """An operation only defined for one encoding got the other one."""


@dataclass(frozen=True, slots=True)
class ThresholdDef:
    """A declaration "threshold of members".

    Members are node ids or further ThresholdDef values, in a fixed order
    that is preserved by serialization.  The declaration is satisfied by a
    node set w when at least `threshold` of its members are satisfied, where
    a node id member is satisfied iff it belongs to w.
    """

    threshold: int
    members: tuple[Union[str, "ThresholdDef"], ...]

    def __post_init__(self) -> None:
        if not isinstance(self.members, tuple):
            object.__setattr__(self, "members", tuple(self.members))


Member = Union[str, ThresholdDef]

# A node set: constant-time membership, iteration over members only.
NodeSet = frozenset[str]


@dataclass(frozen=True, slots=True)
class SliceSpec:
    """The slice description of a single node, in one of the two encodings.

    Exactly one of `plain` (a tuple of node sets, each a quorum slice) and
    `nested` (a tuple of ThresholdDef alternatives, any one of which may be
    satisfied) is set.  A plain slice {a, b, c} means the owner requires all
    three nodes; a list of several slices or declarations is a disjunction.
    """

    plain: tuple[frozenset[str], ...] | None = None
    nested: tuple[ThresholdDef, ...] | None = None

    def __post_init__(self) -> None:
        if (self.plain is None) == (self.nested is None):
            raise ValueError("SliceSpec needs exactly one of plain or nested")

    @classmethod
    def from_slices(cls, slices: Iterable[Iterable[str]]) -> "SliceSpec":
        return cls(plain=tuple(frozenset(q) for q in slices))

    @classmethod
    def from_defs(cls, defs: Iterable[ThresholdDef]) -> "SliceSpec":
        return cls(nested=tuple(defs))

    @property
    def is_plain(self) -> bool:
        return self.plain is not None

    def referenced_nodes(self) -> set[str]:
        """All node ids occurring anywhere in this spec."""
        if self.plain is not None:
            refs: set[str] = set()
            for q in self.plain:
                refs |= q
            return refs
        refs = set()
        stack: list[Member] = list(self.nested or ())
        while stack:
            m = stack.pop()
            if isinstance(m, str):
                refs.add(m)
            else:
                stack.extend(m.members)
        return refs


class FbasInstance:
    """An immutable FBAS instance: declared nodes plus their slice specs.

    Node ids are opaque strings.  Declaration order is significant: it fixes
    iteration order everywhere (serialization, search order, witnesses), so
    identical inputs give identical outputs.
    """

    def __init__(self, nodes: Iterable[str], quorum_function: Mapping[str, SliceSpec]):
        self.nodes: tuple[str, ...] = tuple(nodes)
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("duplicate node ids in declaration list")
        for name in self.nodes:
            if not isinstance(name, str):
                raise ValueError(f"node id {name!r} is not a string")
            if name not in quorum_function:
                raise ValueError(f"node {name} has no slice specification")
        extra = set(quorum_function) - set(self.nodes)
        if extra:
            raise ValueError(f"slice specification for undeclared node(s): {sorted(extra)}")
        self.quorum_function: dict[str, SliceSpec] = {n: quorum_function[n] for n in self.nodes}
        self.position: dict[str, int] = {n: i for i, n in enumerate(self.nodes)}

    @classmethod
    def from_plain(cls, slices: Mapping[str, Iterable[Iterable[str]]]) -> "FbasInstance":
        """Build a plain-encoded instance from {node: [slice, ...]}."""
        qf = {name: SliceSpec.from_slices(qs) for name, qs in slices.items()}
        return cls(slices.keys(), qf)

    def spec_of(self, name: str) -> SliceSpec:
        try:
            return self.quorum_function[name]
        except KeyError:
            raise UnknownNodeError(f"unknown node {name}") from None

    def resolve(self, names: Iterable[str]) -> NodeSet:
        """Check that every name is declared and return them as a set."""
        out = frozenset(names)
        for name in out:
            if name not in self.position:
                raise UnknownNodeError(f"unknown node {name}")
        return out

    def in_declaration_order(self, names: Iterable[str]) -> list[str]:
        return sorted(names, key=self.position.__getitem__)

    def __len__(self) -> int:
        return len(self.nodes)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FbasInstance):
            return NotImplemented
        return self.nodes == other.nodes and self.quorum_function == other.quorum_function

    def __repr__(self) -> str:
        return f"FbasInstance({len(self.nodes)} nodes)"


@dataclass(frozen=True)
class Diagnostic:
    level: str
    message: str


def _walk_def(d: ThresholdDef, owner: str, instance: FbasInstance, out: list[Diagnostic]) -> None:
    m = len(d.members)
    if m == 0:
        out.append(Diagnostic(ERROR, f"empty member list in declaration of node {owner}"))
        return
    if not isinstance(d.threshold, int) or not 1 <= d.threshold <= m:
        out.append(Diagnostic(
            ERROR, f"threshold {d.threshold} out of range 1..{m} in declaration of node {owner}"))
    seen: list[Member] = []
    for member in d.members:
        if any(member == s for s in seen):
            out.append(Diagnostic(ERROR, f"duplicate member in declaration of node {owner}"))
        seen.append(member)
        if isinstance(member, str):
            if member not in instance.position:
                out.append(Diagnostic(ERROR, f"unknown node {member} in declaration of node {owner}"))
        else:
            _walk_def(member, owner, instance, out)


def validate(instance: FbasInstance) -> list[Diagnostic]:
    """Check an instance and return diagnostics, worst first errors.

    Errors: dangling node references, empty slice lists, empty slices,
    duplicate slices or members, thresholds out of range.  A plain slice
    that omits its owner only earns a warning: the quorum condition
    quantifies over members of the candidate set, so adding the owner to
    its own slice never changes which sets are quorums.
    """
    out: list[Diagnostic] = []
    for name in instance.nodes:
        spec = instance.quorum_function[name]
        if spec.plain is not None:
            if not spec.plain:
                out.append(Diagnostic(ERROR, f"node {name} declares no slices"))
            seen: set[frozenset[str]] = set()
            for q in spec.plain:
                if not q:
                    out.append(Diagnostic(ERROR, f"empty slice declared by node {name}"))
                    continue
                if q in seen:
                    out.append(Diagnostic(ERROR, f"duplicate slice declared by node {name}"))
                seen.add(q)
                for member in q:
                    if member not in instance.position:
                        out.append(Diagnostic(ERROR, f"unknown node {member} in slice of node {name}"))
                if name not in q:
                    out.append(Diagnostic(WARNING, f"slice of node {name} omits {name} itself"))
        else:
            if not spec.nested:
                out.append(Diagnostic(ERROR, f"node {name} declares no slices"))
            for d in spec.nested or ():
                _walk_def(d, name, instance, out)
    return out


def validation_errors(instance: FbasInstance) -> list[Diagnostic]:
    return [d for d in validate(instance) if d.level == ERROR]


def _def_size(d: ThresholdDef) -> int:
    total = 0
    for member in d.members:
        total += 1 if isinstance(member, str) else _def_size(member)
    return total


def instance_size(instance: FbasInstance) -> int:
    """Size of the instance: node count plus total slice content.

    Plain slices contribute their cardinality.  A nested declaration
    contributes one per node reference, counted recursively, so a leaf-level
    enumeration contributes its cardinality and a collection of nested
    declarations contributes the sum of its elements' sizes.
    """
    total = len(instance.nodes)
    for name in instance.nodes:
        spec = instance.quorum_function[name]
        if spec.plain is not None:
            total += sum(len(q) for q in spec.plain)
        else:
            total += sum(_def_size(d) for d in spec.nested or ())
    return total


def _minimal_family(sets: Iterable[frozenset[str]]) -> list[frozenset[str]]:
    """Drop every set that contains another one of the family."""
    ordered = sorted(set(sets), key=lambda s: (len(s), sorted(s)))
    kept: list[frozenset[str]] = []
    for s in ordered:
        if not any(k <= s for k in kept):
            kept.append(s)
    return kept


def expand_nested(d: ThresholdDef, cap: int = DEFAULT_EXPANSION_CAP) -> list[frozenset[str]]:
    """Expand a declaration into its minimal satisfying node sets.

    The result lists exactly the minimal sets w such that the declaration is
    satisfied by w; any satisfying set is a superset of one of them.  Raises
    ExpansionLimitError as soon as an intermediate family would exceed cap.
    """
    m = len(d.members)
    if not 1 <= d.threshold <= m:
        raise FbasError(f"threshold {d.threshold} out of range 1..{m}")
    if math.comb(m, d.threshold) > cap:
        raise ExpansionLimitError(f"expansion exceeds cap of {cap} sets")
    families: list[list[frozenset[str]]] = []
    for member in d.members:
        if isinstance(member, str):
            families.append([frozenset((member,))])
        else:
            families.append(expand_nested(member, cap))
    results: set[frozenset[str]] = set()
    for combo in itertools.combinations(range(m), d.threshold):
        partial: list[frozenset[str]] = [frozenset()]
        for i in combo:
            merged = {base | s for base in partial for s in families[i]}
            if len(merged) > cap:
                raise ExpansionLimitError(f"expansion exceeds cap of {cap} sets")
            partial = _minimal_family(merged)
        results.update(partial)
        if len(results) > cap:
            raise ExpansionLimitError(f"expansion exceeds cap of {cap} sets")
    return _minimal_family(results)
