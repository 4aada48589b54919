"""Reading, writing, and generating instances.

The on-disk format is JSON: a top-level object with a "nodes" list, one
entry per node in declaration order.  Each entry carries an "id" and
exactly one of

* "slices": a list of slices, each a list of node ids (plain encoding), or
* "qset": a nested threshold object {"threshold": t, "members": [...]}
  whose members are node ids or further threshold objects.

Serialization is canonical: given equal instances it produces identical
bytes, and parsing its output and serializing again is a fixed point.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .model import FbasError, FbasInstance, SliceSpec, ThresholdDef, validation_errors


class ParseError(FbasError):
    """Raised for malformed instance documents; the message names the
    JSON path of the offending value."""


def _parse_def(doc, path: str) -> ThresholdDef:
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: expected a threshold object, got {type(doc).__name__}")
    extra = set(doc) - {"threshold", "members"}
    if extra:
        raise ParseError(f"{path}: unexpected keys {sorted(extra)}")
    threshold = doc.get("threshold")
    members = doc.get("members")
    if not isinstance(threshold, int) or isinstance(threshold, bool):
        raise ParseError(f"{path}.threshold: expected an integer")
    if not isinstance(members, list):
        raise ParseError(f"{path}.members: expected a list")
    parsed: list[str | ThresholdDef] = []
    for i, m in enumerate(members):
        if isinstance(m, str):
            parsed.append(m)
        else:
            parsed.append(_parse_def(m, f"{path}.members[{i}]"))
    return ThresholdDef(threshold, tuple(parsed))


def parse_instance(text: str, *, check: bool = True) -> FbasInstance:
    """Parse a JSON instance document.

    With check=True (the default) any validation error in the parsed
    instance also raises ParseError; pass check=False to obtain the
    instance regardless and inspect its diagnostics directly.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("top level: expected an object")
    if set(doc) != {"nodes"}:
        raise ParseError('top level: expected exactly the key "nodes"')
    entries = doc["nodes"]
    if not isinstance(entries, list):
        raise ParseError("nodes: expected a list")
    names: list[str] = []
    qf: dict[str, SliceSpec] = {}
    for i, entry in enumerate(entries):
        path = f"nodes[{i}]"
        if not isinstance(entry, dict):
            raise ParseError(f"{path}: expected an object")
        name = entry.get("id")
        if not isinstance(name, str) or not name:
            raise ParseError(f"{path}.id: expected a nonempty string")
        extra = set(entry) - {"id", "slices", "qset"}
        if extra:
            raise ParseError(f"{path}: unexpected keys {sorted(extra)}")
        has_slices = "slices" in entry
        has_qset = "qset" in entry
        if has_slices == has_qset:
            raise ParseError(f'{path}: expected exactly one of "slices" or "qset"')
        if has_slices:
            slices = entry["slices"]
            if not isinstance(slices, list):
                raise ParseError(f"{path}.slices: expected a list")
            parsed_slices: list[frozenset[str]] = []
            for j, s in enumerate(slices):
                if not isinstance(s, list) or any(not isinstance(x, str) for x in s):
                    raise ParseError(f"{path}.slices[{j}]: expected a list of node ids")
                parsed_slices.append(frozenset(s))
            spec = SliceSpec.from_slices(parsed_slices)
        else:
            spec = SliceSpec.from_defs([_parse_def(entry["qset"], f"{path}.qset")])
        if name in qf:
            raise ParseError(f"{path}.id: duplicate node id {name}")
        names.append(name)
        qf[name] = spec
    try:
        instance = FbasInstance(names, qf)
    except (FbasError, ValueError) as exc:
        raise ParseError(str(exc)) from None
    if check:
        errors = validation_errors(instance)
        if errors:
            raise ParseError("; ".join(d.message for d in errors))
    return instance


def _def_to_doc(d: ThresholdDef) -> dict:
    members = [m if isinstance(m, str) else _def_to_doc(m) for m in d.members]
    return {"threshold": d.threshold, "members": members}


def serialize_instance(instance: FbasInstance) -> str:
    """Render the canonical JSON document, with a trailing newline.

    Plain slice members appear in declaration order; nested member order
    is kept as declared.
    """
    entries = []
    for name in instance.nodes:
        spec = instance.quorum_function[name]
        if spec.plain is not None:
            slices = [sorted(s, key=instance.position.__getitem__) for s in spec.plain]
            entries.append({"id": name, "slices": slices})
        else:
            defs = spec.nested or ()
            if len(defs) == 1:
                doc = _def_to_doc(defs[0])
            else:
                # several alternatives fold into an equivalent 1-of wrapper
                doc = {"threshold": 1, "members": [_def_to_doc(d) for d in defs]}
            entries.append({"id": name, "qset": doc})
    return json.dumps({"nodes": entries}, indent=2, ensure_ascii=False) + "\n"


@dataclass(frozen=True)
class RandomProfile:
    """Shape parameters for generated instances."""

    encoding: str = "plain"  # "plain", "nested", or "mixed"
    max_slices: int = 3
    max_slice_size: int = 3
    include_owner: bool = True
    max_depth: int = 2
    max_members: int = 4

    def __post_init__(self) -> None:
        if self.encoding not in ("plain", "nested", "mixed"):
            raise ValueError(f"unknown encoding {self.encoding!r}")
        if self.max_slices < 1 or self.max_slice_size < 1 or self.max_members < 1:
            raise ValueError("profile limits must be at least 1")
        if self.max_depth < 0:
            raise ValueError("max_depth must be at least 0")


def _random_slices(rng: random.Random, owner: str, others: list[str],
                   profile: RandomProfile) -> SliceSpec:
    want = rng.randint(1, profile.max_slices)
    seen: set[frozenset[str]] = set()
    ordered: list[frozenset[str]] = []
    for _ in range(want * 4):
        if len(ordered) == want:
            break
        size = rng.randint(1, profile.max_slice_size)
        if profile.include_owner:
            picked = rng.sample(others, min(size - 1, len(others)))
            s = frozenset([owner, *picked])
        else:
            pool = [owner, *others]
            s = frozenset(rng.sample(pool, min(size, len(pool))))
        if s not in seen:
            seen.add(s)
            ordered.append(s)
    return SliceSpec.from_slices(ordered)


def _random_def(rng: random.Random, owner: str, others: list[str],
                profile: RandomProfile, depth: int, force_owner: bool) -> ThresholdDef:
    count = rng.randint(1, min(profile.max_members, 1 + len(others)))
    members: list[str | ThresholdDef] = []
    pool = list(others)
    if force_owner:
        members.append(owner)
    attempts = 0
    while len(members) < count and attempts < 4 * count:
        attempts += 1
        if depth < profile.max_depth and pool and rng.random() < 0.3:
            cand: str | ThresholdDef = _random_def(rng, owner, pool, profile,
                                                   depth + 1, False)
        elif pool:
            cand = pool.pop(rng.randrange(len(pool)))
        else:
            break
        # identical sub-declarations would count as duplicate members
        if cand not in members:
            members.append(cand)
    if not members:
        members.append(owner)
    threshold = rng.randint(1, len(members))
    return ThresholdDef(threshold, tuple(members))


def generate_random(n: int, profile: RandomProfile = RandomProfile(),
                    seed: int = 0) -> FbasInstance:
    """Generate a deterministic pseudo-random instance with nodes n0..n{n-1}."""
    if n < 1:
        raise ValueError(f"need at least one node, got {n}")
    rng = random.Random(seed)
    names = [f"n{i}" for i in range(n)]
    qf: dict[str, SliceSpec] = {}
    for i, name in enumerate(names):
        others = names[:i] + names[i + 1:]
        encoding = profile.encoding
        if encoding == "mixed":
            encoding = "nested" if rng.random() < 0.5 else "plain"
        if encoding == "plain":
            qf[name] = _random_slices(rng, name, others, profile)
        else:
            d = _random_def(rng, name, others, profile, 0, profile.include_owner)
            qf[name] = SliceSpec.from_defs([d])
    return FbasInstance(names, qf)
