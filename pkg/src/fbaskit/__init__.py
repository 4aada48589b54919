"""Quorum analysis for federated Byzantine agreement systems.

The package answers three questions about an instance: can two disjoint
quorums exist (`disjoint_quorums`, `dqp_k_random`), how small can a quorum
be (`find_min_quorum`, `mqp_bounded_search`), and does a quorum containing
a given node fit inside a given subset (`quorum_subset`).  Around those sit
enumeration, structural guideline checks, hard-instance generators, and
brute-force oracles for cross-validation.
"""

from .enumeration import (EnumerationStats, enumerate_quorums, find_min_quorum,
                          is_minimal_quorum, mqp_bounded_search, shrink_to_minimal)
from .graph import (FbasGraph, GuidelineReport, SccPartition, build_graph,
                    check_guidelines, generate_guideline_config, scc_partition)
from .intersect import (BRUTE_FORCE_LIMIT, BruteForceSizeError, brute_force_dqp,
                        brute_force_max_quorum_within, brute_force_min_quorum,
                        brute_force_minimal_quorums, brute_force_quorums,
                        disjoint_quorums, dqp_k_random)
from .io import (ParseError, RandomProfile, generate_random, parse_instance,
                 serialize_instance)
from .model import (EncodingError, ExpansionLimitError, FbasError, FbasInstance,
                    NodeSet, NotAQuorumError, SliceSpec, ThresholdDef,
                    UnknownNodeError, expand_nested, instance_size, validate,
                    validation_errors)
from .reductions import (CircuitInput, GraphInput, SetSplittingInput,
                         clique_to_xy_fbas, degree_reduce, evaluate_circuit,
                         has_clique, is_splittable, mcvp_to_qsp,
                         min_vertex_cover_size, set_splitting_to_fbas,
                         vertex_cover_to_fbas)
from .satisfaction import (SatisfactionIndex, has_slice_in, is_quorum,
                           max_quorum_within, quorum_subset)
from .witness import (DISJOINT, INTERSECTING, INTERSECTING_UNPROVEN, MINIMUM,
                      Witness)

__version__ = "0.1.0"

__all__ = [
    "BRUTE_FORCE_LIMIT", "BruteForceSizeError", "CircuitInput", "DISJOINT",
    "EncodingError", "EnumerationStats", "ExpansionLimitError", "FbasError",
    "FbasGraph", "FbasInstance", "GraphInput", "GuidelineReport",
    "INTERSECTING", "INTERSECTING_UNPROVEN", "MINIMUM", "NodeSet",
    "NotAQuorumError", "ParseError", "RandomProfile", "SatisfactionIndex",
    "SccPartition", "SetSplittingInput", "SliceSpec", "ThresholdDef",
    "UnknownNodeError", "Witness", "brute_force_dqp",
    "brute_force_max_quorum_within", "brute_force_min_quorum",
    "brute_force_minimal_quorums", "brute_force_quorums", "build_graph",
    "check_guidelines", "clique_to_xy_fbas", "degree_reduce",
    "disjoint_quorums", "dqp_k_random", "enumerate_quorums",
    "evaluate_circuit", "expand_nested", "find_min_quorum",
    "generate_guideline_config", "generate_random", "has_clique",
    "has_slice_in", "instance_size", "is_minimal_quorum", "is_quorum",
    "is_splittable", "max_quorum_within", "mcvp_to_qsp",
    "min_vertex_cover_size", "mqp_bounded_search", "parse_instance",
    "quorum_subset", "scc_partition", "serialize_instance",
    "set_splitting_to_fbas", "shrink_to_minimal", "validate",
    "validation_errors", "vertex_cover_to_fbas",
]
