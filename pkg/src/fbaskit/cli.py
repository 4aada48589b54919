"""Command-line frontend.

Exit codes separate "how the run went" from the mathematical verdict: 0
means the analysis ran (the verdict is in the payload), 1 means a usage or
parse problem, 2 means an internal guard tripped (brute-force size cap,
failed witness verification, precondition violations).  Output is plain
text by default; --format json switches to machine-readable JSON.  All
commands are deterministic: identical invocations produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import enumeration, intersect, io, model, reductions
from .graph import build_graph, check_guidelines, generate_guideline_config, scc_partition
from .model import FbasError, FbasInstance
from .satisfaction import SatisfactionIndex
from .witness import DISJOINT, MINIMUM, Witness

USAGE_ERROR = 1
GUARD_ERROR = 2


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; remap to 1 per our contract."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", USAGE_ERROR) from None


def _load_instance(path: str, *, check: bool = True) -> FbasInstance:
    try:
        return io.parse_instance(_read_text(path), check=check)
    except io.ParseError as exc:
        raise CliError(f"{path}: {exc}", USAGE_ERROR) from None


def _write_out(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _emit_json(doc) -> None:
    print(json.dumps(doc, indent=2, ensure_ascii=False))


def _names(instance: FbasInstance, nodes) -> list[str]:
    return instance.in_declaration_order(nodes)


def _split_ids(raw: str) -> list[str]:
    return [part.strip() for part in raw.split(",") if part.strip()]


def _stats_line(stats: dict) -> str:
    return "stats: " + " ".join(f"{k}={v}" for k, v in stats.items())


def _print_witness(instance: FbasInstance, witness: Witness, fmt: str) -> None:
    if fmt == "json":
        doc: dict = {"verdict": witness.verdict}
        if witness.verdict == DISJOINT:
            q1, q2 = witness.quorums
            doc["quorum1"] = _names(instance, q1)
            doc["quorum2"] = _names(instance, q2)
        elif witness.verdict == MINIMUM:
            doc["quorum"] = _names(instance, witness.quorums[0])
        doc["stats"] = witness.stats
        _emit_json(doc)
        return
    print(f"verdict: {witness.verdict}")
    if witness.verdict == DISJOINT:
        for i, q in enumerate(witness.quorums, start=1):
            print(f"quorum {i} ({len(q)}): " + ", ".join(_names(instance, q)))
    elif witness.verdict == MINIMUM:
        q = witness.quorums[0]
        print(f"quorum ({len(q)}): " + ", ".join(_names(instance, q)))
    if witness.stats:
        print(_stats_line(witness.stats))


def _verify_witness(instance: FbasInstance, witness: Witness) -> None:
    try:
        witness.verify(instance)
    except FbasError as exc:
        raise CliError(f"witness verification failed: {exc}", GUARD_ERROR) from None


def _cmd_check_intersection(args) -> int:
    instance = _load_instance(args.file)
    if args.randomized:
        if args.k is None:
            raise CliError("--randomized requires --k", USAGE_ERROR)
        witness = intersect.dqp_k_random(instance, args.k, trials=args.trials,
                                         seed=args.seed)
    else:
        witness = intersect.disjoint_quorums(instance)
    if args.verify:
        _verify_witness(instance, witness)
    _print_witness(instance, witness, args.format)
    return 0


def _cmd_min_quorum(args) -> int:
    instance = _load_instance(args.file)
    if args.fpt:
        if args.k is None:
            raise CliError("--fpt requires --k", USAGE_ERROR)
        try:
            found = enumeration.mqp_bounded_search(instance, args.k, args.r)
        except ValueError as exc:
            raise CliError(str(exc), GUARD_ERROR) from None
        if args.format == "json":
            doc = {"k": args.k, "found": found is not None}
            if found is not None:
                doc["quorum"] = _names(instance, found)
            _emit_json(doc)
        elif found is None:
            print(f"no quorum of size <= {args.k}")
        else:
            print(f"quorum of size <= {args.k} ({len(found)}): "
                  + ", ".join(_names(instance, found)))
        return 0
    witness = enumeration.find_min_quorum(instance)
    if args.verify:
        _verify_witness(instance, witness)
    if args.format == "json":
        size = len(witness.quorums[0])
        doc = {"verdict": witness.verdict, "size": size,
               "quorum": _names(instance, witness.quorums[0]),
               "stats": witness.stats}
        if args.k is not None:
            doc["within_k"] = size <= args.k
        _emit_json(doc)
    else:
        _print_witness(instance, witness, args.format)
        if args.k is not None:
            answer = "YES" if len(witness.quorums[0]) <= args.k else "NO"
            print(f"size <= {args.k}: {answer}")
    return 0


def _cmd_qsp(args) -> int:
    instance = _load_instance(args.file)
    subset = _split_ids(args.subset)
    try:
        quorum = SatisfactionIndex(instance).restrict(instance.resolve(subset))
    except model.UnknownNodeError as exc:
        raise CliError(str(exc), USAGE_ERROR) from None
    if args.node not in instance.position:
        raise CliError(f"unknown node {args.node}", USAGE_ERROR)
    answer = args.node in quorum
    if args.format == "json":
        doc = {"node": args.node, "answer": "YES" if answer else "NO"}
        if answer:
            doc["quorum"] = _names(instance, quorum)
        _emit_json(doc)
    else:
        print("YES" if answer else "NO")
        if answer:
            print(f"quorum ({len(quorum)}): " + ", ".join(_names(instance, quorum)))
    return 0


def _cmd_enumerate(args) -> int:
    instance = _load_instance(args.file)
    within = _split_ids(args.within) if args.within else None
    stats = enumeration.EnumerationStats()
    try:
        quorums = list(enumeration.enumerate_quorums(
            instance, within, limit=args.limit, minimal_only=args.minimal_only,
            stats=stats))
    except model.UnknownNodeError as exc:
        raise CliError(str(exc), USAGE_ERROR) from None
    if args.format == "json":
        _emit_json({"quorums": [_names(instance, q) for q in quorums],
                    "count": len(quorums),
                    "stats": {"branches": stats.branches,
                              "max_work_between_emissions": stats.max_work_between_emissions}})
    else:
        for q in quorums:
            print(", ".join(_names(instance, q)))
        print(f"count: {len(quorums)}")
    return 0


def _cmd_validate(args) -> int:
    instance = _load_instance(args.file, check=False)
    diagnostics = model.validate(instance)
    errors = sum(1 for d in diagnostics if d.level == model.ERROR)
    if args.format == "json":
        _emit_json({"errors": errors, "warnings": len(diagnostics) - errors,
                    "diagnostics": [{"level": d.level, "message": d.message}
                                    for d in diagnostics]})
    else:
        for d in diagnostics:
            print(f"{d.level}: {d.message}")
        if not diagnostics:
            print("ok")
        else:
            print(f"{errors} error(s), {len(diagnostics) - errors} warning(s)")
    return USAGE_ERROR if errors else 0


def _cmd_stats(args) -> int:
    instance = _load_instance(args.file, check=False)
    part = scc_partition(build_graph(instance))
    plain = sum(1 for n in instance.nodes if instance.quorum_function[n].is_plain)
    greatest = part.greatest()
    doc = {
        "nodes": len(instance.nodes),
        "size": model.instance_size(instance),
        "plain_nodes": plain,
        "nested_nodes": len(instance.nodes) - plain,
        "components": len(part.components),
        "greatest_component_nodes": (len(part.components[greatest])
                                     if greatest is not None else None),
    }
    if args.format == "json":
        _emit_json(doc)
    else:
        for key, value in doc.items():
            print(f"{key.replace('_', ' ')}: {'none' if value is None else value}")
    return 0


def _cmd_guideline_check(args) -> int:
    instance = _load_instance(args.file)
    report = check_guidelines(instance)
    if args.format == "json":
        _emit_json({"conforms": report.conforms, "reasons": report.reasons})
    elif report.conforms:
        print("conforms")
    else:
        print("does not conform:")
        for reason in report.reasons:
            print(f"  {reason}")
    return 0


def _cmd_degree_reduce(args) -> int:
    instance = _load_instance(args.file)
    try:
        reduced = reductions.degree_reduce(instance)
    except model.EncodingError as exc:
        raise CliError(str(exc), GUARD_ERROR) from None
    _write_out(io.serialize_instance(reduced), args.output)
    return 0


def _cmd_oracle(args) -> int:
    instance = _load_instance(args.file)
    try:
        if args.problem == "dqp":
            witness = intersect.brute_force_dqp(instance)
            if args.verify:
                _verify_witness(instance, witness)
            _print_witness(instance, witness, args.format)
        else:
            q = intersect.brute_force_min_quorum(instance)
            if args.format == "json":
                _emit_json({"size": len(q), "quorum": _names(instance, q)})
            else:
                print(f"quorum ({len(q)}): " + ", ".join(_names(instance, q)))
    except intersect.BruteForceSizeError as exc:
        raise CliError(str(exc), GUARD_ERROR) from None
    return 0


def _load_json_doc(path: str) -> dict:
    text = _read_text(path)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: not valid JSON: {exc}", USAGE_ERROR) from None
    if not isinstance(doc, dict):
        raise CliError(f"{path}: expected a JSON object", USAGE_ERROR)
    return doc


def _cmd_generate(args) -> int:
    kind = args.kind
    try:
        if kind == "random":
            profile = io.RandomProfile(encoding=args.encoding,
                                       max_slices=args.max_slices,
                                       max_slice_size=args.max_slice_size,
                                       include_owner=not args.no_owner)
            instance = io.generate_random(args.n, profile, args.seed)
        elif kind == "guideline":
            sizes = [int(part) for part in _split_ids(args.sizes)]
            instance = generate_guideline_config(sizes, args.seed)
        elif kind == "set-splitting":
            inp = reductions.SetSplittingInput.from_json_dict(_load_json_doc(args.input))
            instance, _ = reductions.set_splitting_to_fbas(inp)
        elif kind == "vertex-cover":
            inp = reductions.GraphInput.from_json_dict(_load_json_doc(args.input))
            instance, _ = reductions.vertex_cover_to_fbas(inp)
        elif kind == "clique":
            inp = reductions.GraphInput.from_json_dict(_load_json_doc(args.input))
            instance, _ = reductions.clique_to_xy_fbas(inp, args.k)
        else:  # mcvp
            if args.output == "-":
                raise CliError("mcvp needs a real --output path for the sidecar",
                               USAGE_ERROR)
            inp = reductions.CircuitInput.from_json_dict(_load_json_doc(args.input))
            instance, within, query = reductions.mcvp_to_qsp(inp)
            _write_out(io.serialize_instance(instance), args.output)
            sidecar = json.dumps({"within": _names(instance, within), "node": query},
                                 indent=2) + "\n"
            Path(args.output + ".meta.json").write_text(sidecar, encoding="utf-8")
            return 0
    except ValueError as exc:
        raise CliError(str(exc), USAGE_ERROR) from None
    _write_out(io.serialize_instance(instance), args.output)
    return 0


def _add_format(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("text", "json"), default="text",
                        help="output format (default: text)")


def build_parser() -> _Parser:
    parser = _Parser(prog="fbaskit",
                     description="quorum analysis for federated byzantine agreement systems")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("check-intersection", help="decide whether two disjoint quorums exist")
    p.add_argument("file", help="instance document, or - for stdin")
    p.add_argument("--randomized", action="store_true",
                   help="random-separation search instead of the exact algorithm")
    p.add_argument("--k", type=int, help="combined size bound for --randomized")
    p.add_argument("--trials", type=int, help="trial count (default 2^k)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--verify", action="store_true", help="re-check the witness")
    _add_format(p)
    p.set_defaults(handler=_cmd_check_intersection)

    p = sub.add_parser("min-quorum", help="find a smallest quorum")
    p.add_argument("file")
    p.add_argument("--k", type=int, help="also report whether the minimum is <= k")
    p.add_argument("--fpt", action="store_true",
                   help="bounded search for a quorum of size <= k (plain encoding)")
    p.add_argument("--r", type=int, default=2,
                   help="slice-multiplicity bound for --fpt (default 2)")
    p.add_argument("--verify", action="store_true", help="re-check the witness")
    _add_format(p)
    p.set_defaults(handler=_cmd_min_quorum)

    p = sub.add_parser("qsp", help="is some quorum containing --node inside --subset?")
    p.add_argument("file")
    p.add_argument("--node", required=True)
    p.add_argument("--subset", required=True, help="comma-separated node ids")
    _add_format(p)
    p.set_defaults(handler=_cmd_qsp)

    p = sub.add_parser("enumerate", help="list quorums")
    p.add_argument("file")
    p.add_argument("--limit", type=int)
    p.add_argument("--minimal-only", action="store_true")
    p.add_argument("--within", help="comma-separated node ids (default: all)")
    _add_format(p)
    p.set_defaults(handler=_cmd_enumerate)

    p = sub.add_parser("validate", help="report instance diagnostics")
    p.add_argument("file")
    _add_format(p)
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("stats", help="basic shape metrics")
    p.add_argument("file")
    _add_format(p)
    p.set_defaults(handler=_cmd_stats)

    p = sub.add_parser("guideline-check", help="check the intersection-forcing pattern")
    p.add_argument("file")
    _add_format(p)
    p.set_defaults(handler=_cmd_guideline_check)

    p = sub.add_parser("degree-reduce",
                       help="rewrite to <= 2 slices per node, <= 2 nodes per slice")
    p.add_argument("file")
    p.add_argument("-o", "--output", help="write here instead of stdout")
    p.set_defaults(handler=_cmd_degree_reduce)

    p = sub.add_parser("oracle", help="brute-force reference answers (n <= 20)")
    p.add_argument("problem", choices=("dqp", "min-quorum"))
    p.add_argument("file")
    p.add_argument("--verify", action="store_true", help="re-check the witness")
    _add_format(p)
    p.set_defaults(handler=_cmd_oracle)

    p = sub.add_parser("generate", help="emit instances, including reduction outputs")
    gen = p.add_subparsers(dest="kind", required=True, metavar="kind")

    g = gen.add_parser("random", help="seeded random instance")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--encoding", choices=("plain", "nested", "mixed"), default="plain")
    g.add_argument("--max-slices", type=int, default=3)
    g.add_argument("--max-slice-size", type=int, default=3)
    g.add_argument("--no-owner", action="store_true",
                   help="do not force the owner into its own slices")
    g.add_argument("-o", "--output")
    g.set_defaults(handler=_cmd_generate)

    g = gen.add_parser("guideline", help="conforming configuration from component sizes")
    g.add_argument("--sizes", required=True, help="comma-separated component sizes")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output")
    g.set_defaults(handler=_cmd_generate)

    g = gen.add_parser("set-splitting", help="embed a set-splitting problem")
    g.add_argument("--input", required=True,
                   help='JSON {"elements": [...], "family": [[...]]}')
    g.add_argument("-o", "--output")
    g.set_defaults(handler=_cmd_generate)

    g = gen.add_parser("vertex-cover", help="embed a vertex-cover problem")
    g.add_argument("--input", required=True,
                   help='JSON {"vertices": [...], "edges": [[a, b], ...]}')
    g.add_argument("-o", "--output")
    g.set_defaults(handler=_cmd_generate)

    g = gen.add_parser("clique", help="embed a k-clique problem")
    g.add_argument("--input", required=True,
                   help='JSON {"vertices": [...], "edges": [[a, b], ...]}')
    g.add_argument("--k", type=int, required=True)
    g.add_argument("-o", "--output")
    g.set_defaults(handler=_cmd_generate)

    g = gen.add_parser("mcvp", help="embed a monotone circuit value problem")
    g.add_argument("--input", required=True,
                   help='JSON {"gates": ["true", ["or", 1, 2], ...]}')
    g.add_argument("-o", "--output", required=True,
                   help="instance file; the subset and query land in <output>.meta.json")
    g.set_defaults(handler=_cmd_generate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except CliError as exc:
        print(f"fbaskit: {exc}", file=sys.stderr)
        return exc.code
    except FbasError as exc:
        print(f"fbaskit: {exc}", file=sys.stderr)
        return GUARD_ERROR


if __name__ == "__main__":
    sys.exit(main())
