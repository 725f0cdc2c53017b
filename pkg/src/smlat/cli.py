"""Command-line interface.

Exit codes: 0 success, 2 usage, 3 bad input or violated precondition,
4 size limit exceeded, 5 verification failure.
"""

import argparse
import sys

from . import corpus as corpus_mod
from .errors import (BoundExceededError, CapExceededError, ParseError, SizeLimitError,
                     SmlatError, VerificationError)
from .extensions import (exhaustive_extension_search, extend_parallel_chains,
                         extend_to_geometric, rectangular_extension)
from .formats import emit_dot, emit_lattice, emit_trace, parse_lattice, parse_poset, verify_trace
from .geometry import enumerate_geometries
from .lattice import (is_distributive, is_geometric, is_join_distributive, is_modular,
                      is_semimodular, join_irreducibles)
from .lowering import lower
from .poset import width_chain_partition

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PRECONDITION = 3
EXIT_SIZE = 4
EXIT_VERIFY = 5


def _read(path):
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _write_output(text, path):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _load_lattice(path):
    return parse_lattice(_read(path))


def _parse_partition(spec_text):
    chains = []
    for block in spec_text.split(";"):
        block = block.strip()
        if not block:
            continue
        chains.append(tuple(int(part) for part in block.split(",") if part.strip()))
    if not chains:
        raise ParseError(1, "empty chain partition")
    return chains


def _maybe_figure(lat, args, highlight=None, title=None):
    figure = getattr(args, "figure", None)
    if figure:
        from .figures import render_hasse
        render_hasse(lat, path=figure, highlight=highlight, title=title)


def _maybe_trace(trace, args):
    path = getattr(args, "trace", None)
    if path:
        _write_output(emit_trace(trace), path)


def cmd_check(args):
    lat = _load_lattice(args.file)
    jir = join_irreducibles(lat)
    lines = [
        f"n={lat.n}",
        f"length={lat.length()}",
        f"semimodular={'true' if is_semimodular(lat) else 'false'}",
        f"distributive={'true' if is_distributive(lat) else 'false'}",
        f"modular={'true' if is_modular(lat) else 'false'}",
        f"join_distributive={'true' if is_join_distributive(lat) else 'false'}",
        f"geometric={'true' if is_geometric(lat) else 'false'}",
        f"jir={len(jir)}",
        f"atoms={lat.atoms().bit_count()}",
        f"jir_width={width_chain_partition(jir.order).width}",
    ]
    _write_output("\n".join(lines) + "\n", args.output)
    _maybe_figure(lat, args, title="input")
    return EXIT_OK


def cmd_info(args):
    lat = _load_lattice(args.file)
    jir = join_irreducibles(lat)
    ranks = lat.ranks()
    lines = [
        f"n={lat.n}",
        f"bottom={lat.bottom}",
        f"top={lat.top}",
        f"length={lat.length()}",
        f"covers={len(lat.covers())}",
        "ranks=" + ",".join(str(r) for r in ranks),
        "jir=" + ",".join(str(p) for p in jir.elements),
        "atoms=" + ",".join(str(a) for a in sorted(
            i for i in range(lat.n) if lat.atoms() >> i & 1)),
    ]
    _write_output("\n".join(lines) + "\n", args.output)
    _maybe_figure(lat, args, highlight={"jir": jir.elements}, title="input")
    return EXIT_OK


def cmd_lower(args):
    lat = _load_lattice(args.file)
    result = lower(lat, args.e, args.h, route=args.route)
    _write_output(emit_lattice(result.lattice), args.output)
    if args.trace:
        from .extensions import ExtensionTrace, StepStats
        trace = ExtensionTrace(lat, result.lattice, [result], result.embed,
                               [StepStats(args.e, args.h, len(result.doubled),
                                          result.lattice.n, 0.0, args.route == "both")])
        _write_output(emit_trace(trace), args.trace)
    _maybe_figure(result.lattice, args,
                  highlight={"doubled": [result.embed[d] for d in result.doubled],
                             "lifted": result.lifted},
                  title=f"lowered {args.e} onto {args.h}")
    return EXIT_OK


def cmd_extend(args):
    lat = _load_lattice(args.file)
    if args.mode == "geometric":
        trace = extend_to_geometric(lat, limit=args.limit, profile=args.profile)
    else:
        if not args.partition:
            print("error: --partition is required with --mode chains", file=sys.stderr)
            return EXIT_USAGE
        chains = _parse_partition(args.partition)
        trace = extend_parallel_chains(lat, chains, limit=args.limit, profile=args.profile)
    _write_output(emit_lattice(trace.final), args.output)
    _maybe_trace(trace, args)
    print(f"steps={len(trace.steps)} final_n={trace.final.n}", file=sys.stderr)
    _maybe_figure(trace.final, args,
                  highlight={"jir": join_irreducibles(trace.final).elements},
                  title=f"extension ({args.mode})")
    return EXIT_OK


def cmd_rect(args):
    lat = _load_lattice(args.file)
    chains = _parse_partition(args.partition) if args.partition else None
    trace = rectangular_extension(lat, chains=chains, limit=args.limit, profile=args.profile)
    _write_output(emit_lattice(trace.final), args.output)
    _maybe_trace(trace, args)
    print(f"steps={len(trace.steps)} dimension={len(trace.final_chains)}", file=sys.stderr)
    _maybe_figure(trace.final, args,
                  highlight={"jir": join_irreducibles(trace.final).elements},
                  title=f"rectangular, dimension {len(trace.final_chains)}")
    return EXIT_OK


def cmd_search_counterexample(args):
    spec = corpus_mod.CorpusSpec(seed=args.seed)
    witness = corpus_mod.search_counterexample(corpus_mod.generate_corpus(spec), args.predicate)
    if witness is None:
        _write_output(f"predicate={args.predicate}\nwitness=absent\n", args.output)
        return EXIT_OK
    body = emit_lattice(witness.member.lattice)
    text = (f"predicate={args.predicate}\nwitness={witness.member.name}\n"
            f"lowered={witness.lowered}\nonto={witness.onto}\n{body}")
    _write_output(text, args.output)
    return EXIT_OK


def cmd_enum_geometries(args):
    poset, _ = parse_poset(_read(args.posetfile))
    geometries = enumerate_geometries(poset, max_flats=args.size_bound)
    lines = [f"geometries={len(geometries)}"]
    if args.find_extension_of:
        lat = _load_lattice(args.find_extension_of)
        witness = exhaustive_extension_search(lat, poset, size_bound=args.size_bound)
        if witness is None:
            lines.append("witness=absent")
            _write_output("\n".join(lines) + "\n", args.output)
        else:
            lines.append("witness=found")
            _write_output("\n".join(lines) + "\n" + emit_lattice(witness), args.output)
    else:
        _write_output("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_verify_trace(args):
    verify_trace(_read(args.tracefile))
    print("ok")
    return EXIT_OK


def cmd_dot(args):
    lat = _load_lattice(args.file)
    highlight = {"jir": join_irreducibles(lat).elements} if args.mark_jir else None
    _write_output(emit_dot(lat, highlight=highlight), args.output)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="smlat",
        description="Semimodular lattice toolkit: lowering join-irreducibles, "
                    "geometric and rectangular extensions, geometry round-trips.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, figure=True):
        p.add_argument("-o", "--output", default=None, help="output file (default stdout)")
        if figure:
            p.add_argument("--figure", default=None,
                           help="also render a Hasse-diagram figure to this file")

    p = sub.add_parser("check", help="predicate profile of a lattice file")
    p.add_argument("file")
    add_common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("info", help="structural summary of a lattice file")
    p.add_argument("file")
    add_common(p)
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("lower", help="lower a join-irreducible element")
    p.add_argument("file")
    p.add_argument("--e", type=int, required=True, help="join-irreducible to lower")
    p.add_argument("--h", type=int, required=True, help="prescribed new lower cover")
    p.add_argument("--route", choices=("direct", "geometry", "both"), default="direct")
    p.add_argument("--trace", default=None, help="write a single-step trace file")
    add_common(p)
    p.set_defaults(func=cmd_lower)

    p = sub.add_parser("extend", help="run an extension pipeline")
    p.add_argument("file")
    p.add_argument("--mode", choices=("geometric", "chains"), required=True)
    p.add_argument("--partition", default=None,
                   help="chains of join-irreducibles, e.g. '1,2;3'")
    p.add_argument("--limit", type=int, default=50000)
    p.add_argument("--profile", choices=("test", "fast"), default="fast")
    p.add_argument("--trace", default=None)
    add_common(p)
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("rect", help="rectangular extension")
    p.add_argument("file")
    p.add_argument("--partition", default=None)
    p.add_argument("--limit", type=int, default=50000)
    p.add_argument("--profile", choices=("test", "fast"), default="fast")
    p.add_argument("--trace", default=None)
    add_common(p)
    p.set_defaults(func=cmd_rect)

    p = sub.add_parser("search-counterexample",
                       help="scan the corpus for a lowering that breaks a predicate")
    p.add_argument("--predicate", required=True,
                   choices=("modular", "join_distributive", "distributive"))
    p.add_argument("--seed", type=int, default=0)
    add_common(p, figure=False)
    p.set_defaults(func=cmd_search_counterexample)

    p = sub.add_parser("enum-geometries",
                       help="enumerate geometries on a ground poset")
    p.add_argument("posetfile")
    p.add_argument("--find-extension-of", default=None,
                   help="lattice file to embed length-preservingly")
    p.add_argument("--size-bound", type=int, default=None)
    add_common(p, figure=False)
    p.set_defaults(func=cmd_enum_geometries)

    p = sub.add_parser("verify-trace", help="replay and re-verify a trace file")
    p.add_argument("tracefile")
    p.set_defaults(func=cmd_verify_trace)

    p = sub.add_parser("dot", help="emit a DOT Hasse diagram")
    p.add_argument("file")
    p.add_argument("--mark-jir", action="store_true")
    add_common(p, figure=False)
    p.set_defaults(func=cmd_dot)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (SizeLimitError, BoundExceededError, CapExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except VerificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (SmlatError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


def run():
    raise SystemExit(main())


if __name__ == "__main__":
    run()
