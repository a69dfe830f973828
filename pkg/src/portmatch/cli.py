"""Command-line interface: ``pgmatch compile|match|gen|bench``.

Exit codes: 0 success, 1 usage, 2 input parse error, 3 matcher file
format or version error, 4 internal invariant violation. Summaries are
printed as ``key=value`` lines.
"""
from __future__ import annotations

import argparse
import csv
import gc
import json
import random
import statistics
import sys
import time
from pathlib import Path
from typing import Callable, Sequence

from .circuits import (
    DEFAULT_GATES,
    TH_CX,
    Circuit,
    CircuitError,
    circuit_to_portgraph,
    emit_circuit_lines,
    expand_symmetries,
    parse_circuit,
    parse_circuit_lines,
    random_circuit,
)
from .matcher import (
    Matcher,
    MatcherFormatError,
    PatternError,
    Subject,
    UnsupportedVersionError,
    compile_patterns,
    find_matches,
    load,
    naive_match,
    save,
)
from .portgraph import GraphError, PortGraph

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_FORMAT = 3
EXIT_INTERNAL = 4

CSV_HEADER = [
    "n_patterns",
    "width",
    "depth",
    "compile_ms",
    "query_ms",
    "naive_ms",
    "n_matches",
    "subject_size",
    "seed",
]

GATE_SETS = {"default": DEFAULT_GATES, "th_cx": TH_CX}


class CliError(Exception):
    def __init__(self, message: str, code: int) -> None:
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def _int_list(text: str) -> list[int]:
    if not text.strip():
        return []
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if any(v < 0 for v in vals):
        raise argparse.ArgumentTypeError("grid values must be non-negative")
    return vals


def _non_negative(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_USAGE) from None
    except UnicodeDecodeError:
        raise CliError(f"{path} is not UTF-8 text", EXIT_PARSE) from None


def _load_patterns(
    path: str, gates: str, expand: bool, skip_invalid: bool
) -> tuple[list[PortGraph], int]:
    gs = GATE_SETS[gates]
    try:
        circuits = parse_circuit_lines(_read_text(path))
    except CircuitError as exc:
        raise CliError(f"{path}: {exc}", EXIT_PARSE) from None
    lines = [n for n, line in enumerate(_read_text(path).splitlines(), 1) if line.strip()]
    graphs = []
    skipped = 0
    for line, c in zip(lines, circuits):
        variants = expand_symmetries(c, gs) if expand else [c]
        for v in variants:
            try:
                g = circuit_to_portgraph(v, gs)
            except CircuitError as exc:
                raise CliError(f"{path}: line {line}: {exc}", EXIT_PARSE) from None
            if g.num_vertices == 0 or not g.is_connected():
                if skip_invalid:
                    skipped += 1
                    continue
                what = "empty" if g.num_vertices == 0 else "not connected"
                raise CliError(f"{path}: line {line}: pattern is {what}", EXIT_PARSE)
            graphs.append(g)
    return graphs, skipped


def _load_subject(path: str, gates: str) -> PortGraph:
    text = _read_text(path)
    try:
        c = parse_circuit(text) if text.strip() else Circuit(0)
        return circuit_to_portgraph(c, GATE_SETS[gates])
    except CircuitError as exc:
        raise CliError(f"{path}: {exc}", EXIT_PARSE) from None


def _load_matcher(path: str) -> Matcher:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_USAGE) from None
    try:
        return load(data)
    except UnsupportedVersionError as exc:
        raise CliError(f"{path}: {exc}", EXIT_FORMAT) from None
    except MatcherFormatError as exc:
        raise CliError(f"{path}: {exc}", EXIT_FORMAT) from None


def _emit(stream, /, **fields) -> None:
    for k, v in fields.items():
        print(f"{k}={v}", file=stream)


# -- commands ------------------------------------------------------------------


def cmd_compile(args, out) -> int:
    graphs, skipped = _load_patterns(args.patterns, args.gates, args.expand_symmetries, args.skip_invalid)
    try:
        m = compile_patterns(graphs, convex_only=args.convex_only)
    except PatternError as exc:
        raise CliError(f"{args.patterns}: {exc}", EXIT_PARSE) from None
    data = save(m)
    try:
        Path(args.out).write_bytes(data)
    except OSError as exc:
        raise CliError(f"cannot write {args.out}: {exc.strerror}", EXIT_USAGE) from None
    nodes = {w: t.stats()[0] for w, t in m.trees.items()}
    _emit(
        out,
        patterns=len(m),
        unique=len(m.aliases),
        skipped=skipped,
        widths=",".join(str(w) for w in m.widths),
        buckets=",".join(f"{w}:{n}" for w, n in m.bucket_sizes().items()),
        nodes=",".join(f"{w}:{n}" for w, n in nodes.items()),
        single_vertex=len(m.singles),
        d_max=m.d_max,
        convex_only=str(m.convex_only).lower(),
        bytes=len(data),
        out=args.out,
    )
    return EXIT_OK


def cmd_match(args, out) -> int:
    m = _load_matcher(args.matcher)
    g = _load_subject(args.subject, args.gates)
    try:
        convex_only = False if args.allow_nonconvex else None
        matches = find_matches(m, g, convex_only=convex_only)
    except GraphError as exc:
        raise CliError(f"{args.subject}: {exc}", EXIT_PARSE) from None
    if args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["pattern_id", "vertex_map", "convex"])
        for mt in matches:
            w.writerow([mt.pattern_id, " ".join(map(str, mt.vertex_map)), str(mt.convex).lower()])
    else:
        for mt in matches:
            print(
                json.dumps(
                    {"pattern": mt.pattern_id, "vertices": list(mt.vertex_map), "convex": mt.convex},
                    separators=(",", ":"),
                ),
                file=out,
            )
    if args.format == "json":
        _emit(out, matches=len(matches), subject_size=g.num_vertices)
    else:
        _emit(sys.stderr, matches=len(matches), subject_size=g.num_vertices)
    return EXIT_OK


def cmd_gen(args, out) -> int:
    gs = GATE_SETS[args.gates]
    try:
        circuits = [random_circuit(args.qubits, args.n_gates, gs, args.seed + i) for i in range(args.count)]
    except CircuitError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    text = emit_circuit_lines(circuits)
    if args.out == "-":
        out.write(text)
    else:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise CliError(f"cannot write {args.out}: {exc.strerror}", EXIT_USAGE) from None
        _emit(out, circuits=len(circuits), out=args.out)
    return EXIT_OK


def median_ms(fn: Callable[[], object], reps: int) -> tuple[float, object]:
    """Median wall time of ``reps`` timed runs after one discarded warm-up.

    The cyclic collector is paused while timing, as ``timeit`` does.
    """
    result = fn()
    times = []
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        for _ in range(reps):
            t0 = time.perf_counter()
            result = fn()
            times.append((time.perf_counter() - t0) * 1000.0)
    finally:
        if was_enabled:
            gc.enable()
    return statistics.median(times), result


def cmd_bench(args, out) -> int:
    graphs, skipped = _load_patterns(args.patterns, args.gates, False, args.skip_invalid)
    g = _load_subject(args.subject, args.gates)
    for ell in args.ell_grid:
        if ell > len(graphs):
            raise CliError(f"grid value {ell} exceeds the {len(graphs)} available patterns", EXIT_USAGE)
    order = list(range(len(graphs)))
    random.Random(args.seed).shuffle(order)
    try:
        fh = open(args.csv, "w", newline="", encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot write {args.csv}: {exc.strerror}", EXIT_USAGE) from None
    with fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for ell in args.ell_grid:
            subset = [graphs[i] for i in order[:ell]]
            try:
                compile_ms, m = median_ms(lambda: compile_patterns(subset), args.reps)
            except PatternError as exc:
                raise CliError(f"{args.patterns}: {exc}", EXIT_PARSE) from None
            query_ms, matches = median_ms(lambda: find_matches(m, Subject(g)), args.reps)  # type: ignore[arg-type]
            naive_ms: float | str = ""
            if args.baseline == "naive":

                def naive_loop():
                    res = []
                    for i, p in enumerate(subset):
                        res.extend((i, x.vertex_map) for x in naive_match(p, g) if x.convex)
                    return sorted(res)

                naive_ms, expected = median_ms(naive_loop, args.reps)
                got = [(x.pattern_id, x.vertex_map) for x in matches]  # type: ignore[union-attr]
                if got != expected:
                    raise CliError(
                        f"matcher and naive baseline disagree at ell={ell} "
                        f"({len(got)} vs {len(expected)} matches)",
                        EXIT_INTERNAL,
                    )
                naive_ms = f"{naive_ms:.3f}"
            widths = [mm.width for mm in m.patterns]  # type: ignore[union-attr]
            depths = [mm.depth for mm in m.patterns]  # type: ignore[union-attr]
            w.writerow(
                [
                    ell,
                    max(widths, default=0),
                    max(depths, default=0),
                    f"{compile_ms:.3f}",
                    f"{query_ms:.3f}",
                    naive_ms,
                    len(matches),  # type: ignore[arg-type]
                    g.num_vertices,
                    args.seed,
                ]
            )
            fh.flush()
    _emit(out, rows=len(args.ell_grid), skipped=skipped, csv=args.csv)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pgmatch", description="Port-graph pattern matching with precompiled prefix trees.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def gates_flag(sp):
        sp.add_argument("--gates", choices=sorted(GATE_SETS), default="default", help="gate set")

    c = sub.add_parser("compile", help="compile a pattern file (one circuit per line)")
    c.add_argument("--patterns", required=True)
    c.add_argument("--out", required=True)
    c.add_argument("--convex-only", type=_bool, default=True, metavar="BOOL")
    c.add_argument("--expand-symmetries", action="store_true", help="add operand-swapped variants of symmetric gates")
    c.add_argument("--skip-invalid", action="store_true", help="drop empty or disconnected patterns")
    gates_flag(c)
    c.set_defaults(func=cmd_compile)

    mt = sub.add_parser("match", help="match a compiled pattern set against a subject circuit")
    mt.add_argument("--matcher", required=True)
    mt.add_argument("--subject", required=True)
    mt.add_argument("--format", choices=["json", "csv"], default="json")
    mt.add_argument("--allow-nonconvex", action="store_true")
    gates_flag(mt)
    mt.set_defaults(func=cmd_match)

    gn = sub.add_parser("gen", help="generate seeded random circuits, one per line")
    gn.add_argument("--qubits", type=_non_negative, required=True)
    gn.add_argument("--gates", dest="n_gates", type=_non_negative, required=True, help="gates per circuit")
    gn.add_argument("--count", type=_non_negative, required=True)
    gn.add_argument("--seed", type=int, default=0)
    gn.add_argument("--out", required=True, help="output file, or - for standard output")
    gn.add_argument("--gate-set", dest="gates", choices=sorted(GATE_SETS), default="th_cx")
    gn.set_defaults(func=cmd_gen)

    b = sub.add_parser("bench", help="time compile and query over a grid of pattern counts")
    b.add_argument("--patterns", required=True)
    b.add_argument("--subject", required=True)
    b.add_argument("--ell-grid", type=_int_list, required=True, metavar="LIST")
    b.add_argument("--baseline", choices=["naive"], default=None)
    b.add_argument("--csv", required=True)
    b.add_argument("--reps", type=_non_negative, default=5)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--skip-invalid", action="store_true")
    gates_flag(b)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "reps", 1) == 0:
        print("pgmatch: error: --reps must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except CliError as exc:
        print(f"pgmatch: error: {exc}", file=sys.stderr)
        return exc.code
    except (AssertionError, RecursionError) as exc:
        print(f"pgmatch: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
