"""Command-line front end.

Verbs: verify, feasible, search, to-code, to-design, evaluate.  Every verb
accepts --format human|kv (kv is line-oriented key=value for scripting),
--threads, --seed, and --time-limit; the latter two only steer verbs that
randomize or run long, but are accepted uniformly.

Exit codes: 0 when the verdict is positive (verified, admissible, found,
converted, secure to the requested order), 1 when it is negative, and 2 for
usage, parse, or structural errors in inputs.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .codes import code_to_design, design_to_code, format_matrix, load_matrix
from .designs import (
    DesignParams,
    SplittingDesign,
    check_feasibility,
    format_design,
    load_design,
    verify_splitting_design,
)
from .errors import (
    InputError,
    ParseError,
    StructureError,
    UnsupportedParametersError,
    UnverifiedDesignError,
)
from .search import SearchConfig, search
from .security import deception_profile, encoding_rule_bound

_TRI = {True: "true", False: "false", None: "n/a"}


def _bool_word(value: bool | None) -> str:
    return _TRI[value]


def _labels(design_or_code, indices) -> str:
    label = design_or_code.label_of
    return ",".join(str(label(i)) for i in indices)


def _print_kv(pairs) -> None:
    for key, value in pairs:
        print(f"{key}={value}")


def _read_params_file(path: str) -> dict[str, int]:
    values: dict[str, int] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        for token in line.split():
            key, sep, value = token.partition("=")
            if not sep:
                raise ParseError(f"expected key=value, got {token!r}", lineno)
            try:
                values[key] = int(value)
            except ValueError:
                raise ParseError(f"value for {key!r} is not an integer", lineno)
    return values


def _params_from_args(args) -> DesignParams:
    merged: dict[str, int | None] = {}
    if args.params is not None:
        file_values = _read_params_file(args.params)
        known = {"t", "v", "c", "u", "lambda", "b"}
        unknown = sorted(set(file_values) - known)
        if unknown:
            raise ParseError(f"unknown parameter key {unknown[0]!r}")
        merged.update(file_values)
    for key in ("t", "v", "c", "u", "b"):
        value = getattr(args, key)
        if value is not None:
            merged[key] = value
    if args.coverage is not None:
        merged["lambda"] = args.coverage
    merged.setdefault("lambda", 1)
    missing = [key for key in ("t", "v", "c", "u") if merged.get(key) is None]
    if missing:
        raise InputError(f"missing parameter {missing[0]!r}: pass a flag or --params file")
    return DesignParams(
        t=merged["t"],
        v=merged["v"],
        c=merged["c"],
        u=merged["u"],
        lambda_=merged["lambda"],
        b=merged.get("b"),
    )


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _cmd_verify(args) -> int:
    design, params = load_design(args.file)
    strength = args.t if args.t is not None else params.t
    coverage = args.coverage if args.coverage is not None else params.lambda_
    report = verify_splitting_design(design, strength, coverage, threads=args.threads)

    if args.report is not None:
        from .report import render_verification_report

        paths = render_verification_report(report, args.report)
    else:
        paths = []

    if args.format == "kv":
        pairs = [
            ("file", args.file),
            ("points", design.v),
            ("blocks", design.num_blocks),
            ("sub_blocks", design.u),
            ("sub_block_size", design.c),
            ("strength", strength),
            ("coverage", coverage),
            ("result", "pass" if report.passed else "fail"),
        ]
        for count, subsets in sorted(report.histogram.items()):
            pairs.append((f"histogram.{count}", subsets))
        if report.counterexample is not None:
            subset, count = report.counterexample
            pairs.append(("counterexample", _labels(design, subset)))
            pairs.append(("counterexample_count", count))
        for path in paths:
            pairs.append(("report", path))
        _print_kv(pairs)
    else:
        print(
            f"design: {design.v} points, {design.num_blocks} blocks, "
            f"u={design.u} sub-blocks of c={design.c}"
        )
        print(f"tested: strength {strength}, coverage {coverage}")
        hist = ", ".join(f"{k} -> {n}" for k, n in sorted(report.histogram.items()))
        print(f"coverage histogram (count -> subsets): {hist}")
        if report.passed:
            print("result: PASS")
        else:
            subset, count = report.counterexample
            print(
                f"result: FAIL, subset {{{_labels(design, subset)}}} "
                f"is properly covered {count} times"
            )
        for path in paths:
            print(f"report: {path}")
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# feasible
# ---------------------------------------------------------------------------


def _cmd_feasible(args) -> int:
    params = _params_from_args(args)
    report = check_feasibility(params)

    if args.format == "kv":
        pairs = [
            ("t", params.t),
            ("v", params.v),
            ("c", params.c),
            ("u", params.u),
            ("lambda", params.lambda_),
            ("b", params.b if params.b is not None else "n/a"),
            ("relation_a", _bool_word(report.relation_a_holds)),
            ("relation_b", _bool_word(report.relation_b_holds)),
            ("relation_c", _bool_word(report.relation_c_holds)),
            (
                "divisibility_failures",
                ",".join(str(s) for s in report.divisibility_failures),
            ),
            ("fisher", _bool_word(report.fisher_holds)),
            ("block_count_required", report.block_count_required),
        ]
        for s, value in enumerate(report.lambda_s_values):
            pairs.append((f"lambda_{s}", value))
        pairs.append(("admissible", _bool_word(report.admissible)))
        _print_kv(pairs)
    else:
        b_text = params.b if params.b is not None else "unknown"
        print(
            f"parameters: t={params.t} v={params.v} c={params.c} u={params.u} "
            f"lambda={params.lambda_} b={b_text}"
        )
        print(f"required block count: {report.block_count_required}")
        lam = ", ".join(
            f"lambda_{s}={value}" for s, value in enumerate(report.lambda_s_values)
        )
        print(f"replication numbers: {lam}")
        print(
            "counting relations: "
            f"(a) {_bool_word(report.relation_a_holds)}, "
            f"(b) {_bool_word(report.relation_b_holds)}, "
            f"(c) {_bool_word(report.relation_c_holds)}"
        )
        if params.t > 2 and report.relation_c_holds is False:
            print(
                "note: relation (c) in its printed form is specific to strength 2; "
                "its failure here does not gate admissibility"
            )
        if report.divisibility_failures:
            orders = ", ".join(f"s={s}" for s in report.divisibility_failures)
            print(f"divisibility: FAILS at {orders}")
        else:
            print("divisibility: ok for s=1..t")
        print(f"fisher bound b >= v/u: {_bool_word(report.fisher_holds)}")
        print(f"admissible: {'yes' if report.admissible else 'no'}")
    return 0 if report.admissible else 1


# ---------------------------------------------------------------------------
# search
# ---------------------------------------------------------------------------


def _cmd_search(args) -> int:
    params = _params_from_args(args)
    config = SearchConfig(
        time_limit=args.time_limit,
        node_limit=args.node_limit,
        seed=args.seed,
        restarts=args.restarts,
        symmetry_breaking=not args.no_symmetry_breaking,
    )
    outcome = search(params, config)

    design_text = None
    if outcome.design is not None:
        design_text = format_design(outcome.design, params.t, params.lambda_)

    # The design goes to -o when given, else to stdout with the report on
    # stderr so the design stream stays machine-readable.
    report_stream = sys.stdout
    if design_text is not None and args.output is None:
        report_stream = sys.stderr

    if outcome.design is not None:
        if args.output is not None:
            Path(args.output).write_text(design_text, encoding="utf-8")
        else:
            sys.stdout.write(design_text)

    stats = outcome.stats
    pairs = [
        ("status", outcome.status),
        ("nodes", stats.nodes),
        ("backtracks", stats.backtracks),
        ("attempts", stats.attempts),
        ("wall_time", f"{stats.wall_time:.3f}"),
    ]
    if outcome.design is not None:
        pairs.append(("blocks", outcome.design.num_blocks))
    if args.output is not None and outcome.design is not None:
        pairs.append(("output", args.output))
    if args.format == "kv":
        for key, value in pairs:
            print(f"{key}={value}", file=report_stream)
    else:
        for key, value in pairs:
            print(f"{key}: {value}", file=report_stream)
    return 0 if outcome.status == "found" else 1


# ---------------------------------------------------------------------------
# to-code / to-design
# ---------------------------------------------------------------------------


def _cmd_to_code(args) -> int:
    design, params = load_design(args.file)
    strength = args.t if args.t is not None else params.t
    code = design_to_code(design, strength)
    text = format_matrix(code)
    if args.output is not None:
        Path(args.output).write_text(text, encoding="utf-8")
        if args.format == "kv":
            _print_kv(
                [
                    ("rules", code.num_rules),
                    ("sources", code.num_sources),
                    ("messages", code.num_messages),
                    ("splitting", code.splitting_number),
                    ("strength", strength),
                    ("output", args.output),
                ]
            )
        else:
            print(
                f"wrote {code.num_rules} rules x {code.num_sources} sources "
                f"to {args.output}"
            )
    else:
        sys.stdout.write(text)
    return 0


def _infer_strength(design: SplittingDesign) -> int | None:
    for t in range(design.u, 0, -1):
        if verify_splitting_design(design, t, 1).passed:
            return t
    return None


def _cmd_to_design(args) -> int:
    code = load_matrix(args.file)
    design = code_to_design(code)
    if args.t is not None:
        strength = args.t
        report = verify_splitting_design(design, strength, 1)
        if not report.passed:
            subset, count = report.counterexample
            print(
                f"refused: result is not a splitting {strength}-design with coverage 1 "
                f"(subset {{{_labels(design, subset)}}} covered {count} times)",
                file=sys.stderr,
            )
            return 1
    else:
        strength = _infer_strength(design)
        if strength is None:
            print(
                "refused: result verifies at no strength with coverage 1; "
                "pass -t to force a header",
                file=sys.stderr,
            )
            return 1
    text = format_design(design, strength, 1)
    if args.output is not None:
        Path(args.output).write_text(text, encoding="utf-8")
        if args.format == "kv":
            _print_kv(
                [
                    ("points", design.v),
                    ("blocks", design.num_blocks),
                    ("strength", strength),
                    ("output", args.output),
                ]
            )
        else:
            print(
                f"wrote {design.num_blocks} blocks over {design.v} points "
                f"(strength {strength}) to {args.output}"
            )
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# evaluate
# ---------------------------------------------------------------------------


def _cmd_evaluate(args) -> int:
    code = load_matrix(args.file)
    requested = args.max_order if args.max_order is not None else code.num_sources - 1
    profile = deception_profile(
        code, max_order=requested, allow_large=args.allow_large, threads=args.threads
    )
    strength = requested + 1
    bound = encoding_rule_bound(code, strength)
    optimal = Fraction(code.num_rules) == bound

    if args.report is not None:
        from .report import render_profile_report

        paths = render_profile_report(profile, code, args.report)
    else:
        paths = []

    if args.format == "kv":
        pairs = [
            ("messages", code.num_messages),
            ("sources", code.num_sources),
            ("rules", code.num_rules),
            (
                "splitting",
                code.splitting_number if code.splitting_number is not None else "n/a",
            ),
        ]
        for row in profile.orders:
            prefix = f"order.{row.order}"
            pairs.extend(
                [
                    (f"{prefix}.probability", row.probability),
                    (f"{prefix}.bound", row.bound),
                    (f"{prefix}.equal", _bool_word(row.meets_bound)),
                    (f"{prefix}.witness.observe", _labels(code, row.witness.observed)),
                    (f"{prefix}.witness.insert", code.label_of(row.witness.inserted)),
                    (f"{prefix}.witness.conditional", row.witness.conditional),
                    (f"{prefix}.acceptance_only", row.acceptance_probability),
                ]
            )
        pairs.extend(
            [
                ("security_order", profile.security_order),
                ("requested_order", requested),
                ("rule_bound.strength", strength),
                ("rule_bound.value", bound),
                ("optimal", _bool_word(optimal)),
            ]
        )
        for path in paths:
            pairs.append(("report", path))
        _print_kv(pairs)
    else:
        splitting = (
            f"{code.splitting_number}-splitting"
            if code.splitting_number is not None
            else "non-uniform splitting"
        )
        print(
            f"code: {code.num_messages} messages, {code.num_sources} sources, "
            f"{code.num_rules} rules ({splitting})"
        )
        width = max(
            [len("P_i")]
            + [len(str(row.probability)) for row in profile.orders]
        )
        bwidth = max(
            [len("bound")] + [len(str(row.bound)) for row in profile.orders]
        )
        print(f"  i  {'P_i'.ljust(width)}  {'bound'.ljust(bwidth)}  equal")
        for row in profile.orders:
            print(
                f"  {row.order}  {str(row.probability).ljust(width)}  "
                f"{str(row.bound).ljust(bwidth)}  {'yes' if row.meets_bound else 'no'}"
            )
        print("best responses (fresh-source predicate):")
        for row in profile.orders:
            observed = _labels(code, row.witness.observed) or "-"
            print(
                f"  i={row.order}: observe {{{observed}}}, "
                f"insert {code.label_of(row.witness.inserted)} "
                f"(conditional {row.witness.conditional}); "
                f"acceptance-only diagnostic {row.acceptance_probability}"
            )
        print(
            "note: acceptance-only scores bare acceptance; for splitting codes an "
            "accepted message always decodes, so the predicates differ only in "
            "requiring a fresh source"
        )
        print(f"security order: {profile.security_order} (requested {requested})")
        print(
            f"rule bound at strength {strength}: {bound}; rules: {code.num_rules}; "
            f"optimal: {'yes' if optimal else 'no'}"
        )
        for path in paths:
            print(f"report: {path}")
    return 0 if profile.security_order >= requested else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("human", "kv"), default="human", help="output style"
    )
    common.add_argument(
        "--threads", type=int, default=1, help="worker threads for scans (default 1)"
    )
    common.add_argument("--seed", type=int, default=None, help="randomization seed")
    common.add_argument(
        "--time-limit", type=float, default=None, help="wall-clock limit in seconds"
    )

    parser = argparse.ArgumentParser(
        prog="splitauth",
        description=(
            "Exact verification, screening, search, conversion, and spoofing-game "
            "evaluation for splitting designs and splitting authentication codes."
        ),
    )
    sub = parser.add_subparsers(dest="verb", metavar="verb")

    p = sub.add_parser(
        "verify", parents=[common], help="test a design file's splitting property"
    )
    p.add_argument("file", help="design file")
    p.add_argument("-t", type=int, default=None, help="strength (default: file header)")
    p.add_argument(
        "--coverage", type=int, default=None, help="coverage lambda (default: header)"
    )
    p.add_argument("--report", default=None, help="directory for CSV + figure output")
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser(
        "feasible", parents=[common], help="screen a parameter tuple arithmetically"
    )
    for flag, text in (
        ("-t", "strength"),
        ("-v", "point count"),
        ("-c", "sub-block size"),
        ("-u", "sub-blocks per block"),
        ("-b", "block count (optional)"),
    ):
        p.add_argument(flag, type=int, default=None, help=text)
    p.add_argument("--coverage", type=int, default=None, help="coverage lambda (default 1)")
    p.add_argument("--params", default=None, help="key=value parameter file")
    p.set_defaults(handler=_cmd_feasible)

    p = sub.add_parser(
        "search", parents=[common], help="search for a design with coverage 1"
    )
    for flag, text in (
        ("-t", "strength"),
        ("-v", "point count"),
        ("-c", "sub-block size"),
        ("-u", "sub-blocks per block"),
        ("-b", "block count (optional; checked against the forced count)"),
    ):
        p.add_argument(flag, type=int, default=None, help=text)
    p.add_argument("--coverage", type=int, default=None, help="coverage lambda (must be 1)")
    p.add_argument("--params", default=None, help="key=value parameter file")
    p.add_argument("--node-limit", type=int, default=None, help="cap on visited nodes")
    p.add_argument(
        "--restarts", choices=("off", "geometric"), default="off", help="restart policy"
    )
    p.add_argument(
        "--no-symmetry-breaking",
        action="store_true",
        help="do not fix the first block to the least one",
    )
    p.add_argument("-o", "--output", default=None, help="write a found design here")
    p.set_defaults(handler=_cmd_search)

    p = sub.add_parser(
        "to-code", parents=[common], help="derive the encoding matrix of a design"
    )
    p.add_argument("file", help="design file")
    p.add_argument("-t", type=int, default=None, help="strength (default: file header)")
    p.add_argument("-o", "--output", default=None, help="write the matrix here")
    p.set_defaults(handler=_cmd_to_code)

    p = sub.add_parser(
        "to-design", parents=[common], help="forget sources: matrix back to a design"
    )
    p.add_argument("file", help="encoding-matrix file")
    p.add_argument(
        "-t", type=int, default=None, help="strength for the header (default: inferred)"
    )
    p.add_argument("-o", "--output", default=None, help="write the design here")
    p.set_defaults(handler=_cmd_to_design)

    p = sub.add_parser(
        "evaluate", parents=[common], help="deception profile of an encoding matrix"
    )
    p.add_argument("file", help="encoding-matrix file")
    p.add_argument(
        "--max-order",
        type=int,
        default=None,
        help="evaluate attack orders 0..K (default u-1); exit 0 iff secure through K",
    )
    p.add_argument(
        "--allow-large",
        action="store_true",
        help="evaluate universes beyond 64 messages",
    )
    p.add_argument("--report", default=None, help="directory for CSV + figure output")
    p.set_defaults(handler=_cmd_evaluate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "handler"):
        parser.print_help()
        return 2
    try:
        return args.handler(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except UnverifiedDesignError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 1
    except (InputError, StructureError, UnsupportedParametersError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
