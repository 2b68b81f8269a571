"""Command-line entry point.

Usage:
  formscheme eig --m 3 --q 2 --which Q --format csv
  formscheme construct --family quad-oo --m 5 --d 5 --q 2 --out out/y.json
  formscheme innerdist --in out/y.json --dual
  formscheme code --in out/y.json --enum both --delta 2
  formscheme verify --suite all --max-m 4 --max-q 3
"""

from __future__ import annotations

import argparse
import json
import logging
from pathlib import Path
from typing import Dict, List

from .codesets import DualDist, aggregate_b, dual_dist, inner_dist, is_d_code
from .config import DEFAULT_CONFIG_PATH, configure, load_config, settings
from .construct import FAMILIES, build_family, puncture
from .errors import FormSchemeError, InvalidInput, exit_code_for
from .forms import QUAD, SYM, upper_length
from .gf import as_field
from .ingest import (
    aggregate_to_json,
    dist_to_json,
    enum_to_json,
    read_dist_json,
    read_enum_json,
    read_forms_json,
    write_codewords,
    write_dist_json,
    write_enum_json,
    write_forms_json,
    write_json,
    write_table_csv,
    write_table_json,
)
from .report import (
    design_strength,
    min_rank,
    print_code_summary,
    print_dist,
    print_suite,
    print_tables_summary,
)
from .rmcodes import (
    ClassicalCode,
    WeightEnumerator,
    designed_distance,
    dist_enum_brute,
    dist_enum_theory,
)
from .scheme import eig_tables, oracle_mismatches
from .verify import ALL, SUITES, run_suite

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"

# formula-only commands stay below q^(m(m+1)/2) = 2^60
FORMULA_LIMIT = 2**60


def _out_dir() -> Path:
    return Path(settings()["output_dir"])


def cmd_eig(args: argparse.Namespace) -> int:
    q = as_field(args.q).q
    if args.m < 1:
        raise InvalidInput(f"--m must be at least 1, got {args.m}")
    if q ** upper_length(args.m) > FORMULA_LIMIT:
        raise InvalidInput(f"q^(m(m+1)/2) exceeds 2^60 for m={args.m}, q={q}")
    tables = eig_tables(args.m, q)
    print_tables_summary(tables)

    if args.scheme == QUAD:
        chosen = {"P": tables.P, "Q": tables.Q}
    else:
        chosen = {"P": tables.P_sym, "Q": tables.Q_sym}
    which = ["P", "Q"] if args.which == "both" else [args.which]
    out = Path(args.out) if args.out else _out_dir()
    for w in which:
        path = out / f"{args.scheme}_{w}_m{args.m}_q{q}.{args.format}"
        if args.format == "csv":
            write_table_csv(path, chosen[w])
        else:
            write_table_json(path, chosen[w])
        print(f"Wrote table: {path}")

    if args.oracle:
        bad = oracle_mismatches(args.m, q)
        entries = 2 * tables.P.size**2
        for w, a, b, closed, oracle in bad:
            print(f"  FAIL {w}_{a.label}({b.label}): closed {closed}, oracle {oracle}")
        status = "FAIL" if bad else "PASS"
        print(f"Oracle: {status} ({entries - len(bad)}/{entries} entries agree)")
        if bad:
            return 2
    return 0


def cmd_construct(args: argparse.Namespace) -> int:
    X = build_family(args.family, args.m, args.d, args.q)
    print(f"Constructed {args.family}: {len(X)} {X.kind} forms, m={X.m}, q={X.q}")
    d = args.d
    if args.puncture:
        X = puncture(X)
        d = max(1, d - 2)
        print(f"Punctured to m={X.m}: {len(X)} forms")
    if args.check:
        ok = is_d_code(X, d)
        print(f"  {d}-code: {'yes' if ok else 'NO'}")
        if not ok:
            return 2
    out = Path(args.out) if args.out else _out_dir() / f"{args.family}_m{X.m}_d{d}_q{X.q}.json"
    write_forms_json(out, X)
    print(f"Wrote forms: {out}")
    return 0


def cmd_innerdist(args: argparse.Namespace) -> int:
    if args.input:
        X = read_forms_json(args.input)
        print(f"Loaded {len(X)} {X.kind} forms from: {args.input}")
        D = inner_dist(X)
    else:
        D = read_dist_json(args.dist)
        if isinstance(D, DualDist):
            raise InvalidInput(f"{args.dist} holds a dual distribution; expected an inner one")
        print(f"Loaded inner distribution of size {D.size} from: {args.dist}")
    obj = dist_to_json(D)
    obj["min_rank"] = min_rank(D)
    if D.kind == QUAD:
        obj["aggregate"] = aggregate_to_json(aggregate_b(D))
    Dp = None
    if args.dual or args.dual_out:
        Dp = dual_dist(D)
        obj["dual_distribution"] = dist_to_json(Dp)
        obj["design_strength"] = design_strength(Dp)
    print_dist(D, Dp)
    if args.out:
        write_json(args.out, obj)
        print(f"Wrote distribution: {args.out}")
    if args.dual_out:
        write_dist_json(args.dual_out, Dp)
        print(f"Wrote dual distribution: {args.dual_out}")
    return 0


def cmd_code(args: argparse.Namespace) -> int:
    Y = read_forms_json(args.input)
    if Y.kind != QUAD:
        raise InvalidInput("codes are built from quadratic forms")
    C = ClassicalCode(Y)
    print(f"Loaded {len(Y)} quadratic forms from: {args.input}")

    enums: Dict[str, WeightEnumerator] = {}
    if args.enum in ("theory", "both"):
        enums["theory"] = dist_enum_theory(Y)
    if args.enum in ("brute", "both"):
        enums["brute"] = dist_enum_brute(C)
    designed = designed_distance(Y.m, Y.q, args.delta) if args.delta is not None else None
    equal = print_code_summary(C.length, C.size, enums, designed)
    first = next(iter(enums.values()))
    if args.compare:
        stored = read_enum_json(args.compare)
        same = stored == first
        print(f"Stored enumerator {args.compare}: {'EQUAL' if same else 'DIFFER'}")
        equal = equal and same

    if args.out:
        write_json(
            args.out,
            {
                "length": C.length,
                "size": str(C.size),
                "enums": {name: enum_to_json(E) for name, E in enums.items()},
                "min_distance": first.min_weight(),
                "designed_distance": designed,
                "equal": equal,
            },
        )
        print(f"Wrote enumerators: {args.out}")
    if args.enum_out:
        write_enum_json(args.enum_out, first)
        print(f"Wrote enumerator: {args.enum_out}")
    if args.dump:
        write_codewords(args.dump, C.codewords())
        print(f"Wrote codewords: {args.dump}")
    return 0 if equal else 2


def cmd_verify(args: argparse.Namespace) -> int:
    report = run_suite(
        args.suite,
        max_m=args.max_m,
        max_q=args.max_q,
        seed=settings()["seed"],
        strict=args.strict,
    )
    print_suite(report)
    if args.out:
        write_json(args.out, report)
        print(f"Wrote report: {args.out}")
    return 0 if report["passed"] else 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        default=DEFAULT_CONFIG_PATH,
        help="Path to config.json (optional; defaults will be used if missing)",
    )
    common.add_argument("--threads", type=int, help="Census worker threads")
    common.add_argument("--seed", type=int, help="Seed for sampled checks (overrides config)")
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging")

    p = argparse.ArgumentParser(
        prog="formscheme",
        description="Association schemes of quadratic and symmetric bilinear forms over finite fields",
    )
    sub = p.add_subparsers(dest="cmd", required=True)

    eig = sub.add_parser("eig", parents=[common], help="Write P and Q eigenvalue tables")
    eig.add_argument("--m", type=int, required=True, help="Dimension m")
    eig.add_argument("--q", type=int, required=True, help="Field order q (a prime power)")
    eig.add_argument("--which", choices=["P", "Q", "both"], default="both")
    eig.add_argument("--scheme", choices=[QUAD, SYM], default=QUAD, help="Scheme kind")
    eig.add_argument("--format", choices=["json", "csv"], default="json")
    eig.add_argument("--out", help="Output directory (default: output_dir from config)")
    eig.add_argument("--oracle", action="store_true", help="Compare with character sums")
    eig.set_defaults(func=cmd_eig)

    construct = sub.add_parser("construct", parents=[common], help="Build a maximal d-code")
    construct.add_argument("--family", choices=list(FAMILIES), required=True)
    construct.add_argument("--m", type=int, required=True, help="Dimension m")
    construct.add_argument("--d", type=int, required=True, help="Minimum rank (2 delta for elliptic)")
    construct.add_argument("--q", type=int, required=True, help="Field order q")
    construct.add_argument("--puncture", action="store_true", help="Keep the first m-1 coordinates")
    construct.add_argument("--check", action="store_true", help="Verify the minimum rank by census")
    construct.add_argument("--out", help="Path to output forms JSON")
    construct.set_defaults(func=cmd_construct)

    innerdist = sub.add_parser("innerdist", parents=[common], help="Inner distribution of forms")
    source = innerdist.add_mutually_exclusive_group(required=True)
    source.add_argument("--in", dest="input", help="Path to forms JSON")
    source.add_argument("--dist", help="Path to a stored inner distribution JSON")
    innerdist.add_argument("--dual", action="store_true", help="Also compute the dual distribution")
    innerdist.add_argument("--out", help="Path to output distribution JSON")
    innerdist.add_argument("--dual-out", help="Path to output dual distribution JSON")
    innerdist.set_defaults(func=cmd_innerdist)

    code = sub.add_parser("code", parents=[common], help="Distance enumerator of C(Y)")
    code.add_argument("--in", dest="input", required=True, help="Path to quadratic forms JSON")
    code.add_argument("--enum", choices=["theory", "brute", "both"], default="both")
    code.add_argument("--delta", type=int, help="Report the designed distance for this delta")
    code.add_argument("--out", help="Path to output enumerator JSON")
    code.add_argument("--enum-out", help="Path to output the first enumerator alone")
    code.add_argument("--compare", help="Stored enumerator JSON to compare against")
    code.add_argument("--dump", help="Path to codeword CSV")
    code.set_defaults(func=cmd_code)

    verify = sub.add_parser("verify", parents=[common], help="Run acceptance suites")
    verify.add_argument("--suite", default=ALL, help=f"One of {', '.join(SUITES + (ALL,))}")
    verify.add_argument("--max-m", type=int, default=4)
    verify.add_argument("--max-q", type=int, default=3)
    verify.add_argument("--out", help="Path to output report JSON")
    verify.add_argument(
        "--strict", action="store_true", help="Treat checks skipped at a cap as failures"
    )
    verify.set_defaults(func=cmd_verify)

    return p


def main(argv: List[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(format=LOG_FORMAT)
    logging.getLogger().setLevel(logging.DEBUG if args.verbose else logging.WARNING)
    try:
        cfg = load_config(args.config)
        if args.threads is not None:
            cfg["threads"] = max(1, args.threads)
        if args.seed is not None:
            cfg["seed"] = args.seed
        configure(cfg)
        return args.func(args)
    except FormSchemeError as e:
        print(f"Error: {e}")
        return exit_code_for(e)
    except (FileNotFoundError, json.JSONDecodeError) as e:
        print(f"Error: {e}")
        return 1


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
