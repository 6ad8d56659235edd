"""Command-line front end.

Exit codes: 0 affirmative (holds / nonzero / verified / constructed),
1 negative (violated / zero / counterexample / infeasible), 2 usage or input
error, 3 inconclusive (likely_zero without exact resolution).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from .construct import InfeasibleError, construct_code, cutset_distance_bound, mds_check
from .field import FieldMatrix, PrimeField
from .reduce import audit, reduce_to_irreducible
from .support import (
    FamilyError,
    SupportFamily,
    check_condition,
    family_from_json,
    normalize,
)
from .tmatrix import (
    build_T,
    decide_identity,
    default_prime,
    extract_certificate,
)
from .verify import necessity_fuzz, verify_grid

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3


class CliError(Exception):
    pass


def _emit(obj, fmt: str = "json", table: str | None = None) -> None:
    if fmt == "table" and table is not None:
        print(table)
    else:
        print(
            json.dumps(obj, sort_keys=True, separators=(",", ": "), indent=2)
        )


def _load_json_arg(args) -> dict:
    if args.family is not None:
        text, source = args.family, "--family"
    elif args.file is not None:
        if args.file == "-":
            text, source = sys.stdin.read(), "stdin"
        else:
            try:
                with open(args.file) as fh:
                    text = fh.read()
            except OSError as exc:
                raise CliError(f"cannot read {args.file}: {exc}") from exc
            source = args.file
    else:
        raise CliError("provide --family '<json>' or --file <path> (use - for stdin)")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"malformed JSON from {source}: line {exc.lineno}: {exc.msg}") from exc


def _load_family(args):
    try:
        return family_from_json(_load_json_arg(args))
    except FamilyError as exc:
        raise CliError(str(exc)) from exc


def _load_set_family(args) -> SupportFamily:
    fam = _load_family(args)
    if not isinstance(fam, SupportFamily):
        raise CliError("this subcommand needs a set family (no msets)")
    return fam


def _normalized(args) -> SupportFamily:
    fam = _load_set_family(args)
    verdict = check_condition(fam)
    if not verdict.holds:
        _emit({"error": "condition violated", **verdict.to_json()})
        raise SystemExit(EXIT_NEGATIVE)
    return normalize(fam)


def _add_family_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", help="family as inline JSON")
    p.add_argument("--file", help="path to family JSON, or - for stdin")


def _alpha_arg(args, fam, field: PrimeField) -> list[int]:
    if args.alpha:
        vals = [int(x) for x in args.alpha.split(",")]
        if len(vals) != fam.n:
            raise CliError(f"expected {fam.n} alpha values, got {len(vals)}")
        return vals
    rng = random.Random(args.seed)
    return [rng.randrange(field.p) for _ in range(fam.n)]


def cmd_check(args) -> int:
    verdict = check_condition(_load_family(args))
    table = "holds" if verdict.holds else (
        f"violated at I={list(verdict.witness)}: {verdict.lhs} < {verdict.rhs}"
    )
    _emit({"seed": args.seed, **verdict.to_json()}, args.format, table)
    return EXIT_OK if verdict.holds else EXIT_NEGATIVE


def cmd_normalize(args) -> int:
    fam = _load_set_family(args)
    verdict = check_condition(fam)
    if not verdict.holds:
        _emit({"error": "condition violated", **verdict.to_json()})
        return EXIT_NEGATIVE
    _emit(normalize(fam).to_json(), args.format)
    return EXIT_OK


def cmd_audit(args) -> int:
    report = audit(_normalized(args))
    _emit({"seed": args.seed, **report.to_json()}, args.format)
    return EXIT_OK if report.all_hold() else EXIT_NEGATIVE


def cmd_reduce(args) -> int:
    leaves, trace = reduce_to_irreducible(_normalized(args))
    _emit(
        {
            "seed": args.seed,
            "leaves": [f.to_json() for f in leaves],
            "trace": [s.to_json() for s in trace],
        },
        args.format,
    )
    return EXIT_OK


def cmd_build_t(args) -> int:
    fam = _normalized(args)
    field = PrimeField(default_prime(fam, args.field_size))
    alpha = _alpha_arg(args, fam, field)
    tinst = build_T(fam, alpha, field)
    _emit(
        {
            "seed": args.seed,
            "p": field.p,
            "alpha": list(tinst.alpha),
            "T": tinst.matrix.int_rows(),
            "det": int(tinst.matrix.det()),
            "block_rows": [list(b) for b in tinst.block_rows],
        },
        args.format,
    )
    return EXIT_OK


def cmd_id_test(args) -> int:
    fam = _normalized(args)
    verdict = decide_identity(
        fam,
        field_size_hint=args.field_size,
        trials=args.trials,
        seed=args.seed,
        exact_limit=args.exact_limit,
    )
    _emit({"seed": args.seed, **verdict.to_json()}, args.format, verdict.status)
    if verdict.status == "nonzero":
        return EXIT_OK
    if verdict.status == "proven_zero":
        return EXIT_NEGATIVE
    return EXIT_INCONCLUSIVE


def cmd_certificate(args) -> int:
    fam = _normalized(args)
    field = PrimeField(default_prime(fam, args.field_size))
    alpha = _alpha_arg(args, fam, field)
    tinst = build_T(fam, alpha, field)
    cert = extract_certificate(tinst)
    if cert is None:
        _emit(
            {"seed": args.seed, "certificate": None, "note": "T nonsingular here"},
            args.format,
        )
        return EXIT_NEGATIVE
    _emit({"seed": args.seed, **cert.to_json()}, args.format)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = verify_grid(
        args.m_max,
        args.k_max,
        trials=args.trials,
        seed=args.seed,
        exact_limit=args.exact_limit,
        samples=args.samples,
        sample_above_m=args.sample_above_m,
        jobs=args.jobs,
    )
    from .report import render_cells_table, write_report_files

    if args.out_dir:
        for path in write_report_files(report, args.out_dir):
            print(f"wrote {path}", file=sys.stderr)
    _emit(report.to_json(), args.format, render_cells_table(report))
    if report.counterexamples():
        return EXIT_NEGATIVE
    if report.inconclusives():
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_necessity(args) -> int:
    report = necessity_fuzz(
        args.samples, seed=args.seed, k_max=args.k_max, exact_limit=args.exact_limit
    )
    _emit({"seed": args.seed, **report.to_json()}, args.format)
    return EXIT_OK if report.ok() else EXIT_NEGATIVE


def cmd_construct(args) -> int:
    obj = _load_json_arg(args)
    try:
        rowsets = [list(map(int, s)) for s in obj["rowsets"]]
        n = int(obj["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"construct input needs 'rowsets' and 'n': {exc}") from exc
    try:
        artifact = construct_code(
            rowsets,
            n,
            field_hint=args.field_size,
            seed=args.seed,
            max_attempts=args.max_attempts,
        )
    except InfeasibleError as exc:
        _emit(
            {
                "error": "infeasible",
                "witness_rows": list(exc.witness_rows),
                "distance_bound": cutset_distance_bound(rowsets, n, len(rowsets)),
            }
        )
        return EXIT_NEGATIVE
    out = artifact.to_json()
    out["seed"] = args.seed
    out["distance_bound"] = cutset_distance_bound(rowsets, n, len(rowsets))
    _emit(out, args.format)
    return EXIT_OK


def cmd_mds_check(args) -> int:
    obj = _load_json_arg(args)
    try:
        field = PrimeField(int(obj["p"]))
        g = FieldMatrix(field, obj["G"])
    except (KeyError, TypeError, ValueError, FamilyError) as exc:
        raise CliError(f"mds-check input needs 'p' and 'G': {exc}") from exc
    result = mds_check(g)
    if result is True:
        _emit({"mds": True}, args.format, "mds")
        return EXIT_OK
    _emit({"mds": False, "failing_columns": list(result)}, args.format)
    return EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gmmds",
        description="Support-constrained MDS (generalized Reed-Solomon) code toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, family=True):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(fn=fn)
        if family:
            _add_family_opts(p)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument(
            "--field-size",
            type=int,
            default=int(os.environ.get("GMMDS_FIELD_SIZE", "0")),
            help="lower bound on the prime field size",
        )
        p.add_argument("--trials", type=int, default=16)
        p.add_argument("--exact-limit", type=int, default=8)
        p.add_argument("--format", choices=("json", "table"), default="json")
        return p

    add("check", cmd_check, "feasibility condition verdict")
    add("normalize", cmd_normalize, "pad sets to |S_i| = k - r_i")
    add("audit", cmd_audit, "minimality audit, conditions (i)-(viii)")
    add("reduce", cmd_reduce, "apply reductions to a fixed point")
    p = add("build-t", cmd_build_t, "build T at a given or random alpha")
    p.add_argument("--alpha", help="comma-separated alpha values")
    add("id-test", cmd_id_test, "is det T identically zero?")
    p = add("certificate", cmd_certificate, "left-nullspace certificate at alpha")
    p.add_argument("--alpha", help="comma-separated alpha values")
    p = add("verify", cmd_verify, "verify the conjecture over a grid", family=False)
    p.add_argument("--m-max", type=int, default=4)
    p.add_argument("--k-max", type=int, default=6)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--sample-above-m", type=int, default=4)
    p.add_argument(
        "--jobs", type=int, default=int(os.environ.get("GMMDS_JOBS", "1"))
    )
    p.add_argument("--out-dir", help="write report.json, cells.csv, grid.png here")
    p = add("necessity", cmd_necessity, "fuzz the necessity direction", family=False)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--k-max", type=int, default=6)
    p = add("construct", cmd_construct, "build a constrained MDS generator")
    p.add_argument("--max-attempts", type=int, default=64)
    add("mds-check", cmd_mds_check, "exhaustive minor check of a generator")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except CliError as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_USAGE
    except FamilyError as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
