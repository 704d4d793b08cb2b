"""Command-line front end: `check` (link-q-compressed verdict), `report`
(Hilbert-Kunz / socle / generator / regularity data), `verify-structural`
(the Pfaffian-resolution battery), and `scan` (seeded density sampling of
random forms).

Exit codes form a stable contract: 0 = success / verdict true, 1 = verdict
false or a failed battery, 2 = usage or hypothesis error.  JSON output is
schema-versioned: {"schema": 1, "command": ..., "params": ..., "result": ...};
TSV mirrors the JSON flattened per degree; all randomized commands are bit
reproducible under --seed.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Sequence

from . import colon, structural
from .poly import ParseError, Poly, degree_basis, parse, quadric
from .primefield import FrobeniusPower, PrimeField

SCHEMA_VERSION = 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linkq",
        description="Decide the link-q-compressed property and verify the Pfaffian resolution apparatus.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, multi_q: bool = False):
        p.add_argument("--p", type=int, required=True, help="odd prime characteristic")
        if multi_q:
            p.add_argument("--q", type=int, action="append", required=True, help="power of p (repeatable)")
        else:
            p.add_argument("--q", type=int, required=True, help="power of p")
        p.add_argument("--format", choices=("json", "tsv", "pretty"), default="json")
        # measured: thread-width > 1 loses ~45% on the q=27 case (GIL-bound
        # per-degree work), so serial is the default and width is opt-in
        p.add_argument("--jobs", type=int, default=1, help="per-degree parallelism width")

    def add_poly_input(p: argparse.ArgumentParser):
        p.add_argument("--f", type=str, default=None, help="polynomial in x, y, z (explicit '*' and '^')")
        p.add_argument("--form", choices=("pow-xy-z2",), default=None, help="built-in family")
        p.add_argument("--D", type=int, default=None, help="exponent for --form pow-xy-z2")
        p.add_argument("--max-degree", type=int, default=None, help="cap the scanned degree range")

    p_check = sub.add_parser("check", help="decide whether f is link-q-compressed")
    add_common(p_check)
    add_poly_input(p_check)
    p_check.set_defaults(func=cmd_check)

    p_report = sub.add_parser("report", help="Hilbert-Kunz, socle, generators, regularity")
    add_common(p_report)
    add_poly_input(p_report)
    p_report.set_defaults(func=cmd_report)

    p_verify = sub.add_parser("verify-structural", help="run the Pfaffian/resolution battery")
    add_common(p_verify, multi_q=True)
    p_verify.add_argument("--D", type=int, required=True, help="f = (xy - z^2)^D")
    p_verify.set_defaults(func=cmd_verify_structural)

    p_scan = sub.add_parser("scan", help="seeded density scan over random degree-d forms")
    add_common(p_scan)
    p_scan.add_argument("--d", type=int, required=True, help="even degree of the sampled forms")
    p_scan.add_argument("--trials", type=int, default=100)
    p_scan.add_argument("--seed", type=int, default=0)
    p_scan.add_argument("--max-degree", type=int, default=None)
    p_scan.set_defaults(func=cmd_scan)
    return parser


def _field_and_power(p: int, q: int) -> tuple[PrimeField, FrobeniusPower]:
    field = PrimeField(p)
    return field, FrobeniusPower.of(field, q)


def _input_poly(args, field: PrimeField) -> Poly:
    given_f = args.f is not None
    given_form = args.form is not None
    if given_f == given_form:
        raise ValueError("provide exactly one of --f or --form")
    if given_f:
        return parse(args.f, field)
    if args.D is None or args.D < 1:
        raise ValueError("--form pow-xy-z2 requires --D >= 1")
    return quadric(field) ** args.D


def _params_dict(args, extra: dict | None = None) -> dict:
    out = {"p": args.p}
    if isinstance(getattr(args, "q", None), list):
        out["q"] = list(args.q)
    elif getattr(args, "q", None) is not None:
        out["q"] = args.q
    for name in ("f", "form", "D", "d", "trials", "seed", "max_degree", "jobs"):
        value = getattr(args, name, None)
        if value is not None:
            out[name] = value
    if extra:
        out.update(extra)
    return out


# -- output formatting ------------------------------------------------------------


def _emit(args, command: str, params: dict, result: dict, pretty_lines: list[str]):
    if args.format == "json":
        doc = {"schema": SCHEMA_VERSION, "command": command, "params": params, "result": result}
        print(json.dumps(doc, sort_keys=True))
    elif args.format == "tsv":
        for line in _tsv_lines(result):
            print(line)
    else:
        for line in pretty_lines:
            print(line)


def _tsv_lines(result: dict, prefix: str = "") -> list[str]:
    lines = []
    for key in sorted(result):
        value = result[key]
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            if value and all(isinstance(v, (int, float, bool, str)) for v in value.values()):
                for k2 in sorted(value, key=str):
                    lines.append(f"{name}.{k2}\t{_scalar(value[k2])}")
            else:
                lines.extend(_tsv_lines(value, prefix=f"{name}."))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            cols = list(value[0])
            lines.append("\t".join([name] + cols))
            for row in value:
                lines.append("\t".join([name] + [_scalar(row.get(c)) for c in cols]))
        elif isinstance(value, list):
            lines.append(f"{name}\t" + "\t".join(_scalar(v) for v in value))
        else:
            lines.append(f"{name}\t{_scalar(value)}")
    return lines


def _scalar(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "-"
    if isinstance(value, list):
        return ",".join(_scalar(v) for v in value)
    return str(value)


# -- commands -----------------------------------------------------------------------


def cmd_check(args) -> int:
    field, fp = _field_and_power(args.p, args.q)
    f = _input_poly(args, field)
    report = colon.is_lqc(f, fp.q, jobs=args.jobs, max_degree=args.max_degree)
    profile = colon.generator_profile(f, fp.q, jobs=args.jobs, max_degree=args.max_degree)
    result = report.to_dict()
    result["generators"] = {str(k): v for k, v in sorted(profile.generators.items())}
    result["extra_generator_degrees"] = profile.extra_generator_degrees

    lines = [f"link-{fp.q}-compressed: {report.verdict}"]
    if not report.verdict:
        lines.append(f"first failing degree {report.first_failure_degree} (excess {report.excess})")
    lines.append(f"generators by degree: {profile.generators}")
    if profile.extra_generator_degrees:
        lines.append(f"extra generator degrees: {profile.extra_generator_degrees}")
    _emit(args, "check", _params_dict(args), result, lines)
    return 0 if report.verdict else 1


def _betti_shape(d: int, q: int, b: int) -> dict:
    return {
        "front": [
            {"rank": 1, "shifts": [0]},
            {"rank": 3, "shifts": [q, q, q]},
        ],
        "periodic_tail": {
            "rank": 2 * d,
            "period": 2,
            "first_shift": b,
            "shift_step_within_period": 1,
            "shift_step_per_period": d,
        },
    }


def cmd_report(args) -> int:
    field, fp = _field_and_power(args.p, args.q)
    f = _input_poly(args, field)
    qr = colon.quotient_report(f, fp.q, jobs=args.jobs)
    profile = colon.generator_profile(f, fp.q, jobs=args.jobs, max_degree=args.max_degree)
    result = qr.to_dict()
    result["generators"] = {str(k): v for k, v in sorted(profile.generators.items())}
    result["extra_generator_degrees"] = profile.extra_generator_degrees
    if qr.lqc and fp.q >= qr.d + 3:
        b = (3 * fp.q + qr.d - 1) // 2
        result["betti_shape"] = _betti_shape(qr.d, fp.q, b)

    lines = [
        f"link-{fp.q}-compressed: {qr.lqc}",
        f"Hilbert-Kunz value: {qr.hk}" + (f" (formula {qr.hk_formula}, match={qr.hk_matches})" if qr.hk_formula is not None else ""),
        f"socle: {qr.socle}",
        f"generators by degree: {profile.generators}",
        f"top nonzero degree: {qr.top_degree}" + (f" (regularity formula {qr.regularity_formula}, match={qr.regularity_matches})" if qr.regularity_formula is not None else ""),
    ]
    _emit(args, "report", _params_dict(args), result, lines)
    return 0 if qr.lqc else 1


def _battery(field: PrimeField, fp: FrobeniusPower, D: int, jobs: int | None) -> tuple[list[dict], "structural.StructuralContext | None"]:
    checks: list[dict] = []
    q = fp.q

    def record(name: str, fn) -> bool:
        try:
            fn()
            checks.append({"name": name, "q": q, "pass": True})
            return True
        except AssertionError as exc:
            checks.append({"name": name, "q": q, "pass": False, "detail": str(exc)})
            return False

    ctx_holder: list[structural.StructuralContext] = []
    ok = record("pfaffian_of_phi_is_u_f", lambda: ctx_holder.append(structural.build_context(field, fp, D)))
    if not ok:
        return checks, None
    ctx = ctx_holder[0]

    def key_identity():
        res = structural.verify_key_identity(ctx)
        assert res.ok, f"key identity mismatch at entries {res.mismatches} (mode {res.mode})"

    record("key_identity", key_identity)
    record("maximal_pfaffians_last_three_and_degrees", lambda: structural.maximal_pfaffians(ctx))
    record("resolutions_compose_and_euler_matches", lambda: structural.build_resolutions(ctx, jobs=jobs))
    return checks, ctx


def cmd_verify_structural(args) -> int:
    field = PrimeField(args.p)
    powers = [FrobeniusPower.of(field, q) for q in args.q]
    all_checks: list[dict] = []
    contexts: list[structural.StructuralContext] = []
    for fp in powers:
        checks, ctx = _battery(field, fp, args.D, args.jobs)
        all_checks.extend(checks)
        if ctx is not None:
            contexts.append(ctx)

    tail: dict | None = None
    if len(contexts) >= 2:
        base = contexts[0]
        identical = all(structural.tails_match(base, other) for other in contexts[1:])
        deltas = [
            {"q0": base.q, "q1": other.q, "betti_shift_delta": other.b - base.b,
             "expected": 3 * (other.q - base.q) // 2}
            for other in contexts[1:]
        ]
        tail = {
            "qs": [c.q for c in contexts],
            "identical": identical,
            "shift_deltas": deltas,
        }
        all_checks.append(
            {
                "name": "tail_independent_of_q",
                "q": [c.q for c in contexts],
                "pass": identical and all(d["betti_shift_delta"] == d["expected"] for d in deltas),
            }
        )

    all_pass = bool(all_checks) and all(c["pass"] for c in all_checks) and len(contexts) == len(powers)
    result = {"checks": all_checks, "all_pass": all_pass}
    if tail is not None:
        result["tail"] = tail

    lines = []
    for c in all_checks:
        status = "PASS" if c["pass"] else "FAIL"
        lines.append(f"{status}  {c['name']} (q={c['q']})" + (f": {c.get('detail')}" if not c["pass"] else ""))
    lines.append(f"{'PASS' if all_pass else 'FAIL'}  overall")
    _emit(args, "verify-structural", _params_dict(args), result, lines)
    return 0 if all_pass else 1


def cmd_scan(args) -> int:
    field, fp = _field_and_power(args.p, args.q)
    d = args.d
    if d < 2 or d % 2:
        raise ValueError("scan requires an even degree d >= 2")
    if d >= field.p + 1:
        raise ValueError(f"scan requires d < p+1, got d = {d}, p = {field.p}")
    if not 1 < d < fp.q:
        raise ValueError(f"need 1 < d < q, got d = {d}, q = {fp.q}")
    if args.trials < 1:
        raise ValueError("trials must be >= 1")

    rng = random.Random(args.seed)
    basis = degree_basis(d, 3)
    lqc_count = 0
    histogram: dict[int, int] = {}
    for _ in range(args.trials):
        coeffs = [rng.randrange(field.p) for _ in basis]
        f = Poly(field, 3, dict(zip(basis, coeffs)))
        if not f:
            # zero vector sampled: m^[q] : 0 is everything, failing at degree 0
            histogram[0] = histogram.get(0, 0) + 1
            continue
        report = colon.is_lqc(f, fp.q, jobs=args.jobs, max_degree=args.max_degree)
        if report.verdict:
            lqc_count += 1
        else:
            bad = report.first_failure_degree
            histogram[bad] = histogram.get(bad, 0) + 1

    result = {
        "trials": args.trials,
        "lqc_count": lqc_count,
        "fraction": lqc_count / args.trials,
        "first_bad_degree_histogram": {str(k): v for k, v in sorted(histogram.items())},
        "seed": args.seed,
    }
    lines = [
        f"trials: {args.trials}",
        f"lqc: {lqc_count} ({result['fraction']:.3f})",
        f"first-bad-degree histogram: {dict(sorted(histogram.items()))}",
    ]
    _emit(args, "scan", _params_dict(args), result, lines)
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
