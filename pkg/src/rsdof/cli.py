"""Command-line front end: ``rsdof region|synthesize|verify|simulate``.

Per-user inputs (``--alpha``, ``--target``, scheme files) are given in the
user's own order; decimals are read as exact rationals.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .errors import GuardExceededError, OutsideRegionError, SimulationError
from .oracle import DEFAULT_MAX_K, random_membership_audit, verify_vertices
from .rational import fmt, parse_rational_list
from .region import CsitProfile, build_region, contains
from .scheme import total_dof, validate_scheme
from .serialize import (
    plan_to_dict,
    region_to_dict,
    scheme_from_dict,
    user_subset,
    vertex_report_to_dict,
)
from .simulator import DEFAULT_SNR_GRID, SweepResult, run_plan_sweep
from .slices import densify, slice_polygon
from .synthesizer import TimeSharingPlan, plan_to_user, synthesize

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_PARSE = 2
EXIT_EXTERIOR = 3
EXIT_GUARD = 4
EXIT_CONFIG = 5


class UsageError(Exception):
    pass


def _alpha(text: str) -> CsitProfile:
    try:
        return CsitProfile.from_alphas(parse_rational_list(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad --alpha {text!r}: {exc}") from None


def _vector(text: str, K: int, name: str) -> tuple[Fraction, ...]:
    try:
        values = parse_rational_list(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad {name} {text!r}: {exc}") from None
    if len(values) != K:
        raise UsageError(f"{name} has {len(values)} entries, --alpha has {K}")
    return values


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def _q(x) -> str:
    return f"{float(x):.6g}"


# -- region -----------------------------------------------------------------

def _parse_slice(text: str, K: int) -> dict[int, Fraction]:
    fixed = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        key, _, value = part.partition("=")
        key = key.strip().lower()
        if not key.startswith("d") or not key[1:].isdigit() or not value:
            raise UsageError(f"bad --plot-slice term {part!r}; expected e.g. d3=0.2")
        user = int(key[1:]) - 1
        if not 0 <= user < K:
            raise UsageError(f"--plot-slice user {user + 1} not in 1..{K}")
        try:
            fixed[user] = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"bad --plot-slice value {value!r}") from None
    return fixed


def cmd_region(args) -> int:
    profile = _alpha(args.alpha)
    region = build_region(profile)
    if args.plot_slice is not None:
        fixed = _parse_slice(args.plot_slice, profile.K)
        try:
            (u, v), corners = slice_polygon(profile, fixed)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"d{u + 1}", f"d{v + 1}"])
        for x, y in densify(corners, args.resolution):
            w.writerow([_q(x), _q(y)])
        sys.stdout.write(buf.getvalue())
        return EXIT_OK
    if args.format == "json":
        print(_dump(region_to_dict(region)))
        return EXIT_OK
    print(f"K={profile.K}  alpha=({', '.join(_q(a) for a in profile.user_alphas)})")
    for c in region.constraints:
        users = user_subset(profile, c.subset)
        lhs = " + ".join(f"d{u}" for u in users)
        print(f"  {lhs} <= {_q(c.rhs)}")
    print("  " + ", ".join(f"d{u} >= 0" for u in range(1, profile.K + 1)))
    return EXIT_OK


# -- synthesize -------------------------------------------------------------

def _plan_table(plan: TimeSharingPlan) -> str:
    lines = [f"achieved  ({', '.join(_q(x) for x in plan.achieved)})"]
    for w, s in plan.components:
        if s.is_silence:
            lines.append(f"  weight {_q(w):>8}  silence")
            continue
        levels = ", ".join(_q(a) if on else "-" for a, on in zip(s.levels, s.active))
        split = ", ".join(_q(x) for x in s.common_split)
        lines.append(f"  weight {_q(w):>8}  levels ({levels})  common split ({split})")
    return "\n".join(lines)


def _report_exterior(profile: CsitProfile, d, violated) -> int:
    names = ["{" + ",".join(map(str, user_subset(profile, s))) + "}" for s in violated]
    print(f"target lies outside the DoF region; violated subsets: {', '.join(names)}",
          file=sys.stderr)
    return EXIT_EXTERIOR


def cmd_synthesize(args) -> int:
    profile = _alpha(args.alpha)
    target = _vector(args.target, profile.K, "--target")
    d = profile.to_canonical(target)
    report = contains(build_region(profile), d)
    if not report:
        if report.negative:
            print("target has negative entries", file=sys.stderr)
        return _report_exterior(profile, d, report.violated)
    plan = plan_to_user(synthesize(profile, d), profile)
    if args.format == "json":
        print(_dump(plan_to_dict(plan)))
    else:
        print(_plan_table(plan))
    return EXIT_OK


# -- verify -----------------------------------------------------------------

def cmd_verify(args) -> int:
    profile = _alpha(args.alpha)
    vertices = verify_vertices(profile, args.max_k)
    audit = random_membership_audit(profile, args.trials, args.seed)
    out = vertex_report_to_dict(vertices)
    out["audit"] = {
        "trials": audit.trials,
        "seed": args.seed,
        "violations": len(audit.violations),
    }
    ok = vertices.ok and audit.ok
    out["ok"] = ok
    if args.format == "json":
        print(_dump(out))
    else:
        print(f"alpha=({', '.join(_q(a) for a in profile.user_alphas)})  "
              f"linear systems solved: {out['systems_checked']}")
        print(f"{out['vertex_count']} vertices")
        for row in out["vertices"]:
            point = ", ".join(_q(Fraction(x)) for x in row["point"])
            print(f"  ({point})  {'synthesized' if row['synthesized'] else 'FAILED'}")
        print(f"membership audit: {audit.trials} random schemes, "
              f"{len(audit.violations)} violations")
        print("OK" if ok else "FAILED")
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


# -- simulate ---------------------------------------------------------------

def _to_user_order(result: SweepResult, profile: CsitProfile) -> SweepResult:
    inverse = [0] * profile.K
    for c, p in enumerate(profile.perm):
        inverse[p] = c
    return SweepResult(
        result.snr,
        result.common_rate,
        result.private_rate[:, inverse],
        result.common_share[:, inverse],
        result.total_rate[:, inverse],
        tuple(result.predicted[c] for c in inverse),
    )


def cmd_simulate(args) -> int:
    profile = _alpha(args.alpha)
    if args.M < profile.K:
        print(f"configuration error: M={args.M} < K={profile.K}", file=sys.stderr)
        return EXIT_CONFIG
    if args.trials < 1:
        print("configuration error: --trials must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        grid = tuple(float(x) for x in args.snr.split(",")) if args.snr else DEFAULT_SNR_GRID
    except ValueError:
        raise UsageError(f"bad --snr {args.snr!r}") from None
    if len(grid) < 3 or any(p <= 1 for p in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        print("configuration error: --snr needs >= 3 strictly increasing values above 1",
              file=sys.stderr)
        return EXIT_CONFIG

    if args.target is not None:
        d = profile.to_canonical(_vector(args.target, profile.K, "--target"))
        report = contains(build_region(profile), d)
        if not report:
            return _report_exterior(profile, d, report.violated)
        plan = synthesize(profile, d)
    else:
        try:
            with open(args.scheme_file) as fh:
                scheme = scheme_from_dict(json.load(fh))
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"cannot read scheme file: {exc}") from None
        if scheme.K != profile.K:
            raise UsageError(f"scheme has {scheme.K} users, --alpha has {profile.K}")
        scheme = scheme.permuted(profile.perm)
        problems = validate_scheme(scheme, profile)
        if problems:
            print("invalid scheme: " + "; ".join(problems), file=sys.stderr)
            return EXIT_CONFIG
        plan = TimeSharingPlan(((Fraction(1), scheme),), total_dof(scheme, profile).total)

    try:
        result = run_plan_sweep(profile, args.M, plan, grid, args.trials, args.seed)
    except SimulationError as exc:
        print(f"simulation error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    result = _to_user_order(result, profile)

    if args.csv:
        text = result.to_csv()
        if args.csv == "-":
            sys.stdout.write(text)
        else:
            with open(args.csv, "w", newline="") as fh:
                fh.write(text)
    if args.format == "json":
        summary = result.summary()
        summary["seed"] = args.seed
        summary["trials"] = args.trials
        summary["M"] = args.M
        summary["alphas"] = [fmt(a) for a in profile.user_alphas]
        print(_dump(summary))
    elif args.csv != "-":
        print(f"{'user':>4}  {'predicted':>9}  {'slope':>8}  {'95% +/-':>8}")
        for j in range(profile.K):
            print(f"{j + 1:>4}  {result.predicted[j]:>9.4f}  {result.fit.slope[j]:>8.4f}  "
                  f"{result.fit.halfwidth[j]:>8.4f}")
        print(f" sum  {sum(result.predicted):>9.4f}  {result.fit.slope.sum():>8.4f}")
    return EXIT_OK


# -- entry point ------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_PARSE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rsdof", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, fmt_choices=("table", "json")):
        p.add_argument("--alpha", required=True, help="CSIT exponents, e.g. 0.6,0.3")
        p.add_argument("--format", choices=fmt_choices, default="table")

    p = sub.add_parser("region", help="print the DoF region constraints")
    common(p)
    p.add_argument("--plot-slice", metavar="dK=V,...",
                   help="fix all but two users and emit the slice boundary as CSV")
    p.add_argument("--resolution", type=int, default=1,
                   help="segments per slice edge (default 1: corners only)")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("synthesize", help="build an RS time-sharing plan for a target")
    common(p)
    p.add_argument("--target", required=True)
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("verify", help="vertex enumeration and random membership audit")
    common(p)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-k", type=int, default=DEFAULT_MAX_K)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="finite-SNR Monte Carlo slope check")
    common(p)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--target")
    src.add_argument("--scheme-file", help="JSON scheme in user order")
    p.add_argument("--M", type=int, required=True, help="transmit antennas")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--snr", help="comma separated linear SNR grid")
    p.add_argument("--csv", help="write the per-point sweep as CSV ('-' for stdout)")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"rsdof: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except GuardExceededError as exc:
        print(f"rsdof: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except OutsideRegionError as exc:
        print(f"rsdof: {exc}", file=sys.stderr)
        return EXIT_EXTERIOR


if __name__ == "__main__":
    sys.exit(main())
