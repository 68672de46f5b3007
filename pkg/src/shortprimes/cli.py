"""Command-line entry point: ``shortprimes <subcommand> [options]``.

Every subcommand can also read its options from a flat ``key = value``
file given with ``--config``; flags on the command line win. Reports are
JSON by default (sorted keys, rationals as ``"p/q"`` strings), with CSV
available for tabular output.

Exit codes: 0 success, 2 invalid input, 3 a check failed or a
counterexample was found.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from importlib.metadata import PackageNotFoundError, version as _dist_version
from pathlib import Path

from . import acceptance, density, growth, regions, sieve, zeros

EXIT_OK, EXIT_INVALID, EXIT_CHECK_FAILED = 0, 2, 3


def _version() -> str:
    try:
        return _dist_version("artifact")
    except PackageNotFoundError:
        return "0+unknown"


class ConfigError(ValueError):
    pass


def rational(text: str) -> Fraction:
    """argparse type: exact rational from ``p/q`` or a decimal literal."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from None


def positive_int(text: str) -> int:
    try:
        v = int(float(text)) if "e" in text.lower() else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if float(text) != v:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def int_list(text: str) -> list[int]:
    return [positive_int(t) for t in text.split(",") if t.strip()]


def growth_expr(text: str) -> growth.GrowthExpr:
    try:
        return growth.parse_growth(text)
    except growth.GrowthSyntaxError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def read_config(path) -> dict[str, str]:
    """Parse a flat ``key = value`` file (``#`` comments, blank lines ignored)."""
    out = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, growth.GrowthExpr):
        return growth.format_growth(obj)
    if isinstance(obj, Path):
        return str(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=_jsonable) + "\n"


def to_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


class Outcome:
    """What a subcommand produced: a result payload, optional CSV, exit code."""

    def __init__(self, result, code=EXIT_OK, csv_rows=None, text=None, zero_table=None):
        self.result = result
        self.code = code
        self.csv_rows = csv_rows
        self.text = text
        self.zero_table = zero_table


def _table_info(t: zeros.ZeroTable) -> dict:
    return {"source": t.source, "sha256": t.sha256, "count": len(t), "t_max": t.t_max}


# ------------------------------------------------------------ subcommands


def cmd_ingham_check(a) -> Outcome:
    eta = growth.zero_free_region(a.eta_kind, a.eta_param)
    reps = growth.check_ingham_gen_conditions(a.theta, a.b, a.g, eta, a.h, a.delta)
    ok = all(r.holds for r in reps)
    lines = [f"{r.condition_id}: {'holds' if r.holds else 'fails'} ({r.verdict.value})" for r in reps]
    return Outcome({"conditions": [r.to_dict() for r in reps], "all_hold": ok},
                   EXIT_OK if ok else EXIT_CHECK_FAILED, text="\n".join(lines))


def _constraint_set(a) -> regions.ThetaConstraintSet:
    if a.variant == "eps":
        if a.eta is None or a.eps is None:
            raise ConfigError("--variant eps needs --eta and --eps")
        return regions.epsilon_variant_conditions(a.sigma0, a.eta, a.eps)
    return regions.general_conditions(a.sigma0)


def _density_A(spec: str | None, sigma0: Fraction):
    if spec is None:
        if sigma0 == Fraction(7, 9):
            return density.get_estimate("hbiw").A, "hbiw"
        return regions.envelope_A(sigma0), "envelope"
    if Path(spec).exists():
        return density.PiecewiseRationalFn.load(spec), spec
    est = density.get_estimate(spec)
    if est.A is None:
        raise ConfigError(f"estimate {spec!r} carries no A(sigma)")
    return est.A, spec


def cmd_regions(a) -> Outcome:
    cset = _constraint_set(a)
    if a.emit == "constraints":
        rows = [[str(c) for c in q] for q in cset.canonical()]
        return Outcome({**cset.to_dict(), "theta_cap": regions.theta_cap(a.sigma0)},
                       csv_rows=(["a_u", "a_v", "c0", "c_theta"], rows))
    if a.theta is None:
        raise ConfigError("--theta is required for --emit vertices/check")
    if a.emit == "vertices":
        reg = regions.specialize_theta(cset, a.theta)
        rows = [[float(u), float(v), str(u), str(v)] for u, v in reg.vertices]
        return Outcome({**reg.to_dict(), "empty": reg.is_empty},
                       csv_rows=(["u", "v", "u_exact", "v_exact"], rows))
    A, source = _density_A(a.estimate, cset.sigma0)
    res = regions.brute_force_estlogs(cset.sigma0, a.theta, A, a.samples, cset.variant,
                                      cset.eta, cset.eps)
    ce = None if res.counterexample is None else {k: str(v) for k, v in res.counterexample._asdict().items()}
    return Outcome({"ok": res.ok, "points_checked": res.points_checked, "counterexample": ce,
                    "A": source}, EXIT_OK if res.ok else EXIT_CHECK_FAILED)


def cmd_density(a) -> Outcome:
    if a.list:
        ests = [e.to_dict() for e in density.catalog()]
        rows = [[e["name"], e["b"], e["eps_flag"], e["sigma0"]] for e in ests]
        return Outcome({"catalog": ests}, csv_rows=(["name", "b", "eps_flag", "sigma0"], rows),
                       text="\n".join(e["name"] for e in ests))
    if a.threshold:
        est = density.get_estimate(a.threshold)
        t = density.ingham_threshold(density.b_of(est))
        return Outcome({"estimate": est.name, "b": density.b_of(est), "threshold": t}, text=str(t))
    if a.sigma0_of:
        if Path(a.sigma0_of).exists():
            A, name = density.PiecewiseRationalFn.load(a.sigma0_of), a.sigma0_of
        else:
            est = density.get_estimate(a.sigma0_of)
            if est.A is None:
                if est.sigma0 is None:
                    raise ConfigError(f"{est.name} has neither A(sigma) nor a stated sigma0")
                return Outcome({"estimate": est.name, "sigma0": est.sigma0, "source": "stated"},
                               text=str(est.sigma0))
            A, name = est.A, est.name
        s0 = density.solve_sigma0(A)
        if isinstance(s0, density.Sigma0Enclosure):
            return Outcome({"estimate": name, "sigma0_enclosure": [s0.lo, s0.hi], "source": "solved"},
                           text=f"[{float(s0.lo)!r}, {float(s0.hi)!r}]")
        props = density.check_A_properties(A, s0)
        return Outcome({"estimate": name, "sigma0": s0, "source": "solved",
                        "properties_ok": bool(props), "reason": props.reason}, text=str(s0))
    raise ConfigError("density needs one of --list, --threshold, --sigma0-of")


def _table(a) -> zeros.ZeroTable:
    return zeros.load_zeros(a.table) if a.table else zeros.default_table()


def _need(a, *names):
    missing = [n for n in names if getattr(a, n) is None]
    if missing:
        raise ConfigError("missing required option(s): " + ", ".join("--" + m.replace("_", "-") for m in missing))


def _coeffs(spec: str, M: int) -> zeros.DirichletPolySpec:
    if spec == "ones":
        return zeros.DirichletPolySpec.ones(M)
    try:
        text = Path(spec).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read coefficients {spec}: {exc.strerror}") from None
    return zeros.DirichletPolySpec.from_text(M, text)


def cmd_zeros(a) -> Outcome:
    t = _table(a)
    info = _table_info(t)
    if a.op == "count":
        _need(a, "T")
        n = zeros.count_zeros(t, a.T)
        return Outcome({"count": n, "rvm_estimate": zeros.rvm_estimate(a.T)}, zero_table=info, text=str(n))
    if a.op == "psi-short":
        _need(a, "x", "y")
        T = t.t_max if a.T is None else a.T
        v = zeros.explicit_psi_short(t, a.x, a.y, T)
        return Outcome({"explicit_psi_short": v, "T": T}, zero_table=info, text=repr(v))
    if a.op == "identity":
        _need(a, "x", "T")
        chk = zeros.density_integral_identity_check(t, a.x, a.T, a.quad_points)
        ok = chk.difference <= 1e-12 if chk.relative else chk.difference == 0
        return Outcome(chk._asdict(), EXIT_OK if ok else EXIT_CHECK_FAILED, zero_table=info)
    if a.op == "weighted":
        _need(a, "x", "T", "M", "N")
        Ms, Ns = _coeffs(a.coeffs, a.M), _coeffs(a.coeffs_n or a.coeffs, a.N)
        mode = "threshold" if a.sigma is not None else "weighted"
        v = zeros.weighted_zero_sum(t, Ms, Ns, a.x, a.T, mode, a.sigma)
        strip = zeros.strip_transition_check(t, Ms, Ns, a.x, a.T)
        return Outcome({"mode": mode, "value": v, "strip_check": strip._asdict()},
                       EXIT_OK if strip.holds else EXIT_CHECK_FAILED, zero_table=info)
    raise ConfigError(f"unknown --op {a.op!r}")


def cmd_sieve(a) -> Outcome:
    _need(a, "x", "theta")
    rows = sieve.short_interval_report(a.x, a.theta, a.g)
    return Outcome({"rows": [r._asdict() for r in rows]},
                   csv_rows=(list(sieve.ShortIntervalRow._fields), [list(r) for r in rows]))


def cmd_weighted(a) -> Outcome:
    _need(a, "M", "N", "x", "y")
    Ms, Ns = _coeffs(a.coeffs, a.M), _coeffs(a.coeffs_n or a.coeffs, a.N)
    res = sieve.weighted_sum_brute(Ms, Ns, a.x, a.y)
    return Outcome(res._asdict(), text=f"{res.exact_sum!r} {res.main_term!r} {res.relative_error!r}")


def cmd_verify_all(a) -> Outcome:
    def progress(r):
        print(r.line(), file=sys.stderr)
    results = acceptance.verify_all(a.filter, not a.skip_slow, a.table, a.large_table, progress)
    failed = [r.number for r in results if r.status == "fail"]
    summary = {"criteria": [r.to_dict() for r in results], "failed": failed,
               "passed": [r.number for r in results if r.passed],
               "skipped": [r.number for r in results if r.status == "skip"]}
    rows = [[r.number, r.name, r.status] for r in results]
    return Outcome(summary, EXIT_CHECK_FAILED if failed else EXIT_OK,
                   csv_rows=(["number", "name", "status"], rows),
                   text="\n".join(r.line() for r in results))


# ------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file; command-line flags override it")
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--output", help="write the report here instead of stdout")

    p = argparse.ArgumentParser(prog="shortprimes", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {_version()}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ingham-check", parents=[common], help="growth conditions for y = x^theta g(x)")
    s.add_argument("--theta", type=rational, required=True)
    s.add_argument("--b", type=rational, required=True)
    s.add_argument("--g", type=growth_expr, required=True, help="growth expression, e.g. 'exp(log(x)^(7/10))'")
    s.add_argument("--h", type=growth_expr, default=growth.ONE, help="log-factor h in N(sigma,T) bound")
    s.add_argument("--eta-kind", choices=("strip", "ingham", "kv"), default="kv")
    s.add_argument("--eta-param", type=rational, default=Fraction(1, 4808) * 100)
    s.add_argument("--delta", type=rational, default=Fraction(1))
    s.set_defaults(func=cmd_ingham_check)

    s = sub.add_parser("regions", parents=[common], help="admissible (u, v) regions")
    s.add_argument("--sigma0", type=rational, required=True)
    s.add_argument("--theta", type=rational)
    s.add_argument("--variant", choices=("basic", "eps"), default="basic")
    s.add_argument("--eta", type=rational)
    s.add_argument("--eps", type=rational)
    s.add_argument("--emit", choices=("vertices", "constraints", "check"), default="constraints")
    s.add_argument("--samples", type=positive_int, default=200)
    s.add_argument("--estimate", help="A(sigma) for --emit check: catalog name or piecewise file")
    s.set_defaults(func=cmd_regions)

    s = sub.add_parser("density", parents=[common], help="zero-density catalog")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--list", action="store_true")
    g.add_argument("--threshold", metavar="NAME")
    g.add_argument("--sigma0-of", metavar="NAME|FILE")
    s.set_defaults(func=cmd_density)

    s = sub.add_parser("zeros", parents=[common], help="zero-table computations")
    s.add_argument("--table", help=f"zero table (default: ${zeros.ZERO_TABLE_ENV} or the bundled table)")
    s.add_argument("--op", choices=("count", "psi-short", "identity", "weighted"), required=True)
    s.add_argument("--x", type=float)
    s.add_argument("--y", type=float)
    s.add_argument("--T", type=float)
    s.add_argument("--sigma", type=float)
    s.add_argument("--M", type=positive_int)
    s.add_argument("--N", type=positive_int)
    s.add_argument("--coeffs", default="ones")
    s.add_argument("--coeffs-n")
    s.add_argument("--quad-points", type=int, default=0)
    s.set_defaults(func=cmd_zeros)

    s = sub.add_parser("sieve", parents=[common], help="short-interval prime counts")
    s.add_argument("--x", type=int_list, help="comma-separated x values")
    s.add_argument("--theta", type=rational)
    s.add_argument("--g", type=growth_expr, default=growth.ONE)
    s.add_argument("--report", choices=("csv", "json"), help="alias for --format")
    s.set_defaults(func=cmd_sieve)

    s = sub.add_parser("weighted", parents=[common], help="brute-force weighted prime sum")
    s.add_argument("--M", type=positive_int)
    s.add_argument("--N", type=positive_int)
    s.add_argument("--coeffs", default="ones", help="'ones' or a file of M coefficients")
    s.add_argument("--coeffs-n", help="coefficients for N (default: same as --coeffs)")
    s.add_argument("--x", type=positive_int)
    s.add_argument("--y", type=positive_int)
    s.set_defaults(func=cmd_weighted)

    s = sub.add_parser("verify-all", parents=[common], help="run the acceptance criteria")
    s.add_argument("--filter", choices=("regions", "density", "growth", "zeros", "sieve"))
    s.add_argument("--skip-slow", action="store_true")
    s.add_argument("--table")
    s.add_argument("--large-table", help=f"10^5-zero table (default: ${acceptance.LARGE_TABLE_ENV})")
    s.set_defaults(func=cmd_verify_all)
    return p


def _subcommands(p: argparse.ArgumentParser) -> dict:
    return p._subparsers._group_actions[0].choices


def _subparser(p: argparse.ArgumentParser, name: str) -> argparse.ArgumentParser:
    for action in p._subparsers._group_actions:
        if name in action.choices:
            return action.choices[name]
    raise KeyError(name)


def parse(argv) -> argparse.Namespace:
    """Parse ``argv``, folding in ``--config`` values as defaults."""
    p = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config:
        command = next((t for t in argv if t in _subcommands(p)), None)
        if command is None:
            return p.parse_args(argv)
        sp = _subparser(p, command)
        values = read_config(known.config)
        actions = {a.dest: a for a in sp._actions}
        unknown = sorted(set(values) - set(actions) - {"help"})
        if unknown:
            raise ConfigError(f"unknown config key(s): {', '.join(unknown)}")
        extra = []
        for key, value in values.items():
            act = actions[key]
            flag = act.option_strings[-1]
            if act.nargs == 0:
                if value.lower() in ("1", "true", "yes"):
                    extra.append(flag)
            else:
                extra.extend([flag, value])
        # config first so explicit flags parsed later take precedence
        pos = argv.index(command) + 1
        argv = argv[:pos] + extra + argv[pos:]
    return p.parse_args(argv)


def render(args, outcome: Outcome) -> str:
    fmt = getattr(args, "report", None) or args.format
    if fmt == "csv":
        if outcome.csv_rows is None:
            raise ConfigError(f"{args.command} has no CSV form")
        return to_csv(*outcome.csv_rows)
    if fmt == "text" and outcome.text is not None:
        return outcome.text + "\n"
    inputs = {k: v for k, v in sorted(vars(args).items())
              if k not in ("func", "config", "format", "output", "report")}
    report = {"command": args.command, "version": _version(), "inputs": inputs,
              "result": outcome.result, "exit_code": outcome.code}
    if outcome.zero_table is not None:
        report["zero_table"] = outcome.zero_table
    return to_json(report)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse(argv)
    except ConfigError as exc:
        print(f"shortprimes: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        outcome = args.func(args)
        text = render(args, outcome)
    except (ValueError, KeyError, TypeError, OSError, MemoryError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"shortprimes {args.command}: error: {msg}", file=sys.stderr)
        return EXIT_INVALID
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return outcome.code


if __name__ == "__main__":
    sys.exit(main())
