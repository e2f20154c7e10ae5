"""Command-line front end.

Exit codes: ``classify`` returns 0 (contractive), 10 (not contractive),
11 (open: p < u) or 12 (no inclusion); ``norm`` returns 3 for a divergent
norm and 4 if the quadrature did not converge; ``witness`` returns 0 iff the
witness verified; ``beta`` returns 1 if a check failed.  Malformed input
always exits 2.
"""

import argparse
import csv
import json
import sys

from mixnorm import betaineq, classify, probe, witness
from mixnorm.errors import DivergenceError, DomainError, NonConvergenceError
from mixnorm.funcs import DEFAULT_MAX_SAMPLES, parse_exponent, parse_function
from mixnorm.norms import DEFAULT_REL_TOL, SpaceParams, bergman_norm, hardy_norm, mixed_norm

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_DIVERGENT = 3
EXIT_NONCONVERGENCE = 4
EXIT_NOT_CONTRACTIVE = 10
EXIT_OPEN = 11
EXIT_NO_INCLUSION = 12

SWEEP_PARAMS = ("p", "q", "a", "u", "v", "b")
COR32_DEFAULTS = {"x": [1.1, 2.0, 5.0, 10.0], "y": [0.1, 1.0, 5.0], "delta": [0.0, 0.5, 2.0], "n": [1, 4, 16]}


class UsageError(Exception):
    pass


def _emit(doc):
    json.dump(doc, sys.stdout, indent=2, allow_nan=False)
    sys.stdout.write("\n")


def _space(text):
    try:
        return SpaceParams.parse(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _function(text):
    try:
        return parse_function(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _number_list(text, cast=float):
    try:
        return [cast(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed list {text!r}") from None


def load_config(path):
    """Read the optional TOML config; unknown keys are rejected."""
    allowed = {
        "rel_tol": float,
        "max_circle_samples": int,
        "witness": {"gamma_fraction": float},
        "probe": {"seed": int, "degree": int, "count": int},
    }
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    flat = {}
    for key, value in data.items():
        kind = allowed.get(key)
        if kind is None:
            raise UsageError(f"unknown config key {key!r}")
        if isinstance(kind, dict):
            if not isinstance(value, dict):
                raise UsageError(f"config key {key!r} must be a table")
            for sub, subvalue in value.items():
                if sub not in kind:
                    raise UsageError(f"unknown config key {key}.{sub}")
                flat[f"{key}.{sub}"] = kind[sub](subvalue)
        else:
            flat[key] = kind(value)
    return flat


def _setting(args, flag, key, default):
    value = getattr(args, flag, None)
    if value is not None:
        return value
    return args.config_values.get(key, default)


# -- subcommands ---------------------------------------------------------------

_VERDICT_EXIT = {
    classify.YES: EXIT_OK,
    classify.NO: EXIT_NOT_CONTRACTIVE,
    classify.UNKNOWN_OPEN: EXIT_OPEN,
}


def _verdict_exit(verdict):
    if verdict.inclusion != classify.HOLDS:
        return EXIT_NO_INCLUSION
    return _VERDICT_EXIT[verdict.contractive]


def cmd_classify(args):
    verdict = classify.contractive(args.src, args.dst)
    _emit(verdict.to_json())
    return _verdict_exit(verdict)


def cmd_norm(args):
    rel_tol = _setting(args, "rel_tol", "rel_tol", DEFAULT_REL_TOL)
    max_samples = _setting(args, "max_samples", "max_circle_samples", DEFAULT_MAX_SAMPLES)
    try:
        if args.space is not None:
            result = mixed_norm(args.f, args.space, rel_tol=rel_tol, max_samples=max_samples)
        elif args.bergman is not None:
            p, alpha = args.bergman
            result = bergman_norm(args.f, p, alpha, rel_tol=rel_tol, max_samples=max_samples)
        else:
            result = hardy_norm(args.f, args.hardy, max_samples=max_samples)
    except NonConvergenceError as exc:
        print(f"mixnorm: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    _emit(result.to_json())
    return EXIT_DIVERGENT if result.divergent else EXIT_OK


def _parse_grid(text):
    axes = []
    for part in text.split(";"):
        name, sep, values = part.partition("=")
        name = name.strip()
        if not sep or name not in SWEEP_PARAMS:
            raise UsageError(f"grid axis must be one of {','.join(SWEEP_PARAMS)}=v1,v2,..., got {part!r}")
        axes.append((name, _values(name, values)))
    if len(axes) != 2 or axes[0][0] == axes[1][0]:
        raise UsageError("grid needs exactly two distinct axes, e.g. 'q=0.5,1,2;v=0.5,1,2'")
    return axes


def _values(name, text):
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if name in ("a", "b") and tok == "inf":
            raise UsageError("weights a, b must be finite")
        try:
            out.append(parse_exponent(tok))
        except DomainError as exc:
            raise UsageError(str(exc)) from None
    if not out:
        raise UsageError(f"axis {name} has no values")
    return out


def _parse_fixed(text):
    fixed = {}
    for part in filter(None, (t.strip() for t in (text or "").split(","))):
        name, sep, value = part.partition("=")
        name = name.strip()
        if not sep or name not in SWEEP_PARAMS or name in fixed:
            raise UsageError(f"malformed fixed parameter {part!r}")
        fixed[name] = _values(name, value)[0]
    return fixed


def sweep_rows(axes, fixed):
    """Classify every grid cell; rows in axis order (first axis outermost)."""
    (n1, vals1), (n2, vals2) = axes
    missing = set(SWEEP_PARAMS) - set(fixed) - {n1, n2}
    extra = set(fixed) & {n1, n2}
    if missing or extra:
        raise UsageError(f"fix exactly the non-grid parameters; missing {sorted(missing)}, duplicated {sorted(extra)}")
    rows = []
    for x in vals1:
        for y in vals2:
            values = dict(fixed, **{n1: x, n2: y})
            try:
                src = SpaceParams(values["p"], values["q"], values["a"])
                dst = SpaceParams(values["u"], values["v"], values["b"])
            except DomainError as exc:
                raise UsageError(str(exc)) from None
            verdict = classify.contractive(src, dst)
            rows.append((x, y, verdict.inclusion, verdict.contractive, verdict.rule_fired))
    return rows


def _csv_value(x):
    return "inf" if x == float("inf") else repr(float(x))


def cmd_sweep(args):
    axes = _parse_grid(args.grid)
    rows = sweep_rows(axes, _parse_fixed(args.fixed))
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow([axes[0][0], axes[1][0], "inclusion", "contractive", "rule"])
        for x, y, inc, con, rule in rows:
            writer.writerow([_csv_value(x), _csv_value(y), inc, con, rule])
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_witness(args):
    gamma_fraction = _setting(args, "gamma_fraction", "witness.gamma_fraction", witness.DEFAULT_GAMMA_FRACTION)
    rel_tol = _setting(args, "rel_tol", "rel_tol", witness.WITNESS_REL_TOL)
    try:
        w = witness.find_witness(args.src, args.dst, gamma_fraction=gamma_fraction, rel_tol=rel_tol)
    except NonConvergenceError as exc:
        print(f"mixnorm: {exc}", file=sys.stderr)
        return EXIT_FAIL
    rechecked = witness.verify_witness(w)
    doc = w.to_json()
    doc["rechecked"] = rechecked
    _emit(doc)
    return EXIT_OK if (w.verified and rechecked) else EXIT_FAIL


def cmd_beta(args):
    if args.check == "cor31":
        if args.a is None or args.n is None:
            raise UsageError("cor31 needs --a and --n")
        grid = _geometric_grid(args.q_min, args.q_max, args.points)
        report = betaineq.check_F_decreasing(args.a, int(args.n[0]), grid)
    else:
        report = betaineq.check_cor32(
            args.x or COR32_DEFAULTS["x"],
            args.y or COR32_DEFAULTS["y"],
            args.delta or COR32_DEFAULTS["delta"],
            args.n or COR32_DEFAULTS["n"],
        )
        if args.csv:
            with open(args.csv, "w", newline="") as fh:
                fh.write(report.to_csv())
    _emit(report.to_json())
    return EXIT_OK if report.ok else EXIT_FAIL


def _geometric_grid(lo, hi, points):
    if not (0 < lo < hi) or points < 1:
        raise UsageError("need 0 < q-min < q-max and points >= 1")
    if points == 1:
        return [lo]
    ratio = (hi / lo) ** (1.0 / (points - 1))
    return [lo * ratio**i for i in range(points)]


def _parse_probe_grid(text):
    try:
        return [tuple(float(x) for x in point.split(",")) for point in text.split(";") if point.strip()]
    except ValueError:
        raise UsageError(f"malformed probe grid {text!r}") from None


def cmd_probe(args):
    corpus = probe.Corpus(
        count=_setting(args, "count", "probe.count", probe.DEFAULT_COUNT),
        degree=_setting(args, "degree", "probe.degree", probe.DEFAULT_DEGREE),
        seed=_setting(args, "seed", "probe.seed", probe.DEFAULT_SEED),
    )
    grid = _parse_probe_grid(args.grid) if args.grid else None
    rel_tol = _setting(args, "rel_tol", "rel_tol", probe.DEFAULT_REL_TOL)
    out = open(args.csv, "w", newline="") if args.csv else None
    try:
        summary = probe.probe_sweep(corpus, args.conjecture, grid, rel_tol=rel_tol, csv_file=out)
    finally:
        if out is not None:
            out.close()
    _emit(summary.to_json())
    return EXIT_OK


# -- parser ----------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="mixnorm", description="Mixed norm spaces on the unit disk.")
    parser.add_argument("--config", help="TOML file with tolerance and corpus defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="decide inclusion and contractivity")
    p.add_argument("--src", type=_space, required=True, help="p,q,a")
    p.add_argument("--dst", type=_space, required=True, help="u,v,b")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("norm", help="evaluate a norm")
    p.add_argument("--f", type=_function, required=True, help="function literal, e.g. poly:1,0,2")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--space", type=_space, help="p,q,a")
    target.add_argument("--bergman", type=lambda t: _pair(t), help="p,alpha")
    target.add_argument("--hardy", type=lambda t: _exponent(t), help="p")
    p.add_argument("--rel-tol", dest="rel_tol", type=float)
    p.add_argument("--max-samples", dest="max_samples", type=int)
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("sweep", help="classify a two-parameter grid to CSV")
    p.add_argument("--grid", required=True, help="two axes, e.g. 'q=0.5,1,2;v=0.5,1,2'")
    p.add_argument("--fixed", default="", help="the other four, e.g. 'p=2,u=2,a=1,b=1'")
    p.add_argument("--out", help="CSV file (default stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("witness", help="counterexample for a non-contractive pair")
    p.add_argument("--src", type=_space, required=True)
    p.add_argument("--dst", type=_space, required=True)
    p.add_argument("--gamma-fraction", dest="gamma_fraction", type=float)
    p.add_argument("--rel-tol", dest="rel_tol", type=float)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("beta", help="Beta-function inequality checks")
    p.add_argument("--check", choices=("cor31", "cor32"), required=True)
    p.add_argument("--a", type=float)
    p.add_argument("--n", type=lambda t: _number_list(t, int))
    p.add_argument("--q-min", dest="q_min", type=float, default=0.25)
    p.add_argument("--q-max", dest="q_max", type=float, default=8.0)
    p.add_argument("--points", type=int, default=64)
    p.add_argument("--x", type=_number_list)
    p.add_argument("--y", type=_number_list)
    p.add_argument("--delta", type=_number_list)
    p.add_argument("--csv", help="write cor32 rows to this CSV file")
    p.set_defaults(func=cmd_beta)

    p = sub.add_parser("probe", help="stress-test an open conjecture on random polynomials")
    p.add_argument("--conjecture", choices=probe.CONJECTURES, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--count", type=int)
    p.add_argument("--degree", type=int)
    p.add_argument("--grid", help="points separated by ';', coordinates by ','")
    p.add_argument("--rel-tol", dest="rel_tol", type=float)
    p.add_argument("--csv", help="write one row per probe to this CSV file")
    p.set_defaults(func=cmd_probe)
    return parser


def _exponent(text):
    try:
        return parse_exponent(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _pair(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected p,alpha, got {text!r}")
    try:
        return _exponent(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed alpha in {text!r}") from None


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.config_values = load_config(args.config) if args.config else {}
        return args.func(args)
    except (UsageError, DomainError, DivergenceError, OSError, tomllib.TOMLDecodeError, ValueError) as exc:
        print(f"mixnorm: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
