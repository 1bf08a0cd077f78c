"""Command-line front end.

Every command writes CSV to standard output: a header row, comma
separators, '.' decimal points, LF line terminators, and numeric cells
with 12 significant digits.  Sampling commands prepend a `# seed=<n>
stream=<m>` comment line, and `tails` prepends `# threshold=<v>`.

Exit codes: 0 success, 1 usage error, 2 numeric failure (domain errors,
failed quadrature, bad matrix files), 3 failed verification.  Identical
argv and seed produce byte-identical output.  Diagnostics go to standard
error; ANSI color is used only on a terminal and never when NO_COLOR is
set.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys

from alphanorm import numerics
from alphanorm import verify as verify_mod
from alphanorm.alpha_normal import AlphaNormal
from alphanorm.errors import AlphanormError
from alphanorm.limiting import MetaRademacher
from alphanorm.multivariate import (
    CorrelationMatrix,
    MultivariateAlphaNormal,
    parse_correlation_csv,
)
from alphanorm.weibull import Weibull

__all__ = ["main"]

_FIGURE1_ALPHAS = (1.0, 2.0, 3.0, 5.0)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; the CLI contract reserves
    # 2 for numeric failures and uses 1 for usage problems.
    def error(self, message):
        raise _UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _fmt(value) -> str:
    return f"{float(value):.12g}"


def _bool_cell(flag: bool) -> str:
    return "true" if flag else "false"


def _diag(message: str) -> None:
    use_color = sys.stderr.isatty() and not os.environ.get("NO_COLOR")
    prefix = "\x1b[31merror:\x1b[0m" if use_color else "error:"
    print(f"{prefix} {message}", file=sys.stderr)


def _float_list(text: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated float list: "
                                         f"{text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty value list")
    return values


def _grid(xmin: float, xmax: float, steps: int) -> list[float]:
    if steps < 2:
        raise _UsageError("steps must be at least 2")
    if not xmin < xmax:
        raise _UsageError("xmin must be less than xmax")
    # Symmetric interpolation: for xmin = -xmax the midpoint lands on 0.0
    # exactly, which the figure contract relies on.
    return [(xmin * (steps - 1 - i) + xmax * i) / (steps - 1)
            for i in range(steps)]


def _writer():
    return csv.writer(sys.stdout, lineterminator="\n")


def _load_matrix(path: str) -> CorrelationMatrix:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_correlation_csv(fh.read())
    except OSError as exc:
        raise AlphanormError(f"cannot read correlation matrix {path!r}: {exc}")


# --- command handlers -------------------------------------------------------


def _cmd_density_table(args) -> int:
    d = AlphaNormal(args.alpha, args.sigma)
    rows = [[_fmt(x), _fmt(d.pdf(x))]
            for x in _grid(args.xmin, args.xmax, args.steps)]
    w = _writer()
    w.writerow(["x", "pdf"])
    w.writerows(rows)
    return 0


def _cmd_cdf_table(args) -> int:
    d = AlphaNormal(args.alpha, args.sigma)
    rows = [[_fmt(x), _fmt(d.cdf(x))]
            for x in _grid(args.xmin, args.xmax, args.steps)]
    w = _writer()
    w.writerow(["x", "cdf"])
    w.writerows(rows)
    return 0


def _cmd_quantile(args) -> int:
    d = AlphaNormal(args.alpha, args.sigma)
    rows = [[_fmt(u), _fmt(d.quantile(u))] for u in args.u]
    w = _writer()
    w.writerow(["u", "quantile"])
    w.writerows(rows)
    return 0


def _cmd_sample(args) -> int:
    if args.n < 1:
        raise _UsageError("n must be positive")
    d = AlphaNormal(args.alpha, args.sigma)
    rng = numerics.RngStream(args.seed, args.stream)
    draws = d.sample(rng, args.n)
    print(f"# seed={args.seed} stream={args.stream}")
    w = _writer()
    w.writerow(["value"])
    for v in draws:
        w.writerow([_fmt(v)])
    return 0


def _cmd_moments(args) -> int:
    d = AlphaNormal(args.alpha, args.sigma)
    rows = [[_fmt(p), _fmt(d.absolute_moment(p))] for p in args.p]
    w = _writer()
    w.writerow(["p", "absolute_moment"])
    w.writerows(rows)
    return 0


def _cmd_entropy(args) -> int:
    w = _writer()
    if args.family == "weibull":
        if args.shape is None:
            raise _UsageError("--shape is required for --family weibull")
        rows = [[_fmt(shape), _fmt(args.scale),
                 _fmt(Weibull(shape, args.scale).entropy())]
                for shape in args.shape]
        w.writerow(["shape", "scale", "entropy"])
        w.writerows(rows)
    else:
        if args.alpha is None:
            raise _UsageError("--alpha is required for --family alpha-normal")
        rows = [[_fmt(alpha), _fmt(AlphaNormal(alpha).entropy())]
                for alpha in args.alpha]
        w.writerow(["alpha", "entropy"])
        w.writerows(rows)
    return 0


def _cmd_psi_norm(args) -> int:
    w = _writer()
    numeric = bool(args.numeric)
    if args.family == "weibull":
        if args.shape is None:
            raise _UsageError("--shape is required for --family weibull")
        header = ["shape", "scale", "psi_norm"]
        if numeric:
            header.append("psi_norm_numeric")
        rows = []
        for shape in args.shape:
            dist = Weibull(shape, args.scale)
            row = [_fmt(shape), _fmt(args.scale), _fmt(dist.psi_norm())]
            if numeric:
                row.append(_fmt(dist.psi_norm_numeric()))
            rows.append(row)
        w.writerow(header)
        w.writerows(rows)
    else:
        if args.alpha is None:
            raise _UsageError("--alpha is required for --family alpha-normal")
        header = ["alpha", "psi_norm"]
        if numeric:
            header.append("psi_norm_numeric")
        rows = []
        for alpha in args.alpha:
            dist = AlphaNormal(alpha)
            row = [_fmt(alpha), _fmt(dist.psi_norm())]
            if numeric:
                row.append(_fmt(dist.psi_norm_numeric()))
            rows.append(row)
        w.writerow(header)
        w.writerows(rows)
    return 0


def _cmd_tails(args) -> int:
    d = AlphaNormal(args.alpha)
    threshold = d.tail_lower_threshold()
    rows = []
    for t in _grid(args.tmin, args.tmax, args.steps):
        exact = d.tail_exact(t)
        upper = d.tail_upper_bound(t)
        lower = math.exp(-t ** d.alpha)
        rows.append([_fmt(t), _fmt(exact), _fmt(upper), _fmt(lower),
                     _bool_cell(exact <= upper),
                     _bool_cell(t < threshold or exact >= lower)])
    print(f"# threshold={_fmt(threshold)}")
    w = _writer()
    w.writerow(["t", "exact_tail", "upper_bound", "lower_bound",
                "upper_ok", "lower_ok"])
    w.writerows(rows)
    return 0


def _point_header(dim: int) -> list[str]:
    return [f"x{i + 1}" for i in range(dim)]


def _cmd_mv_density(args) -> int:
    sigma = _load_matrix(args.sigma)
    m = MultivariateAlphaNormal(sigma, args.alpha)
    rows = [[_fmt(c) for c in point] + [_fmt(m.joint_pdf(point))]
            for point in args.x]
    w = _writer()
    w.writerow(_point_header(sigma.dim) + ["pdf"])
    w.writerows(rows)
    return 0


def _cmd_mv_cdf(args) -> int:
    sigma = _load_matrix(args.sigma)
    m = MultivariateAlphaNormal(sigma, args.alpha)
    rng = numerics.RngStream(args.seed, 0)
    rows = []
    for point in args.x:
        value, se = m.joint_cdf_with_error(point, rng, args.n)
        rows.append([_fmt(c) for c in point] + [_fmt(value), _fmt(se)])
    w = _writer()
    w.writerow(_point_header(sigma.dim) + ["cdf", "std_error"])
    w.writerows(rows)
    return 0


def _cmd_limit_pmf(args) -> int:
    if (args.rho is None) == (args.sigma is None):
        raise _UsageError("pass exactly one of --rho or --sigma")
    if args.rho is not None:
        if not -1.0 < args.rho < 1.0:
            raise _UsageError("--rho must lie in (-1, 1)")
        sigma = CorrelationMatrix.bivariate(args.rho)
    else:
        sigma = _load_matrix(args.sigma)
    mr = MetaRademacher(sigma, mc_samples=args.n, seed=args.seed)
    rows = []
    for sv in mr.support():
        value, se = mr.pmf_with_error(sv)
        rows.append([str(c) for c in sv.coords] + [_fmt(value), _fmt(se)])
    w = _writer()
    w.writerow([f"s{i + 1}" for i in range(sigma.dim)] + ["pmf", "std_error"])
    w.writerows(rows)
    return 0


def _cmd_figure1(args) -> int:
    dists = [AlphaNormal(a) for a in _FIGURE1_ALPHAS]
    rows = [[_fmt(x)] + [_fmt(d.pdf(x)) for d in dists]
            for x in _grid(args.xmin, args.xmax, args.steps)]
    w = _writer()
    w.writerow(["x"] + [f"pdf_alpha_{a:g}" for a in _FIGURE1_ALPHAS])
    w.writerows(rows)
    return 0


def _cmd_verify(args) -> int:
    if args.suite == "all":
        names = None
    else:
        names = [tok.strip() for tok in args.suite.split(",") if tok.strip()]
        known = set(verify_mod.criterion_names())
        unknown = [n for n in names if n not in known]
        if unknown:
            raise _UsageError(
                f"unknown criteria: {', '.join(sorted(unknown))}; "
                f"known: {', '.join(verify_mod.criterion_names())}")
    results = verify_mod.run_suite(seed=args.seed, names=names)
    w = _writer()
    w.writerow(["criterion", "status", "measured", "tolerance", "detail"])
    for row in verify_mod.report_rows(results):
        w.writerow(list(row))
    return 0 if all(r.passed for r in results) else 3


# --- parser ------------------------------------------------------------------


def _add_univariate_flags(p, with_sigma: bool = True):
    p.add_argument("--alpha", type=float, required=True,
                   help="shape parameter (positive)")
    if with_sigma:
        p.add_argument("--sigma", type=float, default=1.0,
                       help="scale parameter (default 1)")


def _add_grid_flags(p, xmin: float, xmax: float, steps: int):
    p.add_argument("--xmin", type=float, default=xmin)
    p.add_argument("--xmax", type=float, default=xmax)
    p.add_argument("--steps", type=int, default=steps)


def _build_parser() -> _Parser:
    parser = _Parser(prog="alphanorm",
                     description="alpha-normal distribution toolkit")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("density-table", help="pdf values on a grid")
    _add_univariate_flags(p)
    _add_grid_flags(p, -3.0, 3.0, 121)
    p.set_defaults(handler=_cmd_density_table)

    p = sub.add_parser("cdf-table", help="cdf values on a grid")
    _add_univariate_flags(p)
    _add_grid_flags(p, -3.0, 3.0, 121)
    p.set_defaults(handler=_cmd_cdf_table)

    p = sub.add_parser("quantile", help="quantiles at given probabilities")
    _add_univariate_flags(p)
    p.add_argument("--u", type=_float_list, required=True,
                   help="comma-separated probabilities in (0,1)")
    p.set_defaults(handler=_cmd_quantile)

    p = sub.add_parser("sample", help="draw alpha-normal variates")
    _add_univariate_flags(p)
    p.add_argument("--n", type=int, required=True, help="number of draws")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stream", type=int, default=0)
    p.set_defaults(handler=_cmd_sample)

    p = sub.add_parser("moments", help="absolute moments E|X|^p")
    _add_univariate_flags(p)
    p.add_argument("--p", type=_float_list, default=[1.0, 2.0],
                   help="comma-separated moment orders (default 1,2)")
    p.set_defaults(handler=_cmd_moments)

    p = sub.add_parser("entropy", help="differential entropy closed forms")
    p.add_argument("--family", choices=["alpha-normal", "weibull"],
                   default="alpha-normal")
    p.add_argument("--alpha", type=_float_list,
                   help="comma-separated shapes (alpha-normal family)")
    p.add_argument("--shape", type=_float_list,
                   help="comma-separated shapes (weibull family)")
    p.add_argument("--scale", type=float, default=1.0,
                   help="weibull scale (default 1)")
    p.set_defaults(handler=_cmd_entropy)

    p = sub.add_parser("psi-norm", help="Orlicz psi_alpha norms")
    p.add_argument("--family", choices=["alpha-normal", "weibull"],
                   default="alpha-normal")
    p.add_argument("--alpha", type=_float_list,
                   help="comma-separated shapes (alpha-normal family)")
    p.add_argument("--shape", type=_float_list,
                   help="comma-separated shapes (weibull family)")
    p.add_argument("--scale", type=float, default=1.0,
                   help="weibull scale (default 1)")
    p.add_argument("--numeric", action="store_true",
                   help="add the quadrature + root-finding cross-check column")
    p.set_defaults(handler=_cmd_psi_norm)

    p = sub.add_parser("tails", help="exact tail vs the Weibull envelope")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--tmin", type=float, default=0.0)
    p.add_argument("--tmax", type=float, default=5.0)
    p.add_argument("--steps", type=int, default=21)
    p.set_defaults(handler=_cmd_tails)

    p = sub.add_parser("mv-density", help="joint density at given points")
    p.add_argument("--sigma", required=True,
                   help="correlation matrix CSV (dimension header, then rows)")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--x", type=_float_list, action="append", required=True,
                   help="point as comma-separated coordinates (repeatable)")
    p.set_defaults(handler=_cmd_mv_density)

    p = sub.add_parser("mv-cdf", help="joint CDF at given points")
    p.add_argument("--sigma", required=True,
                   help="correlation matrix CSV (dimension header, then rows)")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--x", type=_float_list, action="append", required=True,
                   help="point as comma-separated coordinates (repeatable)")
    p.add_argument("--n", type=int, default=200_000,
                   help="MC samples for d >= 3 (default 200000)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=_cmd_mv_cdf)

    p = sub.add_parser("limit-pmf", help="limiting sign-vector probabilities")
    p.add_argument("--rho", type=float,
                   help="bivariate correlation (shortcut for a 2x2 matrix)")
    p.add_argument("--sigma",
                   help="correlation matrix CSV (dimension header, then rows)")
    p.add_argument("--n", type=int, default=200_000,
                   help="MC samples per copula value for d >= 3")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=_cmd_limit_pmf)

    p = sub.add_parser("figure1",
                       help="density curves for alpha = 1, 2, 3, 5")
    _add_grid_flags(p, -3.0, 3.0, 601)
    p.set_defaults(handler=_cmd_figure1)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--suite", default="all",
                   help='"all" or a comma-separated list of criteria')
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(handler=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help exits through argparse
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except AlphanormError as exc:
        _diag(str(exc))
        return 2
    except ValueError as exc:
        _diag(str(exc))
        return 2


if __name__ == "__main__":
    sys.exit(main())
