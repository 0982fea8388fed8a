"""Command-line front end.

Subcommands: test (one hypothesis on a CSV dataset), ci (interval by test
inversion), simulate (Monte Carlo campaign from a JSON config), null-check
(campaign at h = 0, prints the KS p-value).

Exit codes: 0 success, 1 usage error, 2 data error, 3 infeasible estimator.
"""

import argparse
import json
import sys

import numpy as np

from . import inference, simulate
from .dantzig import Tuning, default_tuning
from .errors import DataFormatError, DensetestError, InfeasibleEstimator
from .inference import KNOWN_SIGMA, UNKNOWN_SIGMA, Hypothesis
from .report import render_campaign_figures

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INFEASIBLE = 0, 1, 2, 3


def read_csv_matrix(path):
    """Parse a plain numeric CSV (optional header) into a 2-D array."""
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines:
        raise DataFormatError(f"{path}: empty file")
    start = 0
    first = lines[0].split(",")
    if any(not _is_number(cell) for cell in first):
        start = 1  # header row
    width = None
    for i, line in enumerate(lines[start:], start=start + 1):
        cells = line.split(",")
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise DataFormatError(
                f"{path}: ragged row {i} has {len(cells)} cells, expected {width}",
                row=i)
        vals = []
        for j, cell in enumerate(cells, start=1):
            if not _is_number(cell):
                raise DataFormatError(
                    f"{path}: non-numeric cell at row {i}, column {j}: {cell!r}",
                    row=i, col=j)
            vals.append(float(cell))
        rows.append(vals)
    if not rows:
        raise DataFormatError(f"{path}: no data rows")
    return np.array(rows)


def _is_number(cell):
    try:
        v = float(cell)
    except ValueError:
        return False
    return v == v and abs(v) != float("inf")  # reject NaN/inf cells


def read_csv_dataset(path, y_col=None):
    """Split a CSV file into (X, y); the response is the last column unless
    overridden with a 1-based y_col."""
    m = read_csv_matrix(path)
    if m.shape[1] < 2:
        raise DataFormatError(f"{path}: need at least 2 columns, got {m.shape[1]}")
    if y_col is None:
        y_col = m.shape[1]
    if not 1 <= y_col <= m.shape[1]:
        raise DataFormatError(f"{path}: y column {y_col} outside 1..{m.shape[1]}")
    y = m[:, y_col - 1]
    x = np.delete(m, y_col - 1, axis=1)
    return x, y


def _parse_vector(text):
    return np.array([float(v) for v in text.split(",") if v != ""])


def _loading_from_args(args, p):
    specs = [args.a, args.a_index_pair, args.a_group, args.a_dict_point]
    if sum(s is not None for s in specs) != 1:
        raise ValueError("provide exactly one of --a, --a-index-pair, "
                         "--a-group, --a-dict-point")
    if args.a is not None:
        a = _parse_vector(args.a)
        if a.size != p:
            raise DataFormatError(
                f"loading has length {a.size} but the design has {p} columns")
        return a
    if args.a_index_pair is not None:
        k, j = (int(v) for v in args.a_index_pair.split(","))
        return inference.pairwise_loading(k, j, p)
    if args.a_group is not None:
        weights_text, idx_text = args.a_group.split(":")
        weights = _parse_vector(weights_text)
        idx = [int(v) for v in idx_text.split(",")]
        return inference.group_loading(weights, idx, p)
    point = _parse_vector(args.a_dict_point)
    degree = args.dict_degree
    if degree * point.size != p:
        raise DataFormatError(
            f"dictionary of degree {degree} over {point.size} coordinates gives "
            f"{degree * point.size} features but the design has {p} columns")
    _, loading_at = inference.power_dictionary(point[None, :], degree)
    return loading_at(point)


def _tuning_from_args(args, n, p):
    base = default_tuning(n, p)
    eta = args.eta if args.eta is not None else base.eta
    lam = args.lam if args.lam is not None else base.lam
    rho0 = args.rho0 if args.rho0 is not None else base.rho0
    return Tuning(eta=eta, lam=lam, rho0=rho0)


def _write_json(payload, path):
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def _cmd_test(args):
    x, y = read_csv_dataset(args.data, args.y_col)
    n, p = x.shape
    a = _loading_from_args(args, p)
    hyp = Hypothesis(a=a, g0=args.g0)
    if args.sigma:
        sigma = read_csv_matrix(args.sigma)
        if sigma.shape != (p, p):
            raise DataFormatError(
                f"covariance is {sigma.shape[0]}x{sigma.shape[1]}, expected {p}x{p}")
        report = inference.test_known_sigma(x, y, sigma, hyp, alpha=args.alpha)
    else:
        report = inference.test_unknown_sigma(
            x, y, hyp, alpha=args.alpha, tuning=_tuning_from_args(args, n, p))
    payload = report.to_dict()
    payload["g0"] = args.g0
    _write_json(payload, args.output)
    print(f"method:    {report.method}")
    print(f"statistic: {report.statistic:.6f}")
    print(f"p_value:   {report.p_value:.6f}")
    print(f"decision:  {'reject' if report.reject else 'fail to reject'} "
          f"at alpha = {report.alpha}")
    if report.diagnostics is not None:
        d = report.diagnostics
        print(f"rho_hat:   {d.rho_hat:.4f}  sigma_eps_hat: {d.sigma_eps_hat:.4f}  "
              f"sigma_u_hat: {d.sigma_u_hat:.4f}")
    return EXIT_OK


def _cmd_ci(args):
    x, y = read_csv_dataset(args.data, args.y_col)
    n, p = x.shape
    a = _loading_from_args(args, p)
    grid = None
    if args.grid_center is not None:
        if args.grid_half_width is None or args.grid_step is None:
            raise ValueError("--grid-center requires --grid-half-width and --grid-step")
        grid = (args.grid_center, args.grid_half_width, args.grid_step)
    if args.sigma:
        sigma = read_csv_matrix(args.sigma)
        ci = inference.confidence_interval(
            x, y, a, alpha=args.alpha, method=KNOWN_SIGMA, sigma=sigma, grid=grid)
    else:
        ci = inference.confidence_interval(
            x, y, a, alpha=args.alpha, method=UNKNOWN_SIGMA,
            tuning=_tuning_from_args(args, n, p), grid=grid)
    _write_json(ci.to_dict(), args.output)
    print(f"[{ci.lower:.6f}, {ci.upper:.6f}] at level {ci.level}")
    if not ci.contiguous:
        print("warning: acceptance region was not contiguous")
    return EXIT_OK


def _run_campaign_files(config, out_stem, figures):
    results = simulate.run_campaign(config)
    written = []
    for method, result in sorted(results.items()):
        suffix = f"_{method}" if len(results) > 1 else ""
        csv_path = f"{out_stem}{suffix}.csv"
        json_path = f"{out_stem}{suffix}.json"
        simulate.write_csv(result, csv_path)
        simulate.write_json(config, result, json_path)
        written.extend([csv_path, json_path])
        if figures:
            written.extend(render_campaign_figures(result, f"{out_stem}{suffix}"))
    return results, written


def _cmd_simulate(args):
    with open(args.config, "r", encoding="utf-8") as fh:
        config = simulate.SimConfig.from_dict(json.load(fh))
    if args.seed is not None:
        config = simulate.SimConfig(**{**config.__dict__, "base_seed": args.seed})
    results, written = _run_campaign_files(config, args.output, not args.no_figures)
    for method, result in sorted(results.items()):
        rate0 = result.rejection_rate.get(0.0)
        print(f"{method}: size at h=0 = {rate0}, KS p = {result.ks_p_value}, "
              f"feasibility = {result.feasibility_rate:.3f}, "
              f"errors = {result.n_errors}")
    print("wrote: " + " ".join(written))
    return EXIT_OK


def _cmd_null_check(args):
    config = simulate.SimConfig(
        design=args.design, beta_regime=args.beta_regime,
        loading_regime=args.loading_regime, n=args.n, p=args.p, reps=args.reps,
        alpha=args.alpha, h_grid=(0.0,), method=args.method,
        base_seed=args.seed or 0)
    results, written = _run_campaign_files(config, args.output, not args.no_figures)
    for method, result in sorted(results.items()):
        print(f"{method}: KS statistic = {result.ks_statistic:.4f}, "
              f"KS p-value = {result.ks_p_value:.4f}")
    print("wrote: " + " ".join(written))
    return EXIT_OK


def _add_common_test_args(sub):
    sub.add_argument("--data", required=True, help="CSV dataset; response in the last column")
    sub.add_argument("--y-col", type=int, default=None, help="1-based response column override")
    sub.add_argument("--a", default=None, help="inline loading vector, comma separated")
    sub.add_argument("--a-index-pair", default=None, metavar="K,J",
                     help="pairwise homogeneity loading e_k - e_j (1-based)")
    sub.add_argument("--a-group", default=None, metavar="C1,..:I1,..",
                     help="group contribution loading: weights, colon, 1-based indices")
    sub.add_argument("--a-dict-point", default=None, metavar="D1,..",
                     help="power-dictionary evaluation point for conditional-mean testing")
    sub.add_argument("--dict-degree", type=int, default=4)
    sub.add_argument("--alpha", type=float, default=0.05)
    sub.add_argument("--sigma", default=None, help="CSV of the known feature covariance")
    sub.add_argument("--eta", type=float, default=None)
    sub.add_argument("--lam", type=float, default=None)
    sub.add_argument("--rho0", type=float, default=None)
    sub.add_argument("--output", default=None, help="path for the JSON report")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="densetest",
        description="Linear-functional hypothesis tests for high-dimensional "
                    "regression without sparsity assumptions.")
    subs = parser.add_subparsers(dest="command", required=True)

    t = subs.add_parser("test", help="test H0: a'beta = g0 on a CSV dataset")
    _add_common_test_args(t)
    t.add_argument("--g0", type=float, required=True)
    t.set_defaults(func=_cmd_test)

    c = subs.add_parser("ci", help="confidence interval by test inversion")
    _add_common_test_args(c)
    c.add_argument("--grid-center", type=float, default=None)
    c.add_argument("--grid-half-width", type=float, default=None)
    c.add_argument("--grid-step", type=float, default=None)
    c.set_defaults(func=_cmd_ci)

    s = subs.add_parser("simulate", help="run a Monte Carlo campaign from a JSON config")
    s.add_argument("--config", required=True)
    s.add_argument("--output", required=True, help="output stem for CSV/JSON/figures")
    s.add_argument("--seed", type=int, default=None, help="override base_seed")
    s.add_argument("--no-figures", action="store_true")
    s.set_defaults(func=_cmd_simulate)

    nc = subs.add_parser("null-check", help="campaign at h = 0; prints the KS p-value")
    nc.add_argument("--design", default=simulate.TOEPLITZ)
    nc.add_argument("--beta-regime", default=simulate.SPARSE)
    nc.add_argument("--loading-regime", default=simulate.SPARSE)
    nc.add_argument("--n", type=int, default=100)
    nc.add_argument("--p", type=int, default=50)
    nc.add_argument("--reps", type=int, default=200)
    nc.add_argument("--alpha", type=float, default=0.05)
    nc.add_argument("--method", default=simulate.KNOWN_SIGMA)
    nc.add_argument("--seed", type=int, default=0)
    nc.add_argument("--output", required=True, help="output stem for CSV/JSON/figures")
    nc.add_argument("--no-figures", action="store_true")
    nc.set_defaults(func=_cmd_null_check)
    return parser


def run_cli(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InfeasibleEstimator as exc:
        print(f"infeasible estimator: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (DataFormatError, FileNotFoundError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ValueError, DensetestError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
