"""Command-line front-end for the full pipeline.

Subcommands: fit, proportions, simulate, alr, reproduce. Every command
takes ``--format {table,json}``; table output is rounded for reading
while JSON emits a versioned envelope at full precision.

Exit codes: 0 success, 1 reproduction failure, 2 input error,
3 numerical failure, 4 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings as _warnings

import numpy as np

from . import backmap, ingest, reference, regress, simulate
from .composition import LogRatioVector, alr, alr_inverse, closure
from .errors import (
    BTooSmallError,
    CompregError,
    DegenerateScaleError,
    InvalidLevelError,
)

SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_REPRODUCTION = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3
EXIT_USAGE = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage; the CLI contract reserves 2 for input
    errors, so usage problems are rerouted through _UsageError instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="compreg",
                     description="Compositional regression toolkit "
                                 "(log-ratio transform, ML fit, back-mapping, "
                                 "Monte Carlo studies)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_fit = sub.add_parser("fit", help="fit the regression model to a match CSV")
    p_fit.add_argument("--data", required=True, help="match CSV path")
    p_fit.add_argument("--level", type=float, default=0.95)
    p_fit.add_argument("--format", choices=("json", "table"), default="table")

    p_prop = sub.add_parser("proportions",
                            help="back-map a fit to proportions at covariate values")
    p_prop.add_argument("--data", required=True)
    p_prop.add_argument("--z", action="append", type=float, required=True,
                        help="covariate value; repeat for several")
    p_prop.add_argument("--level", type=float, default=0.95)
    p_prop.add_argument("--method", choices=("delta", "bootstrap"), default="delta")
    p_prop.add_argument("--boot-b", type=int, default=10000)
    p_prop.add_argument("--seed", type=int, default=0)
    p_prop.add_argument("--format", choices=("json", "table"), default="table")

    p_sim = sub.add_parser("simulate", help="run a Monte Carlo estimator study")
    p_sim.add_argument("--n", action="append", type=int, required=True,
                       help="sample size; repeat for a sweep")
    p_sim.add_argument("--replicates", type=int, default=1000)
    p_sim.add_argument("--beta0", action="append", type=float, required=True)
    p_sim.add_argument("--beta1", action="append", type=float, required=True)
    p_sim.add_argument("--sigma", action="append", type=float, required=True)
    p_sim.add_argument("--p-bern", type=float, default=0.5)
    p_sim.add_argument("--level", type=float, default=0.95)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--format", choices=("json", "table"), default="table")

    p_alr = sub.add_parser("alr", help="log-ratio transform or its inverse")
    p_alr.add_argument("--parts", action="append", type=float,
                       help="positive part; repeat per part")
    p_alr.add_argument("--values", action="append", type=float,
                       help="log-ratio value (with --inverse); repeat per value")
    p_alr.add_argument("--inverse", action="store_true")
    p_alr.add_argument("--format", choices=("json", "table"), default="table")

    p_rep = sub.add_parser("reproduce",
                           help="compare computed results against the bundled "
                                "reference tables")
    p_rep.add_argument("--table", type=int, choices=(1, 2, 3), required=True)
    p_rep.add_argument("--seed", type=int, default=0)
    p_rep.add_argument("--format", choices=("json", "table"), default="table")

    return parser


def _envelope(command: str, inputs: dict, results: dict, warns: list[str]) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs_echo": inputs,
        "results": results,
        "warnings": warns,
    }


def _fail(code: int, exc: Exception) -> int:
    print(f"compreg: error: {exc}", file=sys.stderr)
    return code


def _emit(env: dict, fmt: str, table_text: str) -> None:
    if fmt == "json":
        print(json.dumps(env, indent=2))
    else:
        print(table_text)
        for w in env["warnings"]:
            print(f"warning: {w}", file=sys.stderr)


def _load_table(path: str):
    with _warnings.catch_warnings(record=True) as caught:
        _warnings.simplefilter("always", ingest.IngestWarning)
        with open(path, "r", encoding="utf-8") as fh:
            table = ingest.parse_matches(fh.read())
    return table, [str(w.message) for w in caught]


# ----------------------------------------------------------------- fit

def _interval_rows(model, level):
    flags = {(e.kind, e.component, e.cov_index): e.significant
             for e in regress.significance_report(model, level)}
    rows = []
    for ci in regress.wald_ci(model, level):
        rows.append({
            "name": ci.name,
            "kind": ci.kind,
            "component": ci.component,
            "cov_index": ci.cov_index,
            "estimate": ci.estimate,
            "se": ci.se,
            "lower": ci.lower,
            "upper": ci.upper,
            "significant": flags.get((ci.kind, ci.component, ci.cov_index)),
        })
    return rows


def _render_fit(results: dict) -> str:
    lines = [f"Compositional regression fit: n={results['n']}, "
             f"{results['g']} components, reference part {results['ref_label']!r}"]
    lines.append(f"{'Parameter':<12}{'Estimate':>10}{'Std.Error':>11}"
                 f"{'CI(' + format(results['level'], 'g') + ')':>22}  Significant")
    for row in results["parameters"]:
        sig = {True: "yes", False: "no", None: "-"}[row["significant"]]
        ci = f"({row['lower']:.3f}, {row['upper']:.3f})"
        lines.append(f"{row['name']:<12}{row['estimate']:>10.3f}"
                     f"{row['se']:>11.3f}{ci:>22}  {sig}")
    if results.get("log_likelihood") is not None:
        lines.append(f"Log-likelihood: {results['log_likelihood']:.3f}")
    return "\n".join(lines)


def _cmd_fit(args) -> int:
    try:
        table, warns = _load_table(args.data)
        dataset = ingest.to_regression_dataset(table)
    except (OSError, CompregError) as exc:
        return _fail(EXIT_INPUT, exc)
    try:
        model = regress.fit(dataset, labels=ingest.COMPONENT_LABELS,
                            ref_label=ingest.REF_LABEL)
        rows = _interval_rows(model, args.level)
        try:
            ll = regress.log_likelihood(model, dataset)
        except DegenerateScaleError:
            ll = None
    except InvalidLevelError as exc:
        return _fail(EXIT_USAGE, exc)
    except (CompregError, np.linalg.LinAlgError) as exc:
        return _fail(EXIT_NUMERICAL, exc)
    results = {
        "n": model.n, "g": model.g, "p": model.p,
        "labels": list(model.labels), "ref_label": model.ref_label,
        "level": args.level, "parameters": rows, "log_likelihood": ll,
    }
    inputs = {"data": args.data, "level": args.level, "format": args.format}
    _emit(_envelope("fit", inputs, results, warns), args.format, _render_fit(results))
    return EXIT_OK


# --------------------------------------------------------- proportions

def _render_proportions(results: dict) -> str:
    lines = []
    for block in results["blocks"]:
        zs = ", ".join(f"{v:g}" for v in block["z"])
        lines.append(f"z = {zs}  (method: {block['method']}, "
                     f"level {results['level']:g})")
        lines.append(f"  {'Part':<10}{'Estimate':>10}{'CI':>20}")
        for part in block["parts"]:
            ci = f"({part['lower']:.3f}, {part['upper']:.3f})"
            lines.append(f"  {part['label']:<10}{part['estimate']:>10.3f}{ci:>20}")
        if block["clamped"]:
            lines.append("  note: interval endpoints clamped into (0, 1)")
    return "\n".join(lines)


def _cmd_proportions(args) -> int:
    try:
        table, warns = _load_table(args.data)
        dataset = ingest.to_regression_dataset(table)
    except (OSError, CompregError) as exc:
        return _fail(EXIT_INPUT, exc)
    try:
        model = regress.fit(dataset, labels=ingest.COMPONENT_LABELS,
                            ref_label=ingest.REF_LABEL)
        blocks = []
        for z in args.z:
            if args.method == "delta":
                est = backmap.proportion_ci_delta(model, [z], args.level)
            else:
                est = backmap.proportion_ci_bootstrap(model, [z], args.level,
                                                      b=args.boot_b, seed=args.seed)
            labels = est.alphas.labels or [f"part{k + 1}" for k in range(est.alphas.n_parts)]
            blocks.append({
                "z": list(est.covariate),
                "method": est.method,
                "clamped": est.clamped,
                "parts": [
                    {"label": lab, "estimate": a, "lower": lo, "upper": hi}
                    for lab, a, (lo, hi)
                    in zip(labels, est.alphas.parts, est.intervals)
                ],
            })
    except (InvalidLevelError, BTooSmallError, ValueError) as exc:
        return _fail(EXIT_USAGE, exc)
    except (CompregError, np.linalg.LinAlgError) as exc:
        return _fail(EXIT_NUMERICAL, exc)
    results = {"level": args.level, "method": args.method, "seed": args.seed,
               "boot_b": args.boot_b, "blocks": blocks}
    inputs = {"data": args.data, "z": list(args.z), "level": args.level,
              "method": args.method, "boot_b": args.boot_b, "seed": args.seed,
              "format": args.format}
    _emit(_envelope("proportions", inputs, results, warns), args.format,
          _render_proportions(results))
    return EXIT_OK


# ------------------------------------------------------------ simulate

def _render_simulate(results: dict) -> str:
    lines = []
    for report in results["reports"]:
        lines.append(f"n = {report['n']}  (replicates={report['replicates']}, "
                     f"seed={report['seed']}, level={report['ci_level']:g})")
        lines.append(f"  {'Parameter':<12}{'Truth':>9}{'Mean':>10}{'Bias':>10}"
                     f"{'MSE':>10}{'CP':>7}")
        for row in report["parameters"]:
            lines.append(f"  {row['name']:<12}{row['truth']:>9.3f}{row['mean']:>10.5f}"
                         f"{row['bias']:>10.5f}{row['mse']:>10.5f}{row['coverage']:>7.3f}")
    if len(results["reports"]) > 1:
        lines.append("MSE across sample sizes")
        header = f"  {'Parameter':<12}" + "".join(
            f"{'n=' + str(r['n']):>12}" for r in results["reports"])
        lines.append(header)
        for row in results["comparison"]:
            cells = "".join(f"{c['mse']:>12.5f}" for c in row["cells"])
            lines.append(f"  {row['parameter']:<12}{cells}")
    return "\n".join(lines)


def _cmd_simulate(args) -> int:
    g = len(args.beta0)
    if len(args.beta1) != g or len(args.sigma) != g:
        return _fail(EXIT_USAGE, _UsageError(
            f"--beta0/--beta1/--sigma need equal counts, got "
            f"{g}/{len(args.beta1)}/{len(args.sigma)}"))
    try:
        configs = [simulate.SimConfig(
            n=n, replicates=args.replicates,
            true_beta0=tuple(args.beta0), true_beta1=tuple(args.beta1),
            true_sigma=tuple(args.sigma), covariate_prob=args.p_bern,
            ci_level=args.level, seed=args.seed) for n in args.n]
    except (ValueError, InvalidLevelError) as exc:
        return _fail(EXIT_USAGE, exc)
    try:
        reports = simulate.study_sweep(configs)
    except CompregError as exc:
        return _fail(EXIT_NUMERICAL, exc)
    # Durations are intentionally omitted so identical invocations emit
    # byte-identical output.
    results = {
        "reports": [{
            "n": r.config.n, "replicates": r.config.replicates,
            "seed": r.config.seed, "ci_level": r.config.ci_level,
            "covariate_prob": r.config.covariate_prob, "dgp": r.config.dgp,
            "parameters": [{
                "name": s.name, "kind": s.kind, "component": s.component,
                "truth": s.truth, "mean": s.mean, "bias": s.bias,
                "mse": s.mse, "coverage": s.coverage,
            } for s in r.summaries],
        } for r in reports],
        "comparison": simulate.comparison_table(reports),
    }
    inputs = {"n": list(args.n), "replicates": args.replicates,
              "beta0": list(args.beta0), "beta1": list(args.beta1),
              "sigma": list(args.sigma), "p_bern": args.p_bern,
              "level": args.level, "seed": args.seed, "format": args.format}
    _emit(_envelope("simulate", inputs, results, []), args.format,
          _render_simulate(results))
    return EXIT_OK


# ----------------------------------------------------------------- alr

def _cmd_alr(args) -> int:
    if args.inverse:
        if args.parts or not args.values:
            return _fail(EXIT_USAGE, _UsageError("--inverse takes --values only"))
        try:
            comp = alr_inverse(LogRatioVector(tuple(args.values)))
        except (CompregError, ValueError) as exc:
            return _fail(EXIT_USAGE, exc)
        numbers = comp.parts
        results = {"parts": list(numbers)}
        inputs = {"values": list(args.values), "inverse": True, "format": args.format}
    else:
        if args.values or not args.parts:
            return _fail(EXIT_USAGE, _UsageError("provide --parts, or --values with --inverse"))
        try:
            vec = alr(closure(args.parts))
        except (CompregError, ValueError) as exc:
            return _fail(EXIT_USAGE, exc)
        numbers = vec.values
        results = {"values": list(numbers)}
        inputs = {"parts": list(args.parts), "inverse": False, "format": args.format}
    _emit(_envelope("alr", inputs, results, []), args.format,
          " ".join(f"{v:.12g}" for v in numbers))
    return EXIT_OK


# ----------------------------------------------------------- reproduce

def _render_reproduce(results: dict) -> str:
    lines = [f"Reference table {results['table']} vs computed"]
    lines.append(f"{'Row':<30}{'Reference':>12}{'Computed':>12}"
                 f"{'|diff|':>10}{'Tol':>8}  Status")
    for row in results["rows"]:
        tol = "-" if row["tolerance"] is None else f"{row['tolerance']:g}"
        lines.append(f"{row['label']:<30}{row['expected']:>12.5f}"
                     f"{row['actual']:>12.5f}{row['diff']:>10.5f}{tol:>8}  {row['status']}")
    lines.append(f"Overall: {results['overall']}"
                 + (f" ({results['failures']} row(s) failed)"
                    if results["failures"] else ""))
    return "\n".join(lines)


def _cmd_reproduce(args) -> int:
    warns: list[str] = []
    try:
        if args.table == 2:
            table = ingest.load_bundled()
            model = regress.fit(ingest.to_regression_dataset(table),
                                labels=ingest.COMPONENT_LABELS,
                                ref_label=ingest.REF_LABEL)
            rows = reference.compare_fit_table(model)
            gated = True
        elif args.table == 3:
            model = reference.reference_fit()
            delta = {z: backmap.proportion_ci_delta(model, [z], 0.95)
                     for z in (0.0, 1.0)}
            boot = {z: backmap.proportion_ci_bootstrap(model, [z], 0.95,
                                                       b=100000, seed=args.seed)
                    for z in (0.0, 1.0)}
            rows = reference.compare_proportion_table(delta, boot)
            gated = True
        else:
            truth = reference.SIMULATION_TRUTH
            configs = [simulate.SimConfig(
                n=n, replicates=reference.SIMULATION_REPLICATES,
                true_beta0=truth["beta0"], true_beta1=truth["beta1"],
                true_sigma=truth["sigma"], seed=args.seed)
                for n in reference.SIMULATION_SAMPLE_SIZES]
            rows = reference.compare_simulation_table(simulate.study_sweep(configs))
            gated = False
    except (OSError, CompregError) as exc:
        return _fail(EXIT_INPUT, exc)

    failures = sum(1 for r in rows if r.status == "FAIL")
    overall = ("REFERENCE-ONLY" if not gated
               else ("FAIL" if failures else "PASS"))
    results = {
        "table": args.table,
        "rows": [{"label": r.label, "expected": r.expected, "actual": r.actual,
                  "diff": r.diff, "tolerance": r.tolerance, "status": r.status}
                 for r in rows],
        "failures": failures,
        "overall": overall,
    }
    inputs = {"table": args.table, "seed": args.seed, "format": args.format}
    _emit(_envelope("reproduce", inputs, results, warns), args.format,
          _render_reproduce(results))
    return EXIT_REPRODUCTION if (gated and failures) else EXIT_OK


_HANDLERS = {
    "fit": _cmd_fit,
    "proportions": _cmd_proportions,
    "simulate": _cmd_simulate,
    "alr": _cmd_alr,
    "reproduce": _cmd_reproduce,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"compreg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    return _HANDLERS[args.command](args)


def entrypoint() -> None:
    sys.exit(main())
