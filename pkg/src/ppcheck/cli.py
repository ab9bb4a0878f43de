"""Command-line front end: batch runs, theorem bundles, family discovery.

Point evaluation is pure, so it can run on a thread pool; rows are sorted
afterwards so parallel and serial runs emit byte-identical reports.
"""
from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

from .checks import CHECKS, ORDER_BUDGET, CheckResult, PointContext
from .geometry import CurvatureBundle, DegeneratePointError, metric_at_point
from .metrics import (ConfigError, MetricSpec, RunConfig, parse_metric_config,
                      perturb_point, sample_points)
from .report import (ENGINE_VERSION, Report, all_clear, build_report,
                     emit_report, encode_value)


class RunError(RuntimeError):
    pass


MAX_RESAMPLES = 5


def _requested_checks(config: RunConfig):
    names = list(config.checks) if config.checks else list(CHECKS)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise ConfigError(f"unknown checks requested: {', '.join(unknown)}")
    return names


def _validate_budgets(names, jet_order: int):
    offenders = [(n, ORDER_BUDGET[n]) for n in names
                 if ORDER_BUDGET[n] > jet_order]
    if offenders:
        worst = max(k for _, k in offenders)
        detail = ", ".join(f"{n} (needs K>={k})" for n, k in offenders)
        raise ConfigError(f"jet order {worst} required; "
                          f"insufficient for: {detail}")


def _usable_point(spec: MetricSpec, point, config: RunConfig, notes: list):
    """Return a bundle at the point, nudging away from metric degeneracy."""
    candidate = point
    for attempt in range(MAX_RESAMPLES + 1):
        try:
            m = metric_at_point(spec, candidate, config.jet_order, config.mode)
            return candidate, CurvatureBundle(m)
        except DegeneratePointError:
            notes.append(f"degenerate metric at {encode_value(list(candidate))};"
                         " resampled")
            candidate = perturb_point(point, attempt + 1)
    return None, None


def _evaluate(spec, point, bundle, config, names):
    ctx = PointContext(spec=spec, point=point, mode=config.mode, bundle=bundle,
                       tolerance=config.tolerance,
                       field_coeffs=config.field_coeffs)
    return [CHECKS[name](ctx) for name in names]


def run(spec: MetricSpec, config: RunConfig, threads: int = 1) -> Report:
    """Evaluate all requested checks at every sampled point."""
    names = _requested_checks(config)
    _validate_budgets(names, config.jet_order)
    points = sample_points(spec, config.points)
    notes: list = []
    usable = []
    for idx, pt in enumerate(points):
        resolved, bundle = _usable_point(spec, pt, config, notes)
        if resolved is not None:
            usable.append((idx, resolved, bundle))
    if not usable:
        raise RunError("all sampled points are degenerate for this metric")

    def work(item):
        idx, pt, bundle = item
        return [(idx, r) for r in _evaluate(spec, pt, bundle, config, names)]

    indexed = []
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for chunk in pool.map(work, usable):
                indexed.extend(chunk)
    else:
        for item in usable:
            indexed.extend(work(item))
    header = {
        "version": ENGINE_VERSION,
        "mode": config.mode,
        "jet_order": config.jet_order,
        "seed": config.points.seed,
        "metric_echo": _metric_echo(spec),
    }
    if notes:
        header["notes"] = notes
    return build_report(header, indexed)


def _metric_echo(spec: MetricSpec) -> dict:
    echo = {"family": spec.family, "n": spec.n, "coords": list(spec.coords)}
    if spec.potential is not None:
        echo["H"] = repr(spec.potential)
    if spec.warnings:
        echo["warnings"] = list(spec.warnings)
    return echo


THEOREM_BUNDLES = {
    # hypothesis check first; the rest verify the conclusion on the same points
    "thm_3_8": ("conformal_recurrence",
                ["conformal_recurrence", "roter_bundle", "olszak",
                 "collinearity"]),
    "thm_3_13": ("roter_bundle",
                 ["roter_bundle", "schimming", "pure_radiation",
                  "alpha_recurrent"]),
    "prop_2_10": ("brinkmann",
                  ["brinkmann", "schimming"]),
}


def theorem_suite(name: str, spec: MetricSpec, config: RunConfig,
                  threads: int = 1) -> Report:
    """Run one theorem's hypothesis-plus-conclusion bundle."""
    if name not in THEOREM_BUNDLES:
        raise ConfigError(f"unknown theorem id {name!r}; "
                          f"known: {', '.join(sorted(THEOREM_BUNDLES))}")
    hypothesis, bundle = THEOREM_BUNDLES[name]
    report = run(spec, replace(config, checks=tuple(bundle)), threads=threads)
    report.header["theorem"] = name
    hypo_rows = [r for r in report.rows if r.name == hypothesis]
    if any(r.status in ("fail", "error") for r in hypo_rows):
        report.verdict = "hypotheses not met"
    elif all(r.status in ("pass", "vacuous") for r in report.rows):
        report.verdict = "pass"
    else:
        report.verdict = "fail"
    return report


FAMILY_SCHEMAS = {
    "ppwave": "params: {H: polynomial in (u, x1..xd)}; d: transverse dimension",
    "galaev": "params: {lambda: [integers, sum 0], a: poly in u, F: poly in u}; d",
    "two_symmetric": "params: {a_vec: [d rationals], b_mat: [[d x d symmetric]]}",
    "walker": "params: {H: poly in (u, x, v), a: [d polys], gstar: [[d x d]]}; d",
    "custom": "params: {components: {\"i,j\": polynomial}, coords: [names]}",
    "perturbed_minkowski": "params: {seed: integer, degree: 1|2}; n",
}


def list_families() -> str:
    lines = ["built-in metric families:"]
    for name in FAMILY_SCHEMAS:
        lines.append(f"  {name:20s} {FAMILY_SCHEMAS[name]}")
    return "\n".join(lines) + "\n"


def _load_config(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_metric_config(text)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ppcheck",
        description="verify curvature identities of polynomial metrics "
                    "at sample points")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run requested checks from a config")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--out", default=None)
    p_run.add_argument("--format", choices=("json", "text"), default="json")
    p_run.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    p_thm = sub.add_parser("theorems", help="run a theorem bundle")
    p_thm.add_argument("--name", required=True)
    p_thm.add_argument("--config", required=True)
    p_thm.add_argument("--out", default=None)
    p_thm.add_argument("--format", choices=("json", "text"), default="json")
    p_thm.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    p_fam = sub.add_parser("families", help="list built-in metric families")
    p_fam.add_argument("--list", action="store_true", default=True)

    args = parser.parse_args(argv)
    try:
        if args.command == "families":
            sys.stdout.write(list_families())
            return 0
        spec, config = _load_config(args.config)
        if args.command == "run":
            report = run(spec, config, threads=max(1, args.threads))
        else:
            report = theorem_suite(args.name, spec, config,
                                   threads=max(1, args.threads))
        text = emit_report(report, args.out, args.format)
        if args.out is None:
            sys.stdout.write(text)
        if report.verdict == "hypotheses not met":
            return 0
        return 0 if all_clear(report) else 1
    except (ConfigError, RunError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
