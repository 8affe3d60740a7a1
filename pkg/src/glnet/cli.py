"""Command line entry point: ``glnet simulate | analyze | validate``."""
from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import math
import os
import sys

from .death import death_verdict
from .errors import ConfigError, NumericError, ZenoError
from .experiments import load_config, run_replicas, write_outputs, ks_statistic
from .hazard import (
    WaitTimeLaw,
    closed_form_branch,
    cumulative_hazard,
    cumulative_hazard_numeric,
)
from .rng import RngStream
from .samplers import sample_wait_time

log = logging.getLogger("glnet")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

HAZARD_TOL = 1e-6
KS_TOL = 0.01
HAZARD_GRID = (0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 3.0, 5.0, 10.0, 25.0)


def _load(args):
    cfg = load_config(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.replicas is not None:
        overrides["replicas"] = args.replicas
    if overrides:
        cfg = dataclasses.replace(cfg, run=dataclasses.replace(cfg.run, **overrides))
        if cfg.run.replicas < 1 or cfg.run.seed < 0:
            raise ConfigError("replicas must be >= 1 and seed >= 0")
    return cfg


def _emit(doc, out, name):
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    sys.stdout.write(text)
    if out:
        os.makedirs(out, exist_ok=True)
        with open(os.path.join(out, name), "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_simulate(args):
    cfg = _load(args)
    summary, traces = run_replicas(cfg, jobs=args.jobs)
    out = args.out or "."
    paths = write_outputs(traces, summary, out, cfg.run)
    log.info("wrote %s and %s", paths["spikes"], paths["summary"])
    print(
        f"replicas={cfg.run.replicas} death_fraction={summary.death_fraction} "
        f"mean_events={summary.mean_events}"
    )
    return EXIT_OK


def cmd_analyze(args):
    cfg = _load(args)
    verdict = death_verdict(cfg.network)
    _emit(verdict.to_dict(), args.out, "analysis.json")
    return EXIT_OK


def validate_network(cfg, draws, seed):
    """Closed form against quadrature and KS of the sampler, per neuron.

    Each neuron is checked with its initial potential as the starting value;
    neurons starting at zero are skipped.
    """
    results = []
    for k, spec in enumerate(cfg.network.neurons):
        if spec.decay is None or spec.initial_potential <= 0:
            continue
        law = WaitTimeLaw(spec.phi, spec.decay, spec.initial_potential)
        row = {"neuron": k, "branch": closed_form_branch(law)}
        if row["branch"] is not None:
            err = max(
                abs(cumulative_hazard(law, t) - cumulative_hazard_numeric(law, t))
                for t in HAZARD_GRID
            )
            row["hazard_max_abs_error"] = err
            row["hazard_ok"] = err <= HAZARD_TOL
        rng = RngStream(seed, k)
        samples = [sample_wait_time(law, rng) for _ in range(draws)]
        finite = [x for x in samples if math.isfinite(x)]
        row["infinite_fraction"] = 1.0 - len(finite) / draws
        if finite:
            tol = max(KS_TOL, 1.63 / math.sqrt(len(finite)))
            row["ks"] = ks_statistic(finite, law)
            row["ks_tol"] = tol
            row["ks_ok"] = row["ks"] <= tol
        results.append(row)
    return results


def cmd_validate(args):
    cfg = _load(args)
    results = validate_network(cfg, args.draws, cfg.run.seed)
    ok = all(r.get("hazard_ok", True) and r.get("ks_ok", True) for r in results)
    _emit({"neurons": results, "ok": ok}, args.out, "validation.json")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def build_parser():
    parser = argparse.ArgumentParser(prog="glnet", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="JSON experiment file")
        p.add_argument("--seed", type=int, help="override run.seed")
        p.add_argument("--out", help="output directory")
        p.add_argument("--replicas", type=int, help="override run.replicas")

    p = sub.add_parser("simulate", help="run replicas and write spikes.csv + summary.json")
    common(p)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="static death verdict as JSON")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("validate", help="closed-form vs quadrature and sampler KS checks")
    common(p)
    p.add_argument("--draws", type=int, default=100_000)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericError, ZenoError) as err:
        print(f"numeric failure: {err}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
