"""Command-line entry point: ``catcode sweep | crossovers | verify``."""
from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

import numpy as np

from .errors import CatCodeError, InvalidSpec
from .gvr import CodeConfig, Regime, per_mode_flip
from .metrics import (QuadratureSpec, codeword_overlap_pointwise, entangled_merit, state_fidelity_vs_input)
from .sweep import emit_csv, find_crossovers, load_spec, read_csv, resolve_workers, run_sweep

log = logging.getLogger("catcode")

SPOT_CHECKS = 20
SPOT_TOL = 1e-9
SPOT_SEED = 7


def _worst_on_grid(rec, config, n=41):
    from .coherent import LogicalQubit, qubit_normalization
    from .errors import DegenerateQubit
    from .gvr import transmit
    best = math.inf
    for w in np.linspace(0, 1, n):
        for theta in np.linspace(0, math.pi, n):
            q = LogicalQubit(rec.alpha, float(w), float(theta))
            try:
                if qubit_normalization(q) <= 1e-6:
                    continue
            except DegenerateQubit:
                continue
            best = min(best, state_fidelity_vs_input(q, transmit(q, rec.eta, config).output))
    return best


def spot_check(rows, spec):
    """Recompute a seeded sample of rows through the scalar code paths; returns failures."""
    rng = np.random.default_rng(SPOT_SEED)
    picks = sorted(rng.choice(len(rows), size=min(SPOT_CHECKS, len(rows)), replace=False))
    quad = QuadratureSpec(spec.quad_nodes)
    failures = []
    for i in picks:
        rec = rows[i]
        config = CodeConfig(rec.n_reps, Regime(rec.regime), spec.encoder_at)
        checks = []
        if not math.isnan(rec.p_herald):
            _, h = per_mode_flip(rec.alpha, rec.eta, rec.n_reps, rec.regime, spec.encoder_at)
            checks.append(("p_herald", rec.p_herald, h ** rec.n_reps))
        if not math.isnan(rec.f_codeword):
            checks.append(("f_codeword", rec.f_codeword, codeword_overlap_pointwise(rec.alpha, rec.eta, config, quad)))
        if not math.isnan(rec.concurrence):
            checks.append(("concurrence", rec.concurrence, entangled_merit(rec.alpha, rec.eta, config, "general")))
        for name, got, ref in checks:
            if abs(got - ref) > SPOT_TOL:
                failures.append(f"row {i} {name}: table {got:.12g}, pointwise {ref:.12g}")
        if not math.isnan(rec.f_worst):
            grid_min = _worst_on_grid(rec, config)
            if rec.f_worst > grid_min + SPOT_TOL:
                failures.append(f"row {i} f_worst {rec.f_worst:.12g} above grid minimum {grid_min:.12g}")
    return len(picks), failures


def cmd_sweep(args):
    spec = load_spec(args.spec)
    if args.worst_case:
        spec = spec.with_metric("f_worst")
    out_dir = Path(args.out if args.out is not None else spec.out_dir)
    workers = resolve_workers(args.workers)
    log.info("sweep: %d alphas, %d workers", len(spec.alphas()), workers)
    rows = run_sweep(spec, workers=workers)
    path = emit_csv(rows, out_dir / "sweep.csv")
    print(f"wrote {len(rows)} rows to {path}")
    if args.plots:
        from .plot import emit_plot
        count = 0
        for metric in spec.metrics:
            for eta in spec.etas:
                for regime in spec.regimes:
                    emit_plot(rows, metric, eta, regime, out_dir / "plots" / f"{metric}_eta{eta:g}_{regime}.svg")
                    count += 1
        print(f"wrote {count} plots to {out_dir / 'plots'}")
    if args.oracle_check:
        from .acceptance import run_criterion
        n, failures = spot_check(rows, spec)
        for msg in failures:
            print("spot-check mismatch:", msg)
        print(f"[{'PASS' if not failures else 'FAIL'}] pointwise recomputation of {n} rows")
        results = [run_criterion(4), run_criterion(5)]
        for r in results:
            print(r.line())
        if failures or not all(r.passed for r in results):
            return 1
    return 0


def cmd_crossovers(args):
    rows = read_csv(args.csv)
    found = find_crossovers(rows, args.metric, args.eta, args.regime)
    print("n_from,n_to,alpha")
    for a, b, x in found:
        print(f"{a},{b},{x:.12g}")
    return 0


def cmd_verify(args):
    from .acceptance import run_all
    results = run_all()
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed")
    return 0 if passed == len(results) else 1


def build_parser():
    p = argparse.ArgumentParser(prog="catcode", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sweep", help="evaluate merits over a parameter grid")
    s.add_argument("--spec", required=True, help="key = value sweep specification")
    s.add_argument("--out", help="output directory (overrides out_dir)")
    s.add_argument("--workers", type=int, help="worker processes; CATCODE_WORKERS takes precedence")
    s.add_argument("--plots", action="store_true", help="write one SVG per (metric, eta, regime)")
    s.add_argument("--worst-case", action="store_true", help="also compute worst-case fidelity")
    s.add_argument("--oracle-check", action="store_true", help="recompute sampled rows independently")
    s.set_defaults(func=cmd_sweep)

    c = sub.add_parser("crossovers", help="alphas where the best repetition count changes")
    c.add_argument("--csv", required=True)
    c.add_argument("--metric", required=True)
    c.add_argument("--eta", required=True, type=float)
    c.add_argument("--regime", required=True, choices=[r.value for r in Regime])
    c.set_defaults(func=cmd_crossovers)

    v = sub.add_parser("verify", help="run the acceptance suite")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except InvalidSpec as exc:
        print(f"invalid spec: {exc}", file=sys.stderr)
        return 2
    except (CatCodeError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
