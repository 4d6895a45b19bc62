"""Parameter sweeps over (regime, N, eta, alpha) and the tables built from them."""
from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .errors import InvalidSpec
from .gvr import ENCODER_AT, CodeConfig, Regime
from .metrics import METRICS, MeritRecord, QuadratureSpec, compute_merits

CSV_COLUMNS = ("regime", "n_reps", "eta", "alpha", "p_herald", "f_worst", "f_codeword", "concurrence")
WORKERS_ENV = "CATCODE_WORKERS"
# metrics where smaller is better
LOWER_IS_BETTER = {"f_codeword"}
TIE_TOL = 1e-12


@dataclass(frozen=True)
class SweepSpec:
    alpha_min: float = 0.2
    alpha_max: float = 3.5
    alpha_step: float = 0.02
    etas: tuple = (0.66, 0.90)
    n_reps_list: tuple = (1, 3, 5, 11, 51)
    regimes: tuple = tuple(r.value for r in Regime)
    metrics: tuple = ("p_herald", "f_codeword", "concurrence")
    quad_nodes: int = 400
    out_dir: str = "out"
    encoder_at: str = "input"

    def __post_init__(self):
        if not self.alpha_step > 0:
            raise InvalidSpec("alpha_step", "must be > 0")
        if not 0 < self.alpha_min <= self.alpha_max:
            raise InvalidSpec("alpha_min", "need 0 < alpha_min <= alpha_max")
        if self.alpha_max > 10:
            raise InvalidSpec("alpha_max", "must be <= 10")
        if not self.etas or any(not 0 < e <= 1 for e in self.etas):
            raise InvalidSpec("etas", "every eta must lie in (0, 1]")
        if not self.n_reps_list or any(n % 2 != 1 or not 1 <= n <= 99 for n in self.n_reps_list):
            raise InvalidSpec("n_reps_list", "every N must be an odd integer in [1, 99]")
        try:
            regimes = tuple(Regime(r).value for r in self.regimes)
        except ValueError as exc:
            raise InvalidSpec("regimes", str(exc)) from None
        if not regimes:
            raise InvalidSpec("regimes", "empty")
        object.__setattr__(self, "regimes", regimes)
        bad = set(self.metrics) - set(METRICS)
        if bad or not self.metrics:
            raise InvalidSpec("metrics", f"unknown or empty: {sorted(bad)}; choose from {METRICS}")
        if self.quad_nodes < 16:
            raise InvalidSpec("quad_nodes", "must be >= 16")
        if self.encoder_at not in ENCODER_AT:
            raise InvalidSpec("encoder_at", f"must be one of {ENCODER_AT}")

    def alphas(self):
        n = int(math.floor((self.alpha_max - self.alpha_min) / self.alpha_step + 1e-9)) + 1
        return [round(self.alpha_min + i * self.alpha_step, 12) for i in range(n)]

    def with_metric(self, name):
        if name in self.metrics:
            return self
        return replace(self, metrics=tuple(self.metrics) + (name,))


_LIST_FIELDS = {"etas": float, "n_reps_list": int, "regimes": str, "metrics": str}
_SCALAR_FIELDS = {"alpha_min": float, "alpha_max": float, "alpha_step": float, "quad_nodes": int,
                  "out_dir": str, "encoder_at": str}


def parse_spec(text: str) -> SweepSpec:
    """Parse ``key = value`` lines; ``#`` starts a comment, lists are comma-separated."""
    known = {f.name for f in fields(SweepSpec)}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidSpec(f"line {lineno}", f"expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in known:
            raise InvalidSpec(key, "unknown field")
        if key in values:
            raise InvalidSpec(key, "given twice")
        try:
            if key in _LIST_FIELDS:
                conv = _LIST_FIELDS[key]
                values[key] = tuple(conv(v.strip()) for v in value.split(",") if v.strip())
            else:
                values[key] = _SCALAR_FIELDS[key](value)
        except ValueError:
            raise InvalidSpec(key, f"cannot parse {value!r}") from None
    return SweepSpec(**values)


def load_spec(path) -> SweepSpec:
    return parse_spec(Path(path).read_text())


def resolve_workers(requested=None):
    """Worker count: CATCODE_WORKERS if set, else ``requested``, else 1."""
    env = os.environ.get(WORKERS_ENV)
    value = env if env not in (None, "") else requested
    if value is None:
        return 1
    try:
        k = int(value)
    except ValueError:
        raise InvalidSpec("workers", f"not an integer: {value!r}") from None
    if k < 1:
        raise InvalidSpec("workers", "must be >= 1")
    return k


def _sort_key(rec: MeritRecord):
    return Regime(rec.regime).order, rec.n_reps, rec.eta, rec.alpha


def _run_unit(args):
    regime, n, eta, alphas, metrics, quad_nodes, encoder_at = args
    config = CodeConfig(n, Regime(regime), encoder_at)
    quad = QuadratureSpec(quad_nodes)
    return [compute_merits(a, eta, config, metrics, quad) for a in alphas]


def run_sweep(spec: SweepSpec, workers=1):
    """All grid points, sorted by (regime, N, eta, alpha).

    Each (regime, N, eta) line is one work unit; every point is a pure
    function of its coordinates, so the result does not depend on ``workers``.
    """
    alphas = spec.alphas()
    units = [(r, n, e, alphas, tuple(spec.metrics), spec.quad_nodes, spec.encoder_at)
             for r in spec.regimes for n in spec.n_reps_list for e in spec.etas]
    if workers <= 1:
        chunks = [_run_unit(u) for u in units]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_unit, units))
    return sorted((rec for chunk in chunks for rec in chunk), key=_sort_key)


def _fmt(v):
    if isinstance(v, str):
        return v
    if isinstance(v, int):
        return str(v)
    return "nan" if math.isnan(v) else format(v, ".12g")


def row_values(rec: MeritRecord):
    return [getattr(rec, c) for c in CSV_COLUMNS]


def csv_text(rows) -> str:
    rows = list(rows)
    if not rows:
        raise ValueError("no rows to write")
    lines = [",".join(CSV_COLUMNS)]
    lines += [",".join(_fmt(v) for v in row_values(r)) for r in rows]
    return "\n".join(lines) + "\n"


def emit_csv(rows, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="ascii") as fh:
        fh.write(csv_text(rows))
    return path


def read_csv(path):
    """Parse an emitted table back into MeritRecords."""
    with open(path, newline="", encoding="ascii") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_COLUMNS:
            raise ValueError(f"unexpected header {header}")
        out = []
        for row in reader:
            d = dict(zip(CSV_COLUMNS, row))
            out.append(MeritRecord(alpha=float(d["alpha"]), eta=float(d["eta"]), n_reps=int(d["n_reps"]),
                                   regime=d["regime"], p_herald=float(d["p_herald"]),
                                   f_worst=float(d["f_worst"]), f_codeword=float(d["f_codeword"]),
                                   concurrence=float(d["concurrence"])))
    return out


def select(rows, metric, eta, regime):
    """{N: [(alpha, value), ...] sorted by alpha} for one slice."""
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}")
    regime = Regime(regime).value
    curves = {}
    for r in rows:
        if r.regime == regime and abs(r.eta - eta) <= 1e-12:
            curves.setdefault(r.n_reps, []).append((r.alpha, getattr(r, metric)))
    return {n: sorted(pts) for n, pts in sorted(curves.items())}


def find_crossovers(rows, metric, eta, regime):
    """[(N_a, N_b, alpha)] where the best N changes along alpha.

    Best means largest, except for f_codeword where smaller is better; ties
    within 1e-12 go to the smaller N.  The crossing point is the root of the
    linear interpolant of the two curves' difference on the bracketing cell.
    """
    sign = -1.0 if metric in LOWER_IS_BETTER else 1.0
    curves = select(rows, metric, eta, regime)
    if len(curves) < 2:
        return []
    tables = {n: dict(pts) for n, pts in curves.items()}
    grid = sorted(set.intersection(*(set(t) for t in tables.values())))
    grid = [a for a in grid if not any(math.isnan(t[a]) for t in tables.values())]
    ns = sorted(tables)

    def best(a):
        top = max(sign * tables[n][a] for n in ns)
        return next(n for n in ns if sign * tables[n][a] >= top - TIE_TOL)

    out = []
    prev = None
    for a0, a1 in zip(grid, grid[1:]):
        n0 = best(a0) if prev is None else prev
        n1 = best(a1)
        prev = n1
        if n0 == n1:
            continue
        d0 = sign * (tables[n1][a0] - tables[n0][a0])
        d1 = sign * (tables[n1][a1] - tables[n0][a1])
        t = 0.5 if d1 == d0 else min(max(-d0 / (d1 - d0), 0.0), 1.0)
        out.append((n0, n1, float(a0 + t * (a1 - a0))))
    return out
