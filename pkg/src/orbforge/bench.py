"""Experiment driver: relative errors, critical depths, gradient variances, CSV suites."""
from __future__ import annotations

import csv
import json
import math
import os
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Callable

import numpy as np

from .ansatz import KINDS, Symmetry, build
from .models import (
    Graph,
    Model,
    j1j2_model,
    maxcut_model,
    random_regular_graph,
    tfim_chain_model,
    tfim_grid_model,
)
from .optimizer import ground_energy, initial_parameters, multistart_vqe
from .simulator import Objective

CSV_HEADER = ["n", "ansatz", "n_l", "L_c", "N_c", "Var_c", "converged", "seconds"]
MODEL_NAMES = ("tfim1d", "tfim1d-ring", "tfim2d", "maxcut", "j1j2")
LINEAR_SCAN_MAX = 8


def relative_error(e_opt: float, e_gs: float) -> float:
    if e_gs == 0:
        raise ValueError("relative error is undefined for a zero ground energy")
    return (e_opt - e_gs) / abs(e_gs)


# -- configuration -------------------------------------------------------------
@dataclass
class ModelSpec:
    """Which benchmark instance to build; ``size`` is n (chains, graphs) or columns (grids)."""

    name: str = "tfim1d"
    size: int = 6
    rows: int = 2
    h_x: float = 1.0
    j1: float = 1.0
    j2: float = 0.5
    degree: int = 3
    graph_seed: int = 0
    graph: dict | None = None  # explicit graph document for maxcut

    def build(self, size: int | None = None) -> Model:
        size = self.size if size is None else size
        if self.name == "tfim1d":
            return tfim_chain_model(size, self.h_x, periodic=False)
        if self.name == "tfim1d-ring":
            return tfim_chain_model(size, self.h_x, periodic=True)
        if self.name == "tfim2d":
            return tfim_grid_model(self.rows, size, self.h_x)
        if self.name == "j1j2":
            return j1j2_model(self.rows, size, self.j1, self.j2)
        if self.name == "maxcut":
            g = Graph.from_dict(self.graph) if self.graph else random_regular_graph(size, self.degree, self.graph_seed)
            return maxcut_model(g)
        raise ValueError(f"unknown model {self.name!r}; expected one of {MODEL_NAMES}")


@dataclass
class ExperimentConfig:
    model: ModelSpec = field(default_factory=ModelSpec)
    sizes: list[int] = field(default_factory=lambda: [6])
    ansatz: list[str] = field(default_factory=lambda: list(KINDS))
    epsilon: float = 1e-5
    l_max: int = 64
    n_rep: int = 25
    grad_samples: int = 200
    seed: int = 0
    out: str | None = None
    init: str = "uniform"
    warm_start: bool = False
    workers: int = 1

    def __post_init__(self):
        if isinstance(self.model, dict):
            self.model = ModelSpec(**self.model)
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.l_max < 1:
            raise ValueError("l_max must be at least 1")
        if self.n_rep < 1:
            raise ValueError("n_rep must be at least 1")
        bad = [k for k in self.ansatz if k not in KINDS]
        if bad:
            raise ValueError(f"unknown ansatz kinds {bad}")

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        doc = json.loads(Path(path).read_text())
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown config keys {sorted(unknown)}")
        return cls(**doc)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class MetricRow:
    n: int
    ansatz: str
    n_l: int
    L_c: int | None
    N_c: int | None
    Var_c: float | None
    converged: bool
    seconds: float

    def __post_init__(self):
        if self.converged and self.N_c != self.n_l * self.L_c:
            raise ValueError("N_c must equal n_l * L_c")
        if not self.converged and self.L_c is not None:
            raise ValueError("unconverged rows carry no L_c")

    def to_csv(self) -> list[str]:
        fmt = lambda v: "" if v is None else repr(v) if isinstance(v, float) else str(v)
        return [str(self.n), self.ansatz, str(self.n_l), fmt(self.L_c), fmt(self.N_c), fmt(self.Var_c),
                "1" if self.converged else "0", f"{self.seconds:.3f}"]

    @classmethod
    def from_csv(cls, rec: dict) -> "MetricRow":
        opt = lambda s, t: None if s == "" else t(s)
        return cls(int(rec["n"]), rec["ansatz"], int(rec["n_l"]), opt(rec["L_c"], int), opt(rec["N_c"], int),
                   opt(rec["Var_c"], float), rec["converged"] == "1", float(rec["seconds"]))


# -- depth search --------------------------------------------------------------
@dataclass
class DepthResult:
    L_c: int | None
    errors: dict[int, float]  # probed depth -> median relative error
    best_errors: dict[int, float]
    thetas: dict[int, np.ndarray] = field(repr=False, default_factory=dict)

    @property
    def converged(self) -> bool:
        return self.L_c is not None


def _depth_seed(seed, layers: int) -> list[int]:
    base = list(seed) if isinstance(seed, (list, tuple)) else [int(seed)]
    return base + [layers]


def critical_depth(template, h, epsilon: float, l_max: int, n_rep: int = 25, seed=0,
                   e_gs: float | None = None, init: str = "uniform", warm_start: bool = False,
                   log: Callable[[str], None] | None = None, **opt_kw) -> DepthResult:
    """Smallest depth whose median relative error over restarts is at most ``epsilon``.

    Depths 1..8 are scanned one by one; beyond that the search doubles and then
    bisects between the last failing and first passing depth. Each depth draws
    its restarts from a seed derived from ``(seed, L)`` only, so results do not
    depend on the search path.
    """
    if e_gs is None:
        e_gs = ground_energy(h)
    errors: dict[int, float] = {}
    best: dict[int, float] = {}
    thetas: dict[int, np.ndarray] = {}

    def probe(layers: int) -> bool:
        if layers in errors:
            return errors[layers] <= epsilon
        theta0 = None
        if warm_start:
            below = [l for l in thetas if l < layers]
            if below:
                l0 = max(below)
                theta0 = np.concatenate([thetas[l0], np.zeros(template.n_l * (layers - l0))])
        r = multistart_vqe(template, layers, h, n_rep=n_rep, seed=_depth_seed(seed, layers), init=init,
                           theta0=theta0, **opt_kw)
        errs = [relative_error(e, e_gs) for e in r.restart_energies]
        errors[layers] = float(np.median(errs))
        best[layers] = float(min(errs))
        thetas[layers] = r.theta
        if log:
            log(f"L={layers} median_err={errors[layers]:.3e} best_err={best[layers]:.3e}")
        return errors[layers] <= epsilon

    lo = 0  # largest depth known to fail
    for layers in range(1, min(LINEAR_SCAN_MAX, l_max) + 1):
        if probe(layers):
            return DepthResult(layers, errors, best, thetas)
        lo = layers
    hi = None
    layers = lo
    while layers < l_max:
        layers = min(2 * layers, l_max)
        if probe(layers):
            hi = layers
            break
        lo = layers
    if hi is None:
        return DepthResult(None, errors, best, thetas)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if probe(mid):
            hi = mid
        else:
            lo = mid
    return DepthResult(hi, errors, best, thetas)


def gradient_variance(template, layers: int, h, samples: int = 200, seed=0, init: str = "uniform") -> float:
    """Median over parameters of the variance of each gradient component."""
    if samples < 2:
        raise ValueError("need at least two samples")
    obj = Objective(template, layers, h)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    grads = np.empty((samples, obj.n_params))
    for s in range(samples):
        grads[s] = obj(initial_parameters(rng, obj.n_params, init))[1]
    return float(np.median(np.var(grads, axis=0, ddof=1)))


# -- reports -------------------------------------------------------------------
def orbit_report(model: Model, sym: Symmetry | None = None) -> dict:
    sym = sym or Symmetry.of(model)
    n_l = {k: build(k, model, sym).n_l for k in KINDS}
    return {
        "model": model.name,
        "n": model.n,
        "group_order": sym.group.order,
        "n_orbits": len(sym.orbits),
        "n_edge_orbits": len(sym.edge_orbits),
        "n_l": n_l,
        "p_f": n_l["orb"] / n_l["free"],
    }


# -- suites --------------------------------------------------------------------
def _read_done(path: Path) -> dict[tuple[int, str], MetricRow]:
    if not path.exists() or path.stat().st_size == 0:
        return {}
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        rows = [MetricRow.from_csv(rec) for rec in reader]
    return {(r.n, r.ansatz): r for r in rows}


def _row_task(args) -> MetricRow:
    cfg, size, kind = args
    t0 = time.perf_counter()
    model = cfg.model.build(size)
    sym = Symmetry.of(model)
    template = build(kind, model, sym)
    e_gs = ground_energy(model.hamiltonian)
    # Restart seeds depend on (seed, size, L) but not on the ansatz, so
    # identical templates give identical rows.
    res = critical_depth(template, model.hamiltonian, cfg.epsilon, cfg.l_max, cfg.n_rep, seed=[cfg.seed, size],
                         e_gs=e_gs, init=cfg.init, warm_start=cfg.warm_start)
    var = None
    if res.converged:
        var = gradient_variance(template, res.L_c, model.hamiltonian, cfg.grad_samples,
                                seed=[cfg.seed, size, res.L_c], init=cfg.init)
    return MetricRow(model.n, kind, template.n_l, res.L_c, None if res.L_c is None else template.n_l * res.L_c,
                     var, res.converged, time.perf_counter() - t0)


def run_suite(config: ExperimentConfig, log: Callable[[str], None] | None = None) -> list[MetricRow]:
    """One row per (size, ansatz); rows already present in ``config.out`` are skipped."""
    path = Path(config.out) if config.out else None
    done = _read_done(path) if path else {}
    tasks = []
    for size in config.sizes:
        n = config.model.build(size).n
        for kind in config.ansatz:
            if (n, kind) not in done:
                tasks.append((config, size, kind))
    writer = None
    fh = None
    if path:
        new = not path.exists() or path.stat().st_size == 0
        fh = path.open("a", newline="")
        writer = csv.writer(fh, lineterminator="\n")
        if new:
            writer.writerow(CSV_HEADER)
            fh.flush()

    def emit(row: MetricRow, task) -> None:
        done[(row.n, row.ansatz)] = row
        if log:
            log(f"n={row.n} {row.ansatz}: L_c={row.L_c} N_c={row.N_c} Var_c={row.Var_c} ({row.seconds:.1f}s)")
        if writer:
            try:
                writer.writerow(row.to_csv())
                fh.flush()
            except OSError as exc:
                raise OSError(f"failed writing row size={task[1]} ansatz={task[2]}: {exc}") from exc

    try:
        if config.workers > 1 and len(tasks) > 1:
            from concurrent.futures import ProcessPoolExecutor

            with ProcessPoolExecutor(max_workers=config.workers) as pool:
                # map yields in submission order, so the CSV row order is fixed
                for task, row in zip(tasks, pool.map(_row_task, tasks)):
                    emit(row, task)
        else:
            for task in tasks:
                emit(_row_task(task), task)
    finally:
        if fh:
            fh.close()
    order = [(config.model.build(s).n, k) for s in config.sizes for k in config.ansatz]
    return [done[key] for key in order]


def maxcut_asymmetry(sizes, graphs_per_size: int = 20, degree: int = 3, seed: int = 0) -> dict[int, list[dict]]:
    """Orbit reports for seeded random regular graphs, keyed by vertex count."""
    out = {}
    for n in sizes:
        seeds = np.random.SeedSequence([seed, n]).generate_state(graphs_per_size)
        out[n] = [orbit_report(maxcut_model(random_regular_graph(n, degree, int(s)))) for s in seeds]
    return out


def mean_free_fraction(reports: list[dict]) -> float:
    return float(np.mean([r["p_f"] for r in reports]))


def _fmt_optional(v) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return "-"
    return str(v)


def format_rows(rows: list[MetricRow]) -> str:
    lines = [" ".join(f"{h:>10}" for h in CSV_HEADER)]
    for r in rows:
        vals = [r.n, r.ansatz, r.n_l, _fmt_optional(r.L_c), _fmt_optional(r.N_c),
                "-" if r.Var_c is None else f"{r.Var_c:.3e}", int(r.converged), f"{r.seconds:.1f}"]
        lines.append(" ".join(f"{str(v):>10}" for v in vals))
    return os.linesep.join(lines)
