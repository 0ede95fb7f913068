"""Seeded replicate studies comparing PFCI with the unpenalized FCI baseline.

Each replicate draws one ground-truth DAG and one dataset from a stream keyed
by ``(seed, study, setup, p, replicate)``; every method sees the same data.
Rows are emitted in task order whatever the number of worker threads.
"""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .blanket import markov_blanket_layers
from .exceptions import ConfigError, PFCIError
from .fci import FciConfig, fci_full, oracle_pag, pfci
from .metrics import confusion_counts, f1, mcc, shd
from .simulate import (
    NOISES,
    Sim1Config,
    Sim2Config,
    generate_grouped_dag,
    generate_sparse_dag,
    make_rng,
    sample_sem,
)

STUDIES = {"sim1": 1, "sim2": 2}
METHODS = ("pfci", "fci")
SHD_REFS = ("pag", "dag-skeleton")
# setup id -> (group size K, causal group count s)
SIM2_SETUPS = {1: (5, 5), 2: (10, 5), 3: (5, 10), 4: (10, 10)}
FULL_P_GRID = tuple(range(100, 1001, 100))

AGGREGATE_COLUMNS = ["p", "method", "shd_mean", "shd_sd", "f1_mean", "f1_sd", "mcc_mean", "mcc_sd",
                     "runtime_mean_s", "runtime_sd_s"]
TIMING_COLUMNS = ("ms_stage1", "ms_stage2", "runtime_s", "runtime_mean_s", "runtime_sd_s")


@dataclass
class BenchmarkConfig:
    study: str = "sim1"
    p: list[int] = field(default_factory=lambda: [100])
    n: int = 100
    replicates: int = 20
    methods: list[str] = field(default_factory=lambda: list(METHODS))
    noise: str = "gaussian"
    seed: int = 0
    pi: float = 0.015
    setups: list[int] = field(default_factory=lambda: [1])
    weight_range: tuple[float, float] = (0.5, 1.5)
    lam: float | str = "auto"
    rule: str = "or"
    alpha: float = 0.01
    rule_set: str = "core"
    max_cond_size: int | None = None
    max_pds_size: int | None = None
    shd_ref: str = "pag"

    def __post_init__(self):
        if self.study not in STUDIES:
            raise ConfigError(f"study must be one of {sorted(STUDIES)}, got {self.study!r}")
        if isinstance(self.p, int):
            self.p = [self.p]
        self.p = [int(v) for v in self.p]
        if not self.p or min(self.p) < 2:
            raise ConfigError("p grid must be nonempty with every p >= 2")
        if int(self.replicates) < 1:
            raise ConfigError("replicates must be at least 1")
        self.replicates = int(self.replicates)
        if isinstance(self.methods, str):
            self.methods = [self.methods]
        bad = [m for m in self.methods if m not in METHODS]
        if not self.methods or bad:
            raise ConfigError(f"methods must be a nonempty subset of {METHODS}")
        if self.noise not in NOISES:
            raise ConfigError(f"noise must be one of {NOISES}")
        if isinstance(self.setups, int):
            self.setups = [self.setups]
        if self.study == "sim2" and (not self.setups or any(s not in SIM2_SETUPS for s in self.setups)):
            raise ConfigError(f"setups must be drawn from {sorted(SIM2_SETUPS)}")
        if self.shd_ref not in SHD_REFS:
            raise ConfigError(f"shd_ref must be one of {SHD_REFS}")
        self.weight_range = tuple(float(w) for w in self.weight_range)
        try:
            self.fci_config()
        except ValueError as err:
            raise ConfigError(str(err)) from None

    @classmethod
    def from_dict(cls, data: dict) -> "BenchmarkConfig":
        known = {f.name for f in fields(cls)}
        extra = sorted(set(data) - known)
        if extra:
            raise ConfigError(f"unknown benchmark config keys: {extra}")
        return cls(**data)

    def fci_config(self, n_jobs: int = 1) -> FciConfig:
        return FciConfig(alpha=self.alpha, max_cond_size=self.max_cond_size,
                         max_pds_size=self.max_pds_size, rule_set=self.rule_set, n_jobs=n_jobs)

    def tasks(self) -> list[tuple[int, int, int]]:
        setups = self.setups if self.study == "sim2" else [0]
        return [(setup, p, rep) for setup in setups for p in self.p for rep in range(self.replicates)]


def load_config(path) -> BenchmarkConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise ConfigError(f"cannot read benchmark config {path}: {err}") from err
    if not isinstance(data, dict):
        raise ConfigError(f"benchmark config {path} must hold a JSON object")
    return BenchmarkConfig.from_dict(data)


@dataclass
class MetricsReport:
    method: str
    p: int
    n: int
    replicate: int
    setup: int
    status: str = "ok"
    shd: float = math.nan
    f1: float = math.nan
    mcc: float = math.nan
    tp: int = -1
    fp: int = -1
    tn: int = -1
    fn: int = -1
    f1_undefined: bool = False
    mcc_undefined: bool = False
    true_edges: int = 0
    y_children: int = 0
    y_children_layer1: int = 0
    ms_stage1: int = 0
    ms_stage2: int = 0
    runtime_s: float = math.nan


@dataclass
class BenchmarkResult:
    config: BenchmarkConfig
    rows: list[MetricsReport]

    def aggregate(self) -> list[dict]:
        return aggregate(self.rows, self.config)


def _simulate(cfg: BenchmarkConfig, setup, p, rep):
    rng = make_rng(cfg.seed, STUDIES[cfg.study], setup, p, rep)
    if cfg.study == "sim1":
        sim = Sim1Config(p=p, n=cfg.n, pi=cfg.pi, weight_range=cfg.weight_range, noise=cfg.noise, seed=cfg.seed)
        g = generate_sparse_dag(sim, rng)
    else:
        K, s = SIM2_SETUPS[setup]
        sim = Sim2Config(p=p, n=cfg.n, K=K, s=s, weight_range=cfg.weight_range, noise=cfg.noise, seed=cfg.seed)
        g = generate_grouped_dag(sim, rng)
    return g, sample_sem(g, cfg.n, cfg.noise, rng=rng)


def _discover(cfg: BenchmarkConfig, method, data, fcfg):
    if method == "pfci":
        return pfci(data, cfg.lam, fcfg, rule=cfg.rule, seed=cfg.seed)
    return fci_full(data, fcfg)


def run_replicate(cfg: BenchmarkConfig, setup, p, rep, n_jobs=1) -> list[MetricsReport]:
    """Score every configured method on one simulated dataset."""
    g, data = _simulate(cfg, setup, p, rep)
    fcfg = cfg.fci_config(n_jobs)
    ref = oracle_pag(g, cfg=fcfg) if cfg.shd_ref == "pag" else g.skeleton()
    truth = g.skeleton()
    children = set(g.children[0]) if cfg.study == "sim2" else set()
    rows = []
    for method in cfg.methods:
        row = MetricsReport(method, p, cfg.n, rep, setup, true_edges=truth.n_edges, y_children=len(children))
        t0 = time.perf_counter()
        try:
            res = _discover(cfg, method, data, fcfg)
        except PFCIError as err:
            row.status = f"error: {err}"
            rows.append(row)
            continue
        row.runtime_s = time.perf_counter() - t0
        c = confusion_counts(res.pag, truth)
        row.tp, row.fp, row.tn, row.fn = c.tp, c.fp, c.tn, c.fn
        row.f1, row.mcc = f1(c), mcc(c)
        row.f1_undefined, row.mcc_undefined = c.f1_undefined, c.mcc_undefined
        row.shd = shd(res.pag, ref, marks=cfg.shd_ref == "pag")
        row.ms_stage1 = res.metadata["ms_stage1"]
        row.ms_stage2 = res.metadata["ms_stage2"]
        if children:
            row.y_children_layer1 = len(children & markov_blanket_layers(res.pag, 0).layer1)
        rows.append(row)
    return rows


def run_benchmark(cfg: BenchmarkConfig, threads: int = 1) -> BenchmarkResult:
    """Run every (setup, p, replicate) task; replicates are spread over ``threads``."""
    tasks = cfg.tasks()
    if threads <= 1:
        chunks = [run_replicate(cfg, *t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(lambda t: run_replicate(cfg, *t), tasks))
    return BenchmarkResult(cfg, [r for chunk in chunks for r in chunk])


def _mean_sd(values):
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return math.nan, math.nan
    sd = float(v.std(ddof=1)) if v.size > 1 else math.nan
    return float(v.mean()), sd


def aggregate(rows: list[MetricsReport], cfg: BenchmarkConfig) -> list[dict]:
    """Mean and sample sd per (setup, p, method) over successful replicates."""
    out = []
    setups = cfg.setups if cfg.study == "sim2" else [0]
    for setup in setups:
        for p in cfg.p:
            for method in cfg.methods:
                group = [r for r in rows if r.setup == setup and r.p == p and r.method == method]
                ok = [r for r in group if r.status == "ok"]
                agg = {"p": p, "method": method}
                for key in ("shd", "f1", "mcc"):
                    agg[f"{key}_mean"], agg[f"{key}_sd"] = _mean_sd([getattr(r, key) for r in ok])
                agg["runtime_mean_s"], agg["runtime_sd_s"] = _mean_sd([r.runtime_s for r in ok])
                agg["replicates_ok"] = len(ok)
                agg["replicates_failed"] = len(group) - len(ok)
                if cfg.study == "sim2":
                    K, s = SIM2_SETUPS[setup]
                    agg.update(setup=setup, K=K, s=s)
                    kids = sum(r.y_children for r in ok)
                    agg["y_layer1_recall"] = (
                        float(np.mean([r.y_children_layer1 / r.y_children for r in ok if r.y_children]))
                        if kids else math.nan
                    )
                out.append(agg)
    return out


def _fmt(v):
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return "nan" if math.isnan(v) else repr(v)
    return str(v)


def write_rows_csv(rows: list[MetricsReport], path) -> None:
    cols = [f.name for f in fields(MetricsReport)]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            d = asdict(r)
            w.writerow([_fmt(d[c]) for c in cols])


def write_aggregate_csv(agg: list[dict], path) -> None:
    extra = [k for k in agg[0] if k not in AGGREGATE_COLUMNS] if agg else []
    cols = AGGREGATE_COLUMNS + extra
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for a in agg:
            w.writerow([_fmt(a[c]) for c in cols])


def full_profile(cfg: BenchmarkConfig) -> BenchmarkConfig:
    """Same settings over the p = 100, 200, ..., 1000 grid."""
    d = asdict(cfg)
    d["p"] = list(FULL_P_GRID)
    return BenchmarkConfig(**d)
