"""Command-line entry point: ``pfci {discover,simulate,benchmark,blanket,replay}``.

Every command writes a ``manifest.json`` next to its outputs holding the
argument vector, the resolved configuration, the random generator, the tool
version, stage timings and SHA-256 digests of inputs and outputs.
``pfci replay manifest.json`` re-executes the recorded command.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from dataclasses import asdict
from pathlib import Path

from . import __version__
from .benchmark import (
    SHD_REFS,
    TIMING_COLUMNS,
    BenchmarkConfig,
    full_profile,
    load_config,
    run_benchmark,
    write_aggregate_csv,
    write_rows_csv,
)
from .blanket import markov_blanket_layers
from .dataset import read_csv, write_csv
from .exceptions import ConfigError, PFCIError
from .fci import FciConfig, fci_full, pfci
from .graph import from_json, to_dot, to_json
from .simulate import (
    NOISES,
    RNG_NAME,
    Sim1Config,
    Sim2Config,
    generate_grouped_dag,
    generate_sparse_dag,
    make_rng,
    sample_sem,
)

THREADS_ENV = "PFCI_THREADS"


def sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def _lambda_arg(text):
    if text in ("auto", "cv"):
        return text
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, 'auto' or 'cv', got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("lambda must be nonnegative")
    return value


def _resolve_threads(value) -> int:
    if value is None:
        env = os.environ.get(THREADS_ENV)
        if env is None:
            return 1
        try:
            value = int(env)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    if value < 1:
        raise ConfigError("thread count must be at least 1")
    return value


def _write_manifest(out_dir: Path, command, argv, config, inputs, outputs, timings) -> Path:
    manifest = {
        "tool": "pfci",
        "version": __version__,
        "command": command,
        "argv": list(argv),
        "config": config,
        "rng": RNG_NAME,
        "timings_ms": timings,
        "inputs": {str(p): sha256(p) for p in inputs},
        "outputs": {Path(p).name: sha256(p) for p in outputs},
    }
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return path


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as err:
        raise ConfigError(f"cannot create output directory {out}: {err.strerror}") from err
    return out


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_discover(args, argv) -> int:
    threads = _resolve_threads(args.threads)
    data = read_csv(args.csv)
    try:
        cfg = FciConfig(alpha=args.alpha, max_cond_size=args.max_cond_size,
                        max_pds_size=args.max_pds_size, rule_set=args.rule_set, n_jobs=threads)
    except ValueError as err:
        raise ConfigError(str(err)) from None
    if args.method == "pfci":
        res = pfci(data, args.lam, cfg, rule=args.sym_rule, cv_folds=args.cv_folds, seed=args.seed)
    else:
        res = fci_full(data, cfg)
    out = _out_dir(args)
    outputs = [out / "pag.json", out / "metadata.json"]
    to_json(res.pag, outputs[0])
    meta = {k: v for k, v in res.metadata.items()}
    outputs[1].write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    if args.dot:
        outputs.append(out / "pag.dot")
        outputs[-1].write_text(to_dot(res.pag), encoding="utf-8")
    config = {"method": args.method, "lambda_rule": args.lam if isinstance(args.lam, str) else "fixed",
              "lambda": meta["lambda"], "sym_rule": args.sym_rule, "alpha": args.alpha,
              "rule_set": args.rule_set, "max_cond_size": args.max_cond_size,
              "max_pds_size": args.max_pds_size, "cv_folds": args.cv_folds, "seed": args.seed,
              "threads": threads}
    timings = {"stage1": meta["ms_stage1"], "stage2": meta["ms_stage2"]}
    _write_manifest(out, "discover", argv, config, [args.csv], outputs, timings)
    print(f"{meta['method']}: {meta['edges_final']} edges "
          f"(start {meta['edges_ns']}, refined {meta['edges_refined']}) -> {outputs[0]}")
    return 0


def cmd_simulate(args, argv) -> int:
    t0 = time.perf_counter()
    rng = make_rng(args.seed)
    weights = (args.weight_low, args.weight_high)
    if args.study == "sim1":
        sim = Sim1Config(p=args.p, n=args.n, pi=args.pi, weight_range=weights, noise=args.noise, seed=args.seed)
        g = generate_sparse_dag(sim, rng)
    else:
        sim = Sim2Config(p=args.p, n=args.n, K=args.K, s=args.s, within_density=args.within_density,
                         between_density=args.between_density, weight_range=weights,
                         noise=args.noise, seed=args.seed)
        g = generate_grouped_dag(sim, rng)
    data = sample_sem(g, args.n, sim.noise, rng=rng)
    out = _out_dir(args)
    outputs = [out / "data.csv", out / "dag.json", out / "config.json"]
    write_csv(data, outputs[0])
    to_json(g, outputs[1])
    config = {"study": args.study, **asdict(sim), "rng": RNG_NAME}
    outputs[2].write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")
    timings = {"total": int(round((time.perf_counter() - t0) * 1000))}
    _write_manifest(out, "simulate", argv, config, [], outputs, timings)
    print(f"{args.study}: p={args.p}, n={args.n}, {len(g.edges)} true edges -> {out}")
    return 0


def cmd_benchmark(args, argv) -> int:
    threads = _resolve_threads(args.threads)
    if args.config is None and not args.full:
        raise ConfigError("benchmark needs a config file, --full, or both")
    cfg = load_config(args.config) if args.config is not None else BenchmarkConfig()
    if args.shd_ref is not None:
        cfg.shd_ref = args.shd_ref
    if args.full:
        cfg = full_profile(cfg)
    t0 = time.perf_counter()
    result = run_benchmark(cfg, threads=threads)
    out = _out_dir(args)
    outputs = [out / "replicates.csv", out / "benchmark.csv"]
    write_rows_csv(result.rows, outputs[0])
    write_aggregate_csv(result.aggregate(), outputs[1])
    config = {**asdict(cfg), "threads": threads, "timing_columns": list(TIMING_COLUMNS)}
    timings = {"total": int(round((time.perf_counter() - t0) * 1000))}
    inputs = [args.config] if args.config is not None else []
    _write_manifest(out, "benchmark", argv, config, inputs, outputs, timings)
    failed = sum(r.status != "ok" for r in result.rows)
    print(f"{len(result.rows)} replicate rows ({failed} failed) -> {outputs[1]}")
    return 0


def cmd_blanket(args, argv) -> int:
    g = from_json(args.graph)
    report = markov_blanket_layers(g, args.target).to_dict()
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_replay(args, argv) -> int:
    try:
        manifest = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
        recorded = list(manifest["argv"])
    except (OSError, ValueError, KeyError, TypeError) as err:
        raise ConfigError(f"cannot read manifest {args.manifest}: {err}") from err
    if args.out_dir is not None:
        recorded += ["--out-dir", args.out_dir]
    return main(recorded)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pfci", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, out_default):
        sp.add_argument("--out-dir", default=out_default)
        sp.add_argument("--threads", type=int, default=None,
                        help=f"worker threads (default: ${THREADS_ENV} or 1)")

    d = sub.add_parser("discover", help="estimate a PAG from a CSV dataset")
    d.add_argument("csv")
    d.add_argument("--method", choices=("pfci", "fci"), default="pfci")
    d.add_argument("--lambda", dest="lam", type=_lambda_arg, default="auto")
    d.add_argument("--alpha", type=float, default=0.01)
    d.add_argument("--sym-rule", choices=("and", "or"), default="or")
    d.add_argument("--rule-set", choices=("core", "full"), default="core")
    d.add_argument("--max-cond-size", type=int, default=None)
    d.add_argument("--max-pds-size", type=int, default=None)
    d.add_argument("--cv-folds", type=int, default=5)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--dot", action="store_true", help="also write pag.dot")
    common(d, "pfci-out")
    d.set_defaults(func=cmd_discover)

    s = sub.add_parser("simulate", help="draw a ground-truth DAG and a dataset")
    s.add_argument("--study", choices=("sim1", "sim2"), default="sim1")
    s.add_argument("--p", type=int, default=100)
    s.add_argument("--n", type=int, default=100)
    s.add_argument("--pi", type=float, default=0.015)
    s.add_argument("--K", type=int, default=5)
    s.add_argument("--s", type=int, default=5)
    s.add_argument("--within-density", type=float, default=0.6)
    s.add_argument("--between-density", type=float, default=0.02)
    s.add_argument("--weight-low", type=float, default=0.5)
    s.add_argument("--weight-high", type=float, default=1.5)
    s.add_argument("--noise", choices=NOISES, default="gaussian")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out-dir", default="pfci-sim")
    s.set_defaults(func=cmd_simulate)

    b = sub.add_parser("benchmark", help="run a seeded replicate study")
    b.add_argument("config", nargs="?", default=None, help="benchmark config JSON")
    b.add_argument("--full", action="store_true", help="use the p = 100..1000 grid")
    b.add_argument("--shd-ref", choices=SHD_REFS, default=None)
    common(b, "pfci-bench")
    b.set_defaults(func=cmd_benchmark)

    m = sub.add_parser("blanket", help="layered neighbourhood of a node in a graph JSON")
    m.add_argument("graph")
    m.add_argument("--target", required=True)
    m.add_argument("--out", default=None)
    m.set_defaults(func=cmd_blanket)

    r = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    r.add_argument("manifest")
    r.add_argument("--out-dir", default=None)
    r.set_defaults(func=cmd_replay)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, argv)
    except (PFCIError, OSError) as err:
        print(f"pfci {args.command}: error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
