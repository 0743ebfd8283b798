"""Reproducibility harness: curve emission, Monte-Carlo verification of the
entanglement-correlation trade-off, tightness and classical-classical
boundary experiments, and the grid-search oracle comparison.

Subcommands: curve | verify | tightness | ccbound | gd. All runs are
deterministic functions of their configuration (seed and worker count
included); outputs are CSV or JSON with LF endings and 17-significant-digit
floats. Exit codes: 0 success, 2 config error, 3 I/O error, 4 assertion
(violation) error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .bounds import LN2, bound_curve, g_d_numeric, spectrum_at_f, xi_ef, zeta_ef
from .correlations import c_distance_numeric, c_max, c_on_pure, f_value
from .measures import entanglement_of_formation, max_ef_over_spectrum_numeric, max_ef_state, s22_ef
from .qcore import (
    DomainError,
    partial_trace,
    purify,
    strictly_correlated_cc,
    worker_rng,
)


class ConfigError(ValueError):
    """Invalid run configuration (exit code 2)."""


class VerificationError(RuntimeError):
    """A checked inequality or agreement failed (exit code 4)."""


_CURVE_KINDS = ("bures", "hellinger", "mutual_information")
_DISTANCE_KINDS = ("bures", "hellinger")

# Internal grid used by `verify` to pre-tabulate the mutual-information
# bound (the per-sample spectrum is always added as a slice candidate, so
# correctness does not depend on this resolution).
_MI_BOUND_GRID = 41
_AUX_STREAM = 0  # rng stream reserved for grid precomputation
# Sample workers use streams 1..workers; grid points use point index + 1.


@dataclass
class RunConfig:
    command: str
    kind: str = "hellinger"
    seed: int = 0
    samples: int = 10000
    dim_b: int = 16
    grid: int = 201
    tolerance: float = 1e-9
    out: str | None = None
    format: str = "csv"
    full: bool = False
    workers: int = 1
    # Optimizer budgets; None picks the per-command defaults. Not exposed
    # as CLI flags (the flag set is fixed for reproducibility).
    opt_restarts: int | None = None
    opt_iters: int | None = None


def validate_config(cfg: RunConfig) -> None:
    if cfg.samples < 1:
        raise ConfigError("samples must be >= 1")
    if cfg.grid < 2:
        raise ConfigError("grid must be >= 2")
    if cfg.dim_b < 1:
        raise ConfigError("dim-b must be >= 1")
    if not (cfg.tolerance > 0.0):
        raise ConfigError("tolerance must be > 0")
    if cfg.workers < 1:
        raise ConfigError("workers must be >= 1")
    if cfg.format not in ("csv", "json"):
        raise ConfigError(f"unknown format {cfg.format!r}")
    allowed = {
        "curve": _CURVE_KINDS,
        "verify": _CURVE_KINDS,
        "tightness": _DISTANCE_KINDS,
        "ccbound": ("hellinger",),
        "gd": _DISTANCE_KINDS,
    }[cfg.command]
    if cfg.kind not in allowed:
        raise ConfigError(f"kind {cfg.kind!r} not supported by {cfg.command!r}")


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _meta_lines(cfg: RunConfig, **extra) -> list[str]:
    items = {
        "command": cfg.command,
        "kind": cfg.kind,
        "seed": cfg.seed,
        "grid": cfg.grid,
        "version": __version__,
        **extra,
    }
    return [f"# {k}={v}" for k, v in items.items()]


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _emit(cfg: RunConfig, header: list[str], rows: list[list[float]],
          summary: dict, **meta) -> None:
    if cfg.format == "csv":
        lines = _meta_lines(cfg, **meta)
        lines.append(",".join(header))
        for row in rows:
            lines.append(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
        _write_text(cfg.out, "\n".join(lines) + "\n")
        return
    report: dict = {"config": asdict(cfg), "summary": summary}
    if cfg.samples <= 10_000 or cfg.full or cfg.command != "verify":
        report["records"] = [dict(zip(header, row)) for row in rows]
    _write_text(cfg.out, json.dumps(report, indent=2) + "\n")


# ---------------------------------------------------------------------------
# curve
# ---------------------------------------------------------------------------

def run_curve(cfg: RunConfig) -> None:
    curve = bound_curve(cfg.kind, cfg.grid, seed=cfg.seed)
    rows = [[float(x), float(b)] for x, b in zip(curve.xs, curve.bounds)]
    summary = {
        "x_max": float(curve.xs[-1]),
        "bound_at_zero": float(curve.bounds[0]),
        "bound_at_max": float(curve.bounds[-1]),
    }
    _emit(cfg, ["x", "bound"], rows, summary)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _mi_bound_table(cfg: RunConfig) -> tuple[np.ndarray, np.ndarray]:
    xs = np.linspace(0.0, c_max("mutual_information", 4), _MI_BOUND_GRID)
    rng = worker_rng(cfg.seed, _AUX_STREAM)
    g = np.array(
        [
            g_d_numeric("mutual_information", 4, float(x), restarts=4, steps=150, rng=rng)
            for x in xs
        ]
    )
    return xs, g


def _verify_chunk(args) -> list[tuple]:
    kind, dim_b, count, seed, stream, mi_xs, mi_g = args
    rng = worker_rng(seed, stream)
    xmax = c_max(kind, 4)
    out = []
    for _ in range(count):
        z = rng.standard_normal((4, dim_b)) + 1j * rng.standard_normal((4, dim_b))
        m = z / np.linalg.norm(z)
        lam = np.linalg.svd(m, compute_uv=False) ** 2
        lam = lam[lam > 1e-12]
        lam = lam / lam.sum()
        x = min(f_value(kind, lam), xmax)
        rho_a = m @ m.conj().T
        e = entanglement_of_formation(rho_a)
        if kind == "mutual_information":
            idx = min(int(np.searchsorted(mi_xs, x, side="left")), len(mi_xs) - 1)
            bound = LN2 - min(mi_g[idx], s22_ef(lam))
        else:
            bound = float(xi_ef(kind, x))
        out.append((x, e, bound, bound - e, tuple(float(t) for t in lam)))
    return out


def run_verify(cfg: RunConfig) -> None:
    if cfg.kind == "mutual_information":
        mi_xs, mi_g = _mi_bound_table(cfg)
        mi_xs, mi_g = tuple(map(float, mi_xs)), tuple(map(float, mi_g))
    else:
        mi_xs = mi_g = ()
    counts = [
        cfg.samples // cfg.workers + (1 if w < cfg.samples % cfg.workers else 0)
        for w in range(cfg.workers)
    ]
    jobs = [
        (cfg.kind, cfg.dim_b, counts[w], cfg.seed, w + 1, mi_xs, mi_g)
        for w in range(cfg.workers)
        if counts[w] > 0
    ]
    if cfg.workers == 1:
        chunks = [_verify_chunk(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            chunks = list(pool.map(_verify_chunk, jobs))  # index-ordered merge

    records = [item for chunk in chunks for item in chunk]
    slacks = np.array([rec[3] for rec in records])
    violations = int(np.sum(slacks < -cfg.tolerance))
    summary = {
        "samples": cfg.samples,
        "violations": violations,
        "max_violation": float(max(0.0, -slacks.min())),
        "min_slack": float(slacks.min()),
    }

    if cfg.format == "json":
        report: dict = {"config": asdict(cfg), "summary": summary}
        if cfg.samples <= 10_000 or cfg.full:
            report["records"] = [
                {
                    "idx": i,
                    "x": x,
                    "e": e,
                    "bound": bound,
                    "slack": slack,
                    "spectrum": list(lam),
                }
                for i, (x, e, bound, slack, lam) in enumerate(records)
            ]
        _write_text(cfg.out, json.dumps(report, indent=2) + "\n")
    else:
        lines = _meta_lines(
            cfg, samples=cfg.samples, dim_b=cfg.dim_b, workers=cfg.workers,
            tolerance=_fmt(cfg.tolerance),
        )
        lines.append("idx,x,e,bound,slack")
        for i, (x, e, bound, slack, _) in enumerate(records):
            lines.append(",".join([str(i), _fmt(x), _fmt(e), _fmt(bound), _fmt(slack)]))
        _write_text(cfg.out, "\n".join(lines) + "\n")

    if violations > 0:
        raise VerificationError(
            f"{violations} violations (max {summary['max_violation']:.3e})"
        )


# ---------------------------------------------------------------------------
# tightness
# ---------------------------------------------------------------------------

def optimal_slice_spectrum(kind: str, x: float) -> np.ndarray:
    """Spectrum minimizing s22 on the slice f(p) = x (closed-form cases)."""
    if kind == "bures":
        y = x * x - x ** 4 / 4.0
    elif kind == "hellinger":
        y = x * x / 2.0
    else:
        raise DomainError(f"no closed-form optimal spectrum for {kind!r}")
    y = min(max(y, 0.0), 0.75)
    if y == 0.0:
        return np.array([1.0])
    if y <= 0.5:
        return np.array([1.0 - y, y])
    if y <= 2.0 / 3.0:
        return np.array([1.0 - y, 1.0 - y, 2.0 * y - 1.0])
    return np.array([1.0 - y, 1.0 - y, 1.0 - y, 3.0 * y - 2.0])


def run_tightness(cfg: RunConfig) -> None:
    restarts = cfg.opt_restarts if cfg.opt_restarts is not None else 20
    iters = cfg.opt_iters if cfg.opt_iters is not None else 2000
    xs = np.linspace(0.0, c_max(cfg.kind, 4), cfg.grid)
    rows = []
    worst_construct = 0.0
    worst_numeric = 0.0
    for i, x in enumerate(xs):
        x = float(x)
        bound = float(xi_ef(cfg.kind, x))
        p = optimal_slice_spectrum(cfg.kind, x)
        state = max_ef_state(p)
        e_built = entanglement_of_formation(state)
        gap_built = bound - e_built
        rng = worker_rng(cfg.seed, i + 1)
        e_num = max_ef_over_spectrum_numeric(p, restarts=restarts, iters=iters, rng=rng)
        gap_num = bound - e_num
        psi = purify(state)
        c_pure = c_on_pure(psi, (4, psi.size // 4), cfg.kind)
        rows.append([x, bound, e_built, gap_built, e_num, gap_num, c_pure])
        worst_construct = max(worst_construct, abs(gap_built))
        worst_numeric = max(worst_numeric, abs(gap_num))
    summary = {
        "max_gap_construct": worst_construct,
        "max_gap_numeric": worst_numeric,
    }
    _emit(
        cfg,
        ["x", "bound", "ef_construct", "gap_construct", "ef_numeric", "gap_numeric", "c_pure"],
        rows,
        summary,
    )
    if worst_construct > 1e-6:
        raise VerificationError(f"analytic construction misses the bound by {worst_construct:.3e}")
    if worst_numeric > cfg.tolerance:
        raise VerificationError(f"orbit search misses the bound by {worst_numeric:.3e}")


# ---------------------------------------------------------------------------
# ccbound
# ---------------------------------------------------------------------------

def run_ccbound(cfg: RunConfig) -> None:
    restarts = cfg.opt_restarts if cfg.opt_restarts is not None else 10
    inner = cfg.opt_iters if cfg.opt_iters is not None else 500
    xs = np.linspace(0.0, f_value("bures", np.full(4, 0.25)), cfg.grid)
    rows = []
    worst_c = 0.0
    worst_e = 0.0
    for i, x in enumerate(xs):
        x = float(x)
        zeta = float(zeta_ef("hellinger", x))
        p = spectrum_at_f("bures", x)  # Hellinger CC correlation equals f_db(p)
        rho = strictly_correlated_cc(p, 4, 4)
        rng = worker_rng(cfg.seed, i + 1)
        c_num = c_distance_numeric(
            rho, (4, 4), "hellinger", restarts=restarts, inner=inner, rng=rng
        )
        e_a = entanglement_of_formation(partial_trace(rho, (4, 4), keep=1))
        rows.append([x, zeta, c_num, c_num - x, e_a])
        worst_c = max(worst_c, abs(c_num - x))
        worst_e = max(worst_e, e_a - zeta)
    summary = {"max_c_gap": worst_c, "max_ef_excess": worst_e}
    _emit(cfg, ["x", "zeta", "c_numeric", "c_gap", "ef_a"], rows, summary)
    if worst_c > cfg.tolerance:
        raise VerificationError(f"CC correlation misses its closed form by {worst_c:.3e}")
    if worst_e > 1e-9:
        raise VerificationError(f"CC state exceeds the zeta bound by {worst_e:.3e}")


# ---------------------------------------------------------------------------
# gd
# ---------------------------------------------------------------------------

def run_gd(cfg: RunConfig) -> None:
    xs = np.linspace(0.0, c_max(cfg.kind, 4), cfg.grid)
    rows = []
    worst = 0.0
    for x in xs:
        x = float(x)
        analytic = float(xi_ef(cfg.kind, x))
        numeric = LN2 - g_d_numeric(cfg.kind, 4, x)
        diff = abs(numeric - analytic)
        rows.append([x, analytic, numeric, diff])
        worst = max(worst, diff)
    summary = {"max_abs_diff": worst}
    _emit(cfg, ["x", "analytic", "numeric", "abs_diff"], rows, summary)
    if worst > cfg.tolerance:
        raise VerificationError(f"grid oracle disagrees with the closed form by {worst:.3e}")


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

_RUNNERS = {
    "curve": run_curve,
    "verify": run_verify,
    "tightness": run_tightness,
    "ccbound": run_ccbound,
    "gd": run_gd,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entcorr",
        description="Entanglement versus external correlations: curves and experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    defaults = {
        "curve": dict(kind="hellinger", grid=201, tolerance=1e-9),
        "verify": dict(kind="hellinger", samples=10000, tolerance=1e-9),
        "tightness": dict(kind="hellinger", grid=20, tolerance=1e-3),
        "ccbound": dict(kind="hellinger", grid=20, tolerance=1e-3),
        "gd": dict(kind="hellinger", grid=20, tolerance=1e-3),
    }
    for name in _RUNNERS:
        p = sub.add_parser(name)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--samples", type=int, default=10000)
        p.add_argument("--dim-b", dest="dim_b", type=int, default=16)
        p.add_argument("--grid", type=int, default=defaults[name].get("grid", 201))
        p.add_argument("--kind", default=defaults[name]["kind"])
        p.add_argument("--tolerance", type=float, default=defaults[name]["tolerance"])
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--full", action="store_true")
        p.add_argument("--workers", type=int, default=1)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        kind=args.kind,
        seed=args.seed,
        samples=args.samples,
        dim_b=args.dim_b,
        grid=args.grid,
        tolerance=args.tolerance,
        out=args.out,
        format=args.format,
        full=args.full,
        workers=args.workers,
    )


def run(cfg: RunConfig) -> int:
    """Validate and execute one configured command; return the exit code."""
    try:
        validate_config(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        _RUNNERS[cfg.command](cfg)
    except (ConfigError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 4
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run(config_from_args(args))


def console_main() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    console_main()
