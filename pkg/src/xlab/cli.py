"""Seeded Monte Carlo experiment harness and command-line interface.

Subcommands: `scatter` (entanglement-purity samples of a state family),
`convert` (consecutive X-conversion campaign), `mask` (TGX/anti-X element
masks), `mems-curve` (boundary curves), `verify` (fast invariant checks).

Every sample derives its own RNG statelessly from (seed, sample_index),
so results are byte-identical regardless of worker count.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import convert, measures, states, tgx
from .errors import ConfigError, RankError, SearchFailureError, XLabError

_SYSTEMS = {"2x2": (2, 2), "2x3": (2, 3)}
_FAMILIES = ("general", "x", "lx", "tgx", "mems", "h")


@dataclass
class SampleRecord:
    """One scatter sample: entanglement/purity plus provenance."""

    entanglement: float
    purity: float
    rank: int
    family: str
    sample_index: int


@dataclass
class ExperimentConfig:
    system: tuple = (2, 2)
    family: str = "general"
    rank: int | None = None
    samples: int = 10_000
    seed: int = 0
    tol: float = convert.DEFAULT_TOL_C
    budget: int = convert.DEFAULT_BUDGET
    threads: int = 1

    def validate(self) -> "ExperimentConfig":
        if tuple(self.system) not in _SYSTEMS.values():
            raise ConfigError(f"system must be 2x2 or 2x3, got {list(self.system)}")
        if self.family not in _FAMILIES:
            raise ConfigError(f"family must be one of {_FAMILIES}, got {self.family!r}")
        if self.samples < 1:
            raise ConfigError(f"samples must be >= 1, got {self.samples}")
        n = int(np.prod(self.system))
        if self.rank is not None and not 1 <= self.rank <= n:
            raise ConfigError(f"rank {self.rank} invalid for system {list(self.system)}")
        if self.family in ("lx", "tgx") and tuple(self.system) != (2, 3):
            raise ConfigError(f"family {self.family!r} requires system 2x3")
        if self.family == "h" and tuple(self.system) != (2, 2):
            raise ConfigError("family 'h' requires system 2x2")
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")
        return self


def _sample_rng(seed: int, index: int) -> np.random.Generator:
    # Stateless per-sample stream: the seed sequence hashes (seed, index),
    # so any sharding across workers reproduces the same draws.
    return np.random.default_rng([seed, index])


def _measure_for(system):
    return measures.concurrence if tuple(system) == (2, 2) else measures.negativity_e


def _draw_rank(cfg: ExperimentConfig, rng: np.random.Generator) -> int:
    if cfg.rank is not None:
        return cfg.rank
    return int(rng.integers(1, int(np.prod(cfg.system)) + 1))


def _random_hyper_probs(R: int, rng: np.random.Generator) -> np.ndarray:
    if R == 1:
        return np.array([1.0])
    return states.hyperspherical_probs(rng.uniform(0.0, math.pi / 2.0, R - 1))


def _draw_family_state(cfg: ExperimentConfig, rng: np.random.Generator, index: int):
    n = int(np.prod(cfg.system))
    fam = cfg.family
    if fam == "general":
        return states.random_mixed(n, _draw_rank(cfg, rng), rng, tuple(cfg.system))
    if fam == "x":
        if cfg.rank is None:
            params = states.XParams(
                probability_angles=rng.uniform(0.0, math.pi / 2.0, 3),
                superposition_angles=rng.uniform(0.0, math.pi / 2.0, 4),
                phases=rng.uniform(0.0, 2.0 * math.pi, 4))
            return states.general_x_state(params)
        builder = states.rank_x_state
    elif fam == "lx":
        builder = states.lx_rank_state
    elif fam == "tgx":
        builder = states.tgx_rank_state
    elif fam == "mems":
        p_min = 0.25 if tuple(cfg.system) == (2, 2) else 1.0 / 6.0
        P = p_min + (1.0 - p_min) * (index / max(cfg.samples - 1, 1))
        return (states.mems_2x2 if tuple(cfg.system) == (2, 2) else states.mems_2x3)(P)
    elif fam == "h":
        side = max(int(math.ceil(math.sqrt(cfg.samples))), 2)
        C = (index % side) / (side - 1)
        if C == 0.0:
            lo = 0.25
        elif C < 2.0 / 3.0:
            lo = 1.0 / 3.0 + 0.5 * C * C
        else:
            lo = 0.5 * (1.0 + (2.0 * C - 1.0) ** 2)
        P = lo + (1.0 - lo) * ((index // side) % side) / (side - 1)
        return states.h_state(C, min(P, 1.0))
    else:  # pragma: no cover
        raise ConfigError(f"unhandled family {fam!r}")
    R = _draw_rank(cfg, rng)
    for _ in range(64):
        try:
            return builder(R, rng.uniform(0.0, math.pi / 2.0, R),
                           _random_hyper_probs(R, rng))
        except RankError:
            continue
    raise ConfigError(f"could not draw a rank-{R} {fam} state after 64 tries")


def _scatter_one(cfg: ExperimentConfig, index: int) -> SampleRecord:
    rng = _sample_rng(cfg.seed, index)
    rho = _draw_family_state(cfg, rng, index)
    return SampleRecord(
        entanglement=float(_measure_for(cfg.system)(rho)),
        purity=float(measures.purity(rho)),
        rank=int(rho.rank()),
        family=cfg.family,
        sample_index=index)


def _parallel_map(fn, count: int, threads: int) -> list:
    if threads <= 1:
        results = [fn(i) for i in range(count)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(fn, range(count)))
    return results


def run_scatter(cfg: ExperimentConfig) -> list:
    """Draw, measure, and record `samples` states of the configured family."""
    cfg.validate()
    records = _parallel_map(lambda i: _scatter_one(cfg, i), cfg.samples, cfg.threads)
    records.sort(key=lambda r: r.sample_index)
    return records


@dataclass
class CampaignRecord:
    """Per-sample conversion outcome."""

    sample_index: int
    rank: int
    purity: float
    input_concurrence: float
    output_concurrence: float
    attempts: int
    delta_c: float
    anti_x: float
    success: bool


@dataclass
class CampaignSummary:
    samples: int
    successes: int
    max_delta_c: float
    max_anti_x: float
    attempt_histogram: dict = field(default_factory=dict)
    records: list = field(default_factory=list)

    @property
    def all_succeeded(self) -> bool:
        return self.successes == self.samples


def _convert_one(cfg: ExperimentConfig, index: int) -> CampaignRecord:
    rng = _sample_rng(cfg.seed, index)
    R = _draw_rank(cfg, rng)
    rho = states.random_mixed(4, R, rng, (2, 2))
    c_in = measures.concurrence(rho)
    try:
        res = convert.find_x_equivalent(rho, tol_c=cfg.tol, budget=cfg.budget, rng=rng)
        success = True
    except SearchFailureError as exc:
        res = exc.best_result
        success = False
        print(f"conversion failure at sample {index} (seed {cfg.seed}): "
              f"best |dC| = {res.delta_c:.3e}", file=sys.stderr)
    return CampaignRecord(
        sample_index=index, rank=R, purity=float(measures.purity(rho)),
        input_concurrence=float(c_in),
        output_concurrence=float(measures.concurrence(res.converted)),
        attempts=int(res.attempts), delta_c=float(res.delta_c),
        anti_x=float(res.anti_x), success=success)


def run_conversion_campaign(cfg: ExperimentConfig) -> CampaignSummary:
    """Convert `samples` consecutive random two-qubit states to X form."""
    cfg.validate()
    records = _parallel_map(lambda i: _convert_one(cfg, i), cfg.samples, cfg.threads)
    records.sort(key=lambda r: r.sample_index)
    hist: dict = {}
    for r in records:
        # Bucket attempts by decade for a compact histogram.
        bucket = "0" if r.attempts == 0 else f"1e{int(math.floor(math.log10(r.attempts)))}"
        hist[bucket] = hist.get(bucket, 0) + 1
    return CampaignSummary(
        samples=len(records),
        successes=sum(r.success for r in records),
        max_delta_c=max(r.delta_c for r in records),
        max_anti_x=max(r.anti_x for r in records),
        attempt_histogram=dict(sorted(hist.items())),
        records=records)


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


_SCATTER_HEADER = "entanglement,purity,rank,family,sample_index"
_CAMPAIGN_HEADER = ("sample_index,rank,purity,input_concurrence,output_concurrence,"
                    "attempts,delta_c,anti_x,success")


def _scatter_csv(records) -> str:
    lines = [_SCATTER_HEADER]
    for r in records:
        lines.append(f"{_fmt(r.entanglement)},{_fmt(r.purity)},{r.rank},"
                     f"{r.family},{r.sample_index}")
    return "\n".join(lines) + "\n"


def _scatter_json(records) -> str:
    return json.dumps([{
        "entanglement": r.entanglement, "purity": r.purity, "rank": r.rank,
        "family": r.family, "sample_index": r.sample_index,
    } for r in records], indent=2) + "\n"


def _campaign_csv(summary: CampaignSummary) -> str:
    lines = [_CAMPAIGN_HEADER]
    for r in summary.records:
        lines.append(
            f"{r.sample_index},{r.rank},{_fmt(r.purity)},{_fmt(r.input_concurrence)},"
            f"{_fmt(r.output_concurrence)},{r.attempts},{_fmt(r.delta_c)},"
            f"{_fmt(r.anti_x)},{int(r.success)}")
    return "\n".join(lines) + "\n"


def _campaign_json(summary: CampaignSummary) -> str:
    return json.dumps({
        "samples": summary.samples,
        "successes": summary.successes,
        "max_delta_c": summary.max_delta_c,
        "max_anti_x": summary.max_anti_x,
        "attempt_histogram": summary.attempt_histogram,
        "records": [{
            "sample_index": r.sample_index, "rank": r.rank, "purity": r.purity,
            "input_concurrence": r.input_concurrence,
            "output_concurrence": r.output_concurrence, "attempts": r.attempts,
            "delta_c": r.delta_c, "anti_x": r.anti_x, "success": r.success,
        } for r in summary.records],
    }, indent=2) + "\n"


def _boundary_for(system):
    return (measures.mems_boundary_2x2 if tuple(system) == (2, 2)
            else measures.mems_boundary_2x3)


def _scatter_svg(records, system) -> str:
    """Standalone SVG scatter with the MEMS boundary polyline overlaid."""
    W, H, M = 640, 480, 50
    p_min = 0.25 if tuple(system) == (2, 2) else 1.0 / 6.0

    def sx(p):
        return M + (p - p_min) / (1.0 - p_min) * (W - 2 * M)

    def sy(e):
        return H - M - e * (H - 2 * M)

    boundary = _boundary_for(system)
    pts = []
    for p in np.linspace(p_min, 1.0, 500):
        pts.append(f"{sx(p):.2f},{sy(boundary(float(p))):.2f}")
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
        f'<polyline fill="none" stroke="black" stroke-width="1.5" '
        f'points="{" ".join(pts)}"/>',
    ]
    for r in records:
        parts.append(f'<circle cx="{sx(r.purity):.2f}" cy="{sy(r.entanglement):.2f}" '
                     f'r="1.5" fill="steelblue" fill-opacity="0.5"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_output(records, fmt: str = "csv", out=None, plot=None, system=(2, 2)) -> str:
    """Serialize scatter records; optionally write an SVG scatter plot.

    Returns the serialized text; writes it to `out` when given.
    """
    records = list(records)
    if not records:
        raise ConfigError("no records to emit")
    if fmt == "csv":
        text = _scatter_csv(records)
    elif fmt == "json":
        text = _scatter_json(records)
    else:
        raise ConfigError(f"format must be csv or json, got {fmt!r}")
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    if plot:
        with open(plot, "w") as fh:
            fh.write(_scatter_svg(records, system))
    return text


# ---------------------------------------------------------------------------
# Argument handling
# ---------------------------------------------------------------------------

def _parse_system(text: str):
    key = text.lower().replace("[", "").replace("]", "").replace(",", "x").replace(" ", "")
    if key not in _SYSTEMS:
        raise ConfigError(f"unknown system {text!r}; use 2x2 or 2x3")
    return _SYSTEMS[key]


def _parse_dims(text: str):
    key = text.lower().replace("[", "").replace("]", "").replace(",", "x").replace(" ", "")
    try:
        dims = tuple(int(d) for d in key.split("x"))
    except ValueError:
        raise ConfigError(f"cannot parse dims {text!r}") from None
    return dims


def _add_common(p):
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--format", dest="fmt", choices=("csv", "json"), default=None)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--config", default=None, help="JSON file with flag defaults")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="xlab",
        description="Entanglement-purity experiments on X-state structure")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scatter", help="sample a state family and record (E, P)")
    p.add_argument("--system", default=None)
    p.add_argument("--family", choices=_FAMILIES, default=None)
    p.add_argument("--rank", type=int, default=None)
    p.add_argument("--plot", default=None, help="write an SVG scatter here")
    _add_common(p)

    p = sub.add_parser("convert", help="consecutive X-conversion campaign")
    p.add_argument("--rank", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--budget", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("mask", help="print the TGX / anti-X element masks")
    p.add_argument("--system", default="2x2", help="dims, e.g. 2x3 or 2x2x2")
    p.add_argument("--kind", choices=("tgx", "anti"), default="tgx")
    p.add_argument("--format", dest="fmt", choices=("ascii", "json"), default="ascii")
    p.add_argument("--out", default=None)

    p = sub.add_parser("mems-curve", help="tabulate the MEMS boundary curve")
    p.add_argument("--system", default="2x2")
    _add_common(p)

    p = sub.add_parser("verify", help="run fast invariant checks")
    p.add_argument("--seed", type=int, default=0)

    return parser


def _merge_config(args) -> dict:
    """Start from JSON config file values (if any), then apply explicit flags."""
    merged = {}
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file {args.config}: {exc}") from None
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a JSON object")
        merged.update(loaded)
    for key, val in vars(args).items():
        if key in ("command", "config"):
            continue
        if val is not None:
            merged[key] = val
    return merged


def _threads_from(merged: dict) -> int:
    if merged.get("threads") is not None:
        return int(merged["threads"])
    env = os.environ.get("XLAB_THREADS")
    return int(env) if env else 1


def _cmd_scatter(args) -> int:
    m = _merge_config(args)
    cfg = ExperimentConfig(
        system=_parse_system(str(m.get("system", "2x2"))),
        family=m.get("family", "general"),
        rank=m.get("rank"),
        samples=int(m.get("samples", 10_000)),
        seed=int(m.get("seed", 0)),
        threads=_threads_from(m))
    records = run_scatter(cfg)
    text = emit_output(records, fmt=m.get("fmt", "csv"), out=m.get("out"),
                       plot=m.get("plot"), system=cfg.system)
    if not m.get("out"):
        sys.stdout.write(text)
    return 0


def _cmd_convert(args) -> int:
    m = _merge_config(args)
    cfg = ExperimentConfig(
        system=(2, 2), family="general", rank=m.get("rank"),
        samples=int(m.get("samples", 100)),
        seed=int(m.get("seed", 0)),
        tol=float(m.get("tol", convert.DEFAULT_TOL_C)),
        budget=int(m.get("budget", convert.DEFAULT_BUDGET)),
        threads=_threads_from(m))
    summary = run_conversion_campaign(cfg)
    fmt = m.get("fmt", "csv")
    text = _campaign_csv(summary) if fmt == "csv" else _campaign_json(summary)
    if m.get("out"):
        with open(m["out"], "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if summary.all_succeeded else 2


def _cmd_mask(args) -> int:
    dims = _parse_dims(args.system)
    mask = tgx.tgx_mask(dims) if args.kind == "tgx" else tgx.anti_x_mask(dims)
    if args.fmt == "ascii":
        text = mask.to_ascii() + "\n"
    else:
        text = json.dumps({"dims": list(dims), "kind": args.kind,
                           "pairs": [list(p) for p in mask.pairs()]}, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_mems_curve(args) -> int:
    m = _merge_config(args)
    system = _parse_system(str(m.get("system", "2x2")))
    samples = int(m.get("samples", 500))
    p_min = 0.25 if system == (2, 2) else 1.0 / 6.0
    boundary = _boundary_for(system)
    lines = ["purity,entanglement"]
    for i in range(samples):
        P = p_min + (1.0 - p_min) * i / max(samples - 1, 1)
        lines.append(f"{_fmt(P)},{_fmt(boundary(float(P)))}")
    text = "\n".join(lines) + "\n"
    if m.get("out"):
        with open(m["out"], "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_verify(args) -> int:
    """Fast invariant spot-checks; exits nonzero on any failure."""
    seed = args.seed
    rng = np.random.default_rng(seed)
    checks = []

    def check(name, ok):
        checks.append((name, bool(ok)))
        print(f"{'PASS' if ok else 'FAIL'}  {name}")

    check("boundary anchors",
          abs(measures.mems_boundary_2x2(1 / 3)) <= 1e-12
          and abs(measures.mems_boundary_2x2(5 / 9) - 2 / 3) <= 1e-12
          and abs(measures.mems_boundary_2x2(1.0) - 1.0) <= 1e-12)
    mask_ok = True
    for dims in ((2, 2), (2, 3), (2, 2, 2), (3, 3)):
        anti = tgx.anti_x_mask(dims).marked
        t = tgx.tgx_mask(dims).marked
        n = int(np.prod(dims))
        offd = {(i, j) for i in range(n) for j in range(n) if i != j}
        mask_ok &= not (anti & t) and (anti | t) == offd | {(i, i) for i in range(n)}
    check("mask partition", mask_ok)
    ok = True
    for k in range(10):
        rho = states.random_mixed(4, 1 + k % 4, rng, (2, 2))
        try:
            res = convert.find_x_equivalent(rho, rng=np.random.default_rng([seed, k]))
            ok &= res.delta_c <= convert.DEFAULT_TOL_C and res.anti_x <= 1e-10
        except SearchFailureError:
            ok = False
    check("x conversion sample", ok)
    u = tgx.meb_union_mask(
        tgx.meb_basis_2x3(states.PHI) + tgx.meb_basis_2x3(states.PSI), (2, 3))
    check("2x3 MEB union = TGX mask", u.marked == tgx.tgx_mask((2, 3)).marked)
    return 0 if all(ok for _, ok in checks) else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "scatter": _cmd_scatter,
        "convert": _cmd_convert,
        "mask": _cmd_mask,
        "mems-curve": _cmd_mems_curve,
        "verify": _cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except XLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
