"""Command-line front end: run specs, experiment dispatch, CSV/JSON output.

Grids use the inclusive ``start:stop:step`` syntax (a bare number is a
one-point grid).  ``SIM_THREADS`` caps the worker count; 0 or unset means
all cores.  Exit codes: 0 success, 1 validation failure, 2 usage error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

from .chain import ChainConfig, Model, Policy
from .bell_algebra import NoiseParams
from .montecarlo import SweepGrid, SweepRow, run_sweep

CSV_HEADER = (
    "model,policy,nodes,p_link,m_star,trials,seed,"
    "mean_fidelity,std_fidelity,mean_concurrence,std_concurrence,"
    "mean_wait,std_wait,improvement_pct"
)

_POLICY_TOKENS = {policy.value: policy for policy in Policy}
_MODEL_TOKENS = {model.value: model for model in Model}

#: Default abscissa of a curve run when no p-link grid is given.
_DEFAULT_CURVE_P = tuple(round(0.1 * k, 10) for k in range(1, 11))


class UsageError(Exception):
    """Bad flags or an inconsistent run spec; maps to exit code 2."""


@dataclass(frozen=True)
class RunSpec:
    mode: str
    nodes: int | None
    p_link: tuple[float, ...]
    m_star: tuple[float, ...]
    policies: tuple[Policy, ...]
    models: tuple[Model, ...]
    trials: int
    seed: int
    out: str | None
    fmt: str


def parse_grid(text: str, name: str) -> tuple[float, ...]:
    """Parse a scalar or an inclusive ``start:stop:step`` grid."""
    parts = str(text).split(":")
    try:
        if len(parts) == 1:
            return (float(parts[0]),)
        if len(parts) == 3:
            start, stop, step = (float(p) for p in parts)
        else:
            raise ValueError
    except ValueError:
        raise UsageError(f"malformed {name} grid '{text}' (expected VALUE or START:STOP:STEP)")
    if step <= 0 or stop < start:
        raise UsageError(f"malformed {name} grid '{text}' (need step > 0 and stop >= start)")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return tuple(start + i * step for i in range(count))


def _parse_policies(token: str) -> tuple[Policy, ...]:
    if token == "all":
        return (Policy.SWAP_AT_LAST, Policy.NESTING, Policy.SWAP_ASAP)
    if token in _POLICY_TOKENS:
        return (_POLICY_TOKENS[token],)
    raise UsageError(f"unknown policy '{token}'")


def _parse_models(token: str) -> tuple[Model, ...]:
    if token == "both":
        return (Model.AQN, Model.TAQN)
    if token in _MODEL_TOKENS:
        return (_MODEL_TOKENS[token],)
    raise UsageError(f"unknown model '{token}'")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adchain",
        description="Monte Carlo entanglement distribution over an amplitude-damped repeater chain.",
    )
    parser.add_argument(
        "--mode",
        choices=("single", "curve", "heatmap", "validate"),
        help="single cell, one-axis curve, two-axis heatmap, or oracle validation",
    )
    parser.add_argument("--config", metavar="FILE", help="JSON file with defaults; flags override")
    parser.add_argument("--nodes", type=int, help="number of chain nodes N (>= 2)")
    parser.add_argument("--p-link", dest="p_link", help="link generation probability, scalar or grid")
    parser.add_argument("--m-star", dest="m_star", help="memory coherence time, scalar or grid")
    parser.add_argument(
        "--policy",
        choices=tuple(_POLICY_TOKENS) + ("all",),
        help="swap scheduling policy (default swap-asap)",
    )
    parser.add_argument(
        "--model", choices=tuple(_MODEL_TOKENS) + ("both",), help="noise model(s) (default both)"
    )
    parser.add_argument("--trials", type=int, help="independent evolutions per cell (default 50000)")
    parser.add_argument("--seed", type=int, help="master seed (default 0)")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--format", dest="fmt", choices=("csv", "json"), help="output format")
    return parser


def parse_run_spec(argv: list[str] | None = None) -> RunSpec:
    """Parse flags (plus an optional config file) into a validated RunSpec."""
    args = _build_parser().parse_args(argv)
    merged: dict = {}
    if args.config is not None:
        try:
            with open(args.config) as handle:
                loaded = json.load(handle)
        except OSError as exc:
            raise UsageError(f"cannot read config file: {exc}")
        except json.JSONDecodeError as exc:
            raise UsageError(f"config file is not valid JSON: {exc}")
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        merged.update({str(k).replace("-", "_"): v for k, v in loaded.items()})
    for key in ("mode", "nodes", "p_link", "m_star", "policy", "model", "trials", "seed", "out", "fmt"):
        value = getattr(args, key)
        if value is not None:
            merged[key] = value

    mode = merged.get("mode")
    if mode not in ("single", "curve", "heatmap", "validate"):
        raise UsageError(f"--mode is required (got {mode!r})")

    trials = int(merged.get("trials", 50000))
    if trials < 1:
        raise UsageError(f"--trials must be >= 1, got {trials}")
    seed = int(merged.get("seed", 0))
    if seed < 0:
        raise UsageError(f"--seed must be >= 0, got {seed}")
    out = merged.get("out")
    fmt = merged.get("fmt", "csv")
    if fmt not in ("csv", "json"):
        raise UsageError(f"unknown format '{fmt}'")
    policies = _parse_policies(str(merged.get("policy", "swap-asap")))
    models = _parse_models(str(merged.get("model", "both")))

    if mode == "validate":
        return RunSpec(mode, None, (), (), policies, models, trials, seed, out, fmt)

    nodes = merged.get("nodes")
    if nodes is None:
        raise UsageError(f"--nodes is required for mode '{mode}'")
    nodes = int(nodes)

    if merged.get("m_star") is None:
        raise UsageError(f"--m-star is required for mode '{mode}'")
    m_star = parse_grid(merged["m_star"], "--m-star")

    if merged.get("p_link") is None:
        if mode != "curve":
            raise UsageError(f"--p-link is required for mode '{mode}'")
        p_link = _DEFAULT_CURVE_P
    else:
        p_link = parse_grid(merged["p_link"], "--p-link")

    if mode == "single" and (len(p_link) != 1 or len(m_star) != 1):
        raise UsageError("mode 'single' takes scalar --p-link and --m-star")
    if mode == "curve" and len(p_link) > 1 and len(m_star) > 1:
        raise UsageError("mode 'curve' sweeps one axis; use mode 'heatmap' for two")

    # eager validation of every chain configuration the run will touch
    try:
        for policy in policies:
            for model in models:
                ChainConfig(
                    num_nodes=nodes,
                    p_link=min(p_link),
                    noise=NoiseParams.from_m_star(min(m_star)),
                    policy=policy,
                    model=model,
                )
        for p in p_link:
            if not 0.0 < p <= 1.0:
                raise UsageError(f"--p-link value {p!r} outside (0, 1]")
        for m in m_star:
            if m <= 0:
                raise UsageError(f"--m-star value {m!r} must be positive")
    except UsageError:
        raise
    except ValueError as exc:  # ChainConfig/NoiseParams violations
        raise UsageError(str(exc))

    return RunSpec(mode, nodes, p_link, m_star, policies, models, trials, seed, out, fmt)


def _format_float(value: float) -> str:
    return format(value, ".9g")


def _row_record(row: SweepRow) -> dict:
    stats = row.stats
    return {
        "model": stats.model.value,
        "policy": stats.policy.value,
        "nodes": stats.nodes,
        "p_link": stats.p_link,
        "m_star": stats.m_star,
        "trials": stats.trials,
        "seed": stats.seed,
        "mean_fidelity": stats.mean_fidelity,
        "std_fidelity": stats.std_fidelity,
        "mean_concurrence": stats.mean_concurrence,
        "std_concurrence": stats.std_concurrence,
        "mean_wait": stats.mean_wait,
        "std_wait": stats.std_wait,
        "improvement_pct": row.improvement_pct,
    }


def render_results(rows: list[SweepRow], fmt: str = "csv") -> str:
    """Render rows sorted by (policy, model, m_star, p_link)."""
    if not rows:
        raise UsageError("no result rows to emit")
    ordered = sorted(
        rows,
        key=lambda row: (
            row.stats.policy.value,
            row.stats.model.value,
            row.stats.m_star,
            row.stats.p_link,
        ),
    )
    records = [_row_record(row) for row in ordered]
    if fmt == "json":
        return json.dumps(records, indent=2) + "\n"
    if fmt != "csv":
        raise UsageError(f"unknown format '{fmt}'")
    lines = [CSV_HEADER]
    for rec in records:
        improvement = "n/a" if rec["improvement_pct"] is None else _format_float(rec["improvement_pct"])
        lines.append(
            ",".join(
                (
                    rec["model"],
                    rec["policy"],
                    str(rec["nodes"]),
                    _format_float(rec["p_link"]),
                    _format_float(rec["m_star"]),
                    str(rec["trials"]),
                    str(rec["seed"]),
                    _format_float(rec["mean_fidelity"]),
                    _format_float(rec["std_fidelity"]),
                    _format_float(rec["mean_concurrence"]),
                    _format_float(rec["std_concurrence"]),
                    _format_float(rec["mean_wait"]),
                    _format_float(rec["std_wait"]),
                    improvement,
                )
            )
        )
    return "\n".join(lines) + "\n"


def emit_results(rows: list[SweepRow], fmt: str = "csv", path: str | None = None) -> None:
    """Write rendered rows to ``path`` (or stdout when path is None)."""
    text = render_results(rows, fmt)
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as handle:
            handle.write(text)


def worker_count() -> int:
    """Worker processes to use; SIM_THREADS caps it (0 or unset: all cores)."""
    cores = os.cpu_count() or 1
    raw = os.environ.get("SIM_THREADS")
    if raw is None:
        return cores
    try:
        cap = int(raw)
    except ValueError:
        raise UsageError(f"SIM_THREADS must be an integer, got {raw!r}")
    if cap < 0:
        raise UsageError(f"SIM_THREADS must be >= 0, got {cap}")
    return cores if cap == 0 else cap


def _run_validate() -> int:
    from .selfcheck import run_all

    results = run_all()
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return 0 if all(ok for _, ok, _ in results) else 1


def main(argv: list[str] | None = None) -> int:
    try:
        spec = parse_run_spec(argv)
        workers = worker_count()
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if spec.mode == "validate":
        return _run_validate()
    rows: list[SweepRow] = []
    for policy in spec.policies:
        grid = SweepGrid(
            p_link_values=spec.p_link,
            m_star_values=spec.m_star,
            nodes=spec.nodes,
            policy=policy,
            models=spec.models,
        )
        rows.extend(run_sweep(grid, spec.trials, spec.seed, workers=workers))
    try:
        emit_results(rows, spec.fmt, spec.out)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
