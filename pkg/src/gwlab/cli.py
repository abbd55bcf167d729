"""Command-line front end.

Subcommands: ``figure`` regenerates the bundled figure datasets as CSV,
``verify`` sweeps every applicable inequality checker over a Renyi-order
grid, ``oracle`` runs the convex-roof estimator against the closed forms,
and ``gamebounds`` tabulates the game gap bounds.  Output is plain CSV or
JSON lines with a fixed numeric format, so identical configurations (and
seeds) produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import featured
from .games import (
    LOG_BASE,
    GameBoundInput,
    check_monogamy_cap,
    check_trace_bound_renyi,
    gap_bound,
)
from .inequalities import (
    CSV_HEADER,
    Applicability,
    InequalityReport,
    TighterParams,
    check_merged_block_upper_bound,
    check_monogamy_power,
    check_monogamy_sq,
    check_polygamy,
    check_polygamy_power,
    check_reoa_triangle,
    check_tighter_multi,
    check_tighter_three,
    check_upper_bound_bipartition,
    h_coefficient,
    report_to_csv_row,
    report_to_json_line,
    run_mixture_suite,
)
from .measures import f_alpha, gw_one_to_rest_concurrence_sq, gw_pairwise_concurrence
from .roof import verify_c_equals_ca, verify_e_alpha_formula
from .states import GWSpec, gw_spec_from_json, reduce_to_parties, superpose_with_vacuum
from .tensor import Partition

__all__ = [
    "RunConfig",
    "alpha_grid",
    "parse_partition",
    "cmd_figure",
    "cmd_verify",
    "cmd_oracle",
    "cmd_gamebounds",
    "main",
]

#: Default seed when neither --seed nor GWLAB_SEED is given.
DEFAULT_SEED = 271828

#: Default Renyi-order grid: the closed interval where every closed form in
#: this package applies, sampled at 0.005 with the order-1 point excluded.
DEFAULT_ALPHA_GRID = (0.8229, 1.3027, 0.005)


def _fmt(x: float) -> str:
    return f"{float(x):.12g}"


def alpha_grid(
    start: float, stop: float, step: float, exclude_one: bool = True
) -> list[float]:
    """Arithmetic grid [start, stop] with an optional hole at order 1."""
    if step <= 0:
        raise ValueError("grid step must be positive")
    values = []
    k = 0
    while True:
        v = start + k * step
        if v > stop + 1e-12:
            break
        if not (exclude_one and abs(v - 1.0) < 1e-9):
            values.append(v)
        k += 1
    return values


def parse_partition(text: str) -> Partition:
    """Blocks separated by '|', members by ','  (e.g. "0|1,2|3")."""
    blocks = []
    for chunk in text.split("|"):
        members = [m for m in chunk.split(",") if m.strip() != ""]
        if not members:
            raise ValueError(f"empty block in partition {text!r}")
        blocks.append({int(m) for m in members})
    return Partition.of(blocks)


def _parse_grid(text: str) -> tuple[float, float, float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must be start:stop:step, got {text!r}")
    start, stop, step = (float(p) for p in parts)
    return start, stop, step


@dataclass
class RunConfig:
    """Parsed invocation: state source, partition, grids and output shape."""

    command: str
    state_spec: Optional[str] = None
    partition: Optional[Partition] = None
    alpha: tuple[float, float, float] = DEFAULT_ALPHA_GRID
    exclude_one: bool = True
    mu: float = 2.0
    c_pow: Optional[float] = None
    b_pow: Optional[float] = None
    k: Optional[float] = None
    trials: int = 20000
    seed: int = DEFAULT_SEED
    out: Optional[str] = None
    fmt: str = "jsonl"
    extra: dict = field(default_factory=dict)


def _load_spec(source: str) -> GWSpec:
    text = source
    if not source.lstrip().startswith("{"):
        text = Path(source).read_text()
    return gw_spec_from_json(text)


def _write_lines(lines: list[str], out: Optional[str]) -> None:
    payload = "".join(line + "\n" for line in lines)
    if out is None:
        sys.stdout.write(payload)
    else:
        Path(out).write_text(payload)


def _csv_lines(header: Sequence[str], rows: list[Sequence[str]]) -> list[str]:
    return [",".join(header)] + [",".join(row) for row in rows]


def cmd_figure(fig_id: int, out: Optional[str] = None) -> list[str]:
    """Emit the dataset behind one bundled figure as CSV lines."""
    if fig_id == 1:
        rho, partition = featured.figure1_reduction()
        split = gw_one_to_rest_concurrence_sq(rho, partition, 0)
        c2_pairs = split.pair_sq
        rows = []
        for a in alpha_grid(*DEFAULT_ALPHA_GRID):
            e_pairs = [f_alpha(c2, a) for c2 in c2_pairs]
            lower = math.sqrt(sum(e * e for e in e_pairs))
            mid = f_alpha(split.value, a)
            upper = sum(e_pairs)
            rows.append((_fmt(a), _fmt(lower), _fmt(mid), _fmt(upper)))
        lines = _csv_lines(("alpha", "lower", "e_mid", "upper"), rows)
    elif fig_id == 2:
        psi = featured.figure2_state()
        block_p, block_q, block_r = featured.figure2_blocks()
        rows = []
        for a in alpha_grid(*DEFAULT_ALPHA_GRID):
            report = check_merged_block_upper_bound(
                psi, block_p, block_q, [block_r], a
            )
            rows.append((_fmt(a), _fmt(report.lhs), _fmt(report.rhs)))
        lines = _csv_lines(("alpha", "lhs", "upper_bound"), rows)
    elif fig_id == 3:
        psi = featured.figure3_state()
        c12 = gw_pairwise_concurrence(psi, {0}, {1}).value
        c13 = gw_pairwise_concurrence(psi, {0}, {2}).value
        split = gw_one_to_rest_concurrence_sq(psi, Partition.singletons(3), 0)
        exact_c = math.sqrt(split.value)
        rows = []
        b = 0.0
        idx = 0
        while b <= 2.0 + 1e-12:
            t = b / 2.0
            exact = exact_c**b
            bound_k1 = c12**b + h_coefficient(1.0, t) * c13**b
            bound_k2 = c12**b + h_coefficient(2.0, t) * c13**b
            rows.append((_fmt(b), _fmt(exact), _fmt(bound_k1), _fmt(bound_k2)))
            idx += 1
            b = idx * 0.02
        lines = _csv_lines(("b_pow", "exact", "bound_k1", "bound_k2"), rows)
    else:
        raise ValueError(f"unknown figure id {fig_id}")
    _write_lines(lines, out)
    return lines


def _verify_reports(config: RunConfig) -> list[InequalityReport]:
    spec = _load_spec(config.state_spec)
    psi = superpose_with_vacuum(spec)
    partition = config.partition or Partition.singletons(spec.n)
    partition.require_complete(psi.layout)
    blocks = list(partition.blocks)
    tighter = None
    if config.c_pow is not None and config.b_pow is not None and config.k is not None:
        tighter = TighterParams(c_pow=config.c_pow, b_pow=config.b_pow, k=config.k)

    reports: list[InequalityReport] = []
    for a in alpha_grid(*config.alpha, exclude_one=config.exclude_one):
        reports.append(check_monogamy_sq(psi, partition, 0, a))
        reports.append(check_polygamy(psi, partition, 0, a))
        if config.mu >= 2.0:
            reports.append(check_monogamy_power(psi, partition, 0, a, config.mu))
        elif 0.0 < config.mu <= 1.0:
            reports.append(check_polygamy_power(psi, partition, 0, a, config.mu))
        if len(blocks) >= 3:
            reports.append(
                check_reoa_triangle(psi, Partition.of(blocks[:3]), a)
            )
            reports.append(
                check_merged_block_upper_bound(
                    psi, blocks[0], blocks[1], blocks[2:], a
                )
            )
            reports.append(
                check_upper_bound_bipartition(
                    psi, blocks[0], blocks[1], blocks[2:], a
                )
            )
        reports.append(check_monogamy_cap(psi, partition, a))
        reports.append(
            check_trace_bound_renyi(psi, a, (blocks[0], set().union(*blocks[1:])))
        )
        if tighter is not None and len(blocks) >= 3:
            for kind in ("concurrence", "cren", "renyi"):
                reports.append(
                    check_tighter_three(
                        psi, Partition.of(blocks[:3]), tighter, kind, order=a
                    )
                )
            if len(blocks) >= 4:
                reports.append(
                    check_tighter_multi(psi, partition, 1, tighter, "concurrence")
                )
    if spec.vacuum_weight > 0.0:
        mid = alpha_grid(*config.alpha, exclude_one=config.exclude_one)
        if mid:
            reports.extend(run_mixture_suite(spec, mid[len(mid) // 2], tighter))
    return reports


def cmd_verify(config: RunConfig) -> int:
    """Run every applicable checker over the grid; exit 0 only if no
    applicable check failed."""
    try:
        reports = _verify_reports(config)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    if config.fmt == "csv":
        rows = [report_to_csv_row(r) for r in reports]
        lines = _csv_lines(CSV_HEADER, rows)
    else:
        lines = [report_to_json_line(r) for r in reports]
    _write_lines(lines, config.out)
    failed = [
        r
        for r in reports
        if r.applicability == Applicability.APPLICABLE and not r.satisfied
    ]
    return 1 if failed else 0


def cmd_oracle(config: RunConfig) -> int:
    """Convex-roof estimates plus agreement reports, one JSON object per line."""
    try:
        spec = _load_spec(config.state_spec)
        psi = superpose_with_vacuum(spec)
        partition = config.partition or Partition.singletons(spec.n)
        partition.require_complete(psi.layout)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    blocks = list(partition.blocks)
    lines: list[str] = []
    for i in range(len(blocks)):
        for j in range(i + 1, len(blocks)):
            keep = sorted(blocks[i] | blocks[j])
            rho = reduce_to_parties(psi, keep)
            remap = {p: q for q, p in enumerate(keep)}
            local = (
                {remap[p] for p in blocks[i]},
                {remap[p] for p in blocks[j]},
            )
            report = verify_c_equals_ca(
                rho, trials=config.trials, seed=config.seed, blocks=local
            )
            report.params["pair"] = [sorted(blocks[i]), sorted(blocks[j])]
            lines.append(report_to_json_line(report))
    if config.extra.get("alphas"):
        keep = sorted(blocks[0] | blocks[1])
        rho = reduce_to_parties(psi, keep)
        remap = {p: q for q, p in enumerate(keep)}
        local = ({remap[p] for p in blocks[0]}, {remap[p] for p in blocks[1]})
        for a in config.extra["alphas"]:
            report = verify_e_alpha_formula(
                rho, a, trials=config.trials, seed=config.seed, blocks=local
            )
            lines.append(report_to_json_line(report))
    _write_lines(lines, config.out)
    return 0


def cmd_gamebounds(
    n_list: Sequence[int], d_list: Sequence[int], out: Optional[str] = None
) -> list[str]:
    """Gap-bound table over the Cartesian grid of player counts and dimensions."""
    header = ("n", "d", "new_bound", "reference_bound", "tighter", "log_base")
    rows = []
    for n in n_list:
        for d in d_list:
            result = gap_bound(GameBoundInput(n=n, d=d))
            rows.append(
                (
                    str(int(n)),
                    str(int(d)),
                    _fmt(result.new_bound),
                    _fmt(result.reference_bound),
                    str(result.tighter).lower(),
                    str(LOG_BASE),
                )
            )
    lines = _csv_lines(header, rows)
    _write_lines(lines, out)
    return lines


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip() != ""]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gwlab",
        description="Generalized W-class states: measures, inequality "
        "verification, convex-roof oracle and game bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fig = sub.add_parser("figure", help="emit a bundled figure dataset as CSV")
    p_fig.add_argument("fig_id", type=int, choices=(1, 2, 3))
    p_fig.add_argument("--out", default=None)

    p_ver = sub.add_parser("verify", help="run the inequality checkers over a grid")
    p_ver.add_argument("--spec", required=True, help="path to or inline JSON spec")
    p_ver.add_argument("--partition", default=None, help='blocks like "0|1,2|3"')
    p_ver.add_argument("--alpha", default=None, help="order grid start:stop:step")
    p_ver.add_argument("--include-one", action="store_true")
    p_ver.add_argument("--mu", type=float, default=2.0)
    p_ver.add_argument("--c-pow", type=float, default=None)
    p_ver.add_argument("--b-pow", type=float, default=None)
    p_ver.add_argument("--k", type=float, default=None)
    p_ver.add_argument("--format", choices=("csv", "jsonl"), default="jsonl")
    p_ver.add_argument("--out", default=None)

    p_orc = sub.add_parser("oracle", help="convex-roof estimates vs closed forms")
    p_orc.add_argument("--spec", required=True)
    p_orc.add_argument("--partition", default=None)
    p_orc.add_argument("--alpha", default=None, help="comma list of orders")
    p_orc.add_argument("--trials", type=int, default=20000)
    p_orc.add_argument("--seed", type=int, default=None)
    p_orc.add_argument("--out", default=None)

    p_gb = sub.add_parser("gamebounds", help="gap-bound table as CSV")
    p_gb.add_argument("--n", default="1", help="comma list of player counts")
    p_gb.add_argument("--d", default="2", help="comma list of dimensions")
    p_gb.add_argument("--out", default=None)

    return parser


def _env_seed() -> int:
    raw = os.environ.get("GWLAB_SEED")
    if raw is None:
        return DEFAULT_SEED
    return int(raw)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    try:
        if args.command == "figure":
            cmd_figure(args.fig_id, args.out)
            return 0
        if args.command == "verify":
            config = RunConfig(
                command="verify",
                state_spec=args.spec,
                partition=parse_partition(args.partition) if args.partition else None,
                alpha=_parse_grid(args.alpha) if args.alpha else DEFAULT_ALPHA_GRID,
                exclude_one=not args.include_one,
                mu=args.mu,
                c_pow=args.c_pow,
                b_pow=args.b_pow,
                k=args.k,
                out=args.out,
                fmt=args.format,
            )
            return cmd_verify(config)
        if args.command == "oracle":
            config = RunConfig(
                command="oracle",
                state_spec=args.spec,
                partition=parse_partition(args.partition) if args.partition else None,
                trials=args.trials,
                seed=args.seed if args.seed is not None else _env_seed(),
                out=args.out,
            )
            if args.alpha:
                config.extra["alphas"] = [float(v) for v in args.alpha.split(",")]
            return cmd_oracle(config)
        if args.command == "gamebounds":
            cmd_gamebounds(_int_list(args.n), _int_list(args.d), args.out)
            return 0
    except (ValueError, KeyError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
