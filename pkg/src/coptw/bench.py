"""Benchmark harness: augment, solve and gap-check a directory of instances.

For every (file, size, team size) combination the harness truncates the
benchmark, attaches requirements with the run's seed, solves it with the
savings heuristic and, unless disabled, runs the exact search under a time
limit.  Gaps are reported only against proven optima; rows the search could
not finish keep their oracle columns empty and are flagged, never silently
dropped.  Requirement draws are positional, so every size and team-size
variant of the same file shares one draw per seed.

Row order follows the sorted input files and the given size/member lists,
so a fixed seed reproduces the CSV byte for byte (time columns are wall
clock; pass times='zero' to blank them when byte-stable output matters).
"""

from __future__ import annotations

import io
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .heuristic import solve
from .instances import ParseError, ValidationError, augment, parse_benchmark, truncate
from .oracle import OracleConfig, exact_solve, optimality_gap
from .scheduling import check_solution

CSV_HEADER = (
    "set_name,instance_name,customers,P,mcw_score,oracle_score,"
    "gap_percent,mcw_time,oracle_time,proven_optimal"
)


@dataclass
class BenchRow:
    set_name: str
    instance_name: str
    customers: int
    team_size: int
    mcw_score: float | None
    oracle_score: float | None
    gap_percent: float | None
    mcw_time: float | None
    oracle_time: float | None
    proven_optimal: bool

    def to_csv(self, times: str = "wall") -> str:
        def num(x):
            return "" if x is None else repr(float(x))

        def sec(x):
            if x is None:
                return ""
            return "0.00" if times == "zero" else f"{x:.2f}"

        gap = "" if self.gap_percent is None else f"{self.gap_percent:.2f}"
        return ",".join(
            [
                self.set_name,
                self.instance_name,
                str(self.customers),
                str(self.team_size),
                num(self.mcw_score),
                num(self.oracle_score),
                gap,
                sec(self.mcw_time),
                sec(self.oracle_time),
                "true" if self.proven_optimal else "false",
            ]
        )


def set_name_of(path: Path) -> str:
    stem = path.stem
    return stem.split("_", 1)[0] if "_" in stem else stem


def bench_one(
    raw,
    set_name: str,
    instance_name: str,
    size: int,
    team_size: int,
    seed: int,
    r_max: int = 3,
    oracle_limit: float = 300.0,
    workers: int = 1,
    run_oracle: bool = True,
) -> BenchRow:
    """Solve one augmented truncation and compare against the exact search."""
    instance = augment(truncate(raw, size), seed, r_max, team_size=team_size)
    result = solve(instance, workers=workers)
    report = check_solution(instance, result.best_solution)
    if not report.feasible:
        raise AssertionError(
            f"{instance_name} n={size} P={team_size}: infeasible heuristic solution: "
            f"{report.violations}"
        )
    oracle_score = gap = oracle_time = None
    proven = False
    if run_oracle:
        t0 = time.perf_counter()
        oracle_result = exact_solve(instance, OracleConfig(time_limit=oracle_limit))
        oracle_time = time.perf_counter() - t0
        proven = oracle_result.proven_optimal
        if proven:
            oracle_score = oracle_result.best_score
            gap = optimality_gap(result.best_score, oracle_result.best_score)
    return BenchRow(
        set_name=set_name,
        instance_name=instance_name,
        customers=size,
        team_size=team_size,
        mcw_score=result.best_score,
        oracle_score=oracle_score,
        gap_percent=gap,
        mcw_time=result.wall_time,
        oracle_time=oracle_time,
        proven_optimal=proven,
    )


def run_bench(
    files: list[Path],
    sizes: list[int],
    members: list[int],
    seed: int,
    r_max: int = 3,
    oracle_limit: float = 300.0,
    workers: int = 1,
    run_oracle: bool = True,
    log: io.TextIOBase | None = None,
) -> list[BenchRow]:
    """Benchmark every (file, size, P) combination; failures are recorded as
    rows with empty numeric columns and the harness moves on."""
    if log is None:
        log = sys.stderr
    rows: list[BenchRow] = []
    for path in sorted(files):
        set_name = set_name_of(path)
        name = path.stem
        try:
            raw = parse_benchmark(path.read_text())
        except (OSError, ParseError, ValidationError) as exc:
            print(f"bench: skipping {path}: {exc}", file=log)
            for size in sizes:
                for team_size in members:
                    rows.append(
                        BenchRow(set_name, name, size, team_size,
                                 None, None, None, None, None, False)
                    )
            continue
        for size in sizes:
            for team_size in members:
                try:
                    rows.append(
                        bench_one(
                            raw, set_name, name, size, team_size, seed,
                            r_max=r_max, oracle_limit=oracle_limit,
                            workers=workers, run_oracle=run_oracle,
                        )
                    )
                except (ValueError, ValidationError) as exc:
                    print(
                        f"bench: {name} n={size} P={team_size} failed: {exc}",
                        file=log,
                    )
                    rows.append(
                        BenchRow(set_name, name, size, team_size,
                                 None, None, None, None, None, False)
                    )
    return rows


def rows_to_csv(rows: list[BenchRow], times: str = "wall") -> str:
    return "\n".join([CSV_HEADER] + [row.to_csv(times) for row in rows]) + "\n"


def summarize(rows: list[BenchRow]) -> dict:
    """Mean gap and share of optima over the proven rows, from row values."""
    solved = [r for r in rows if r.mcw_score is not None]
    proven = [r for r in solved if r.proven_optimal and r.oracle_score is not None]
    optimal = [r for r in proven if r.mcw_score == r.oracle_score]
    mean_gap = (
        sum(r.gap_percent for r in proven) / len(proven) if proven else None
    )
    return {
        "rows": len(rows),
        "solved": len(solved),
        "proven": len(proven),
        "optimal": len(optimal),
        "mean_gap_percent": None if mean_gap is None else round(mean_gap, 2),
        "pct_optimal": (
            None if not proven else round(100.0 * len(optimal) / len(proven), 1)
        ),
        "max_mcw_time": max((r.mcw_time for r in solved), default=0.0),
    }


def format_summary(summary: dict) -> str:
    lines = [
        f"instances: {summary['rows']} ({summary['solved']} solved, "
        f"{summary['proven']} with proven optimum)",
    ]
    if summary["mean_gap_percent"] is None:
        lines.append("mean gap: n/a (no proven optima)")
    else:
        lines.append(
            f"mean gap over proven optima: {summary['mean_gap_percent']:.2f}%"
        )
        lines.append(
            f"solved to optimality: {summary['optimal']}/{summary['proven']} "
            f"({summary['pct_optimal']:.1f}% of proven)"
        )
    lines.append(
        f"slowest heuristic solve: {summary['max_mcw_time']:.2f}s "
        "(wall clock; times depend on this machine)"
    )
    return "\n".join(lines)
