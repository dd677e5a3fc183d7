"""Savings-guided construction and improvement for cooperative routes.

Construction walks the saving-pair list in order and, for each pair, tops up
both endpoints toward their full member requirement: every missing member
visit is first offered to the route ends (head or tail, cheapest added
distance first) and, only if no end accepts it, to the cheapest feasible
position inside a route.  An insertion is committed only when the propagated
schedule stays feasible for every visit already placed; nothing is ever
ripped out to make room.  After the pair list is exhausted, vertices that
never reached their requirement are removed from all routes.

The improvement pass then scans the unvisited vertices (highest reward
first) and tries to insert each one outright; failing that, it places the
visits at the cheapest arc-valid positions regardless of the schedule and,
if that breaks exactly one served vertex worth no more than the newcomer,
trades the two.  Any other breakage restores the previous routes.

A full run evaluates all 54 coefficient triplets, each triplet acting as a
fresh construction trajectory with one improvement pass, and keeps the best
score (earliest triplet wins ties).  Triplets are independent, so they can
be evaluated in parallel processes without changing the result.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .geometry import ArcSet, build_arc_set, build_distance_matrix
from .instances import Instance
from .savings import SavingParams, calc_saving_pairs, parameter_grid
from .scheduling import (
    Solution,
    TravelTimes,
    check_solution,
    objective,
    relax_starts,
)


@dataclass
class SolverResult:
    best_solution: Solution
    best_score: float
    best_params: SavingParams
    triplet_scores: list[float]
    wall_time: float


class _Workspace:
    """Mutable routes, visit counts and the current start-time fixed point.

    `version` increments on every committed change; per-vertex failure
    versions let the pair loop skip re-attempting a vertex that already
    failed against the identical route state.
    """

    def __init__(self, instance: Instance, arcs: ArcSet, d: np.ndarray,
                 debug_check: bool = False):
        self.instance = instance
        self.arcs = arcs
        self.d = d
        self.tt = TravelTimes(instance, d)
        self.feas = arcs.feasible
        self.dist = d.tolist()
        self.team_size = instance.team_size
        self.routes: list[list[int]] = [[] for _ in range(instance.team_size)]
        self.count = [0] * instance.n_vertices
        self.served: set[int] = set()
        self.s = list(self.tt.open)
        self.version = 0
        self.fail_version = [-1] * instance.n_vertices
        self.debug_check = debug_check

    @classmethod
    def from_solution(cls, instance: Instance, arcs: ArcSet, d: np.ndarray,
                      solution: Solution, debug_check: bool = False) -> "_Workspace":
        ws = cls(instance, arcs, d, debug_check)
        ws.routes = [list(route) for route in solution.routes]
        ws.count = solution.visit_counts(instance.n_vertices)
        ws.served = set(solution.served)
        status, s, _, _ = relax_starts(ws.tt, ws.routes, early_abort=False)
        if status != "ok":
            raise ValueError(f"input solution has no feasible schedule: {status}")
        ws.s = s
        return ws

    def to_solution(self) -> Solution:
        return Solution(routes=[list(r) for r in self.routes], served=set(self.served))

    def snapshot(self):
        return (
            [list(r) for r in self.routes],
            list(self.count),
            set(self.served),
            list(self.s),
        )

    def restore(self, snap) -> None:
        routes, count, served, s = snap
        self.routes = [list(r) for r in routes]
        self.count = list(count)
        self.served = set(served)
        self.s = list(s)
        self.version += 1  # invalidate failure caches

    # -- candidate generation -------------------------------------------------

    def _slot_ok(self, u: int, v: int, w: int, arr_floor: float) -> bool:
        # u -> v -> w must be arc-valid and v reachable within its window
        # from u's current start; arr_floor only grows at the fixed point,
        # so rejecting on it is final.
        if not self.feas[u][v] or not self.feas[v][w]:
            return False
        return arr_floor <= self.tt.close[v]

    def _depart_floor(self, u: int) -> float:
        return 0.0 if u == 0 else self.s[u] + self.tt.dur[u]

    def _end_slots(self, v: int) -> list[tuple[float, int, int]]:
        dist = self.dist
        slots = []
        empty_seen = False
        for m, route in enumerate(self.routes):
            if v in route:
                continue
            if not route:
                if empty_seen:
                    continue  # empty routes are interchangeable
                empty_seen = True
                positions: tuple[int, ...] = (0,)
            else:
                positions = (0, len(route))
            for pos in positions:
                u = 0 if pos == 0 else route[pos - 1]
                w = 0 if pos == len(route) else route[pos]
                arr = self._depart_floor(u) + self.tt.t[u][v]
                if not self._slot_ok(u, v, w, arr):
                    continue
                delta = dist[u][v] + dist[v][w] - dist[u][w]
                slots.append((delta, m, pos))
        slots.sort()
        return slots

    def _interior_slots(self, v: int) -> list[tuple[float, int, int]]:
        dist = self.dist
        slots = []
        for m, route in enumerate(self.routes):
            if len(route) < 2 or v in route:
                continue
            for pos in range(1, len(route)):
                u, w = route[pos - 1], route[pos]
                arr = self._depart_floor(u) + self.tt.t[u][v]
                if not self._slot_ok(u, v, w, arr):
                    continue
                delta = dist[u][v] + dist[v][w] - dist[u][w]
                slots.append((delta, m, pos))
        slots.sort()
        return slots

    # -- feasibility-gated insertion ------------------------------------------

    def _try_slot(self, m: int, pos: int, v: int) -> list[float] | None:
        route = self.routes[m]
        tt = self.tt
        if pos == len(route):
            # tail append: cascades only when it raises an existing start
            u = route[-1] if route else 0
            arr = self._depart_floor(u) + tt.t[u][v]
            if self.count[v] == 0 or arr <= self.s[v]:
                s_v = max(self.s[v], arr)
                if s_v > tt.close[v] or s_v + tt.dur[v] + tt.t[v][0] > tt.t_max:
                    return None
                s_new = list(self.s)
                s_new[v] = s_v
                return s_new
        route.insert(pos, v)
        status, s_new, _, _ = relax_starts(self.tt, self.routes, s0=self.s)
        route.pop(pos)
        return s_new if status == "ok" else None

    def _commit(self, m: int, pos: int, v: int, s_new: list[float]) -> None:
        self.routes[m].insert(pos, v)
        self.count[v] += 1
        self.s = s_new
        self.version += 1
        if self.count[v] >= self.tt.req[v]:
            self.served.add(v)
        if self.debug_check:
            report = check_solution(
                self.instance, self.to_solution(), d=self.d, arcs=self.arcs,
                allow_partial=True,
            )
            assert report.feasible, report.violations

    def try_place_one(self, v: int) -> bool:
        """Place one member visit of v: route ends first, then interiors."""
        for slots in (self._end_slots(v), self._interior_slots(v)):
            for _, m, pos in slots:
                s_new = self._try_slot(m, pos, v)
                if s_new is not None:
                    self._commit(m, pos, v, s_new)
                    return True
        return False

    def top_up(self, v: int) -> bool:
        """Raise v's visit count toward its requirement; True when complete."""
        r = self.tt.req[v]
        if r > self.team_size:
            return False
        if self.count[v] >= r:
            return True
        if self.fail_version[v] == self.version:
            return False
        while self.count[v] < r:
            if not self.try_place_one(v):
                self.fail_version[v] = self.version
                return False
        return True

    def remove_vertices(self, doomed: set[int]) -> None:
        if not doomed:
            return
        for route in self.routes:
            route[:] = [v for v in route if v not in doomed]
        for v in doomed:
            self.count[v] = 0
            self.served.discard(v)
        status, s, _, _ = relax_starts(self.tt, self.routes, early_abort=False)
        if status != "ok":
            raise AssertionError("removal must never break a feasible schedule")
        self.s = s
        self.version += 1

    def remove_underserved(self) -> None:
        doomed = {
            v
            for v in range(1, self.tt.n)
            if 0 < self.count[v] < self.tt.req[v]
        }
        self.remove_vertices(doomed)

    # -- schedule-blind placement for the substitution move -------------------

    def force_place(self, v: int) -> bool:
        """Insert all of v's member visits at the cheapest arc-valid slots,
        ignoring the schedule.  Returns False when the routes cannot host
        them at all (caller restores)."""
        r = self.tt.req[v]
        for _ in range(r):
            best = None
            dist = self.dist
            for m, route in enumerate(self.routes):
                if v in route:
                    continue
                for pos in range(len(route) + 1):
                    u = 0 if pos == 0 else route[pos - 1]
                    w = 0 if pos == len(route) else route[pos]
                    if not self.feas[u][v] or not self.feas[v][w]:
                        continue
                    delta = dist[u][v] + dist[v][w] - dist[u][w]
                    if best is None or (delta, m, pos) < best:
                        best = (delta, m, pos)
            if best is None:
                return False
            _, m, pos = best
            self.routes[m].insert(pos, v)
            self.count[v] += 1
        return True

    def arcs_all_valid(self) -> bool:
        for route in self.routes:
            prev = 0
            for v in route:
                if not self.feas[prev][v]:
                    return False
                prev = v
            if route and not self.feas[prev][0]:
                return False
        return True


def construct(
    instance: Instance,
    arcs: ArcSet,
    d: np.ndarray,
    params: SavingParams,
    debug_check: bool = False,
) -> Solution:
    """Build one solution by walking the saving-pair list for `params`.

    After the pair walk, customers that appear in no feasible pair get one
    direct top-up attempt in descending reward order; the final cleanup then
    strips every vertex left short of its requirement.  The result is always
    checker-feasible; when nothing can be placed it is the all-empty
    solution.
    """
    ws = _Workspace(instance, arcs, d, debug_check)
    for pair in calc_saving_pairs(instance, d, arcs, params):
        ws.top_up(pair.i)
        ws.top_up(pair.j)
    # vertices in no feasible pair (isolated but depot-reachable customers,
    # or a lone customer) still deserve an attempt
    for v in sorted(range(1, ws.tt.n), key=lambda u: (-ws.tt.reward[u], u)):
        if v not in ws.served:
            ws.top_up(v)
    ws.remove_underserved()
    return ws.to_solution()


def improve(
    instance: Instance,
    arcs: ArcSet,
    d: np.ndarray,
    solution: Solution,
    debug_check: bool = False,
) -> Solution:
    """One substitution pass over the unvisited vertices, best reward first.

    Each vertex is inserted outright when possible; otherwise it is placed
    at the cheapest arc-valid slots and committed only if that breaks
    exactly one served vertex worth no more than the newcomer (which is then
    removed: a one-for-one trade).  Every other outcome restores the routes,
    so the returned score never drops below the input score.
    """
    ws = _Workspace.from_solution(instance, arcs, d, solution, debug_check)
    tt = ws.tt
    order = sorted(
        (
            v
            for v in range(1, tt.n)
            if ws.count[v] == 0 and tt.req[v] <= ws.team_size
        ),
        key=lambda v: (-tt.reward[v], v),
    )
    for v in order:
        if ws.count[v] != 0:
            continue
        snap = ws.snapshot()
        if ws.top_up(v):
            continue
        ws.restore(snap)

        if not ws.force_place(v):
            ws.restore(snap)
            continue
        status, s_new, returns, _ = relax_starts(tt, ws.routes, early_abort=False)
        if status == "deadlock":
            ws.restore(snap)
            continue
        visited = {u for route in ws.routes for u in route}
        broken = sorted(u for u in visited if s_new[u] > tt.close[u])
        over_horizon = any(ret > tt.t_max for ret in returns)
        if not broken and not over_horizon:
            ws.served.add(v)
            ws.s = s_new
            ws.version += 1
        elif len(broken) == 1 and broken[0] != v and tt.reward[broken[0]] <= tt.reward[v]:
            j = broken[0]
            for route in ws.routes:
                route[:] = [u for u in route if u != j]
            status2, s2, returns2, _ = relax_starts(tt, ws.routes, early_abort=False)
            swap_ok = (
                status2 == "ok"
                and all(s2[u] <= tt.close[u] for route in ws.routes for u in route)
                and all(ret <= tt.t_max for ret in returns2)
                and ws.arcs_all_valid()
            )
            if swap_ok:
                ws.count[j] = 0
                ws.served.discard(j)
                ws.served.add(v)
                ws.s = s2
                ws.version += 1
            else:
                ws.restore(snap)
        else:
            ws.restore(snap)
        if ws.debug_check and ws.count[v] == tt.req[v]:
            report = check_solution(instance, ws.to_solution(), d=d, arcs=arcs)
            assert report.feasible, report.violations
    return ws.to_solution()


def _solve_one(instance: Instance, params: SavingParams,
               debug_check: bool = False) -> tuple[float, Solution]:
    d = build_distance_matrix(instance)
    arcs = build_arc_set(instance, d)
    sol = construct(instance, arcs, d, params, debug_check)
    sol = improve(instance, arcs, d, sol, debug_check)
    return objective(instance, sol), sol


def _solve_one_packed(args) -> tuple[float, Solution]:
    return _solve_one(*args)


def solve(instance: Instance, workers: int = 1, debug_check: bool = False) -> SolverResult:
    """Run construction + improvement for every coefficient triplet and keep
    the best solution.  Deterministic for a fixed instance: parallel workers
    change nothing but the wall time."""
    t0 = time.perf_counter()
    grid = parameter_grid()
    if workers <= 1:
        outcomes = [_solve_one(instance, params, debug_check) for params in grid]
    else:
        tasks = [(instance, params, debug_check) for params in grid]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_solve_one_packed, tasks))
    best_idx = 0
    for idx in range(1, len(outcomes)):
        if outcomes[idx][0] > outcomes[best_idx][0]:
            best_idx = idx
    best_score, best_solution = outcomes[best_idx]
    return SolverResult(
        best_solution=best_solution,
        best_score=best_score,
        best_params=grid[best_idx],
        triplet_scores=[score for score, _ in outcomes],
        wall_time=time.perf_counter() - t0,
    )
