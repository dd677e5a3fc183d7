"""Cooperative schedule propagation and solution verification.

A solution assigns one route (an ordered customer sequence, implicitly
starting and ending at the depot) to each team member, plus the set of
vertices considered served.  Because several members must start service
simultaneously at a vertex, a member's timeline depends on start times in
other routes; start times are therefore computed as the least fixed point of

    s_v = max(o_v, latest arrival of any member visiting v)

by monotone relaxation.  Updates only ever increase start times, so the
fixed point is reached in at most (total visits) rounds; a routing whose
relaxation is still changing after (total visits + 1) rounds contains a
circular cross-route wait and is reported as a deadlock instead of looping.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import ArcSet, build_arc_set, build_distance_matrix
from .instances import Instance, ParseError

CONSTRAINT_FAMILIES = (
    "depot-flow",
    "conservation",
    "requirement",
    "window-open",
    "window-close",
    "horizon",
    "arc-feasibility",
)


@dataclass
class Solution:
    """One route per team member plus the served-vertex set."""

    routes: list[list[int]]
    served: set[int] = field(default_factory=set)

    def visit_counts(self, n_vertices: int) -> list[int]:
        counts = [0] * n_vertices
        for route in self.routes:
            for v in route:
                if 0 <= v < n_vertices:
                    counts[v] += 1
        return counts


def empty_solution(team_size: int) -> Solution:
    return Solution(routes=[[] for _ in range(team_size)], served=set())


@dataclass
class Schedule:
    """Fixed-point service start times and per-member arrival/return times."""

    starts: dict[int, float]
    arrivals: dict[tuple[int, int], float]
    returns: list[float]
    rounds: int


@dataclass
class ScheduleInfeasible:
    """Why no feasible schedule exists: a closed window, a late return, or a
    circular cross-route wait that never stabilizes."""

    kind: str  # 'window' | 'horizon' | 'deadlock'
    vertex: int | None = None
    route: int | None = None
    rounds: int = 0

    def __str__(self) -> str:
        if self.kind == "window":
            return f"vertex {self.vertex} cannot start service before its window closes"
        if self.kind == "horizon":
            return f"route {self.route} cannot return to the depot by the horizon"
        return f"cross-route deadlock: start times still changing after {self.rounds} rounds"


@dataclass
class FeasibilityReport:
    feasible: bool
    violations: list[tuple[str, object]]


class TravelTimes:
    """Plain-list views of an instance's timing data for the hot loops."""

    __slots__ = ("open", "close", "dur", "reward", "req", "t", "t_max", "n")

    def __init__(self, instance: Instance, d: np.ndarray | None = None):
        if d is None:
            d = build_distance_matrix(instance)
        self.open = [v.open for v in instance.vertices]
        self.close = [v.close for v in instance.vertices]
        self.dur = [v.duration for v in instance.vertices]
        self.reward = [v.reward for v in instance.vertices]
        self.req = list(instance.requirements)
        self.t = (d / instance.velocity).tolist()
        self.t_max = instance.t_max
        self.n = instance.n_vertices


def relax_starts(
    tt: TravelTimes,
    routes: list[list[int]],
    s0: list[float] | None = None,
    early_abort: bool = True,
) -> tuple[str, list[float], list[float], int]:
    """Iterate the start-time update to its fixed point.

    Returns (status, starts, returns, rounds) with status one of 'ok',
    'window', 'horizon', 'deadlock'.  s0, when given, must lie at or below
    the fixed point (e.g. the previous fixed point before an insertion);
    iterates then only grow, so with early_abort a violation seen at any
    round is already final and the search for the fixed point can stop.
    """
    t = tt.t
    dur = tt.dur
    opens = tt.open
    close = tt.close
    visited: list[int] = sorted({v for route in routes for v in route})
    total = sum(len(route) for route in routes)
    cap = total + 1
    s = list(opens) if s0 is None else list(s0)
    returns = [0.0] * len(routes)
    rounds = 0
    while rounds < cap:
        rounds += 1
        new_s = list(opens)
        for m, route in enumerate(routes):
            depart = 0.0
            prev = 0
            for v in route:
                arr = depart + t[prev][v]
                if arr > new_s[v]:
                    new_s[v] = arr
                depart = s[v] + dur[v]
                prev = v
            returns[m] = depart + t[prev][0] if route else 0.0
        if early_abort:
            for v in visited:
                if new_s[v] > close[v]:
                    return "window", new_s, returns, rounds
            for ret in returns:
                if ret > tt.t_max:
                    return "horizon", new_s, returns, rounds
        changed = False
        for v in visited:
            if new_s[v] != s[v]:
                changed = True
                break
        s = new_s
        if not changed:
            return "ok", s, returns, rounds
    return "deadlock", s, returns, rounds


def _structurally_valid(instance: Instance, solution: Solution) -> bool:
    n = instance.n_vertices
    if len(solution.routes) != instance.team_size:
        return False
    for route in solution.routes:
        seen = set()
        for v in route:
            if not isinstance(v, int) or not 1 <= v < n or v in seen:
                return False
            seen.add(v)
    return all(isinstance(v, int) and 1 <= v < n for v in solution.served)


def propagate_schedule(
    instance: Instance,
    solution: Solution,
    d: np.ndarray | None = None,
) -> Schedule | ScheduleInfeasible:
    """Compute cooperative start times for a structurally valid solution.

    Returns the Schedule at the fixed point, or a diagnosis naming the first
    (lowest-index) vertex whose fixed-point start misses its window, the
    first route that returns after the horizon, or a deadlock when the
    relaxation fails to stabilize within (total visits + 1) rounds.
    """
    if not _structurally_valid(instance, solution):
        raise ValueError("solution is not structurally valid; use check_solution for diagnosis")
    tt = TravelTimes(instance, d)
    status, s, returns, rounds = relax_starts(tt, solution.routes, early_abort=False)
    if status == "deadlock":
        return ScheduleInfeasible(kind="deadlock", rounds=rounds)
    visited = sorted({v for route in solution.routes for v in route})
    for v in visited:
        if s[v] > tt.close[v]:
            return ScheduleInfeasible(kind="window", vertex=v, rounds=rounds)
    for m, ret in enumerate(returns):
        if ret > tt.t_max:
            return ScheduleInfeasible(kind="horizon", route=m, rounds=rounds)
    starts = {v: s[v] for v in visited}
    arrivals: dict[tuple[int, int], float] = {}
    for m, route in enumerate(solution.routes):
        depart = 0.0
        prev = 0
        for v in route:
            arrivals[(m, v)] = depart + tt.t[prev][v]
            depart = s[v] + tt.dur[v]
            prev = v
    return Schedule(starts=starts, arrivals=arrivals, returns=returns, rounds=rounds)


def check_solution(
    instance: Instance,
    solution: Solution,
    d: np.ndarray | None = None,
    arcs: ArcSet | None = None,
    starts: dict[int, float] | None = None,
    allow_partial: bool = False,
) -> FeasibilityReport:
    """Verify a solution against the full constraint set.

    Every problem becomes a (family, offender) entry; nothing raises, so the
    checker accepts arbitrary garbage.  Families: depot-flow (team departs
    from and returns to the depot, one route per member), conservation
    (structural route integrity), requirement (served vertices meet their
    member requirement; visited vertices must be served), window-open /
    window-close (service within [o, c]), horizon (returns by the deadline),
    arc-feasibility (every traversed arc is in the precomputed arc set).

    With `starts` given, those service start times are audited instead of
    propagating new ones (this is the only path where window-open can fire:
    propagated starts never precede the opening by construction).  With
    allow_partial=True, visited-but-not-yet-served vertices are tolerated;
    construction uses this to audit intermediate states.
    """
    violations: list[tuple[str, object]] = []
    n = instance.n_vertices
    routes = solution.routes
    if len(routes) != instance.team_size:
        violations.append(
            ("depot-flow", f"expected {instance.team_size} routes, got {len(routes)}")
        )
    ids_ok = True
    for m, route in enumerate(routes):
        seen: set[int] = set()
        for v in route:
            if not isinstance(v, int) or not 0 <= v < n:
                violations.append(("conservation", f"route {m} visits unknown vertex {v!r}"))
                ids_ok = False
            elif v == 0:
                violations.append(("depot-flow", f"route {m} passes through the depot"))
                ids_ok = False
            elif v in seen:
                violations.append(("conservation", f"route {m} visits vertex {v} twice"))
                ids_ok = False
            else:
                seen.add(v)
    served_ok: set[int] = set()
    for v in sorted(solution.served, key=repr):
        if isinstance(v, int) and 1 <= v < n:
            served_ok.add(v)
        else:
            violations.append(("requirement", f"served set names unknown vertex {v!r}"))

    if ids_ok:
        tt = TravelTimes(instance, d)
        if arcs is None:
            arcs = build_arc_set(instance, d if d is not None else build_distance_matrix(instance))
        visited = sorted({v for route in routes for v in route})
        if starts is None:
            status, s, returns, _ = relax_starts(tt, routes, early_abort=False)
            if status == "deadlock":
                violations.append(
                    ("horizon", "deadlock: cross-route waits never stabilize")
                )
                s = None
        else:
            s = [0.0] * n
            missing = [v for v in visited if v not in starts]
            if missing:
                violations.append(("window-open", f"no start time given for vertex {missing[0]}"))
                s = None
            else:
                for v in visited:
                    s[v] = starts[v]
                returns = []
                for route in routes:
                    depart = 0.0
                    prev = 0
                    for v in route:
                        depart = s[v] + tt.dur[v]
                        prev = v
                    returns.append(depart + tt.t[prev][0] if route else 0.0)
                for v in visited:
                    if s[v] < tt.open[v]:
                        violations.append(("window-open", v))
        if s is not None:
            for v in visited:
                if s[v] > tt.close[v]:
                    violations.append(("window-close", v))
            for m, ret in enumerate(returns):
                if ret > tt.t_max:
                    violations.append(("horizon", f"route {m} returns at {ret}"))
        feas = arcs.feasible
        for m, route in enumerate(routes):
            prev = 0
            for v in route:
                if not feas[prev][v]:
                    violations.append(("arc-feasibility", (prev, v)))
                prev = v
            if route and not feas[prev][0]:
                violations.append(("arc-feasibility", (prev, 0)))

        counts = solution.visit_counts(n)
        req = instance.requirements
        for v in sorted(served_ok):
            if counts[v] < req[v]:
                violations.append(("requirement", v))
        if not allow_partial:
            for v in visited:
                if v not in served_ok:
                    violations.append(("requirement", v))

    return FeasibilityReport(feasible=not violations, violations=violations)


def objective(instance: Instance, solution: Solution) -> float:
    """Total reward collected over the served vertices."""
    rewards = [v.reward for v in instance.vertices]
    return float(sum(rewards[v] for v in sorted(solution.served)))


def format_solution(solution: Solution, score: float) -> str:
    """Serialize routes as 'member k: v ...' lines followed by the score."""
    lines = [
        f"member {m + 1}:" + ("" if not route else " " + " ".join(str(v) for v in route))
        for m, route in enumerate(solution.routes)
    ]
    lines.append(f"score: {float(score)!r}")
    return "\n".join(lines) + "\n"


def parse_solution(text: str, instance: Instance) -> tuple[Solution, float]:
    """Inverse of format_solution.

    The served set is reconstructed from visit counts: a vertex is served
    when it is visited by at least its required number of members.  Returns
    the solution and the score recorded in the file (the caller re-verifies
    it against the instance).
    """
    routes: list[list[int]] = []
    score: float | None = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("member"):
            head, _, tail = stripped.partition(":")
            try:
                member = int(head.split()[1])
            except (IndexError, ValueError):
                raise ParseError(f"line {lineno}: malformed member line") from None
            if member != len(routes) + 1:
                raise ParseError(f"line {lineno}: expected member {len(routes) + 1}, got {member}")
            try:
                routes.append([int(f) for f in tail.split()])
            except ValueError:
                raise ParseError(f"line {lineno}: route vertices must be integers") from None
        elif stripped.startswith("score:"):
            try:
                score = float(stripped.split(":", 1)[1])
            except ValueError:
                raise ParseError(f"line {lineno}: malformed score") from None
        else:
            raise ParseError(f"line {lineno}: unrecognized line {stripped!r}")
    if score is None:
        raise ParseError("missing score line")
    solution = Solution(routes=routes, served=set())
    counts = solution.visit_counts(instance.n_vertices)
    solution.served = {
        v
        for v in range(1, instance.n_vertices)
        if counts[v] > 0 and counts[v] >= instance.requirements[v]
    }
    return solution, score
