import random

import pytest

from coptw import (
    ParseError,
    Schedule,
    ScheduleInfeasible,
    Solution,
    check_solution,
    empty_solution,
    format_solution,
    objective,
    parse_solution,
    propagate_schedule,
)

from conftest import make_instance, random_instance


def families(report):
    return sorted({family for family, _ in report.violations})


class TestPropagate:
    def test_start_at_arrival_inside_window(self):
        inst = make_instance(
            [(15.1, 0.0, 5.0, 10.0, 15.0, 67.0, 1)], team_size=1, t_max=100.0
        )
        sched = propagate_schedule(inst, Solution(routes=[[1]], served={1}))
        assert isinstance(sched, Schedule)
        assert sched.starts[1] == 15.1
        assert sched.arrivals[(0, 1)] == 15.1
        assert sched.returns[0] == 15.1 + 5.0 + 15.1

    def test_waiting_for_opening(self):
        inst = make_instance(
            [(5.0, 0.0, 1.0, 10.0, 10.0, 50.0, 1)], team_size=1, t_max=100.0
        )
        sched = propagate_schedule(inst, Solution(routes=[[1]], served={1}))
        assert sched.starts[1] == 10.0
        assert sched.arrivals[(0, 1)] == 5.0

    def test_cross_route_synchronization(self):
        # member 0 serves vertex 1 (duration 4) then joins vertex 2;
        # member 1 reaches vertex 2 directly at time 8 and idles 4 units
        inst = make_instance(
            [
                (6.0, 0.0, 4.0, 5.0, 0.0, 100.0, 1),
                (8.0, 0.0, 1.0, 5.0, 0.0, 100.0, 2),
            ],
            team_size=2,
            t_max=100.0,
        )
        sol = Solution(routes=[[1, 2], [2]], served={1, 2})
        sched = propagate_schedule(inst, sol)
        assert sched.starts[1] == 6.0
        assert sched.starts[2] == 12.0
        assert sched.arrivals[(1, 2)] == 8.0
        assert sched.arrivals[(0, 2)] == 12.0

    def test_three_member_cooperative_tour(self):
        # the whole team meets at vertex 1, two members continue to vertex 2
        inst = make_instance(
            [
                (15.1, 0.0, 10.0, 30.0, 15.0, 67.0, 3),
                (20.0, 0.0, 5.0, 20.0, 15.0, 200.0, 2),
            ],
            team_size=3,
            t_max=1236.0,
        )
        sol = Solution(routes=[[1], [1, 2], [1, 2]], served={1, 2})
        sched = propagate_schedule(inst, sol)
        assert isinstance(sched, Schedule)
        assert sched.starts[1] == 15.1
        assert sched.starts[2] == 15.1 + 10.0 + 4.9
        assert check_solution(inst, sol).feasible
        assert all(r <= inst.t_max for r in sched.returns)

    def test_window_diagnosis_names_first_vertex(self):
        inst = make_instance(
            [
                (50.0, 0.0, 1.0, 5.0, 0.0, 20.0, 1),
                (60.0, 0.0, 1.0, 5.0, 0.0, 20.0, 1),
            ],
            team_size=2,
            t_max=500.0,
        )
        sol = Solution(routes=[[1], [2]], served={1, 2})
        diag = propagate_schedule(inst, sol)
        assert isinstance(diag, ScheduleInfeasible)
        assert diag.kind == "window"
        assert diag.vertex == 1

    def test_horizon_diagnosis(self):
        inst = make_instance(
            [(40.0, 0.0, 5.0, 5.0, 0.0, 100.0, 1)], team_size=1, t_max=84.0
        )
        diag = propagate_schedule(inst, Solution(routes=[[1]], served={1}))
        assert isinstance(diag, ScheduleInfeasible)
        assert diag.kind == "horizon"
        assert diag.route == 0

    def test_deadlock_detected_within_round_cap(self):
        # routes wait on each other forever: service at both vertices keeps
        # pushing the opposite route's start
        inst = make_instance(
            [
                (0.0, 0.0, 1.0, 5.0, 0.0, 1e6, 2),
                (0.0, 0.0, 1.0, 5.0, 0.0, 1e6, 2),
            ],
            team_size=2,
            t_max=1e6,
        )
        sol = Solution(routes=[[1, 2], [2, 1]], served={1, 2})
        diag = propagate_schedule(inst, sol)
        assert isinstance(diag, ScheduleInfeasible)
        assert diag.kind == "deadlock"
        assert diag.rounds <= 4 + 1

    def test_rejects_structural_garbage(self):
        inst = make_instance([(1.0, 0.0, 0.0, 1.0, 0.0, 10.0, 1)], team_size=1, t_max=50.0)
        with pytest.raises(ValueError):
            propagate_schedule(inst, Solution(routes=[[1], [1]], served={1}))

    def test_monotone_under_insertion(self):
        # adding a visit never lowers any existing fixed-point start
        rng = random.Random(77)
        checked = 0
        while checked < 60:
            inst = random_instance(rng, rng.randint(3, 7), team_size=rng.randint(2, 3))
            routes = _random_routes(rng, inst)
            before = propagate_schedule(inst, Solution(routes=routes, served=set()))
            if not isinstance(before, Schedule):
                continue
            v, m = _random_insertable(rng, inst, routes)
            if v is None:
                continue
            routes[m].insert(rng.randint(0, len(routes[m])), v)
            after = propagate_schedule(inst, Solution(routes=routes, served=set()))
            if not isinstance(after, Schedule):
                continue
            for u, s_before in before.starts.items():
                assert after.starts[u] >= s_before
            checked += 1


def _random_routes(rng, inst):
    routes = [[] for _ in range(inst.team_size)]
    for v in range(1, inst.n_vertices):
        for m in rng.sample(range(inst.team_size), rng.randint(0, inst.team_size)):
            if rng.random() < 0.4 and v not in routes[m]:
                routes[m].insert(rng.randint(0, len(routes[m])), v)
    return routes


def _random_insertable(rng, inst, routes):
    options = [
        (v, m)
        for v in range(1, inst.n_vertices)
        for m in range(inst.team_size)
        if v not in routes[m]
    ]
    if not options:
        return None, None
    return rng.choice(options)


class TestChecker:
    def test_all_empty_routes_feasible(self):
        inst = make_instance([(4.0, 3.0, 1.0, 7.0, 0.0, 50.0, 1)], team_size=3, t_max=100.0)
        report = check_solution(inst, empty_solution(3))
        assert report.feasible
        assert objective(inst, empty_solution(3)) == 0.0

    def test_depot_flow_route_count(self):
        inst = make_instance([(4.0, 3.0, 1.0, 7.0, 0.0, 50.0, 1)], team_size=2, t_max=100.0)
        report = check_solution(inst, Solution(routes=[[]], served=set()))
        assert families(report) == ["depot-flow"]

    def test_depot_flow_depot_in_route(self):
        inst = make_instance([(4.0, 3.0, 1.0, 7.0, 0.0, 50.0, 1)], team_size=1, t_max=100.0)
        report = check_solution(inst, Solution(routes=[[0]], served=set()))
        assert families(report) == ["depot-flow"]

    def test_conservation_duplicate_visit(self):
        inst = make_instance([(4.0, 3.0, 1.0, 7.0, 0.0, 50.0, 1)], team_size=1, t_max=100.0)
        report = check_solution(inst, Solution(routes=[[1, 1]], served=set()))
        assert families(report) == ["conservation"]

    def test_conservation_unknown_vertex(self):
        inst = make_instance([(4.0, 3.0, 1.0, 7.0, 0.0, 50.0, 1)], team_size=1, t_max=100.0)
        report = check_solution(inst, Solution(routes=[[9]], served=set()))
        assert families(report) == ["conservation"]

    def test_requirement_served_without_visits(self):
        inst = make_instance([(4.0, 3.0, 1.0, 7.0, 0.0, 50.0, 1)], team_size=1, t_max=100.0)
        report = check_solution(inst, Solution(routes=[[]], served={1}))
        assert families(report) == ["requirement"]

    def test_requirement_visited_but_unserved(self):
        inst = make_instance(
            [(4.0, 3.0, 1.0, 7.0, 0.0, 50.0, 2)], team_size=2, t_max=100.0
        )
        sol = Solution(routes=[[1], []], served=set())
        report = check_solution(inst, sol)
        assert families(report) == ["requirement"]
        assert check_solution(inst, sol, allow_partial=True).feasible

    def test_window_open_fires_on_audited_schedule(self):
        inst = make_instance([(5.0, 0.0, 1.0, 7.0, 10.0, 50.0, 1)], team_size=1, t_max=200.0)
        sol = Solution(routes=[[1]], served={1})
        report = check_solution(inst, sol, starts={1: 5.0})
        assert families(report) == ["window-open"]

    def test_window_close_from_cooperative_push(self):
        inst = make_instance(
            [
                (30.0, 0.0, 10.0, 5.0, 0.0, 100.0, 1),
                (32.0, 0.0, 1.0, 5.0, 0.0, 35.0, 1),
            ],
            team_size=1,
            t_max=200.0,
        )
        report = check_solution(inst, Solution(routes=[[1, 2]], served={1, 2}))
        assert families(report) == ["window-close"]
        assert ("window-close", 2) in report.violations

    def test_horizon_late_return(self):
        inst = make_instance(
            [(40.0, 0.0, 5.0, 5.0, 0.0, 100.0, 1)], team_size=1, t_max=84.0
        )
        report = check_solution(inst, Solution(routes=[[1]], served={1}))
        assert families(report) == ["horizon"]

    def test_arc_feasibility_on_audited_schedule(self):
        inst = make_instance(
            [
                (10.0, 0.0, 50.0, 5.0, 0.0, 100.0, 1),
                (12.0, 0.0, 1.0, 5.0, 0.0, 30.0, 1),
            ],
            team_size=1,
            t_max=200.0,
        )
        sol = Solution(routes=[[1, 2]], served={1, 2})
        report = check_solution(inst, sol, starts={1: 10.0, 2: 15.0})
        assert families(report) == ["arc-feasibility"]
        assert ("arc-feasibility", (1, 2)) in report.violations

    def test_deadlock_reported_not_looped(self):
        inst = make_instance(
            [
                (0.0, 0.0, 1.0, 5.0, 0.0, 1e6, 2),
                (0.0, 0.0, 1.0, 5.0, 0.0, 1e6, 2),
            ],
            team_size=2,
            t_max=1e6,
        )
        report = check_solution(inst, Solution(routes=[[1, 2], [2, 1]], served={1, 2}))
        assert not report.feasible
        assert any("deadlock" in str(detail) for _, detail in report.violations)


class TestObjective:
    def test_single_vertex(self):
        inst = make_instance([(1.0, 0.0, 0.0, 20.0, 0.0, 50.0, 1)], team_size=1, t_max=100.0)
        assert objective(inst, Solution(routes=[[1]], served={1})) == 20.0

    def test_matches_independent_summation(self):
        rng = random.Random(5)
        inst = random_instance(rng, 5, team_size=3)
        served = {1, 2, 3, 4, 5}
        expected = 0.0
        for v in served:
            expected += inst.vertices[v].reward
        sol = Solution(routes=[[1, 2], [3, 4], [5]], served=served)
        assert objective(inst, sol) == expected


class TestSolutionText:
    def test_round_trip(self):
        inst = make_instance(
            [
                (3.0, 0.0, 1.0, 7.0, 0.0, 50.0, 1),
                (0.0, 4.0, 1.0, 9.0, 0.0, 60.0, 2),
            ],
            team_size=3,
            t_max=100.0,
        )
        sol = Solution(routes=[[1, 2], [2], []], served={1, 2})
        text = format_solution(sol, 16.0)
        parsed, score = parse_solution(text, inst)
        assert parsed.routes == sol.routes
        assert parsed.served == sol.served
        assert score == 16.0

    def test_served_reconstruction_spots_undercounts(self):
        inst = make_instance(
            [(0.0, 4.0, 1.0, 9.0, 0.0, 60.0, 2)], team_size=2, t_max=100.0
        )
        parsed, _ = parse_solution("member 1: 1\nmember 2:\nscore: 9.0\n", inst)
        assert parsed.served == set()

    def test_malformed_lines_rejected(self):
        inst = make_instance([(1.0, 0.0, 0.0, 1.0, 0.0, 10.0, 1)], team_size=1, t_max=50.0)
        with pytest.raises(ParseError):
            parse_solution("member 2: 1\nscore: 1\n", inst)
        with pytest.raises(ParseError):
            parse_solution("member 1: 1\n", inst)
        with pytest.raises(ParseError):
            parse_solution("member 1: x\nscore: 1\n", inst)
