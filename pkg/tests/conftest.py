import random
from pathlib import Path

import pytest

from coptw import Instance, Vertex

DATA_DIR = Path(__file__).resolve().parent.parent / "data" / "desk"


def make_instance(customers, team_size=2, t_max=1000.0, velocity=1.0,
                  depot=(0.0, 0.0)):
    """Build an instance from (x, y, dur, reward, open, close, req) tuples."""
    vertices = [Vertex(0, depot[0], depot[1], 0.0, 0.0, 0.0, t_max)]
    requirements = [0]
    for i, (x, y, dur, reward, open_, close, req) in enumerate(customers, start=1):
        vertices.append(Vertex(i, x, y, dur, reward, open_, close))
        requirements.append(req)
    return Instance(
        vertices=vertices,
        requirements=requirements,
        team_size=team_size,
        t_max=t_max,
        velocity=velocity,
    )


def random_instance(rng: random.Random, n: int, team_size: int, r_max: int = 3,
                    t_max: float = 400.0, span: float = 60.0,
                    window: float = 60.0, service: float = 8.0) -> Instance:
    """Benchmark-like random instance for property-style loops."""
    customers = []
    for _ in range(n):
        x = rng.uniform(-span, span)
        y = rng.uniform(-span, span)
        out = (x**2 + y**2) ** 0.5
        latest = max(out + 1.0, t_max - out - service)
        center = rng.uniform(out, latest)
        o = max(0.0, center - window / 2)
        c = min(t_max, center + window / 2)
        reward = float(rng.randint(1, 50))
        customers.append((x, y, service, reward, o, c, rng.randint(1, r_max)))
    return make_instance(customers, team_size=team_size, t_max=t_max)


@pytest.fixture(scope="session")
def data_dir() -> Path:
    assert DATA_DIR.is_dir(), "run tools/make_benchmarks.py first"
    return DATA_DIR
