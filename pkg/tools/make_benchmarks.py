"""Generate the synthetic benchmark files committed under data/desk/.

The files follow the two published orienteering benchmark layouts (the
Solomon-derived TOPTW text layout and the Cordeau pr header layout) but the
coordinates, windows and rewards are synthetic: the suite must be
self-contained and redistributable.  Set characteristics mirror the
originals: c-style files are clustered with long horizons and long services,
r-style files are uniform with short horizons and tight windows, rc mixes
the two, and pr files use the Cordeau header.

Run from the repository root:  python tools/make_benchmarks.py
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parent.parent / "data" / "desk"


def synth_vertices(kind: str, n: int, rng: np.random.Generator, t_max: float,
                   service: float, window: float):
    if kind == "clustered":
        k = max(2, n // 10)
        centers = rng.uniform(10, 90, size=(k, 2))
        idx = rng.integers(0, k, size=n)
        pts = centers[idx] + rng.normal(0, 5.0, size=(n, 2))
        pts = np.clip(pts, 0, 100)
        depot = (40.0, 50.0)
    elif kind == "uniform":
        pts = rng.uniform(0, 100, size=(n, 2))
        depot = (50.0, 50.0)
    else:  # mixed
        half = n // 2
        k = max(2, half // 8)
        centers = rng.uniform(10, 90, size=(k, 2))
        idx = rng.integers(0, k, size=half)
        clustered = np.clip(centers[idx] + rng.normal(0, 5.0, size=(half, 2)), 0, 100)
        uniform = rng.uniform(0, 100, size=(n - half, 2))
        pts = np.vstack([clustered, uniform])
        depot = (50.0, 50.0)

    rows = [(0, depot[0], depot[1], 0.0, 0.0, 0.0, t_max)]
    for i in range(n):
        x, y = float(pts[i, 0]), float(pts[i, 1])
        reward = float(rng.integers(5, 51))
        t_out = math.dist(depot, (x, y))
        latest_useful = t_max - t_out - service
        if latest_useful <= t_out:
            center = t_out  # barely reachable; keeps a few dead customers
        else:
            center = float(rng.uniform(t_out, latest_useful))
        o = max(0.0, center - window / 2.0)
        c = min(t_max, center + window / 2.0)
        rows.append((i + 1, round(x, 2), round(y, 2), service, reward,
                     round(o, 1), round(c, 1)))
    return rows


def solomon_text(name: str, rows) -> str:
    lines = [
        "************************",
        f"* {name:<22.22}*",
        "* synthetic layout     *",
        "************************",
        f"{len(rows) - 1} 1",
    ]
    for vid, x, y, dur, reward, o, c in rows:
        lines.append(f"{vid} {x:g} {y:g} {dur:g} {reward:g} 1 1 {o:g} {c:g}")
    return "\n".join(lines) + "\n"


def cordeau_text(members: int, t_max: float, rows) -> str:
    lines = [f"{members} {len(rows) - 1} {t_max:g}"]
    for vid, x, y, dur, reward, o, c in rows:
        lines.append(f"{vid} {x:g} {y:g} {dur:g} {reward:g} 1 1 {o:g} {c:g}")
    return "\n".join(lines) + "\n"


RECIPES = [
    # name, layout, kind, n, t_max, service, window, seed
    ("c100_1", "solomon", "clustered", 100, 1236.0, 90.0, 120.0, 101),
    ("r100_1", "solomon", "uniform", 100, 230.0, 10.0, 30.0, 102),
    ("rc100_1", "solomon", "mixed", 40, 240.0, 10.0, 40.0, 103),
    ("c200_1", "solomon", "clustered", 40, 700.0, 40.0, 160.0, 104),
    ("r200_1", "solomon", "uniform", 40, 450.0, 10.0, 80.0, 105),
    ("rc200_1", "solomon", "mixed", 40, 480.0, 10.0, 100.0, 106),
    ("pr01_1", "cordeau", "uniform", 40, 500.0, 15.0, 60.0, 107),
    ("pr11_1", "cordeau", "uniform", 40, 600.0, 15.0, 120.0, 108),
]


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for name, layout, kind, n, t_max, service, window, seed in RECIPES:
        rng = np.random.default_rng(seed)
        rows = synth_vertices(kind, n, rng, t_max, service, window)
        if layout == "solomon":
            text = solomon_text(name, rows)
        else:
            text = cordeau_text(4, t_max, rows)
        (OUT / f"{name}.txt").write_text(text)
        print(f"wrote {name}.txt ({n} customers, t_max={t_max})")


if __name__ == "__main__":
    main()
