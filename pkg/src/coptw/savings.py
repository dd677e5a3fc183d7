"""Saving values and the sorted saving-pair list that drives construction.

The saving of an ordered customer pair (i, j) combines three terms: the
classical Clarke-Wright distance saving d_i0 + d_0j - lambda*d_ij normalized
by the maximum pairwise distance, a sweep-style term that rewards pairs
subtending an acute angle at the depot, and a reward term that pushes
high-score pairs up the list:

    (d_i0 + d_0j - lambda*d_ij) / d_max
    + mu * cos(theta_ij) * |d_max - (d_i0 - d_0j)/2| / d_max
    + vartheta * (reward_i + reward_j) / mean_reward

d_max is the maximum distance over all vertex pairs (depot included) and
mean_reward averages over customers only.  The absolute value wraps the
distance expression only; cos(theta) stays outside, so the sweep term is
negative for obtuse pairs.  Note the middle term makes the saving
asymmetric: S(i, j) != S(j, i) in general.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import ArcSet, cos_polar_angle
from .instances import Instance

LAMBDA_VALUES = (0.0, 0.7, 1.4)
MU_VALUES = (0.0, 0.7, 1.4)
VARTHETA_VALUES = (0.0, 0.7, 1.4, 2.1, 2.8, 3.5)


@dataclass(frozen=True)
class SavingParams:
    lambda_: float
    mu: float
    vartheta: float


@dataclass(frozen=True)
class SavingPair:
    i: int
    j: int
    value: float


def parameter_grid() -> list[SavingParams]:
    """The 54 coefficient triplets, lambda outermost and vartheta innermost.

    Both distance coefficients range over {0, 0.7, 1.4}; the reward
    coefficient gets the broader range {0, ..., 3.5} because it dominates
    solution quality.  The order is fixed so ties between triplets resolve
    identically everywhere.
    """
    return [
        SavingParams(lam, mu, vth)
        for lam in LAMBDA_VALUES
        for mu in MU_VALUES
        for vth in VARTHETA_VALUES
    ]


def mean_customer_reward(instance: Instance) -> float:
    """Average reward over customers (the depot's zero would only dilute it)."""
    rewards = [v.reward for v in instance.vertices[1:]]
    return sum(rewards) / len(rewards) if rewards else 0.0


def saving_value(
    i: int,
    j: int,
    instance: Instance,
    d: np.ndarray,
    params: SavingParams,
    d_max: float,
    gamma_bar: float,
) -> float:
    """Saving of the ordered pair (i, j) under one coefficient triplet."""
    if d_max <= 0:
        raise ValueError("d_max must be positive")
    if gamma_bar <= 0:
        raise ValueError("gamma_bar must be positive")
    vi, vj, depot = instance.vertices[i], instance.vertices[j], instance.vertices[0]
    d_i0 = float(d[i, 0])
    d_0j = float(d[0, j])
    base = (d_i0 + d_0j - params.lambda_ * float(d[i, j])) / d_max
    cos_theta = cos_polar_angle((vi.x, vi.y), (vj.x, vj.y), (depot.x, depot.y))
    sweep = params.mu * cos_theta * abs(d_max - (d_i0 - d_0j) / 2.0) / d_max
    reward = params.vartheta * (vi.reward + vj.reward) / gamma_bar
    return base + sweep + reward


def calc_saving_pairs(
    instance: Instance,
    d: np.ndarray,
    arcs: ArcSet,
    params: SavingParams,
) -> list[SavingPair]:
    """All arc-feasible ordered customer pairs, best saving first.

    A pair enters the list when the arc (i, j) is traversable: a member can
    leave i at its earliest service completion and reach j's window, and j
    still allows returning to the depot by the horizon.  Ties are broken by
    (i, j) index so the list is a total, reproducible order.
    """
    n = instance.n_vertices
    d_max = float(d.max())
    if d_max <= 0.0:
        d_max = 1.0  # all vertices coincide; distance terms vanish anyway
    gamma_bar = mean_customer_reward(instance)
    if gamma_bar <= 0.0:
        gamma_bar = 1.0
    feasible = arcs.feasible
    pairs = [
        SavingPair(i, j, saving_value(i, j, instance, d, params, d_max, gamma_bar))
        for i in range(1, n)
        for j in range(1, n)
        if i != j and feasible[i, j]
    ]
    pairs.sort(key=lambda p: (-p.value, p.i, p.j))
    return pairs
