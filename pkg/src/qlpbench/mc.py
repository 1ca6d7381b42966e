"""Monte-Carlo oracles for the search-expectation formulas.

These simulate the classical stochastic process underlying the bounded-guess
search and minimum-finding routines (draw a rotation count, succeed with the
analytic probability) — no quantum state is involved. They exist as
independent checks of the closed-form expectations in ``qcost``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qlpbench.qcost import _qsearch_schedule, n_qsearch


@dataclass(frozen=True)
class McConfig:
    trials: int = 100_000
    seed: int = 0

    def rng(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.seed))


class McResult(tuple):
    """(mean, std_error) with named access."""

    def __new__(cls, mean: float, std_error: float):
        return super().__new__(cls, (mean, std_error))

    @property
    def mean(self) -> float:
        return self[0]

    @property
    def std_error(self) -> float:
        return self[1]


def mc_qsearch(x_size: int, t: int, cfg: McConfig = McConfig()) -> McResult:
    """Simulate the guess schedule: per round k draw j ~ U{0..m_k}, succeed
    with probability sin^2((2j+1) theta), count total j until success."""
    if x_size < 2:
        raise ValueError("x_size must be >= 2")
    if not (0 <= t <= x_size):
        raise ValueError(f"t={t} outside [0, {x_size}]")
    rng = cfg.rng()
    theta = math.asin(math.sqrt(t / x_size))
    _, ms = _qsearch_schedule(x_size)
    counts = np.zeros(cfg.trials)
    alive = np.ones(cfg.trials, dtype=bool)
    for m in ms:
        j = rng.integers(0, m + 1, size=cfg.trials)
        counts[alive] += j[alive]
        p = np.sin((2 * j + 1) * theta) ** 2
        succeed = rng.random(cfg.trials) < p
        alive &= ~succeed
    mean = float(counts.mean())
    se = float(counts.std(ddof=1) / math.sqrt(cfg.trials))
    return McResult(mean, se)


def mc_qmin(n_items: int, cfg: McConfig = McConfig()) -> McResult:
    """Simulate threshold-descent minimum finding on ranks.

    Only order matters: start at a uniform rank, repeatedly pay the expected
    search cost for the current number of strictly better ranks, then jump
    uniformly to one of them. Reports total expected search applications.
    """
    if n_items < 2:
        raise ValueError("n_items must be >= 2")
    rng = cfg.rng()
    nq = np.array([n_qsearch(n_items, s).value for s in range(n_items)])
    y = rng.integers(0, n_items, size=cfg.trials)  # rank of threshold
    costs = np.zeros(cfg.trials)
    while np.any(y > 0):
        active = y > 0
        costs[active] += nq[y[active]]
        # jump to a uniformly random strictly better rank
        y[active] = (rng.random(active.sum()) * y[active]).astype(np.int64)
    mean = float(costs.mean())
    se = float(costs.std(ddof=1) / math.sqrt(cfg.trials))
    return McResult(mean, se)
