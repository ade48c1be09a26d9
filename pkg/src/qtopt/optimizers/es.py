"""(mu + lambda) evolution strategies with Gaussian or Levy-flight steps."""

import math

import numpy as np

from .base import PopulationOptimizer


def mantegna_steps(rng: np.random.Generator, beta: float, size) -> np.ndarray:
    """Levy-stable step samples via Mantegna's algorithm."""
    sigma_u = (
        math.gamma(1 + beta) * math.sin(math.pi * beta / 2)
        / (math.gamma((1 + beta) / 2) * beta * 2 ** ((beta - 1) / 2))
    ) ** (1 / beta)
    u = rng.normal(0.0, sigma_u, size=size)
    v = rng.normal(0.0, 1.0, size=size)
    return u / np.abs(v) ** (1 / beta)


class EvolutionStrategy(PopulationOptimizer):
    """Per-gene step sizes start at 10% of the range and follow the 1/5
    success rule, measured over a sliding window of offspring."""

    name = "ES"
    DEFAULT_PARAMS = {
        "offspring_ratio": 0.75,
        "sigma_fraction": 0.1,
        "success_window": 10,
        "adapt_factor": 0.85,
    }

    def __init__(self, config, bounds):
        super().__init__(config, bounds)
        self.sigma = self.params["sigma_fraction"] * self.span
        self._window_success = 0
        self._window_trials = 0

    def _draw_steps(self, count: int) -> np.ndarray:
        return self.rng.standard_normal((count, self.dim))

    def _adapt_sigma(self, successes: int, trials: int):
        self._window_success += successes
        self._window_trials += trials
        if self._window_trials >= self.params["success_window"]:
            rate = self._window_success / self._window_trials
            if rate > 0.2:
                self.sigma = self.sigma / self.params["adapt_factor"]
            elif rate < 0.2:
                self.sigma = self.sigma * self.params["adapt_factor"]
            self._window_success = 0
            self._window_trials = 0

    def step(self):
        lam = max(1, int(round(self.params["offspring_ratio"] * self.pop_size)))
        parents = self.rng.integers(0, len(self.pos), size=lam)
        offspring = self.pos[parents] + self.sigma * self._draw_steps(lam)
        vals = self._evaluate(offspring)
        m = len(vals)
        successes = int(np.sum(vals < self.obj[parents[:m]]))
        self._adapt_sigma(successes, m)
        merged = np.vstack([self.pos, offspring[:m]])
        merged_obj = np.concatenate([self.obj, vals])
        keep = np.argsort(merged_obj, kind="stable")[: self.pop_size]
        self.pos, self.obj = merged[keep], merged_obj[keep]


class LevyEvolutionStrategy(EvolutionStrategy):
    """Many small steps, occasional long jumps."""

    name = "LEVY_ES"
    DEFAULT_PARAMS = {**EvolutionStrategy.DEFAULT_PARAMS, "beta": 1.5}

    def _draw_steps(self, count: int) -> np.ndarray:
        return mantegna_steps(self.rng, self.params["beta"], (count, self.dim))
