"""Artificial bee colony: employed, onlooker and scout phases."""

import numpy as np

from .base import PopulationOptimizer


class ArtificialBeeColony(PopulationOptimizer):
    """Each food source is perturbed on one random dimension; onlookers pick
    sources fitness-proportionally; exhausted sources become scouts."""

    name = "ABC"
    DEFAULT_PARAMS = {
        "limit": None,  # defaults to population_size * dimension
    }

    def __init__(self, config, bounds):
        super().__init__(config, bounds)
        self.trials = np.zeros(self.pop_size, dtype=int)
        limit = self.params["limit"]
        self.limit = self.pop_size * self.dim if limit is None else limit

    @staticmethod
    def selection_probabilities(objectives: np.ndarray) -> np.ndarray:
        """Fitness-proportional onlooker weights for a minimisation problem."""
        fitness = 1.0 / (1.0 + np.asarray(objectives, dtype=np.float64))
        return fitness / fitness.sum()

    def _try_source(self, i: int) -> bool:
        """One single-dimension trial on source ``i``; True if it improved."""
        r1, r2 = self._distinct_indices(i, 2)
        j = self.rng.integers(self.dim)
        phi = self.rng.uniform(-1.0, 1.0)
        trial = self.pos[i].copy()
        trial[j] = self.pos[i, j] + phi * (self.pos[r1, j] - self.pos[r2, j])
        vals = self._evaluate(trial[np.newaxis])
        if not len(vals):
            return False
        if vals[0] < self.obj[i]:
            self.pos[i] = trial
            self.obj[i] = vals[0]
            self.trials[i] = 0
            return True
        self.trials[i] += 1
        return False

    def step(self):
        for i in range(self.pop_size):  # employed phase
            if self.remaining <= 0:
                return
            self._try_source(i)
        probs = self.selection_probabilities(self.obj)
        for _ in range(self.pop_size):  # onlooker phase
            if self.remaining <= 0:
                return
            self._try_source(int(self.rng.choice(self.pop_size, p=probs)))
        exhausted = np.flatnonzero(self.trials > self.limit)
        for i in exhausted:  # scout phase
            if self.remaining <= 0:
                return
            low = self.bounds.low.astype(np.float64)
            fresh = low + self.rng.random(self.dim) * self.span
            vals = self._evaluate(fresh[np.newaxis])
            if len(vals):
                self.pos[i] = fresh
                self.obj[i] = vals[0]
                self.trials[i] = 0
