"""Genetic algorithm and its memetic (local-search) extension.

Both operate natively on integer positions: tournament parent selection,
multi-point crossover, per-gene uniform mutation, and elitist survivor
truncation over parents plus offspring.
"""

import numpy as np

from .base import PopulationOptimizer


class GeneticAlgorithm(PopulationOptimizer):
    name = "GA"
    integer_positions = True
    DEFAULT_PARAMS = {
        "crossover_prob": 0.95,
        "mutation_prob": 0.05,
        "tournament_size": 2,
        "crossover_points": 2,
    }

    def tournament(self) -> int:
        """Index of the tournament winner; objective ties go to the lower index."""
        entrants = self.rng.integers(0, len(self.pos), size=self.params["tournament_size"])
        scores = self.obj[entrants]
        return int(entrants[scores == scores.min()].min())

    def crossover(self, p1: np.ndarray, p2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Multi-point crossover: swap alternating segments between cuts."""
        n_points = min(self.params["crossover_points"], self.dim - 1)
        cuts = np.sort(self.rng.choice(np.arange(1, self.dim), size=n_points, replace=False))
        c1, c2 = p1.copy(), p2.copy()
        swap = False
        prev = 0
        for cut in list(cuts) + [self.dim]:
            if swap:
                c1[prev:cut], c2[prev:cut] = p2[prev:cut], p1[prev:cut]
            swap = not swap
            prev = cut
        return c1, c2

    def _make_offspring(self) -> np.ndarray:
        pc, pm = self.params["crossover_prob"], self.params["mutation_prob"]
        children = np.empty_like(self.pos)
        for k in range(0, self.pop_size, 2):
            p1 = self.pos[self.tournament()]
            p2 = self.pos[self.tournament()]
            if self.rng.random() < pc:
                c1, c2 = self.crossover(p1, p2)
            else:
                c1, c2 = p1.copy(), p2.copy()
            children[k] = c1
            if k + 1 < self.pop_size:
                children[k + 1] = c2
        mutate = self.rng.random(children.shape) < pm
        fresh = self.rng.integers(self.bounds.low, self.bounds.high + 1,
                                  size=children.shape).astype(np.float64)
        children[mutate] = fresh[mutate]
        return children

    def _elitist_replace(self, children: np.ndarray, child_obj: np.ndarray):
        merged = np.vstack([self.pos, children[: len(child_obj)]])
        merged_obj = np.concatenate([self.obj, child_obj])
        keep = np.argsort(merged_obj, kind="stable")[: self.pop_size]
        self.pos = merged[keep]
        self.obj = merged_obj[keep]

    def step(self):
        children = self._make_offspring()
        child_obj = self._evaluate(children)
        self._elitist_replace(children, child_obj)


class MemeticAlgorithm(GeneticAlgorithm):
    """GA generation followed by probabilistic +-1 integer hill climbing."""

    name = "MA"
    integer_positions = True
    DEFAULT_PARAMS = {
        "crossover_prob": 0.85,
        "mutation_prob": 0.15,
        "tournament_size": 2,
        "crossover_points": 2,
        "local_search_prob": 0.5,
        "local_steps": 2,
    }

    def step(self):
        super().step()
        p_ls = self.params["local_search_prob"]
        for i in range(self.pop_size):
            if self.remaining <= 0:
                return
            if self.rng.random() >= p_ls:
                continue
            for _ in range(self.params["local_steps"]):
                if self.remaining <= 0:
                    return
                nudge = self.rng.choice((-1.0, 1.0), size=self.dim)
                trial = self._clip(self.pos[i] + nudge)
                val = self._evaluate(trial[np.newaxis])
                if len(val) and val[0] < self.obj[i]:
                    self.pos[i] = trial
                    self.obj[i] = val[0]
