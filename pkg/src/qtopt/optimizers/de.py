"""Differential evolution and its self-adaptive variants."""

import numpy as np

from .base import PopulationOptimizer


class DifferentialEvolution(PopulationOptimizer):
    """Classic DE with binomial crossover and greedy one-to-one selection.

    Mutation strategies: ``rand/1`` (default), ``current-to-best/1`` and
    ``current-to-rand/1``.
    """

    name = "DE"
    DEFAULT_PARAMS = {
        "weighting_factor": 0.8,
        "crossover_rate": 0.9,
        "strategy": "rand/1",
    }

    def _mutant(self, i: int, f: float, strategy: str) -> np.ndarray:
        if strategy == "rand/1":
            r1, r2, r3 = self._distinct_indices(i, 3)
            return self.pos[r1] + f * (self.pos[r2] - self.pos[r3])
        if strategy == "current-to-best/1":
            r1, r2 = self._distinct_indices(i, 2)
            best = self.pos[self._best_index()]
            return self.pos[i] + f * (best - self.pos[i]) + f * (self.pos[r1] - self.pos[r2])
        if strategy == "current-to-rand/1":
            r1, r2, r3 = self._distinct_indices(i, 3)
            return (
                self.pos[i]
                + f * (self.pos[r1] - self.pos[i])
                + f * (self.pos[r2] - self.pos[r3])
            )
        raise ValueError(f"unknown DE strategy {strategy!r}")

    def _crossover(self, target: np.ndarray, mutant: np.ndarray, cr: float) -> np.ndarray:
        mask = self.rng.random(self.dim) < cr
        mask[self.rng.integers(self.dim)] = True  # guaranteed j_rand gene
        return np.where(mask, mutant, target)

    def _make_trials(self):
        f = self.params["weighting_factor"]
        cr = self.params["crossover_rate"]
        strategy = self.params["strategy"]
        trials = np.empty_like(self.pos)
        for i in range(len(self.pos)):
            trials[i] = self._crossover(self.pos[i], self._mutant(i, f, strategy), cr)
        return trials

    def _greedy_select(self, trials, vals):
        """Accept trials that are no worse; returns the accepted index list."""
        accepted = []
        for i, v in enumerate(vals):
            if v <= self.obj[i]:
                self.pos[i] = trials[i]
                self.obj[i] = v
                accepted.append(i)
        return accepted

    def step(self):
        trials = self._make_trials()
        vals = self._evaluate(trials)
        self._greedy_select(trials, vals)


class SelfAdaptiveDE(DifferentialEvolution):
    """DE choosing between rand/1 and current-to-best/1 by success memory."""

    name = "SADE"
    DEFAULT_PARAMS = {
        "weighting_factor": 0.8,
        "crossover_rate": 0.9,
        "learning_period": 10,
    }

    def __init__(self, config, bounds):
        super().__init__(config, bounds)
        self.p1 = 0.5  # probability of choosing rand/1
        self._counts = np.zeros(4)  # ns1, nf1, ns2, nf2
        self._gens = 0

    def step(self):
        f = self.params["weighting_factor"]
        cr = self.params["crossover_rate"]
        trials = np.empty_like(self.pos)
        used_first = np.empty(len(self.pos), dtype=bool)
        for i in range(len(self.pos)):
            first = self.rng.random() < self.p1
            used_first[i] = first
            strategy = "rand/1" if first else "current-to-best/1"
            trials[i] = self._crossover(self.pos[i], self._mutant(i, f, strategy), cr)
        vals = self._evaluate(trials)
        accepted = set(self._greedy_select(trials, vals))
        for i in range(len(vals)):
            ok = i in accepted
            if used_first[i]:
                self._counts[0 if ok else 1] += 1
            else:
                self._counts[2 if ok else 3] += 1
        self._gens += 1
        if self._gens >= self.params["learning_period"]:
            ns1, nf1, ns2, nf2 = self._counts
            num = ns1 * (ns2 + nf2)
            den = num + ns2 * (ns1 + nf1)
            if den > 0:
                self.p1 = float(np.clip(num / den, 0.05, 0.95))
            self._counts[:] = 0
            self._gens = 0


class SelfAdaptivePopulationDE(DifferentialEvolution):
    """DE whose population size evolves as an averaged per-member attribute.

    Each member carries a population-size attribute initialised as
    round(initial size + N(0,1)); trial attributes follow the same
    mutation/crossover arithmetic, and the next generation is resized to the
    rounded attribute mean (never below 4).
    """

    name = "SAP_DE"
    DEFAULT_PARAMS = {
        "weighting_factor": 0.8,
        "crossover_rate": 0.9,
        "max_population": None,  # defaults to 2x the initial size
    }

    def __init__(self, config, bounds):
        super().__init__(config, bounds)
        self._np_ini = self.pop_size
        self._max_np = self.params["max_population"] or 2 * self.pop_size
        self.pi = np.rint(self._np_ini + self.rng.standard_normal(self.pop_size))

    def _clamp_pi(self, pi):
        return np.clip(pi, 4, self._max_np)

    def step(self):
        f = self.params["weighting_factor"]
        cr = self.params["crossover_rate"]
        n = len(self.pos)
        trials = np.empty_like(self.pos)
        trial_pi = np.empty(n)
        for i in range(n):
            r1, r2, r3 = self._distinct_indices(i, 3)
            mutant = self.pos[r1] + f * (self.pos[r2] - self.pos[r3])
            trials[i] = self._crossover(self.pos[i], mutant, cr)
            mutant_pi = self.pi[r1] + f * (self.pi[r2] - self.pi[r3])
            trial_pi[i] = mutant_pi if self.rng.random() < cr else self.pi[i]
        vals = self._evaluate(trials)
        for i in range(len(vals)):
            if vals[i] <= self.obj[i]:
                self.pos[i] = trials[i]
                self.obj[i] = vals[i]
                self.pi[i] = trial_pi[i]

        self.pi = self._clamp_pi(self.pi)
        new_size = int(np.clip(np.rint(self.pi.mean()), 4, self._max_np))
        if new_size < len(self.pos):
            keep = np.argsort(self.obj, kind="stable")[:new_size]
            keep.sort()
            self.pos, self.obj, self.pi = self.pos[keep], self.obj[keep], self.pi[keep]
        elif new_size > len(self.pos) and self.remaining > 0:
            grow = new_size - len(self.pos)
            low = self.bounds.low.astype(np.float64)
            extra = low + self.rng.random((grow, self.dim)) * self.span
            extra_vals = self._evaluate(extra)
            m = len(extra_vals)
            extra_pi = np.rint(self._np_ini + self.rng.standard_normal(m))
            self.pos = np.vstack([self.pos, extra[:m]])
            self.obj = np.concatenate([self.obj, extra_vals])
            self.pi = np.concatenate([self.pi, self._clamp_pi(extra_pi)])


class JADE(DifferentialEvolution):
    """Adaptive DE: current-to-pbest mutation, external archive, and
    self-adapted F (Cauchy) and CR (normal) location parameters."""

    name = "JADE"
    DEFAULT_PARAMS = {
        "mu_f": 0.5,
        "mu_cr": 0.5,
        "p_best": 0.1,  # fraction of top solutions eligible as pbest
        "adaptation_rate": 0.1,
    }

    def __init__(self, config, bounds):
        super().__init__(config, bounds)
        self.mu_f = self.params["mu_f"]
        self.mu_cr = self.params["mu_cr"]
        self.archive: list[np.ndarray] = []

    def _sample_f(self) -> float:
        while True:
            f = self.mu_f + 0.1 * self.rng.standard_cauchy()
            if f > 0:
                return min(f, 1.0)

    @staticmethod
    def mutant_formula(x_i, pbest, x_r1, x_r2, f):
        """With pbest = population best and the archive empty this is exactly
        the current-to-best/1 mutant."""
        return x_i + f * (pbest - x_i) + f * (x_r1 - x_r2)

    def step(self):
        n = len(self.pos)
        n_best = max(1, int(round(self.params["p_best"] * n)))
        top = np.argsort(self.obj, kind="stable")[:n_best]
        crs = np.clip(self.rng.normal(self.mu_cr, 0.1, size=n), 0.0, 1.0)
        fs = np.array([self._sample_f() for _ in range(n)])

        trials = np.empty_like(self.pos)
        for i in range(n):
            pbest = self.pos[top[self.rng.integers(len(top))]]
            r1 = self._distinct_indices(i, 1)[0]
            # r2 comes from the population united with the archive
            while True:
                k = self.rng.integers(n + len(self.archive))
                if k != i and k != r1:
                    break
            x_r2 = self.pos[k] if k < n else self.archive[k - n]
            mutant = self.mutant_formula(self.pos[i], pbest, self.pos[r1], x_r2, fs[i])
            trials[i] = self._crossover(self.pos[i], mutant, crs[i])

        vals = self._evaluate(trials)
        s_cr, s_f = [], []
        for i in range(len(vals)):
            if vals[i] < self.obj[i]:
                self.archive.append(self.pos[i].copy())
                self.pos[i] = trials[i]
                self.obj[i] = vals[i]
                s_cr.append(crs[i])
                s_f.append(fs[i])
        while len(self.archive) > n:
            self.archive.pop(self.rng.integers(len(self.archive)))
        if s_f:
            c = self.params["adaptation_rate"]
            s_f = np.array(s_f)
            self.mu_cr = (1 - c) * self.mu_cr + c * float(np.mean(s_cr))
            self.mu_f = (1 - c) * self.mu_f + c * float((s_f**2).sum() / s_f.sum())
