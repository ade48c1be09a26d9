"""Particle swarm optimisation and four published refinements."""

import numpy as np

from .base import PopulationOptimizer


class ParticleSwarm(PopulationOptimizer):
    """Global-best PSO with linearly decaying inertia and clamped velocity."""

    name = "PSO"
    DEFAULT_PARAMS = {
        "c1": 2.05,
        "c2": 2.05,
        "w_min": 0.4,
        "w_max": 0.9,
        "v_max_fraction": 0.2,
    }

    def __init__(self, config, bounds):
        super().__init__(config, bounds)
        self.vel = np.zeros_like(self.pos)
        self.v_max = self.params.get("v_max_fraction", 0.2) * self.span
        self.pbest = self.pos.copy()
        self.pbest_obj = None
        self.gbest = None
        self.gbest_obj = np.inf

    def _inertia(self) -> float:
        return self.params["w_max"] - (self.params["w_max"] - self.params["w_min"]) * self.eval_fraction

    def _sync_memory(self, count: int):
        """Fold the first ``count`` fresh objective values into the bests."""
        if self.pbest_obj is None:
            self.pbest_obj = self.obj.copy()
            self.pbest = self.pos.copy()
        else:
            improved = np.flatnonzero(self.obj[:count] < self.pbest_obj[:count])
            self.pbest[improved] = self.pos[improved]
            self.pbest_obj[improved] = self.obj[improved]
        k = int(np.argmin(self.pbest_obj))
        if self.pbest_obj[k] < self.gbest_obj:
            self.gbest_obj = float(self.pbest_obj[k])
            self.gbest = self.pbest[k].copy()

    def _velocity_update(self):
        n, d = self.pos.shape
        r1 = self.rng.random((n, d))
        r2 = self.rng.random((n, d))
        self.vel = (
            self._inertia() * self.vel
            + self.params["c1"] * r1 * (self.pbest - self.pos)
            + self.params["c2"] * r2 * (self.gbest - self.pos)
        )

    def step(self):
        if self.pbest_obj is None:
            self._sync_memory(len(self.pos))
        self._velocity_update()
        self.vel = np.clip(self.vel, -self.v_max, self.v_max)
        self.pos = self.pos + self.vel
        vals = self._evaluate(self.pos)
        self.obj[: len(vals)] = vals
        self._sync_memory(len(vals))


class ChaosPSO(ParticleSwarm):
    """PSO with the adaptive inertia weight factor and a chaotic local
    search iterating the logistic map around the global best."""

    name = "CPSO"

    def __init__(self, config, bounds):
        super().__init__(config, bounds)
        self._cx = None

    def _adaptive_inertia(self) -> np.ndarray:
        w_min, w_max = self.params["w_min"], self.params["w_max"]
        f = self.obj
        f_min, f_avg = f.min(), f.mean()
        if f_avg == f_min:
            return np.full(len(f), w_min)
        scaled = w_min + (w_max - w_min) * (f - f_min) / (f_avg - f_min)
        return np.where(f <= f_avg, scaled, w_max)

    def _velocity_update(self):
        n, d = self.pos.shape
        r1 = self.rng.random((n, d))
        r2 = self.rng.random((n, d))
        w = self._adaptive_inertia()[:, np.newaxis]
        self.vel = (
            w * self.vel
            + self.params["c1"] * r1 * (self.pbest - self.pos)
            + self.params["c2"] * r2 * (self.gbest - self.pos)
        )

    def _chaotic_local_search(self):
        if self.remaining <= 0:
            return
        low = self.bounds.low.astype(np.float64)
        if self._cx is None:
            # seed the chaotic sequence from the best position, nudged off
            # the logistic map's fixed points
            cx = (self._clip(self.gbest) - low) / np.maximum(self.span, 1e-12)
            cx = np.clip(cx, 0.011, 0.989)
            for fixed in (0.25, 0.5, 0.75):
                cx = np.where(np.abs(cx - fixed) < 1e-3, cx + 0.0137, cx)
            self._cx = cx
        self._cx = 4.0 * self._cx * (1.0 - self._cx)
        trial = low + self._cx * self.span
        vals = self._evaluate(trial[np.newaxis])
        if not len(vals):
            return
        worst = int(np.argmax(self.obj))
        if vals[0] < self.obj[worst]:
            self.pos[worst] = trial
            self.obj[worst] = vals[0]
            if vals[0] < self.pbest_obj[worst]:
                self.pbest[worst] = trial
                self.pbest_obj[worst] = vals[0]
            if vals[0] < self.gbest_obj:
                self.gbest_obj = float(vals[0])
                self.gbest = trial.copy()

    def step(self):
        super().step()
        self._chaotic_local_search()


class ComprehensiveLearningPSO(ParticleSwarm):
    """Each dimension learns from a (possibly different) particle's pbest;
    exemplars are refreshed after ``refresh_gap`` stagnant iterations."""

    name = "CLPSO"
    DEFAULT_PARAMS = {
        "c_local": 1.2,
        "w_min": 0.4,
        "w_max": 0.9,
        "v_max_fraction": 0.2,
        "refresh_gap": 7,
    }

    def __init__(self, config, bounds):
        super().__init__(config, bounds)
        n = self.pop_size
        i = np.arange(n)
        # learning probability ramps from 0.05 to 0.5 across the swarm
        self.pc = 0.05 + 0.45 * (np.exp(10 * i / max(n - 1, 1)) - 1) / (np.e**10 - 1)
        self.exemplar = np.tile(np.arange(n)[:, np.newaxis], (1, self.dim))
        self.stagnation = np.zeros(n, dtype=int)
        self._exemplars_ready = False

    def _rebuild_exemplar(self, i: int):
        row = np.full(self.dim, i)
        for d in range(self.dim):
            if self.rng.random() < self.pc[i]:
                a, b = self._distinct_indices(i, 2)
                row[d] = a if self.pbest_obj[a] <= self.pbest_obj[b] else b
        if np.all(row == i):
            row[self.rng.integers(self.dim)] = self._distinct_indices(i, 1)[0]
        self.exemplar[i] = row

    def _velocity_update(self):
        n, d = self.pos.shape
        guides = self.pbest[self.exemplar, np.arange(d)[np.newaxis, :]]
        r = self.rng.random((n, d))
        self.vel = self._inertia() * self.vel + self.params["c_local"] * r * (guides - self.pos)

    def step(self):
        if self.pbest_obj is None:
            self._sync_memory(len(self.pos))
        if not self._exemplars_ready:
            for i in range(self.pop_size):
                self._rebuild_exemplar(i)
            self._exemplars_ready = True
        before = self.pbest_obj.copy()
        self._velocity_update()
        self.vel = np.clip(self.vel, -self.v_max, self.v_max)
        self.pos = self.pos + self.vel
        vals = self._evaluate(self.pos)
        self.obj[: len(vals)] = vals
        self._sync_memory(len(vals))
        improved = self.pbest_obj < before
        self.stagnation = np.where(improved, 0, self.stagnation + 1)
        for i in np.flatnonzero(self.stagnation > self.params["refresh_gap"]):
            self._rebuild_exemplar(i)
            self.stagnation[i] = 0


class HierarchicalPSO(ParticleSwarm):
    """Inertia-free PSO with time-varying acceleration; stagnant velocity
    components are re-initialised with a decaying mutation step size."""

    name = "HPSO"
    DEFAULT_PARAMS = {
        "c1_initial": 2.5,
        "c1_final": 0.5,
        "c2_initial": 0.5,
        "c2_final": 2.5,
        "reinit_initial": 0.5,  # ci: starting fraction of v_max
        "reinit_final": 0.0,  # cf: ending fraction
        "v_max_fraction": 0.2,
        "stagnation_eps": 1e-8,  # of the gene range
    }

    def _velocity_update(self):
        n, d = self.pos.shape
        t = self.eval_fraction
        c1 = self.params["c1_initial"] + (self.params["c1_final"] - self.params["c1_initial"]) * t
        c2 = self.params["c2_initial"] + (self.params["c2_final"] - self.params["c2_initial"]) * t
        r1 = self.rng.random((n, d))
        r2 = self.rng.random((n, d))
        self.vel = c1 * r1 * (self.pbest - self.pos) + c2 * r2 * (self.gbest - self.pos)
        eps = self.params["stagnation_eps"] * self.span
        stagnant = np.abs(self.vel) < eps
        if np.any(stagnant):
            scale = self.params["reinit_initial"] + (
                self.params["reinit_final"] - self.params["reinit_initial"]
            ) * t
            magnitude = self.rng.random((n, d)) * scale * self.v_max
            sign = np.where(self.rng.random((n, d)) < 0.5, 1.0, -1.0)
            self.vel = np.where(stagnant, sign * magnitude, self.vel)


class PhasorPSO(ParticleSwarm):
    """Control coefficients derived from a per-particle phase angle."""

    name = "PPSO"
    DEFAULT_PARAMS = {}

    def __init__(self, config, bounds):
        super().__init__(config, bounds)
        self.theta = self.rng.uniform(0, 2 * np.pi, size=self.pop_size)

    def _velocity_update(self):
        cos_t = np.cos(self.theta)
        sin_t = np.sin(self.theta)
        w_p = np.abs(cos_t) ** (2 * sin_t)
        w_g = np.abs(sin_t) ** (2 * cos_t)
        self.vel = (
            w_p[:, np.newaxis] * (self.pbest - self.pos)
            + w_g[:, np.newaxis] * (self.gbest - self.pos)
        )
        v_max = (np.abs(cos_t) ** 2)[:, np.newaxis] * self.span[np.newaxis, :]
        self.vel = np.clip(self.vel, -v_max, v_max)
        self.theta = self.theta + np.abs(cos_t + sin_t) * (2 * np.pi)

    def step(self):
        if self.pbest_obj is None:
            self._sync_memory(len(self.pos))
        self._velocity_update()
        self.pos = self.pos + self.vel
        vals = self._evaluate(self.pos)
        self.obj[: len(vals)] = vals
        self._sync_memory(len(vals))
