"""Leader-following swarm strategies: grey wolf, whale, and sine-cosine.

All three keep an agent's previous position when the proposed move is worse
(per-agent greedy survivor selection, as in the Mealpy implementations these
algorithms are usually benchmarked with)."""

import numpy as np

from .base import PopulationOptimizer


class GreyWolfOptimizer(PopulationOptimizer):
    """Positions move toward the mean of three pulls from the best three
    solutions seen so far; the pull coefficient decays from 2 to 0."""

    name = "GWO"
    DEFAULT_PARAMS = {}

    def __init__(self, config, bounds):
        super().__init__(config, bounds)
        self.leaders_pos = None
        self.leaders_obj = None

    def _greedy_replace(self, new_pos, vals):
        improved = np.flatnonzero(vals < self.obj[: len(vals)])
        self.pos[improved] = new_pos[improved]
        self.obj[improved] = vals[improved]

    @staticmethod
    def leader_pull(leader, pos, aa, cc):
        """One wolf's pull toward a leader; at pos == leader with cc == 1
        the distance term vanishes and the pull is the leader itself."""
        return leader - aa * np.abs(cc * leader - pos)

    def _update_leaders(self, count: int):
        cand_pos = self.pos[:count] if self.leaders_pos is None else np.vstack(
            [self.leaders_pos, self.pos[:count]]
        )
        cand_obj = self.obj[:count] if self.leaders_obj is None else np.concatenate(
            [self.leaders_obj, self.obj[:count]]
        )
        keep = np.argsort(cand_obj, kind="stable")[:3]
        self.leaders_pos = cand_pos[keep].copy()
        self.leaders_obj = cand_obj[keep].copy()

    def step(self):
        if self.leaders_pos is None:
            self._update_leaders(len(self.pos))
        a = 2.0 * (1.0 - self.eval_fraction)
        n, d = self.pos.shape
        pulls = np.zeros((n, d))
        for leader in self.leaders_pos:
            aa = 2 * a * self.rng.random((n, d)) - a
            cc = 2 * self.rng.random((n, d))
            dist = np.abs(cc * leader - self.pos)
            pulls += leader - aa * dist
        new_pos = self._clip(pulls / 3.0)
        vals = self._evaluate(new_pos)
        self._greedy_replace(new_pos, vals)
        self._update_leaders(len(vals))


class WhaleOptimizer(GreyWolfOptimizer):
    """Encircling/search on one branch, logarithmic spiral on the other,
    with per-dimension pull coefficients."""

    name = "WOA"
    DEFAULT_PARAMS = {"spiral_constant": 1.0, "branch_prob": 0.5}

    def __init__(self, config, bounds):
        super().__init__(config, bounds)
        self.best_pos = None
        self.best_obj = np.inf

    def _track_best(self, count: int):
        if not count:
            return
        k = int(np.argmin(self.obj[:count]))
        if self.obj[k] < self.best_obj:
            self.best_obj = float(self.obj[k])
            self.best_pos = self.pos[k].copy()

    @staticmethod
    def spiral_move(best, pos, b, ell):
        """Logarithmic spiral toward the best position."""
        dist = np.abs(best - pos)
        return dist * np.exp(b * ell) * np.cos(2 * np.pi * ell) + best

    def step(self):
        if self.best_pos is None:
            self._track_best(len(self.pos))
        frac = self.eval_fraction
        a = 2.0 * (1.0 - frac)
        a2 = -1.0 - frac  # spiral exponent range drifts from [-1,1] to [-2,1]
        b = self.params["spiral_constant"]
        n, d = self.pos.shape
        new_pos = np.empty_like(self.pos)
        for i in range(n):
            if self.rng.random() < self.params["branch_prob"]:
                aa = 2 * a * self.rng.random(d) - a
                cc = 2 * self.rng.random(d)
                explore = np.abs(aa) >= 1
                other = self.pos[self.rng.integers(n)]
                ref = np.where(explore, other, self.best_pos)
                dist = np.abs(cc * ref - self.pos[i])
                new_pos[i] = ref - aa * dist
            else:
                ell = (a2 - 1.0) * self.rng.random(d) + 1.0
                new_pos[i] = self.spiral_move(self.best_pos, self.pos[i], b, ell)
        new_pos = self._clip(new_pos)
        vals = self._evaluate(new_pos)
        self._greedy_replace(new_pos, vals)
        self._track_best(len(vals))


class SineCosineAlgorithm(GreyWolfOptimizer):
    """Oscillating moves toward the best-known destination."""

    name = "SCA"
    DEFAULT_PARAMS = {"r1_initial": 2.0}

    def __init__(self, config, bounds):
        super().__init__(config, bounds)
        self.dest_pos = None
        self.dest_obj = np.inf

    def _track_dest(self, count: int):
        if not count:
            return
        k = int(np.argmin(self.obj[:count]))
        if self.obj[k] < self.dest_obj:
            self.dest_obj = float(self.obj[k])
            self.dest_pos = self.pos[k].copy()

    def step(self):
        if self.dest_pos is None:
            self._track_dest(len(self.pos))
        r1 = self.params["r1_initial"] * (1.0 - self.eval_fraction)
        n, d = self.pos.shape
        r2 = self.rng.uniform(0, 2 * np.pi, size=(n, d))
        r3 = self.rng.uniform(0, 2, size=(n, d))
        use_sin = self.rng.random((n, d)) < 0.5
        swing = np.abs(r3 * self.dest_pos - self.pos)
        moved = self._clip(self.pos + r1 * np.where(use_sin, np.sin(r2), np.cos(r2)) * swing)
        vals = self._evaluate(moved)
        self._greedy_replace(moved, vals)
        self._track_dest(len(vals))
