"""Harmony search over integer gene vectors.

The printed parameter sheet lists "CR 0.15" for this algorithm; read as the
memory-consideration rate it degenerates to random search, so the default
interprets it as the random-selection rate (memory rate 0.85).  Both knobs
are exposed; see the README's parameter notes.
"""

import numpy as np

from .base import PopulationOptimizer


class HarmonySearch(PopulationOptimizer):
    name = "HS"
    integer_positions = True
    DEFAULT_PARAMS = {
        "memory_rate": 0.85,  # HMCR: probability a gene comes from memory
        "pitch_rate": 0.5,  # PAR: probability a memory gene is nudged
        "bandwidth": 1,  # integer pitch step
    }

    def step(self):
        hmcr = self.params["memory_rate"]
        par = self.params["pitch_rate"]
        bw = self.params["bandwidth"]
        from_memory = self.rng.random(self.dim) < hmcr
        donors = self.rng.integers(0, self.pop_size, size=self.dim)
        memory_genes = self.pos[donors, np.arange(self.dim)]
        pitched = self.rng.random(self.dim) < par
        nudges = self.rng.choice((-bw, bw), size=self.dim)
        random_genes = self.rng.integers(
            self.bounds.low, self.bounds.high + 1, size=self.dim
        ).astype(np.float64)
        harmony = np.where(
            from_memory, memory_genes + np.where(pitched, nudges, 0), random_genes
        )
        harmony = self._clip(harmony)
        vals = self._evaluate(harmony[np.newaxis])
        if not len(vals):
            return
        worst = int(np.argmax(self.obj))
        if vals[0] < self.obj[worst]:
            self.pos[worst] = harmony
            self.obj[worst] = vals[0]
