"""Shared machinery for the population-based search strategies.

Every optimiser works on a real-valued (or natively integer) position matrix
and shares one budget ledger: positions are repaired to integer genes at
evaluation time, objective calls are counted, and each batch is truncated so
the run lands exactly on the configured evaluation budget.
"""

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from ..candidate import Bounds, Evaluation, JpegObjective, ObjectiveSpec, repair
from ..stats import median_dispersion, population_diversity


@dataclass(frozen=True)
class OptimizerConfig:
    algorithm_id: str
    population_size: int = 20
    eval_budget: int = 1000
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.population_size < 4:
            raise ValueError("population size must be at least 4")
        if self.eval_budget < self.population_size:
            raise ValueError("evaluation budget must cover the initial population")


@dataclass
class RunResult:
    """Everything one optimisation run produced, traces included."""

    algorithm: str
    seed: int
    best_genes: np.ndarray
    best_objective: float
    best_evaluation: Evaluation | None
    best_trace: list  # best objective after init and after each iteration
    eval_trace: list  # cumulative evaluations at the same points
    diversity_trace: list
    dispersion_trace: list
    xpl_trace: list
    xpt_trace: list
    eval_count: int
    wall_time: float
    populations: list | None = None

    def canonical_dict(self) -> dict:
        """Deterministic content: excludes wall time and raw snapshots."""
        best_eval = None
        if self.best_evaluation is not None:
            e = self.best_evaluation
            best_eval = {
                "objective": e.objective,
                "file_size": e.file_size,
                "psnr": e.psnr,
                "closeness": e.closeness,
            }
        return {
            "algorithm": self.algorithm,
            "seed": int(self.seed),
            "best_genes": [int(g) for g in self.best_genes],
            "best_objective": self.best_objective,
            "best_evaluation": best_eval,
            "trace": {
                "evals": [int(v) for v in self.eval_trace],
                "best_objective": list(self.best_trace),
                "diversity": list(self.diversity_trace),
                "dispersion": list(self.dispersion_trace),
                "xpl": list(self.xpl_trace),
                "xpt": list(self.xpt_trace),
            },
            "eval_count": int(self.eval_count),
        }

    def canonical_json(self) -> str:
        return json.dumps(self.canonical_dict(), sort_keys=True)


class PopulationOptimizer:
    """Base class: owns positions, objectives, budget and trace recording."""

    name = "?"
    integer_positions = False
    DEFAULT_PARAMS: dict = {}

    def __init__(self, config: OptimizerConfig, bounds: Bounds):
        unknown = set(config.params) - set(self.DEFAULT_PARAMS)
        if unknown:
            raise ValueError(f"unknown parameters for {self.name}: {sorted(unknown)}")
        self.config = config
        self.params = {**self.DEFAULT_PARAMS, **config.params}
        self.bounds = bounds
        self.rng = np.random.default_rng(config.seed)
        self.pop_size = config.population_size
        self.dim = bounds.dim
        self.span = bounds.span
        self.pos = self._initial_positions()
        self.obj = None

    # -- population -----------------------------------------------------

    def _initial_positions(self) -> np.ndarray:
        low = self.bounds.low.astype(np.float64)
        high = self.bounds.high.astype(np.float64)
        if self.integer_positions:
            return self.rng.integers(self.bounds.low, self.bounds.high + 1,
                                     size=(self.pop_size, self.dim)).astype(np.float64)
        return low + self.rng.random((self.pop_size, self.dim)) * (high - low)

    def _clip(self, positions: np.ndarray) -> np.ndarray:
        return np.clip(positions, self.bounds.low, self.bounds.high)

    # -- budget and evaluation -------------------------------------------

    @property
    def evals_used(self) -> int:
        return self._used

    @property
    def remaining(self) -> int:
        return self._budget - self._used

    @property
    def eval_fraction(self) -> float:
        return self._used / self._budget

    def _evaluate(self, positions: np.ndarray) -> np.ndarray:
        """Objective values for as many rows as the budget still allows."""
        positions = np.atleast_2d(positions)
        n = min(len(positions), self.remaining)
        vals = np.empty(n)
        for i in range(n):
            genes = repair(positions[i], self.bounds)
            res = self._objective(genes)
            v = float(res.objective) if isinstance(res, Evaluation) else float(res)
            vals[i] = v
            if v < self._best_obj:
                self._best_obj = v
                self._best_genes = genes
                self._best_eval = res if isinstance(res, Evaluation) else None
        self._used += n
        return vals

    # -- run loop ---------------------------------------------------------

    def step(self):  # pragma: no cover - overridden
        raise NotImplementedError

    def run(self, objective, record_populations: bool = True) -> RunResult:
        """Drive the optimiser until the evaluation budget is spent."""
        if isinstance(objective, ObjectiveSpec):
            objective = JpegObjective(objective)
        self._objective = objective
        self._budget = self.config.eval_budget
        self._used = 0
        self._best_obj = math.inf
        self._best_genes = None
        self._best_eval = None

        best_trace, eval_trace = [], []
        div_trace, disp_trace = [], []
        populations = [] if record_populations else None

        t0 = time.perf_counter()
        self.obj = self._evaluate(self.pos)

        def record():
            best_trace.append(self._best_obj)
            eval_trace.append(self._used)
            div_trace.append(population_diversity(self.pos))
            disp_trace.append(median_dispersion(self.pos))
            if populations is not None:
                populations.append(self.pos.copy())

        record()
        while self.remaining > 0:
            self.step()
            record()
        wall = time.perf_counter() - t0

        disp = np.array(disp_trace)
        disp_max = disp.max()
        if disp_max > 0:
            xpl = (100.0 * disp / disp_max).tolist()
            xpt = (100.0 * np.abs(disp - disp_max) / disp_max).tolist()
        else:
            xpl = [0.0] * len(disp)
            xpt = [100.0] * len(disp)

        return RunResult(
            algorithm=self.config.algorithm_id,
            seed=self.config.seed,
            best_genes=self._best_genes,
            best_objective=self._best_obj,
            best_evaluation=self._best_eval,
            best_trace=best_trace,
            eval_trace=eval_trace,
            diversity_trace=div_trace,
            dispersion_trace=disp_trace,
            xpl_trace=xpl,
            xpt_trace=xpt,
            eval_count=self._used,
            wall_time=wall,
            populations=populations,
        )

    # -- shared helpers ----------------------------------------------------

    def _distinct_indices(self, exclude: int, count: int) -> np.ndarray:
        """``count`` distinct population indices, none equal to ``exclude``."""
        perm = self.rng.permutation(len(self.pos))
        perm = perm[perm != exclude]
        return perm[:count]

    def _best_index(self) -> int:
        return int(np.argmin(self.obj))
