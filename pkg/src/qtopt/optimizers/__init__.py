"""Eighteen population-based search strategies behind one interface."""

import numpy as np

from ..candidate import Bounds
from .base import OptimizerConfig, PopulationOptimizer, RunResult
from .bees import ArtificialBeeColony
from .de import JADE, DifferentialEvolution, SelfAdaptiveDE, SelfAdaptivePopulationDE
from .es import EvolutionStrategy, LevyEvolutionStrategy, mantegna_steps
from .ga import GeneticAlgorithm, MemeticAlgorithm
from .harmony import HarmonySearch
from .metaphor import GreyWolfOptimizer, SineCosineAlgorithm, WhaleOptimizer
from .pso import (
    ChaosPSO,
    ComprehensiveLearningPSO,
    HierarchicalPSO,
    ParticleSwarm,
    PhasorPSO,
)

ALGORITHMS: dict[str, type[PopulationOptimizer]] = {
    "GA": GeneticAlgorithm,
    "DE": DifferentialEvolution,
    "MA": MemeticAlgorithm,
    "PSO": ParticleSwarm,
    "ES": EvolutionStrategy,
    "ABC": ArtificialBeeColony,
    "LEVY_ES": LevyEvolutionStrategy,
    "SADE": SelfAdaptiveDE,
    "SAP_DE": SelfAdaptivePopulationDE,
    "JADE": JADE,
    "CPSO": ChaosPSO,
    "CLPSO": ComprehensiveLearningPSO,
    "HPSO": HierarchicalPSO,
    "PPSO": PhasorPSO,
    "HS": HarmonySearch,
    "GWO": GreyWolfOptimizer,
    "WOA": WhaleOptimizer,
    "SCA": SineCosineAlgorithm,
}

ALGORITHM_IDS = list(ALGORITHMS)


def make_optimizer(config: OptimizerConfig, bounds: Bounds | None = None) -> PopulationOptimizer:
    """Build a seeded, initialised optimiser from its configuration."""
    if config.algorithm_id not in ALGORITHMS:
        raise ValueError(
            f"unknown algorithm {config.algorithm_id!r}; choose from {ALGORITHM_IDS}"
        )
    if bounds is None:
        bounds = Bounds.candidate_default()
    return ALGORITHMS[config.algorithm_id](config, bounds)


def run(optimizer: PopulationOptimizer, objective, record_populations: bool = True) -> RunResult:
    """Run one optimisation to budget exhaustion.

    ``objective`` is either an ``ObjectiveSpec`` (JPEG search) or any
    callable mapping an integer gene vector to a scalar objective.
    """
    return optimizer.run(objective, record_populations=record_populations)


__all__ = [
    "ALGORITHMS",
    "ALGORITHM_IDS",
    "OptimizerConfig",
    "PopulationOptimizer",
    "RunResult",
    "make_optimizer",
    "run",
    "mantegna_steps",
]
