import numpy as np
import pytest
import scipy.stats

from qtopt.candidate import Bounds, repair
from qtopt.optimizers import (
    ALGORITHM_IDS,
    ALGORITHMS,
    OptimizerConfig,
    make_optimizer,
    mantegna_steps,
    run,
)
from qtopt.optimizers.bees import ArtificialBeeColony
from qtopt.optimizers.de import JADE, DifferentialEvolution
from qtopt.optimizers.ga import GeneticAlgorithm
from qtopt.optimizers.metaphor import GreyWolfOptimizer, WhaleOptimizer

DIM = 6
BOUNDS = Bounds.uniform(DIM, 1, 255)
TARGET = np.array([40.0, 200.0, 128.0, 17.0, 222.0, 90.0])


def sphere(genes):
    return float(np.sum((genes - TARGET) ** 2))


def cfg(algo, **kw):
    kw.setdefault("population_size", 20)
    kw.setdefault("eval_budget", 200)
    kw.setdefault("seed", 11)
    return OptimizerConfig(algorithm_id=algo, **kw)


# --- construction ------------------------------------------------------------


def test_defaults_match_documented_settings():
    c = OptimizerConfig(algorithm_id="GA")
    assert c.population_size == 20 and c.eval_budget == 1000


def test_same_seed_same_initial_population():
    a = make_optimizer(cfg("PSO"), BOUNDS)
    b = make_optimizer(cfg("PSO"), BOUNDS)
    assert np.array_equal(a.pos, b.pos)


def test_budget_below_population_rejected():
    with pytest.raises(ValueError):
        OptimizerConfig(algorithm_id="GA", population_size=20, eval_budget=10)


def test_unknown_algorithm_rejected():
    with pytest.raises(ValueError):
        make_optimizer(cfg("NOPE"), BOUNDS)


def test_unknown_params_rejected():
    with pytest.raises(ValueError):
        make_optimizer(cfg("DE", params={"warp_factor": 9}), BOUNDS)


# --- GA family ---------------------------------------------------------------


def test_selection_only_ga_never_worsens_population():
    c = cfg("GA", params={"crossover_prob": 0.0, "mutation_prob": 0.0})
    opt = make_optimizer(c, BOUNDS)
    res = run(opt, sphere)
    # with crossover and mutation off, survivor selection can only keep or
    # improve the sorted objective multiset
    assert all(a >= b for a, b in zip(res.best_trace, res.best_trace[1:]))
    assert res.best_objective <= res.best_trace[0]


def test_one_point_crossover_children_stay_in_parent_set():
    opt = make_optimizer(cfg("GA", params={"crossover_points": 1}), BOUNDS)
    p1 = np.full(DIM, 10.0)
    p2 = p1.copy()
    p2[3] = 99.0  # parents differ in exactly one gene
    for _ in range(20):
        c1, c2 = opt.crossover(p1, p2)
        for child in (c1, c2):
            assert np.array_equal(child, p1) or np.array_equal(child, p2)


def test_tournament_prefers_better_then_lower_index():
    opt = make_optimizer(cfg("GA", params={"tournament_size": 2}), BOUNDS)
    opt.obj = np.array([0.7, 0.3, 0.3, 0.9] + [1.0] * 16)
    seen = {opt.tournament() for _ in range(300)}
    assert 3 not in seen or 0 in seen  # winners are always objective-minimal
    # force a tie: indices 1 and 2 share the minimum; lower index must win
    opt.obj = np.array([0.3, 0.3] + [0.3] * 18)
    assert opt.tournament() == min(
        opt.rng.integers(0, 20, size=2)
    ) or True  # direct contract below
    # deterministic check of the tie rule on a crafted two-entrant draw
    class TieRng:
        def integers(self, low, high=None, size=None):
            return np.array([5, 2])

    opt.rng = TieRng()
    opt.obj = np.full(20, 0.5)
    assert opt.tournament() == 2


# --- DE family ---------------------------------------------------------------


def test_de_mutant_with_zero_f_is_x_r1():
    opt = make_optimizer(cfg("DE"), BOUNDS)
    opt.obj = np.zeros(20)
    state = opt.rng.bit_generator.state
    mutant = opt._mutant(0, 0.0, "rand/1")
    opt.rng.bit_generator.state = state
    r1 = opt._distinct_indices(0, 3)[0]
    assert np.array_equal(mutant, opt.pos[r1])


def test_de_crossover_with_cr_one_is_mutant():
    opt = make_optimizer(cfg("DE"), BOUNDS)
    target = np.zeros(DIM)
    mutant = np.arange(DIM, dtype=float)
    assert np.array_equal(opt._crossover(target, mutant, 1.0), mutant)


def test_de_members_never_worsen():
    for algo in ("DE", "SADE", "JADE"):
        opt = make_optimizer(cfg(algo, eval_budget=300), BOUNDS)
        opt._objective = sphere
        opt._budget, opt._used = 300, 0
        opt._best_obj, opt._best_genes, opt._best_eval = np.inf, None, None
        opt.obj = opt._evaluate(opt.pos)
        for _ in range(5):
            before = opt.obj.copy()
            opt.step()
            assert np.all(opt.obj <= before + 1e-12), algo


def test_jade_reduces_to_current_to_best_without_archive():
    rng = np.random.default_rng(3)
    x_i, x_r1, x_r2 = rng.normal(size=(3, DIM))
    best = rng.normal(size=DIM)
    f = 0.62
    de_form = x_i + f * (best - x_i) + f * (x_r1 - x_r2)
    assert np.allclose(JADE.mutant_formula(x_i, best, x_r1, x_r2, f), de_form)


def test_sap_de_population_never_below_four():
    opt = make_optimizer(cfg("SAP_DE", eval_budget=400), BOUNDS)
    res = run(opt, sphere)
    assert all(len(p) >= 4 for p in res.populations)


# --- PSO family --------------------------------------------------------------


def test_pso_ballistic_limit():
    c = cfg("PSO", params={"c1": 0.0, "c2": 0.0, "w_min": 1.0, "w_max": 1.0})
    opt = make_optimizer(c, BOUNDS)
    opt.obj = np.zeros(20)
    opt._used, opt._budget = 20, 200
    opt._sync_memory(20)
    opt.vel = np.full((20, DIM), 3.0)
    before = opt.vel.copy()
    opt._velocity_update()
    assert np.allclose(opt.vel, before)


def test_pso_attraction_vanishes_at_consensus():
    opt = make_optimizer(cfg("PSO", params={"w_min": 0.5, "w_max": 0.5}), BOUNDS)
    x = np.tile(np.linspace(10, 60, DIM), (20, 1))
    opt.pos = x.copy()
    opt.obj = np.zeros(20)
    opt.pbest = x.copy()
    opt.pbest_obj = np.zeros(20)
    opt.gbest = x[0].copy()
    opt.gbest_obj = 0.0
    opt.vel = np.full((20, DIM), 2.0)
    opt._used, opt._budget = 20, 200
    opt._velocity_update()
    assert np.allclose(opt.vel, 0.5 * 2.0)


def test_cpso_logistic_map_iterates():
    opt = make_optimizer(cfg("CPSO"), BOUNDS)
    opt._cx = np.full(DIM, 0.3)
    cx1 = 4 * opt._cx * (1 - opt._cx)
    assert np.allclose(cx1, 0.84)
    cx2 = 4 * cx1 * (1 - cx1)
    assert np.allclose(cx2, 0.5376)


def test_hpso_reinitialises_stagnant_velocity():
    opt = make_optimizer(cfg("HPSO"), BOUNDS)
    x = np.tile(np.full(DIM, 100.0), (20, 1))
    opt.pos = x.copy()
    opt.obj = np.zeros(20)
    opt.pbest = x.copy()
    opt.pbest_obj = np.zeros(20)
    opt.gbest = x[0].copy()
    opt.gbest_obj = 0.0
    opt._used, opt._budget = 0, 1000
    opt._velocity_update()  # p = g = x so raw velocity is zero -> stagnant
    assert np.any(opt.vel != 0.0)
    assert np.all(np.abs(opt.vel) <= opt.params["reinit_initial"] * opt.v_max + 1e-12)


def test_ppso_coefficients_follow_the_phase():
    opt = make_optimizer(cfg("PPSO"), BOUNDS)
    opt.theta = np.full(20, np.pi / 3)
    x = np.zeros((20, DIM))
    opt.pos = x.copy()
    opt.obj = np.zeros(20)
    opt.pbest = np.ones((20, DIM))
    opt.pbest_obj = np.zeros(20)
    opt.gbest = np.full(DIM, 2.0)
    opt.gbest_obj = 0.0
    opt._velocity_update()
    cos_t, sin_t = np.cos(np.pi / 3), np.sin(np.pi / 3)
    expected = abs(cos_t) ** (2 * sin_t) * 1.0 + abs(sin_t) ** (2 * cos_t) * 2.0
    vmax = cos_t**2 * opt.span
    assert np.allclose(opt.vel, np.minimum(expected, vmax))


# --- ES family ---------------------------------------------------------------


def test_es_zero_sigma_clones_parents():
    opt = make_optimizer(cfg("ES", params={"sigma_fraction": 0.0}), BOUNDS)
    res = run(opt, sphere)
    # offspring are exact copies, so the best never changes after init
    assert res.best_objective == res.best_trace[0]


def test_es_plus_selection_keeps_incumbent_best():
    opt = make_optimizer(cfg("ES", eval_budget=400), BOUNDS)
    res = run(opt, sphere)
    assert all(a >= b for a, b in zip(res.best_trace, res.best_trace[1:]))
    assert min(res.best_trace) == res.best_objective


def test_mantegna_steps_are_heavy_tailed():
    rng = np.random.default_rng(42)
    steps = mantegna_steps(rng, 1.5, 1_000_000)
    assert scipy.stats.kurtosis(steps, fisher=False) > 10.0


# --- ABC ---------------------------------------------------------------------


def test_abc_zero_phi_keeps_source_and_counts_a_trial():
    opt = make_optimizer(cfg("ABC"), BOUNDS)
    opt._objective = sphere
    opt._budget, opt._used = 100, 0
    opt._best_obj, opt._best_genes, opt._best_eval = np.inf, None, None
    opt.obj = opt._evaluate(opt.pos)

    class ZeroPhiRng:
        def __init__(self, inner):
            self._inner = inner

        def uniform(self, *a, **k):
            return 0.0

        def __getattr__(self, name):
            return getattr(self._inner, name)

    opt.rng = ZeroPhiRng(opt.rng)
    before = opt.pos[0].copy()
    improved = opt._try_source(0)
    assert not improved
    assert np.array_equal(opt.pos[0], before)
    assert opt.trials[0] == 1


def test_abc_onlooker_probabilities_are_fitness_proportional():
    objs = np.array([0.0, 1.0, 3.0, 9.0])
    probs = ArtificialBeeColony.selection_probabilities(objs)
    fitness = 1 / (1 + objs)
    assert np.allclose(probs, fitness / fitness.sum())
    rng = np.random.default_rng(5)
    draws = rng.choice(4, size=100_000, p=probs)
    counts = np.bincount(draws, minlength=4)
    chi2 = scipy.stats.chisquare(counts, probs * 100_000)
    assert chi2.pvalue > 1e-4


def test_abc_limit_zero_scouts_every_stale_source():
    opt = make_optimizer(cfg("ABC", eval_budget=400, params={"limit": 0}), BOUNDS)
    opt._objective = sphere
    opt._budget, opt._used = 400, 0
    opt._best_obj, opt._best_genes, opt._best_eval = np.inf, None, None
    opt.obj = opt._evaluate(opt.pos)
    opt.step()
    assert np.all(opt.trials == 0)


# --- HS ----------------------------------------------------------------------


def test_hs_pure_memory_resamples_memory_values():
    c = cfg("HS", params={"memory_rate": 1.0, "pitch_rate": 0.0})
    opt = make_optimizer(c, BOUNDS)
    opt.pos = np.tile(np.array([7.0, 13.0, 99.0, 4.0, 250.0, 31.0]), (20, 1))
    opt._objective = sphere
    opt._budget, opt._used = 100, 0
    opt._best_obj, opt._best_genes, opt._best_eval = np.inf, None, None
    opt.obj = opt._evaluate(opt.pos)
    opt.step()
    for g in range(DIM):
        assert set(np.unique(opt.pos[:, g])) == {opt.pos[0, g]}


def test_hs_population_best_never_worsens():
    opt = make_optimizer(cfg("HS", eval_budget=300), BOUNDS)
    res = run(opt, sphere)
    assert all(a >= b for a, b in zip(res.best_trace, res.best_trace[1:]))


# --- metaphor family ---------------------------------------------------------


def test_gwo_converged_fixed_point():
    x = np.array([5.0, -3.0, 8.0])
    pull = GreyWolfOptimizer.leader_pull(x, x, aa=0.7, cc=1.0)
    assert np.allclose(pull, x)


def test_woa_spiral_at_zero_distance_returns_best():
    best = np.array([4.0, 4.0, 4.0])
    assert np.allclose(WhaleOptimizer.spiral_move(best, best, 1.0, 0.25), best)
    # cos(2 pi l) = 1 at l = 0 keeps any point on the ray through the best
    pos = np.array([1.0, 2.0, 3.0])
    moved = WhaleOptimizer.spiral_move(best, pos, 1.0, 0.0)
    assert np.allclose(moved, np.abs(best - pos) + best)


def test_sca_zero_r1_keeps_positions():
    opt = make_optimizer(cfg("SCA", params={"r1_initial": 0.0}), BOUNDS)
    opt._objective = sphere
    opt._budget, opt._used = 100, 0
    opt._best_obj, opt._best_genes, opt._best_eval = np.inf, None, None
    opt.obj = opt._evaluate(opt.pos)
    before = opt.pos.copy()
    opt.step()
    assert np.allclose(opt.pos, before)


# --- cross-cutting contracts ---------------------------------------------------


@pytest.mark.parametrize("algo", ALGORITHM_IDS)
def test_budget_and_monotone_trace_and_bounds(algo):
    calls = {"n": 0}

    def guarded(genes):
        calls["n"] += 1
        assert np.all(genes >= BOUNDS.low) and np.all(genes <= BOUNDS.high)
        assert genes.dtype == np.int64
        return sphere(genes)

    opt = make_optimizer(cfg(algo, eval_budget=157), BOUNDS)
    res = run(opt, guarded)
    assert res.eval_count == 157
    assert calls["n"] == 157
    assert all(a >= b for a, b in zip(res.best_trace, res.best_trace[1:]))
    assert res.eval_trace[-1] == 157


@pytest.mark.parametrize("algo", ALGORITHM_IDS)
def test_seeded_determinism(algo):
    a = run(make_optimizer(cfg(algo, seed=99), BOUNDS), sphere)
    b = run(make_optimizer(cfg(algo, seed=99), BOUNDS), sphere)
    assert a.canonical_json() == b.canonical_json()
    c = run(make_optimizer(cfg(algo, seed=100), BOUNDS), sphere)
    assert c.canonical_json() != a.canonical_json()


def test_all_eighteen_algorithms_registered():
    assert len(ALGORITHMS) == 18
