import numpy as np
import pytest

from qtopt.candidate import (
    Bounds,
    Candidate,
    Evaluation,
    JpegObjective,
    ObjectiveSpec,
    decode_candidate,
    evaluate,
    objective_value,
    pack_candidate,
    random_candidate,
    repair,
)
from qtopt.codec import PSNR_CAP, PixelImage


def test_all_16_candidate_unpacks_to_flat_tables():
    genes = np.full(129, 16, dtype=np.int64)
    genes[128] = 50
    lqt, cqt, qf = decode_candidate(Candidate(genes))
    assert np.all(lqt.entries == 16) and np.all(cqt.entries == 16) and qf == 50


def test_layout_is_row_major():
    genes = np.ones(129, dtype=np.int64)
    genes[:64] = np.arange(1, 65)
    genes[128] = 50
    lqt, _, _ = decode_candidate(Candidate(genes))
    assert lqt.entries[0].tolist() == [1, 2, 3, 4, 5, 6, 7, 8]
    assert lqt.entries[7, 7] == 64


def test_pack_decode_round_trip():
    rng = np.random.default_rng(17)
    for _ in range(100):
        c = random_candidate(rng)
        assert np.array_equal(pack_candidate(*decode_candidate(c)).genes, c.genes)


def test_candidate_invariants_enforced():
    bad = np.full(129, 16, dtype=np.int64)
    bad[128] = 100
    with pytest.raises(ValueError):
        Candidate(bad)
    bad2 = np.full(129, 0, dtype=np.int64)
    bad2[128] = 50
    with pytest.raises(ValueError):
        Candidate(bad2)


def test_repair_rounds_and_clamps():
    b = Bounds.candidate_default()
    raw = np.full(129, 16.4)
    raw[1] = -3.0
    raw[128] = 150.7
    fixed = repair(raw, b)
    assert fixed[0] == 16
    assert fixed[1] == 1
    assert fixed[128] == 99


def test_repair_half_away_from_zero_and_idempotent():
    b = Bounds.uniform(4, -100, 100)
    raw = np.array([2.5, -2.5, 0.49, -0.49])
    fixed = repair(raw, b)
    assert fixed.tolist() == [3, -3, 0, 0]
    assert np.array_equal(repair(fixed.astype(float), b), fixed)


def test_repair_rejects_non_finite():
    b = Bounds.candidate_default()
    raw = np.full(129, 10.0)
    raw[5] = np.nan
    with pytest.raises(ValueError):
        repair(raw, b)


def test_random_candidate_degenerate_bounds():
    low = np.full(129, 5, dtype=np.int64)
    c = random_candidate(np.random.default_rng(0), Bounds(low, low))
    assert np.all(c.genes == 5)


def test_random_candidate_qf_mean_is_uniform():
    rng = np.random.default_rng(123)
    draws = np.array([random_candidate(rng).genes[128] for _ in range(100_000)])
    assert abs(draws.mean() - 50.0) < 1.0
    assert draws.min() >= 1 and draws.max() <= 99


def test_objective_formula():
    # same size as target, PSNR 20 dB, lambda 10 -> 0 + 10/20
    assert objective_value(10_000, 10_000, 20.0, 10.0) == pytest.approx(0.5)


def test_objective_monotone_in_size_distance():
    vals = [objective_value(10_000 + d, 10_000, 25.0, 10.0) for d in (0, 10, 250, 4000)]
    assert vals == sorted(vals)
    down = [objective_value(10_000 - d, 10_000, 25.0, 10.0) for d in (0, 10, 250, 4000)]
    assert down == sorted(down)


@pytest.fixture(scope="module")
def small_spec():
    rng = np.random.default_rng(9)
    arr = np.clip(
        np.kron(rng.integers(0, 256, (8, 8, 3)), np.ones((8, 8, 1)))
        + rng.normal(0, 12, (64, 64, 3)),
        0,
        255,
    ).astype(np.uint8)
    return ObjectiveSpec(PixelImage(arr), fs_us=3000, lam=10.0)


def test_evaluate_is_deterministic_and_consistent(small_spec):
    c = random_candidate(np.random.default_rng(4))
    a = evaluate(c, small_spec)
    b = evaluate(c, small_spec)
    assert a == b
    assert a.closeness == abs(a.file_size - small_spec.fs_us)
    assert a.objective >= 0
    assert a.objective == pytest.approx(
        objective_value(a.file_size, small_spec.fs_us, a.psnr, small_spec.lam), abs=1e-12
    )


def test_lossless_path_hits_psnr_sentinel():
    # a uniform image survives any table: all AC coefficients are zero and
    # the DC level reconstructs exactly, so PSNR hits the cap
    img = PixelImage(np.full((16, 16, 3), 128, dtype=np.uint8))
    spec = ObjectiveSpec(img, fs_us=1000, lam=10.0)
    genes = np.full(129, 16, dtype=np.int64)
    genes[128] = 50
    ev = evaluate(Candidate(genes), spec)
    assert ev.psnr == PSNR_CAP
    assert ev.objective == pytest.approx(
        abs(spec.fs_us - ev.file_size) / spec.fs_us + spec.lam / PSNR_CAP
    )


def test_objective_counter_increments_by_one(small_spec):
    obj = JpegObjective(small_spec)
    c = random_candidate(np.random.default_rng(1))
    before = obj.eval_count
    out = obj(c.genes)
    assert isinstance(out, Evaluation)
    assert obj.eval_count == before + 1


def test_spec_validation():
    img = PixelImage(np.zeros((8, 8, 3), dtype=np.uint8))
    with pytest.raises(ValueError):
        ObjectiveSpec(img, fs_us=0)
    with pytest.raises(ValueError):
        ObjectiveSpec(img, fs_us=100, lam=-1)
