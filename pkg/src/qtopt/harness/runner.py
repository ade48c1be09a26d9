"""Batch experiment orchestration and the on-disk result store."""

import csv
import functools
import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .. import __version__
from ..candidate import ObjectiveSpec
from ..codec import PixelImage
from ..optimizers import OptimizerConfig, make_optimizer
from ..stats import confidence_factor, rank_table, wilcoxon_signed_rank
from .config import ConfigError, ExperimentConfig

RECORD_SCHEMA = "qtopt-run-record/1"
MANIFEST_SCHEMA = "qtopt-manifest/1"


class UnsupportedImageError(ValueError):
    pass


def load_image(path) -> PixelImage:
    """Load an 8-bit PNG or BMP file into a PixelImage."""
    path = Path(path)
    try:
        with Image.open(path) as img:
            fmt = img.format
            if fmt not in ("PNG", "BMP"):
                raise UnsupportedImageError(
                    f"{path}: unsupported format {fmt!r} (need PNG or BMP)"
                )
            if img.mode in ("I", "I;16", "I;16B", "F"):
                raise UnsupportedImageError(f"{path}: only 8-bit samples are supported")
            if img.mode in ("L",):
                arr = np.asarray(img)[:, :, np.newaxis]
            elif img.mode == "LA":
                arr = np.asarray(img.convert("L"))[:, :, np.newaxis]
            else:
                arr = np.asarray(img.convert("RGB"))
    except UnidentifiedImageError as exc:
        raise UnsupportedImageError(f"{path}: not a recognised image file") from exc
    except OSError as exc:
        raise UnsupportedImageError(f"{path}: {exc}") from exc
    return PixelImage(arr)


def derive_seed(master_seed: int, image_id: str, algorithm: str, fs_us: int, run_index: int) -> int:
    """Stable per-run seed from the experiment coordinates."""
    key = f"{master_seed}|{image_id}|{algorithm}|{fs_us}|{run_index}".encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "big") >> 1


@functools.lru_cache(maxsize=32)
def _cached_image(path: str) -> PixelImage:
    return load_image(path)


def _run_one(task: dict) -> dict:
    """Execute one optimisation run; shaped for worker-pool dispatch."""
    image = _cached_image(task["image_path"])
    spec = ObjectiveSpec(image, fs_us=task["fs_us"], lam=task["lam"])
    opt_config = OptimizerConfig(
        algorithm_id=task["algorithm"],
        population_size=task["population_size"],
        eval_budget=task["eval_budget"],
        seed=task["seed"],
        params=task.get("params", {}),
    )
    optimizer = make_optimizer(opt_config)
    result = optimizer.run(spec, record_populations=False)
    return {
        "schema": RECORD_SCHEMA,
        "image": task["image_id"],
        "fs_us": task["fs_us"],
        "run_index": task["run_index"],
        **result.canonical_dict(),
        "wall_time": result.wall_time,
    }


class ResultStore:
    """Directory layout: manifest.json, runs/<image>/<fs>/<algo>/run_NNN.json,
    summary.csv, ranks.csv, wilcoxon_objective.csv, timings.csv."""

    def __init__(self, root):
        self.root = Path(root)

    def record_path(self, image_id: str, fs_us: int, algorithm: str, run_index: int) -> Path:
        return self.root / "runs" / image_id / str(fs_us) / algorithm / f"run_{run_index:03d}.json"

    def write_record(self, record: dict):
        path = self.record_path(
            record["image"], record["fs_us"], record["algorithm"], record["run_index"]
        )
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(record, sort_keys=True, indent=1))

    def read_record(self, image_id, fs_us, algorithm, run_index) -> dict:
        return json.loads(self.record_path(image_id, fs_us, algorithm, run_index).read_text())

    def iter_records(self):
        for path in sorted(self.root.glob("runs/*/*/*/run_*.json")):
            yield json.loads(path.read_text())

    @property
    def manifest_path(self) -> Path:
        return self.root / "manifest.json"

    def read_manifest(self) -> dict:
        return json.loads(self.manifest_path.read_text())


def _resolve_threads(config: ExperimentConfig) -> int:
    if config.threads is not None:
        return max(1, config.threads)
    env = os.environ.get("QTOPT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ConfigError(f"QTOPT_THREADS must be an integer, got {env!r}") from exc
    return os.cpu_count() or 1


def _image_ids(config: ExperimentConfig) -> list[tuple[str, str]]:
    pairs = [(Path(p).stem, p) for p in config.images]
    ids = [i for i, _ in pairs]
    if len(set(ids)) != len(ids):
        raise ConfigError("image file names must be unique (stems collide)")
    return pairs


def run_experiment(config: ExperimentConfig) -> ResultStore:
    """Run the full (image x algorithm x target size x runs) grid.

    Persists one JSON record per run plus per-cell summaries, rank tables,
    the pairwise significance matrix and wall times.  Identical config and
    master seed reproduce identical records (wall times aside).
    """
    for algo in config.algorithms:
        from ..optimizers import ALGORITHMS

        if algo not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {algo!r}")
    image_pairs = _image_ids(config)
    for _, path in image_pairs:
        if not Path(path).exists():
            raise ConfigError(f"image not found: {path}")

    store = ResultStore(config.out_dir)
    store.root.mkdir(parents=True, exist_ok=True)

    tasks = []
    for image_id, image_path in image_pairs:
        for fs in config.fs_us:
            for algo in config.algorithms:
                for ri in range(config.runs):
                    tasks.append({
                        "image_id": image_id,
                        "image_path": str(image_path),
                        "algorithm": algo,
                        "fs_us": int(fs),
                        "run_index": ri,
                        "seed": derive_seed(config.master_seed, image_id, algo, fs, ri),
                        "population_size": config.population_size,
                        "eval_budget": config.eval_budget,
                        "lam": config.lam,
                        "params": config.algorithm_params.get(algo, {}),
                    })

    failures = []
    threads = _resolve_threads(config)
    if threads == 1:
        for task in tasks:
            try:
                store.write_record(_run_one(task))
            except Exception as exc:  # noqa: BLE001 - cell failures are recorded
                failures.append(_failure_entry(task, exc))
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for task, outcome in zip(tasks, pool.map(_run_one_safe, tasks)):
                if isinstance(outcome, dict):
                    store.write_record(outcome)
                else:
                    failures.append(_failure_entry(task, outcome))

    _write_summaries(store, config, failures)
    return store


def _run_one_safe(task):
    try:
        return _run_one(task)
    except Exception as exc:  # noqa: BLE001
        return exc


def _failure_entry(task, exc) -> dict:
    return {
        "image": task["image_id"],
        "fs_us": task["fs_us"],
        "algorithm": task["algorithm"],
        "run_index": task["run_index"],
        "error": f"{type(exc).__name__}: {exc}",
    }


def _fmt(x) -> str:
    return repr(float(x))


def _write_summaries(store: ResultStore, config: ExperimentConfig, failures: list):
    image_ids = [i for i, _ in _image_ids(config)]
    algos = config.algorithms
    cases = [(img, fs) for img in image_ids for fs in config.fs_us]

    # collect per-cell run statistics
    cell_stats: dict[tuple, dict] = {}
    for img, fs in cases:
        for algo in algos:
            objectives, closes, walls = [], [], []
            for ri in range(config.runs):
                path = store.record_path(img, fs, algo, ri)
                if not path.exists():
                    continue
                rec = json.loads(path.read_text())
                objectives.append(rec["best_evaluation"]["objective"])
                closes.append(rec["best_evaluation"]["closeness"])
                walls.append(rec["wall_time"])
            if objectives:
                cell_stats[(img, fs, algo)] = {
                    "mean_obj": float(np.mean(objectives)),
                    "mean_closeness": float(np.mean(closes)),
                    "cf": confidence_factor(closes, config.cs),
                    "wall_times": walls,
                }

    complete = all((img, fs, a) in cell_stats for img, fs in cases for a in algos)
    ranks = {}
    if complete and cases:
        for metric, direction in (("mean_obj", "min"), ("mean_closeness", "min"), ("cf", "max")):
            matrix = np.array(
                [[cell_stats[(img, fs, a)][metric] for a in algos] for img, fs in cases]
            )
            ranks[metric] = rank_table(matrix, direction=direction)

    # summary.csv
    with open(store.root / "summary.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([
            "image", "fs_us", "algorithm", "mean_obj", "rank_obj",
            "mean_closeness", "rank_closeness", "cf", "rank_cf",
        ])
        for ci, (img, fs) in enumerate(cases):
            for ai, algo in enumerate(algos):
                stats = cell_stats.get((img, fs, algo))
                if stats is None:
                    continue
                row = [img, fs, algo, _fmt(stats["mean_obj"])]
                row.append(_fmt(ranks["mean_obj"].per_case[ci, ai]) if ranks else "")
                row.append(_fmt(stats["mean_closeness"]))
                row.append(_fmt(ranks["mean_closeness"].per_case[ci, ai]) if ranks else "")
                row.append(_fmt(stats["cf"]))
                row.append(_fmt(ranks["cf"].per_case[ci, ai]) if ranks else "")
                w.writerow(row)

    # ranks.csv (averages and overall order per metric)
    if ranks:
        with open(store.root / "ranks.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow([
                "algorithm",
                "avg_rank_obj", "overall_rank_obj",
                "avg_rank_closeness", "overall_rank_closeness",
                "avg_rank_cf", "overall_rank_cf",
            ])
            for ai, algo in enumerate(algos):
                w.writerow([
                    algo,
                    _fmt(ranks["mean_obj"].average[ai]), _fmt(ranks["mean_obj"].overall[ai]),
                    _fmt(ranks["mean_closeness"].average[ai]), _fmt(ranks["mean_closeness"].overall[ai]),
                    _fmt(ranks["cf"].average[ai]), _fmt(ranks["cf"].overall[ai]),
                ])

    # pairwise significance on per-case mean objectives
    wilcoxon_state = "skipped (needs at least 5 complete cases)"
    if complete and len(cases) >= 5 and len(algos) >= 2:
        matrix = {
            a: np.array([cell_stats[(img, fs, a)]["mean_obj"] for img, fs in cases])
            for a in algos
        }
        with open(store.root / "wilcoxon_objective.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["algorithm"] + algos + ["wins", "ties", "losses"])
            for a in algos:
                verdicts = []
                for b in algos:
                    if a == b:
                        verdicts.append("")
                    else:
                        verdicts.append(wilcoxon_signed_rank(matrix[a], matrix[b]).verdict)
                wins = verdicts.count("+")
                losses = verdicts.count("-")
                ties = verdicts.count("=")
                w.writerow([a] + verdicts + [wins, ties, losses])
        wilcoxon_state = "computed"

    # wall times live in their own file, outside determinism checks
    with open(store.root / "timings.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["image", "fs_us", "algorithm", "run_index", "wall_time_s"])
        for img, fs in cases:
            for algo in algos:
                stats = cell_stats.get((img, fs, algo))
                if stats is None:
                    continue
                for ri, wt in enumerate(stats["wall_times"]):
                    w.writerow([img, fs, algo, ri, _fmt(wt)])

    manifest = {
        "schema": MANIFEST_SCHEMA,
        "version": __version__,
        "config": config.to_dict(),
        "config_hash": config.config_hash(),
        "wilcoxon": wilcoxon_state,
        "failures": failures,
        "complete": complete and not failures,
    }
    store.manifest_path.write_text(json.dumps(manifest, sort_keys=True, indent=1))


def store_digest(root) -> str:
    """Content hash of a result store, excluding wall-time information."""
    root = Path(root)
    digest = hashlib.sha256()
    for path in sorted(root.rglob("*")):
        if not path.is_file():
            continue
        rel = path.relative_to(root).as_posix()
        if rel == "timings.csv" or rel.startswith("report/"):
            continue
        digest.update(rel.encode())
        if path.suffix == ".json":
            data = json.loads(path.read_text())
            data.pop("wall_time", None)
            digest.update(json.dumps(data, sort_keys=True).encode())
        else:
            digest.update(path.read_bytes())
    return digest.hexdigest()
