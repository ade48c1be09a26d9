"""Report emission: delimited tables, plot-data files, and rendered figures."""

import csv
import json
import shutil
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .runner import ResultStore

REPORT_SCHEMA = "qtopt-report/1"


class EmptyStoreError(ValueError):
    pass


def _load_store(store) -> tuple[ResultStore, dict, list]:
    store = store if isinstance(store, ResultStore) else ResultStore(store)
    if not store.manifest_path.exists():
        raise EmptyStoreError(f"no manifest in {store.root}; run a benchmark first")
    manifest = store.read_manifest()
    records = list(store.iter_records())
    if not records:
        raise EmptyStoreError(f"store {store.root} holds no run records")
    return store, manifest, records


def emit_report(store, format: str = "csv", with_figures: bool = True) -> list:
    """Write tables, per-iteration plot data and figures under report/.

    ``format`` chooses the table format ("csv" or "json"); plot data is
    always CSV and figures are PNG.  Returns the created file paths.
    """
    if format not in ("csv", "json"):
        raise ValueError("format must be 'csv' or 'json'")
    store, manifest, records = _load_store(store)
    out = store.root / "report"
    series_dir = out / "series"
    figures_dir = out / "figures"
    out.mkdir(exist_ok=True)
    series_dir.mkdir(exist_ok=True)
    created = []

    # tables
    if format == "csv":
        for name in ("summary.csv", "ranks.csv", "wilcoxon_objective.csv"):
            src = store.root / name
            if src.exists():
                shutil.copyfile(src, out / name)
                created.append(out / name)
    else:
        created.append(_write_json_report(store, manifest, records, out))

    # per-iteration series of the representative (first) run of each cell
    cells = {}
    for rec in records:
        key = (rec["image"], rec["fs_us"], rec["algorithm"])
        if key not in cells or rec["run_index"] < cells[key]["run_index"]:
            cells[key] = rec
    for (img, fs, algo), rec in sorted(cells.items()):
        path = series_dir / f"{img}_{fs}_{algo}.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["iteration", "evals", "best_objective", "diversity", "xpl", "xpt"])
            tr = rec["trace"]
            for it in range(len(tr["evals"])):
                w.writerow([
                    it, tr["evals"][it], repr(tr["best_objective"][it]),
                    repr(tr["diversity"][it]), repr(tr["xpl"][it]), repr(tr["xpt"][it]),
                ])
        created.append(path)

    if with_figures:
        figures_dir.mkdir(exist_ok=True)
        created.extend(_render_figures(store, cells, figures_dir))
    return created


def _write_json_report(store: ResultStore, manifest: dict, records: list, out: Path) -> Path:
    summaries = []
    summary_csv = store.root / "summary.csv"
    if summary_csv.exists():
        with open(summary_csv, newline="") as fh:
            for row in csv.DictReader(fh):
                summaries.append({
                    "image": row["image"],
                    "fs_us": int(row["fs_us"]),
                    "algorithm": row["algorithm"],
                    "mean_obj": float(row["mean_obj"]),
                    "rank_obj": float(row["rank_obj"]) if row["rank_obj"] else None,
                    "mean_closeness": float(row["mean_closeness"]),
                    "rank_closeness": float(row["rank_closeness"]) if row["rank_closeness"] else None,
                    "cf": float(row["cf"]),
                    "rank_cf": float(row["rank_cf"]) if row["rank_cf"] else None,
                })
    wilcoxon = None
    wilcoxon_csv = store.root / "wilcoxon_objective.csv"
    if wilcoxon_csv.exists():
        with open(wilcoxon_csv, newline="") as fh:
            wilcoxon = list(csv.reader(fh))
    report = {
        "schema": REPORT_SCHEMA,
        "config_hash": manifest["config_hash"],
        "summaries": summaries,
        "wilcoxon_objective": wilcoxon,
        "runs": [
            {k: rec[k] for k in ("image", "fs_us", "algorithm", "run_index", "seed",
                                 "best_evaluation", "eval_count")}
            for rec in records
        ],
    }
    path = out / "report.json"
    path.write_text(json.dumps(report, sort_keys=True, indent=1))
    return path


def _render_figures(store: ResultStore, cells: dict, figures_dir: Path) -> list:
    created = []
    by_case = {}
    for (img, fs, algo), rec in cells.items():
        by_case.setdefault((img, fs), {})[algo] = rec

    for (img, fs), algo_recs in sorted(by_case.items()):
        for metric, ylabel, stem in (
            ("diversity", "population diversity", "diversity"),
            ("xpl", "exploration %", "exploration"),
        ):
            fig, ax = plt.subplots(figsize=(7, 4.2))
            for algo, rec in sorted(algo_recs.items()):
                ax.plot(rec["trace"]["evals"], rec["trace"][metric], label=algo, lw=1.2)
            ax.set_xlabel("objective evaluations")
            ax.set_ylabel(ylabel)
            ax.set_title(f"{img}, target {fs} bytes")
            ax.legend(fontsize=7, ncol=2)
            fig.tight_layout()
            path = figures_dir / f"{stem}_{img}_{fs}.png"
            fig.savefig(path, dpi=120)
            plt.close(fig)
            created.append(path)

    # mean wall time per algorithm
    timings = store.root / "timings.csv"
    if timings.exists():
        sums: dict[str, list] = {}
        with open(timings, newline="") as fh:
            for row in csv.DictReader(fh):
                sums.setdefault(row["algorithm"], []).append(float(row["wall_time_s"]))
        if sums:
            algos = sorted(sums)
            means = [sum(sums[a]) / len(sums[a]) for a in algos]
            fig, ax = plt.subplots(figsize=(7, 4.2))
            ax.bar(algos, means, color="#4878a8")
            ax.set_ylabel("mean wall time per run (s)")
            ax.tick_params(axis="x", rotation=60, labelsize=7)
            fig.tight_layout()
            path = figures_dir / "walltime.png"
            fig.savefig(path, dpi=120)
            plt.close(fig)
            created.append(path)
    return created


def render_qf_scatter(samples_by_mode: dict, out_path) -> Path:
    """Scatter of PSNR against file size for each sampling mode."""
    fig, axes = plt.subplots(1, len(samples_by_mode), figsize=(4.2 * len(samples_by_mode), 3.6),
                             sharex=True, sharey=True, squeeze=False)
    for ax, (mode, samples) in zip(axes[0], samples_by_mode.items()):
        ax.scatter(samples[:, 1], samples[:, 0], s=1.5, alpha=0.35, linewidths=0)
        ax.set_xscale("log")
        ax.set_xlabel("file size (bytes)")
        ax.set_title(mode, fontsize=9)
    axes[0][0].set_ylabel("PSNR (dB)")
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return out_path
