"""Random-sampling study of how tables and quality factor cover the
PSNR / file-size plane."""

import numpy as np

from ..codec import PixelImage, QuantTable, psnr
from ..codec.jfif import EncoderSession

MODES = ("perm_fixed_qf", "perm_random_qf", "noperm_random_qf")


def _random_table(rng: np.random.Generator, unique: bool) -> QuantTable:
    if unique:
        # a permutation-derived table: 64 distinct step sizes
        values = rng.choice(np.arange(1, 256), size=64, replace=False)
    else:
        values = rng.integers(1, 256, size=64)
    return QuantTable(values.reshape(8, 8))


def analyze_qf(
    image: PixelImage,
    n_samples: int = 10_000,
    mode: str = "noperm_random_qf",
    seed: int = 0,
) -> np.ndarray:
    """Sample random table/quality settings and measure (psnr, file_size).

    Modes: ``perm_fixed_qf`` draws unique-entry tables with the quality
    factor pinned at 50; ``perm_random_qf`` adds a random quality factor;
    ``noperm_random_qf`` allows duplicate entries too (full coverage).
    Returns an (n_samples, 2) array of rows (psnr_db, file_size_bytes).
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    rng = np.random.default_rng(seed)
    session = EncoderSession(image)
    out = np.empty((n_samples, 2))
    unique = mode in ("perm_fixed_qf", "perm_random_qf")
    for i in range(n_samples):
        lqt = _random_table(rng, unique)
        cqt = _random_table(rng, unique)
        qf = 50 if mode == "perm_fixed_qf" else int(rng.integers(1, 100))
        encoded, recon = session.encode(lqt, cqt, qf, want_pixels=True)
        out[i, 0] = psnr(image, recon)
        out[i, 1] = encoded.size_bytes
    return out


def shared_grid_edges(sample_sets, bins: int = 50):
    """Common (psnr, log10 size) bin edges spanning all given sample sets."""
    allpsnr = np.concatenate([s[:, 0] for s in sample_sets])
    allsize = np.log10(np.concatenate([s[:, 1] for s in sample_sets]))
    pad = 1e-9
    psnr_edges = np.linspace(allpsnr.min() - pad, allpsnr.max() + pad, bins + 1)
    size_edges = np.linspace(allsize.min() - pad, allsize.max() + pad, bins + 1)
    return psnr_edges, size_edges


def occupied_cells(samples: np.ndarray, psnr_edges, size_edges) -> int:
    """Number of nonempty cells of the (psnr, log10 size) histogram."""
    hist, _, _ = np.histogram2d(samples[:, 0], np.log10(samples[:, 1]),
                                bins=(psnr_edges, size_edges))
    return int(np.count_nonzero(hist))
