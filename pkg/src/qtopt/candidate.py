"""The 129-gene search representation and the scalar objective.

Genes 0..63 are the luminance table (row-major), 64..127 the chrominance
table, gene 128 the quality factor.  Continuous optimisers hand in real
vectors; ``repair`` rounds and clamps them into the integer genotype at
evaluation time.
"""

import threading
from dataclasses import dataclass, field

import numpy as np

from .codec import PSNR_CAP, PixelImage, QuantTable
from .codec.jfif import EncoderSession
from .codec.image import psnr as _psnr

GENE_COUNT = 129
QF_GENE = 128


@dataclass(frozen=True)
class Bounds:
    """Per-gene inclusive integer bounds."""

    low: np.ndarray
    high: np.ndarray

    def __post_init__(self):
        low = np.asarray(self.low, dtype=np.int64)
        high = np.asarray(self.high, dtype=np.int64)
        if low.shape != high.shape or low.ndim != 1:
            raise ValueError("bounds must be matching 1-d arrays")
        if np.any(low > high):
            raise ValueError("each low bound must not exceed its high bound")
        object.__setattr__(self, "low", low)
        object.__setattr__(self, "high", high)

    @property
    def dim(self) -> int:
        return len(self.low)

    @property
    def span(self) -> np.ndarray:
        return (self.high - self.low).astype(np.float64)

    @classmethod
    def candidate_default(cls) -> "Bounds":
        low = np.ones(GENE_COUNT, dtype=np.int64)
        high = np.full(GENE_COUNT, 255, dtype=np.int64)
        high[QF_GENE] = 99
        return cls(low, high)

    @classmethod
    def uniform(cls, dim: int, low: int, high: int) -> "Bounds":
        return cls(np.full(dim, low, dtype=np.int64), np.full(dim, high, dtype=np.int64))


@dataclass(frozen=True)
class Candidate:
    """An integer genotype: two quantisation tables plus a quality factor."""

    genes: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.genes, dtype=np.int64)
        if g.shape != (GENE_COUNT,):
            raise ValueError(f"expected {GENE_COUNT} genes, got shape {g.shape}")
        if np.any((g[:QF_GENE] < 1) | (g[:QF_GENE] > 255)):
            raise ValueError("table genes must lie in [1, 255]")
        if not 1 <= g[QF_GENE] <= 99:
            raise ValueError("quality-factor gene must lie in [1, 99]")
        object.__setattr__(self, "genes", g)


def decode_candidate(c: Candidate) -> tuple[QuantTable, QuantTable, int]:
    """Unpack a candidate into (luma table, chroma table, quality factor)."""
    g = c.genes
    lqt = QuantTable(g[:64].reshape(8, 8))
    cqt = QuantTable(g[64:128].reshape(8, 8))
    return lqt, cqt, int(g[QF_GENE])


def pack_candidate(lqt: QuantTable, cqt: QuantTable, qf: int) -> Candidate:
    """Inverse of ``decode_candidate``."""
    genes = np.concatenate([
        lqt.entries.reshape(64),
        cqt.entries.reshape(64),
        np.array([qf], dtype=np.int64),
    ])
    return Candidate(genes)


def repair(raw: np.ndarray, bounds: Bounds) -> np.ndarray:
    """Round a real vector half away from zero and clamp it into bounds."""
    x = np.asarray(raw, dtype=np.float64)
    if x.shape != (bounds.dim,):
        raise ValueError(f"expected {bounds.dim} values, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("cannot repair non-finite values")
    rounded = np.sign(x) * np.floor(np.abs(x) + 0.5)
    return np.clip(rounded, bounds.low, bounds.high).astype(np.int64)


def random_candidate(rng: np.random.Generator, bounds: Bounds | None = None) -> Candidate:
    """Draw each gene uniformly from its inclusive bounds."""
    if bounds is None:
        bounds = Bounds.candidate_default()
    genes = rng.integers(bounds.low, bounds.high + 1)
    return Candidate(genes)


@dataclass(frozen=True)
class ObjectiveSpec:
    """Target file size, quality weight and source image for one search."""

    image: PixelImage
    fs_us: int
    lam: float = 10.0

    def __post_init__(self):
        if self.fs_us <= 0:
            raise ValueError("target file size must be positive")
        if self.lam < 0:
            raise ValueError("lambda must be nonnegative")


@dataclass(frozen=True)
class Evaluation:
    objective: float
    file_size: int
    psnr: float
    closeness: int


def objective_value(file_size: int, fs_us: int, psnr_db: float, lam: float) -> float:
    """Size-tracking term plus quality term: |FS_US - FS_O|/FS_US + lam/PSNR."""
    return abs(fs_us - file_size) / fs_us + lam / psnr_db


def evaluate(c: Candidate, spec: ObjectiveSpec, _session: EncoderSession | None = None) -> Evaluation:
    """Encode with the candidate's tables, decode, and score the result.

    Deterministic: the same candidate and spec always yield an identical
    ``Evaluation``.
    """
    lqt, cqt, qf = decode_candidate(c)
    session = _session if _session is not None and _session.image is spec.image else EncoderSession(spec.image)
    encoded, reconstructed = session.encode(lqt, cqt, qf, want_pixels=True)
    quality = _psnr(spec.image, reconstructed)
    fs_o = encoded.size_bytes
    return Evaluation(
        objective=objective_value(fs_o, spec.fs_us, quality, spec.lam),
        file_size=fs_o,
        psnr=quality,
        closeness=abs(fs_o - spec.fs_us),
    )


class JpegObjective:
    """Callable objective over integer gene vectors, with evaluation count.

    Caches the image-side encoder work across calls and serialises the
    counter increment so concurrent evaluations stay consistent.
    """

    def __init__(self, spec: ObjectiveSpec):
        self.spec = spec
        self.bounds = Bounds.candidate_default()
        self.eval_count = 0
        self._lock = threading.Lock()
        self._session = EncoderSession(spec.image)

    def __call__(self, genes: np.ndarray) -> Evaluation:
        result = evaluate(Candidate(genes), self.spec, _session=self._session)
        with self._lock:
            self.eval_count += 1
        return result
