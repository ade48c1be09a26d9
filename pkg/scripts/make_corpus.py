#!/usr/bin/env python3
"""Regenerate the bundled synthetic benchmark corpus.

Thirteen deterministic 256x256 RGB images mixing smooth shading, multi-scale
texture and hard edges, stored as PNG under src/qtopt/corpus/.  Run from the
repository root:  python scripts/make_corpus.py
"""

from pathlib import Path

import numpy as np
from PIL import Image

SIZE = 256
OUT = Path(__file__).resolve().parent.parent / "src" / "qtopt" / "corpus"

NAMES = [
    "aurora", "boulders", "canyon", "dunes", "embers", "fjord", "grove",
    "harbor", "icefloe", "jungle", "karst", "lagoon", "mesa",
]


def _upsample(grid, size):
    """Bilinear upsample a small square grid to (size, size)."""
    n = grid.shape[0]
    xs = np.linspace(0, n - 1, size)
    i0 = np.clip(xs.astype(int), 0, n - 2)
    f = xs - i0
    rows = grid[i0][:, i0]
    rows_r = grid[i0 + 1][:, i0]
    cols = grid[i0][:, i0 + 1]
    both = grid[i0 + 1][:, i0 + 1]
    fy = f[:, None]
    fx = f[None, :]
    return (
        rows * (1 - fy) * (1 - fx)
        + rows_r * fy * (1 - fx)
        + cols * (1 - fy) * fx
        + both * fy * fx
    )


def value_noise(rng, octaves=5, base=4, persistence=0.55):
    out = np.zeros((SIZE, SIZE))
    amp = 1.0
    for o in range(octaves):
        n = base * (2**o)
        if n >= SIZE:
            break
        out += amp * _upsample(rng.standard_normal((n + 1, n + 1)), SIZE)
        amp *= persistence
    out -= out.min()
    return out / max(out.max(), 1e-9)


def gradient(rng):
    gy, gx = np.mgrid[0:SIZE, 0:SIZE] / (SIZE - 1)
    a, b = rng.uniform(-1, 1, 2)
    g = a * gx + b * gy
    g -= g.min()
    return g / max(g.max(), 1e-9)


def voronoi(rng, npts=40):
    pts = rng.uniform(0, SIZE, size=(npts, 2))
    vals = rng.uniform(0, 1, npts)
    gy, gx = np.mgrid[0:SIZE, 0:SIZE]
    d = (gx[..., None] - pts[:, 0]) ** 2 + (gy[..., None] - pts[:, 1]) ** 2
    return vals[np.argmin(d, axis=-1)]


def waves(rng):
    gy, gx = np.mgrid[0:SIZE, 0:SIZE] / SIZE
    fx, fy = rng.uniform(2, 14, 2)
    ph = rng.uniform(0, 2 * np.pi)
    w = np.sin(2 * np.pi * (fx * gx + fy * gy) + ph)
    w += 0.4 * np.sin(2 * np.pi * (fy * 2.3 * gx - fx * 1.1 * gy))
    w -= w.min()
    return w / max(w.max(), 1e-9)


def disks(rng, n=12):
    gy, gx = np.mgrid[0:SIZE, 0:SIZE]
    img = np.zeros((SIZE, SIZE))
    for _ in range(n):
        cx, cy = rng.uniform(0, SIZE, 2)
        r = rng.uniform(10, 60)
        img = np.maximum(img, ((gx - cx) ** 2 + (gy - cy) ** 2 < r * r) * rng.uniform(0.3, 1))
    return img


def make_image(name: str) -> np.ndarray:
    rng = np.random.default_rng(abs(hash(name)) % (2**32) if False else int.from_bytes(name.encode(), "little") % (2**32))
    layers = [value_noise(rng), gradient(rng), voronoi(rng), waves(rng), disks(rng)]
    weights = rng.dirichlet(np.ones(len(layers)) * 1.2, size=3)  # one mix per channel
    chans = []
    for c in range(3):
        mix = sum(w * lay for w, lay in zip(weights[c], layers))
        mix = mix + 0.05 * rng.standard_normal((SIZE, SIZE))  # fine grain
        lo, hi = np.percentile(mix, [1, 99])
        mix = np.clip((mix - lo) / max(hi - lo, 1e-9), 0, 1)
        chans.append(mix)
    arr = np.stack(chans, axis=-1)
    tint = rng.uniform(0.6, 1.0, 3)
    lift = rng.uniform(0.0, 0.15, 3)
    arr = np.clip(arr * tint + lift, 0, 1)
    return (arr * 255 + 0.5).astype(np.uint8)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name in NAMES:
        arr = make_image(name)
        Image.fromarray(arr).save(OUT / f"{name}.png")
        print(f"wrote {name}.png")


if __name__ == "__main__":
    main()
