"""Access to the bundled synthetic benchmark images."""

from importlib import resources
from pathlib import Path

IMAGE_NAMES = [
    "aurora", "boulders", "canyon", "dunes", "embers", "fjord", "grove",
    "harbor", "icefloe", "jungle", "karst", "lagoon", "mesa",
]


def corpus_dir() -> Path:
    """Directory holding the bundled PNG images."""
    return Path(resources.files(__package__))


def image_path(name: str) -> Path:
    path = corpus_dir() / f"{name}.png"
    if not path.exists():
        raise FileNotFoundError(f"no bundled corpus image named {name!r}")
    return path


def image_paths() -> list[Path]:
    return [image_path(n) for n in IMAGE_NAMES]
