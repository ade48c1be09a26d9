"""Experiment configuration: validation, canonical form, and hashing."""

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path


class ConfigError(ValueError):
    """Invalid experiment configuration (CLI exit code 2)."""


@dataclass
class ExperimentConfig:
    images: list
    algorithms: list
    out_dir: str
    fs_us: list = field(default_factory=lambda: [10_000, 50_000])
    runs: int = 30
    population_size: int = 20
    eval_budget: int = 1000
    lam: float = 10.0
    cs: int = 10_000
    master_seed: int = 0
    threads: int | None = None
    algorithm_params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.images:
            raise ConfigError("at least one image is required")
        if not self.algorithms:
            raise ConfigError("at least one algorithm is required")
        for name, value in [
            ("runs", self.runs),
            ("population_size", self.population_size),
            ("eval_budget", self.eval_budget),
            ("cs", self.cs),
        ]:
            if value <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.lam < 0:
            raise ConfigError("lambda must be nonnegative")
        if not self.fs_us or any(f <= 0 for f in self.fs_us):
            raise ConfigError("every target file size must be positive")
        self.images = [str(p) for p in self.images]
        self.algorithms = list(self.algorithms)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_json_file(cls, path) -> "ExperimentConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return asdict(self)

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()
