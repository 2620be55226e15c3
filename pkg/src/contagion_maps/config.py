from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

MEASURES = ("geometry", "dimensionality", "topology")


class ConfigError(ValueError):
    pass


def grid(start: float, stop: float, step: float, digits: int = 6) -> list[float]:
    """Inclusive decimal grid without accumulated float drift."""
    count = int(round((stop - start) / step)) + 1
    return [round(start + k * step, digits) for k in range(count)]


@dataclass
class SweepConfig:
    n: int = 20
    p2: int = 2
    dng: list[int] = field(default_factory=lambda: list(range(26)))
    T: list[float] = field(default_factory=lambda: grid(0.0, 1.0, 0.01))
    gamma: list[float] = field(default_factory=lambda: [0.0])
    variant: str = "symmetric"
    rng_seed: int = 0
    measures: list[str] = field(default_factory=lambda: ["geometry", "dimensionality"])
    ground: str = "linf"
    wasserstein_q: float = 2.0
    delta: float = 0.6
    anc_q_t: int | None = None      # None: q_max(N, dG)
    anc_width: int = 0
    output_dir: str = "runs/sweep"
    cache_dir: str | None = None
    workers: int = 1

    def validate(self) -> "SweepConfig":
        if not self.dng or not self.T or not self.gamma:
            raise ConfigError("dng, T and gamma lists must be nonempty")
        if not self.measures:
            raise ConfigError("at least one measure must be enabled")
        bad = set(self.measures) - set(MEASURES)
        if bad:
            raise ConfigError(f"unknown measures {sorted(bad)}; expected {MEASURES}")
        if any(not 0.0 <= t <= 1.0 for t in self.T):
            raise ConfigError("thresholds must lie in [0, 1]")
        if any(g < 0 for g in self.gamma) or any(d < 0 for d in self.dng):
            raise ConfigError("gamma and dng must be nonnegative")
        if self.variant not in ("regular", "reflected", "symmetric"):
            raise ConfigError(f"unknown variant {self.variant!r}")
        if self.ground not in ("linf", "l2"):
            raise ConfigError(f"unknown ground metric {self.ground!r}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if not 0 < self.delta < 1:
            raise ConfigError("delta must lie in (0, 1)")
        return self

    def scientific(self) -> dict:
        """Fields that determine the results (excludes paths and worker count)."""
        d = asdict(self)
        for key in ("output_dir", "cache_dir", "workers"):
            d.pop(key)
        return d

    def config_hash(self) -> str:
        blob = json.dumps(self.scientific(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def updated(self, **overrides) -> "SweepConfig":
        known = {f.name for f in fields(self)}
        bad = set(overrides) - known
        if bad:
            raise ConfigError(f"unknown config keys {sorted(bad)}")
        d = asdict(self)
        d.update({k: v for k, v in overrides.items() if v is not None})
        return SweepConfig(**d)

    @classmethod
    def from_json(cls, path) -> "SweepConfig":
        data = json.loads(Path(path).read_text())
        return cls().updated(**data)

    def to_json(self, path) -> None:
        Path(path).write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n")


def gamma_study_defaults() -> SweepConfig:
    """dG = 8, dNG = 2, one threshold per predicted regime, gamma = 0..3."""
    return SweepConfig(dng=[2], T=[0.05, 0.25, 0.4], gamma=grid(0.0, 3.0, 0.1),
                       measures=list(MEASURES), output_dir="runs/gamma")
