"""Run configuration: paths, provider settings, metric parameters.

A config file is a single JSON document; CLI flags override individual
fields. Provider credentials come only from the environment variable named
here, never from the file itself.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Optional, Union


class ConfigError(Exception):
    """Raised when configuration values are missing, unresolvable, or out of range."""


@dataclass
class ProviderSettings:
    kind: str = "replay"  # replay | http
    replay_path: Optional[str] = None
    endpoint: Optional[str] = None
    model: str = ""
    api_key_env: str = "STAKEGRAPH_API_KEY"


@dataclass
class MetricSettings:
    ngram_order: int = 1
    cosine_threshold: float = 0.78
    propagation_lambda: float = 0.8
    hops: int = 3
    baseline_p: float = 0.1
    baseline_seeds: int = 1000
    baseline_n: int = 41
    baseline_seed_base: int = 0
    top_k: int = 10

    def validate(self) -> None:
        if self.ngram_order < 1:
            raise ConfigError("ngram_order must be >= 1")
        if not 0.0 <= self.baseline_p <= 1.0:
            raise ConfigError("baseline_p must lie in [0, 1]")
        if not 0.0 < self.propagation_lambda <= 1.0:
            raise ConfigError("propagation_lambda must lie in (0, 1]")
        if self.hops < 0:
            raise ConfigError("hops must be >= 0")
        if self.baseline_seeds < 1 or self.baseline_n < 1:
            raise ConfigError("baseline_seeds and baseline_n must be >= 1")
        if self.top_k < 0:
            raise ConfigError("top_k must be >= 0")


@dataclass
class Config:
    taxonomy: Optional[str] = None
    corpus: Optional[str] = None
    templates: Optional[str] = None
    plan: Optional[str] = None
    gold_triples: Optional[str] = None
    gold_annotations: Optional[str] = None
    output_dir: str = "out"
    provider: ProviderSettings = field(default_factory=ProviderSettings)
    metrics: MetricSettings = field(default_factory=MetricSettings)
    parallelism: int = 1

    def validate_paths(self, *names: str) -> None:
        """Require the named path fields to be set and resolvable right now."""
        for name in names:
            value = getattr(self, name)
            if value is None:
                raise ConfigError(f"config path {name!r} is not set")
            if not Path(value).exists():
                raise ConfigError(f"config path {name!r} does not resolve: {value}")

    def out_path(self, filename: str) -> Path:
        out = Path(self.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        return out / filename

    def digest(self) -> str:
        """Digest of the semantic knobs only (paths excluded so identical runs
        into different directories stay byte-identical)."""
        payload = {
            "provider_kind": self.provider.kind,
            "metrics": asdict(self.metrics),
            "parallelism": self.parallelism,
        }
        canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def load_config(path: Union[str, Path]) -> Config:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    provider = ProviderSettings(**raw.get("provider", {}))
    metrics = MetricSettings(**raw.get("metrics", {}))
    metrics.validate()
    known = {f for f in Config.__dataclass_fields__ if f not in ("provider", "metrics")}
    extra = {k: v for k, v in raw.items() if k in known}
    unknown = set(raw) - known - {"provider", "metrics"}
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")
    return Config(provider=provider, metrics=metrics, **extra)
