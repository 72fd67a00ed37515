"""Pipeline configuration: a small key-value file format plus defaults.

Every defaulted modeling decision (clamping, averaging denominator, edge
threshold, preference threshold, candidate eligibility) is surfaced here so
experiments can be declared rather than patched in code. The file format is
one ``key = value`` per line with ``#`` comments.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

from .errors import DataError, DomainError
from .similarity import AveragingPolicy

_BOOL_VALUES = {"true": True, "false": False, "1": True, "0": False, "yes": True, "no": False}


@dataclass(frozen=True)
class PipelineConfig:
    clamp: bool = True
    averaging_policy: AveragingPolicy = AveragingPolicy.COMPARABLE_COUNT
    edge_threshold: float = 0.0
    preference_threshold: float = 0.5
    exclude_non_preferred: bool = False
    seed: int = 0

    def to_dict(self) -> dict:
        return {
            "clamp": self.clamp,
            "averaging_policy": self.averaging_policy.value,
            "edge_threshold": self.edge_threshold,
            "preference_threshold": self.preference_threshold,
            "exclude_non_preferred": self.exclude_non_preferred,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, values: dict) -> "PipelineConfig":
        config = cls()
        fields = {}
        for key, raw in values.items():
            if key == "clamp":
                fields[key] = _as_bool(key, raw)
            elif key == "averaging_policy":
                fields[key] = _as_policy(raw)
            elif key in ("edge_threshold", "preference_threshold"):
                fields[key] = _as_float(key, raw)
            elif key == "exclude_non_preferred":
                fields[key] = _as_bool(key, raw)
            elif key == "seed":
                fields[key] = _as_int(key, raw)
            else:
                raise DataError(f"unknown config key: {key}")
        return replace(config, **fields)


def _as_bool(key: str, raw) -> bool:
    if isinstance(raw, bool):
        return raw
    value = _BOOL_VALUES.get(str(raw).strip().lower())
    if value is None:
        raise DataError(f"config {key}: expected a boolean, got {raw!r}")
    return value


def _as_float(key: str, raw) -> float:
    try:
        return float(raw)
    except (TypeError, ValueError):
        raise DataError(f"config {key}: expected a number, got {raw!r}")


def _as_int(key: str, raw) -> int:
    try:
        return int(raw)
    except (TypeError, ValueError):
        raise DataError(f"config {key}: expected an integer, got {raw!r}")


def _as_policy(raw) -> AveragingPolicy:
    if isinstance(raw, AveragingPolicy):
        return raw
    try:
        return AveragingPolicy(str(raw).strip().lower())
    except ValueError:
        valid = ", ".join(p.value for p in AveragingPolicy)
        raise DataError(f"config averaging_policy: expected one of {valid}, got {raw!r}")


def parse_config_text(text: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for line_number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise DataError(f"config line {line_number}: expected 'key = value', got {stripped!r}")
        key, _, value = stripped.partition("=")
        values[key.strip()] = value.strip()
    return values


def load_config(path: str | Path) -> PipelineConfig:
    text = Path(path).read_text(encoding="utf-8")
    return PipelineConfig.from_dict(parse_config_text(text))


def validate_config(config: PipelineConfig) -> None:
    if not 0.0 <= config.edge_threshold <= 1.0:
        raise DomainError(f"edge_threshold outside [0, 1]: {config.edge_threshold}")
    if not 0.0 < config.preference_threshold < 1.0:
        raise DomainError(f"preference_threshold outside (0, 1): {config.preference_threshold}")
