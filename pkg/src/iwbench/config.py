"""Benchmark configuration: one flat key=value file covering every tunable.

The file format is deliberately minimal: one ``key = value`` pair per line,
``#`` or ``;`` starting a comment, blank lines ignored (a flat subset of
TOML/INI).  Keys not present fall back to the documented defaults on the
dataclasses.  The CLI looks for --config first, then the IWORLD_CONFIG
environment variable.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field, fields
from pathlib import Path

from .filtering import FilterConfig
from .memory import MemoryConfig
from .trajectory import SmoothnessWeights
from .visual import VisualConfig

ENV_VAR = "IWORLD_CONFIG"


@dataclass
class BenchConfig:
    """Aggregated configuration for every metric and pipeline stage."""

    visual: VisualConfig = field(default_factory=VisualConfig)
    memory: MemoryConfig = field(default_factory=MemoryConfig)
    filter: FilterConfig = field(default_factory=FilterConfig)
    smoothness: SmoothnessWeights = field(default_factory=SmoothnessWeights)
    signed_cosine: bool = False
    percentile_mode: str = "nearest-rank"
    step_translation: float = 0.1
    step_rotation: float = 0.05

    @property
    def k(self) -> float:
        """The shared log-calibration coefficient used by every metric."""
        return self.visual.k


# flat config key -> (section attribute, field name)
_KEY_MAP = {
    "lambda": ("visual", "lam"),
    "alpha": ("visual", "alpha"),
    "beta": ("visual", "beta"),
    "k": ("visual", "k"),
    "dark_max": ("visual", "dark_max"),
    "bright_min": ("visual", "bright_min"),
    "noise_tau": ("visual", "noise_tau"),
    "breaker_window": ("visual", "breaker_window"),
    "breaker_latching": ("visual", "breaker_latching"),
    "quality_min": ("visual", "quality_min"),
    "quality_max": ("visual", "quality_max"),
    "memory_offset": ("memory", "mse_offset"),
    "memory_k_val": ("memory", "k_val"),
    "memory_k_exp": ("memory", "k_exp"),
    "gamma": ("memory", "gamma"),
    "memory_weight_mode": ("memory", "weight_mode"),
    "brightness_k_sigma": ("filter", "brightness_k_sigma"),
    "brightness_floor": ("filter", "brightness_floor"),
    "mse_z_threshold": ("filter", "mse_z_threshold"),
    "mse_window": ("filter", "mse_window"),
    "density_window": ("filter", "density_window"),
    "density_tau": ("filter", "density_tau"),
    "merge_gap": ("filter", "merge_gap"),
    "min_len": ("filter", "min_len"),
    "w_ssim": ("smoothness", "w_ssim"),
    "w_mse": ("smoothness", "w_mse"),
    "w_perceptual": ("smoothness", "w_perceptual"),
    "sigma_mse": ("smoothness", "sigma_mse"),
    "signed_cosine": (None, "signed_cosine"),
    "percentile_mode": (None, "percentile_mode"),
    "step_translation": (None, "step_translation"),
    "step_rotation": (None, "step_rotation"),
}

_BOOL_STRINGS = {"true": True, "1": True, "yes": True, "on": True,
                 "false": False, "0": False, "no": False, "off": False}


def parse_config_text(text: str) -> dict:
    """Parse flat key=value lines into a raw string dict."""
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].split(";", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ValueError(f"config line {lineno}: empty key")
        raw[key] = value.strip("\"'")
    return raw


def _coerce(value: str, target_type):
    if target_type is bool:
        try:
            return _BOOL_STRINGS[value.lower()]
        except KeyError:
            raise ValueError(f"expected a boolean, got {value!r}") from None
    return target_type(value)


def _field_type(obj, name):
    for f in fields(obj):
        if f.name == name:
            return type(getattr(obj, name))
    raise KeyError(name)


def build_config(raw: dict) -> BenchConfig:
    """Overlay raw string values onto the default configuration."""
    cfg = BenchConfig()
    for key, value in raw.items():
        if key not in _KEY_MAP:
            raise ValueError(f"unknown config key: {key!r}")
        section, attr = _KEY_MAP[key]
        target = cfg if section is None else getattr(cfg, section)
        try:
            coerced = _coerce(value, _field_type(target, attr))
        except ValueError as exc:
            raise ValueError(f"config key {key!r}: {exc}") from None
        setattr(target, attr, coerced)
    # re-run the dataclass validations with the final values
    cfg.visual.__post_init__()
    cfg.memory.__post_init__()
    cfg.filter.__post_init__()
    cfg.smoothness.__post_init__()
    return cfg


def load_config(path=None) -> BenchConfig:
    """Load configuration from a file, the IWORLD_CONFIG fallback, or defaults."""
    if path is None:
        path = os.environ.get(ENV_VAR)
    if path is None:
        return BenchConfig()
    return build_config(parse_config_text(Path(path).read_text()))
