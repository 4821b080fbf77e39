"""Optional flat ``key = value`` configuration file.

Recognised keys::

    rho_edges = 0.2, 0.35, 0.6, 0.8
    rho_labels = very weak, weak, moderate, strong, very strong
    ga_relative = false
    abs_angles = false
    precision = 2

Lines starting with ``#`` or ``;`` are comments. Command-line flags override
anything set here.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

from facesym.metrics import DEFAULT_BANDS, RhoBands

_SECTION = "facesym"
KNOWN_KEYS = {"rho_edges", "rho_labels", "ga_relative", "abs_angles", "precision"}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Config:
    bands: RhoBands = field(default_factory=lambda: DEFAULT_BANDS)
    ga_relative: bool = False
    abs_angles: bool = False
    precision: int = 2

    def override(self, ga_relative: Optional[bool] = None, abs_angles: Optional[bool] = None,
                 precision: Optional[int] = None) -> "Config":
        changes = {k: v for k, v in dict(ga_relative=ga_relative, abs_angles=abs_angles,
                                          precision=precision).items() if v is not None}
        return replace(self, **changes)


def parse_config(text: str, source: str = "<config>") -> Config:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(f"[{_SECTION}]\n" + text, source=source)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    section = parser[_SECTION]
    unknown = set(section) - KNOWN_KEYS
    if unknown:
        raise ConfigError(f"{source}: unknown key(s) {', '.join(sorted(unknown))}")
    try:
        edges = DEFAULT_BANDS.edges
        labels = DEFAULT_BANDS.labels
        if "rho_edges" in section:
            edges = tuple(float(v) for v in section["rho_edges"].split(","))
        if "rho_labels" in section:
            labels = tuple(v.strip() for v in section["rho_labels"].split(","))
        precision = section.getint("precision", fallback=2)
        if precision < 0:
            raise ValueError(f"precision must be non-negative, got {precision}")
        return Config(
            bands=RhoBands(edges, labels),
            ga_relative=section.getboolean("ga_relative", fallback=False),
            abs_angles=section.getboolean("abs_angles", fallback=False),
            precision=precision,
        )
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def load_config(path) -> Config:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
    return parse_config(text, str(path))
