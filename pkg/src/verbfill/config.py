"""Rule configuration: lexicons, point values and corpus-rule thresholds."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any

import tomli

CONFIG_ENV = "VERBFILL_CONFIG"


def _default_points() -> dict[int, float]:
    return {1: 30.0, 2: 5.0, 4: 5.0, 5: 0.0, 6: 3.0}


@dataclass(frozen=True)
class RuleConfig:
    terminal_particles: frozenset[str] = frozenset({"よ", "ね", "YO", "NE"})
    interrogative_pronouns: frozenset[str] = frozenset({
        "DARE", "NANI", "NAN", "ITSU", "DOKO", "NAZE", "DOUSHITE", "DOU", "DONNA",
        "誰", "だれ", "何", "なに", "なん", "いつ", "どこ", "何処",
        "なぜ", "何故", "どうして", "どう", "どんな",
    })
    repetition_markers: frozenset[str] = frozenset({"も", "もっとも", "MO", "MOTTOMO"})
    points: dict[int, float] = field(default_factory=_default_points)
    rule3_scale: float = 20.0
    rule3_offset: float = -2.0
    rule7_high: float = 9.0
    rule7_low: float = 1.0
    rule7_margin_ratio: float = 2.0
    rule7_min_match_chars: int = 2
    rule7_max_window_chars: int = 30

    def __post_init__(self):
        vals = [*self.points.values(), self.rule3_scale, self.rule3_offset,
                self.rule7_high, self.rule7_low, self.rule7_margin_ratio]
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("point values must be finite")
        if self.rule7_margin_ratio <= 1:
            raise ValueError("rule7_margin_ratio must be > 1")
        if self.rule7_min_match_chars < 1:
            raise ValueError("rule7_min_match_chars must be >= 1")
        if self.rule7_max_window_chars < 1:
            raise ValueError("rule7_max_window_chars must be >= 1")

    def point(self, rule_id: int) -> float:
        return self.points[rule_id]

    def with_overrides(self, **kw: Any) -> RuleConfig:
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


_SET_FIELDS = {"terminal_particles", "interrogative_pronouns", "repetition_markers"}


def config_from_mapping(data: dict[str, Any]) -> RuleConfig:
    known = {f.name for f in fields(RuleConfig)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config key(s): {sorted(unknown)}")
    kw: dict[str, Any] = {}
    for key, value in data.items():
        if key in _SET_FIELDS:
            kw[key] = frozenset(value)
        elif key == "points":
            # merged over defaults so a file may override a single rule
            pts = _default_points()
            pts.update({int(k): float(v) for k, v in value.items()})
            kw[key] = pts
        elif key in ("rule7_min_match_chars", "rule7_max_window_chars"):
            kw[key] = int(value)
        else:
            kw[key] = float(value)
    return RuleConfig(**kw)


def load_config(path: str | os.PathLike | None = None) -> RuleConfig:
    """Load a JSON or TOML config; fall back to $VERBFILL_CONFIG, then defaults."""
    if path is None:
        path = os.environ.get(CONFIG_ENV) or None
    if path is None:
        return RuleConfig()
    p = Path(path)
    raw = p.read_bytes()
    if p.suffix.lower() == ".toml":
        data = tomli.loads(raw.decode("utf-8"))
    else:
        data = json.loads(raw)
    return config_from_mapping(data)
