"""Run configuration: defaults, flat key=value files, environment override.

Config files are UTF-8 text, one `key = value` per line, `#` comments.
The file named by BAKER_RAYS_CONFIG is loaded first; explicit CLI flags win.
"""

import math
import os
from dataclasses import dataclass, fields

ENV_VAR = "BAKER_RAYS_CONFIG"


@dataclass
class RunConfig:
    tolerance: float = 1e-12
    branch_budget: int = 200
    pullback_budget: int = 200_000
    fixed_point_budget: int = 2000
    max_iter: int = 200
    width: int = 800
    height: int = 400
    re_min: float = -8.0
    re_max: float = 6.0
    im_min: float = -math.pi
    im_max: float = math.pi
    workers: int = 1
    output_dir: str = "."
    palette_undecided: str = "255,0,0"
    palette_enters_near: str = "245,222,179"
    palette_enters_far: str = "0,0,0"
    palette_exits_near: str = "0,0,0"
    palette_exits_far: str = "150,150,150"

    def validate(self):
        if not self.tolerance > 0.0:
            raise ValueError("tolerance must be > 0")
        for name in ("branch_budget", "pullback_budget", "fixed_point_budget", "max_iter", "width", "height", "workers"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        return self

    def bbox(self):
        return (self.re_min, self.re_max, self.im_min, self.im_max)

    def palette(self):
        def rgb(text):
            parts = [int(p) for p in text.split(",")]
            if len(parts) != 3 or any(not 0 <= p <= 255 for p in parts):
                raise ValueError(f"bad color {text!r}")
            return tuple(parts)

        return {
            "undecided": rgb(self.palette_undecided),
            "enters_near": rgb(self.palette_enters_near),
            "enters_far": rgb(self.palette_enters_far),
            "exits_near": rgb(self.palette_exits_near),
            "exits_far": rgb(self.palette_exits_far),
        }


def _coerce(kind, value):
    if kind is float:
        return float(value)
    if kind is int:
        return int(value)
    return value


def load_config(path=None):
    """Defaults, then the file from BAKER_RAYS_CONFIG, then `path`."""
    cfg = RunConfig()
    env_path = os.environ.get(ENV_VAR)
    for p in (env_path, path):
        if p:
            _apply_file(cfg, p)
    return cfg.validate()


def _apply_file(cfg, path):
    known = {f.name: f.type for f in fields(RunConfig)}
    types = {"float": float, "int": int, "str": str}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in known:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            kind = types.get(known[key], str) if isinstance(known[key], str) else known[key]
            setattr(cfg, key, _coerce(kind, value))
    return cfg
