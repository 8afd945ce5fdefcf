"""Run configuration and the shipped calibration map."""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import BadInput

ENV_VAR = "DIOPHANT_CONFIG"
MIN_PRECISION = 64

# names of the constants every inequality check reads from the calibration map
CONSTANTS = ("c", "c_bar", "c_tilde", "d", "c1", "b", "n", "c1_polprod", "c2_polprod",
             "c_hoch", "c_component")


def shipped_calibration() -> dict:
    text = resources.files("diophant").joinpath("data/calibration.json").read_text()
    return json.loads(text)


@dataclass(frozen=True)
class RunConfig:
    precision_bits: int = 256
    seed: int = 0
    calibration: dict = field(default_factory=dict)
    out: Path | None = None

    def __post_init__(self):
        if int(self.precision_bits) < MIN_PRECISION:
            raise BadInput(f"precision must be at least {MIN_PRECISION} bits")
        for name, v in self.calibration.items():
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise BadInput(f"calibration constant {name} must be positive, got {v!r}")

    def const(self, name: str) -> float:
        try:
            return float(self.calibration[name])
        except KeyError:
            raise BadInput(f"calibration constant {name} is missing") from None

    @classmethod
    def load(cls, path: str | os.PathLike | None = None, precision_bits: int | None = None,
             seed: int | None = None, out=None) -> "RunConfig":
        """Defaults, then the config file (DIOPHANT_CONFIG wins over path), then flags."""
        consts = dict(shipped_calibration()["constants"])
        prec, sd = 256, 0
        path = os.environ.get(ENV_VAR) or path
        if path:
            try:
                obj = json.loads(Path(path).read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise BadInput(f"cannot read config {path}: {exc}") from exc
            if not isinstance(obj, dict):
                raise BadInput("config must be a JSON object")
            prec = int(obj.get("precision_bits", prec))
            sd = int(obj.get("seed", sd))
            cal = obj.get("calibration", {})
            if isinstance(cal, str):
                try:
                    cal = json.loads(Path(cal).read_text())["constants"]
                except (OSError, KeyError, json.JSONDecodeError) as exc:
                    raise BadInput(f"cannot read calibration {cal}: {exc}") from exc
            consts.update(cal)
        if precision_bits is not None:
            prec = precision_bits
        if seed is not None:
            sd = seed
        return cls(int(prec), int(sd), consts, Path(out) if out else None)
