"""JSON analysis configuration: parsing with line/field diagnostics and emission.

Schema::

    {
      "plant":  {"J": 0.2, "b": 3, "K": 250},
      "gains":  {"Pm": 20, "Im": 10, "Pt": 5, "It": 5},
      "target": {"type": "spring", "Kd": 50},
      "sweep":  {"wmin": 1e-3, "wmax": 1e6, "points_per_decade": 200},
      "tolerances": {"boundary_band": 1e-6, "phase_tol_deg": 1e-6},
      "transfer_function": {"num": [1, 0], "den": [1]}
    }

``plant``, ``gains`` and ``target`` are required. ``transfer_function``
(descending coefficients) replaces the SEA impedance in ``bode`` and
``check`` when present.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from typing import Optional

from .exceptions import ConfigError
from .freq import DEFAULT_PPD, DEFAULT_WMAX, DEFAULT_WMIN
from .model import ControllerGains, PlantParams, RenderTarget, build_impedance
from .passivity import DEFAULT_BOUNDARY_BAND
from .polyalg import Polynomial, RationalTransferFunction

DEFAULT_PHASE_TOL_DEG = 1e-6

_SECTIONS = ("plant", "gains", "target", "sweep", "tolerances", "transfer_function")


@dataclass(frozen=True)
class Sweep:
    wmin: float = DEFAULT_WMIN
    wmax: float = DEFAULT_WMAX
    points_per_decade: int = DEFAULT_PPD


@dataclass(frozen=True)
class Tolerances:
    boundary_band: float = DEFAULT_BOUNDARY_BAND
    phase_tol_deg: float = DEFAULT_PHASE_TOL_DEG


@dataclass(frozen=True)
class AnalysisConfig:
    plant: PlantParams
    gains: ControllerGains
    target: RenderTarget
    sweep: Sweep = field(default_factory=Sweep)
    tolerances: Tolerances = field(default_factory=Tolerances)
    transfer_function: Optional[tuple] = None  # (num, den), descending

    def impedance(self) -> RationalTransferFunction:
        if self.transfer_function is not None:
            num, den = self.transfer_function
            return RationalTransferFunction(Polynomial.from_descending(num), Polynomial.from_descending(den))
        return build_impedance(self.plant, self.gains, self.target)


# Parsing ------------------------------------------------------------------


def _line_of(text, path):
    """Best-effort source line of the key at dotted ``path``."""
    if text is None:
        return None
    pos = 0
    for key in path.split("."):
        m = re.compile(r'"%s"\s*:' % re.escape(key)).search(text, pos)
        if m is None:
            return None
        pos = m.start()
    return text.count("\n", 0, pos) + 1


def _number(value, path, text):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number, got {json.dumps(value)}", path, _line_of(text, path))
    if not math.isfinite(value):
        raise ConfigError("must be finite", path, _line_of(text, path))
    return value


def _section(doc, name, text, required):
    if name not in doc:
        if required:
            raise ConfigError("missing required section", name, None)
        return None
    sec = doc[name]
    if not isinstance(sec, dict):
        raise ConfigError("expected an object", name, _line_of(text, name))
    return sec


def _fields(sec, name, keys, text, required=True):
    unknown = set(sec) - set(keys)
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigError(f"unknown key (expected one of {', '.join(keys)})", f"{name}.{key}", _line_of(text, f"{name}.{key}"))
    out = {}
    for k in keys:
        if k not in sec:
            if required:
                raise ConfigError("missing required field", f"{name}.{k}", _line_of(text, name))
            continue
        out[k] = _number(sec[k], f"{name}.{k}", text)
    return out


def _build(cls, kwargs, name, text):
    try:
        return cls(**kwargs)
    except ValueError as exc:
        msg = str(exc)
        key, _, rest = msg.partition(": ")
        if key in kwargs:
            path = f"{name}.{key}"
            raise ConfigError(rest, path, _line_of(text, path)) from None
        raise ConfigError(msg, name, _line_of(text, name)) from None


def _coeff_list(value, path, text):
    if not isinstance(value, list) or not value:
        raise ConfigError("expected a non-empty list of numbers", path, _line_of(text, path))
    return tuple(float(_number(v, path, text)) for v in value)


def config_from_dict(doc, text=None) -> AnalysisConfig:
    if not isinstance(doc, dict):
        raise ConfigError("top level must be a JSON object", None, 1 if text is not None else None)
    unknown = set(doc) - set(_SECTIONS)
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigError("unknown section", key, _line_of(text, key))

    plant = _build(PlantParams, _fields(_section(doc, "plant", text, True), "plant", ("J", "b", "K"), text), "plant", text)
    gains = _build(
        ControllerGains,
        _fields(_section(doc, "gains", text, True), "gains", ("Pm", "Im", "Pt", "It"), text),
        "gains",
        text,
    )

    tsec = _section(doc, "target", text, True)
    ttype = tsec.get("type")
    if ttype not in ("null", "spring"):
        raise ConfigError(f"expected \"null\" or \"spring\", got {json.dumps(ttype)}", "target.type", _line_of(text, "target.type") or _line_of(text, "target"))
    extra = set(tsec) - {"type", "Kd"}
    if extra:
        key = sorted(extra)[0]
        raise ConfigError("unknown key (expected type, Kd)", f"target.{key}", _line_of(text, f"target.{key}"))
    if ttype == "spring" and "Kd" not in tsec:
        raise ConfigError("missing required field for a spring target", "target.Kd", _line_of(text, "target"))
    kd = _number(tsec.get("Kd", 0.0), "target.Kd", text)
    target = _build(RenderTarget, {"variant": ttype, "Kd": kd}, "target", text)

    sweep = Sweep()
    ssec = _section(doc, "sweep", text, False)
    if ssec is not None:
        vals = _fields(ssec, "sweep", ("wmin", "wmax", "points_per_decade"), text, required=False)
        sweep = Sweep(**vals)
        if not 0 < sweep.wmin < sweep.wmax:
            raise ConfigError("need 0 < wmin < wmax", "sweep.wmin", _line_of(text, "sweep.wmin") or _line_of(text, "sweep"))
        if not sweep.points_per_decade > 0:
            raise ConfigError("must be > 0", "sweep.points_per_decade", _line_of(text, "sweep.points_per_decade"))

    tol = Tolerances()
    tsec2 = _section(doc, "tolerances", text, False)
    if tsec2 is not None:
        tol = Tolerances(**_fields(tsec2, "tolerances", ("boundary_band", "phase_tol_deg"), text, required=False))
        for k in ("boundary_band", "phase_tol_deg"):
            if getattr(tol, k) < 0:
                raise ConfigError("must be >= 0", f"tolerances.{k}", _line_of(text, f"tolerances.{k}"))

    tf = None
    fsec = _section(doc, "transfer_function", text, False)
    if fsec is not None:
        extra = set(fsec) - {"num", "den"}
        if extra or "num" not in fsec or "den" not in fsec:
            raise ConfigError("expected exactly the keys num and den", "transfer_function", _line_of(text, "transfer_function"))
        num = _coeff_list(fsec["num"], "transfer_function.num", text)
        den = _coeff_list(fsec["den"], "transfer_function.den", text)
        if all(c == 0 for c in den):
            raise ConfigError("denominator is identically zero", "transfer_function.den", _line_of(text, "transfer_function.den"))
        tf = (num, den)

    return AnalysisConfig(plant, gains, target, sweep, tol, tf)


def parse_config(text: str) -> AnalysisConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg} (column {exc.colno})", None, exc.lineno) from None
    return config_from_dict(doc, text)


def load_config(path) -> AnalysisConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", None, None) from None
    return parse_config(text)


# Emission -----------------------------------------------------------------


def config_to_dict(cfg: AnalysisConfig) -> dict:
    doc = {
        "plant": {"J": cfg.plant.J, "b": cfg.plant.b, "K": cfg.plant.K},
        "gains": {"Pm": cfg.gains.Pm, "Im": cfg.gains.Im, "Pt": cfg.gains.Pt, "It": cfg.gains.It},
        "target": {"type": cfg.target.variant.value},
        "sweep": {"wmin": cfg.sweep.wmin, "wmax": cfg.sweep.wmax, "points_per_decade": cfg.sweep.points_per_decade},
        "tolerances": {"boundary_band": cfg.tolerances.boundary_band, "phase_tol_deg": cfg.tolerances.phase_tol_deg},
    }
    if cfg.target.variant.value == "spring":
        doc["target"]["Kd"] = cfg.target.Kd
    if cfg.transfer_function is not None:
        num, den = cfg.transfer_function
        doc["transfer_function"] = {"num": list(num), "den": list(den)}
    return doc


def emit_config(cfg: AnalysisConfig) -> str:
    return json.dumps(config_to_dict(cfg), indent=2) + "\n"
