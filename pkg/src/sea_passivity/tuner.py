"""Rule-based gain selection for null, spring or combined rendering.

The qualitative design guidance (aggressive velocity loop, torque
integral gain pushed to its bound for null rendering, large velocity
integral gain and small torque integral gain for springs) is made
quantitative with an explicit relative safety margin on every bound.
Every numeric rule below is an implementation choice and is labelled as
such in the returned trace.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from . import bounds as bnd
from .exceptions import Infeasible
from .model import ControllerGains, PlantParams, RenderTarget
from .passivity import check_closed_form

MAX_PM_DOUBLINGS = 30


@dataclass(frozen=True)
class TuningSpec:
    target: str = "null"  # "null", "spring" or "both"
    Kd: float = 0.0
    safety_margin: float = 0.1
    Pm_seed: Optional[float] = None
    Im_seed: Optional[float] = None
    Pt: Optional[float] = None
    bandwidth_hint: float = 10.0
    It_fraction: float = 0.01

    def __post_init__(self):
        if self.target not in ("null", "spring", "both"):
            raise ValueError(f"target: unknown target {self.target!r}")
        if not 0 < self.safety_margin < 1:
            raise ValueError("safety_margin: must lie in (0, 1)")
        if self.target != "null" and not self.Kd > 0:
            raise ValueError("Kd: spring targets need Kd > 0")
        for name in ("Pm_seed", "Im_seed", "Pt"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ValueError(f"{name}: must be > 0")
        if not self.bandwidth_hint > 0:
            raise ValueError("bandwidth_hint: must be > 0")

    def targets(self):
        if self.target == "null":
            return [RenderTarget.null()]
        if self.target == "spring":
            return [RenderTarget.spring(self.Kd)]
        return [RenderTarget.null(), RenderTarget.spring(self.Kd)]


@dataclass
class TuningResult:
    gains: ControllerGains
    trace: list = field(default_factory=list)


def _it_null_limit(plant, Pm, Pt, Im, m):
    """Largest It meeting the damping and null inertia bounds with margin ``m``."""
    J, b = plant.J, plant.b
    it_damp = math.inf if b == 0 else (1 - m) * Pt * Im / b
    it_inertia = ((1 - m) * (Pm + b) * (1 + Pm * Pt) / J - Pt * Im) / Pm
    return min(it_damp, it_inertia), it_damp, it_inertia


def _pt_null(plant, Pm, Im, m, hint, trace):
    b = plant.b
    if b == 0:
        trace.append("torque P gain: no damping bound on It; Pt = 10/Pm (implementation choice)")
        return 10.0 / Pm
    c = (1 - m) * Im / b
    lim = (Pm * c + Im) / Pm
    if hint < lim:
        Pt = hint / ((Pm * c + Im) - hint * Pm)
        trace.append(
            f"torque P gain: inertial-to-damping crossover alpha/(1+Pm Pt) placed at {hint:g} rad/s -> Pt={Pt:.6g}"
        )
    else:
        Pt = 9.0 / Pm
        trace.append(
            f"torque P gain: hint {hint:g} rad/s beyond reachable crossover {lim:.6g} rad/s; Pt = 9/Pm (90% of limit)"
        )
    return Pt


def _pt_spring(plant, Pm, Kd, hint, trace):
    # Low-frequency Kd/w meets the damping level (Pm+b)/(1+Pm Pt) at the hint.
    Pt = ((Pm + plant.b) * hint / Kd - 1) / Pm
    if Pt <= 1.0 / Pm:
        Pt = 1.0 / Pm
        trace.append(f"torque P gain: hint {hint:g} rad/s too low for Kd={Kd:g}; clamped to Pt = 1/Pm")
    else:
        trace.append(f"torque P gain: stiffness-to-damping crossover placed at {hint:g} rad/s -> Pt={Pt:.6g}")
    return Pt


def _im_for_stiffness(plant, Pt, Pm, It, kd_target):
    """Smallest Im with kd_max >= kd_target (positive root of a quadratic in Im)."""
    K, b = plant.K, plant.b
    dk = K - kd_target
    A = Pt * dk
    B = b * It * dk + kd_target * K * Pt
    C = kd_target * K * Pm * It
    return (B + math.sqrt(B * B + 4 * A * C)) / (2 * A)


def _margins_ok(plant, gains, targets, m):
    for t in targets:
        if not check_closed_form(plant, gains, t).passive:
            return False
        rep = bnd.bounds_report(plant, gains, t)
        for v in rep.margins.values():
            if v is None or v < m * (1 - 1e-9):
                return False
    return True


def tune(plant: PlantParams, spec: TuningSpec) -> TuningResult:
    """Pick PI gains that are passive for every requested target with the requested margin."""
    m = spec.safety_margin
    trace = []
    targets = spec.targets()
    Pm = spec.Pm_seed if spec.Pm_seed is not None else 100.0 * plant.J
    Im0 = spec.Im_seed if spec.Im_seed is not None else 0.5 * Pm
    trace.append(
        f"velocity loop: aggressive seeds Pm={Pm:.6g}, Im={Im0:.6g}"
        + ("" if spec.Pm_seed and spec.Im_seed else " (defaults Pm = 100 J, Im = Pm/2; implementation choice)")
    )
    if spec.target != "null":
        kd_target = spec.Kd / (1 - m)
        if kd_target >= plant.K:
            raise Infeasible(
                f"Kd/(1-margin) = {kd_target:.6g} is not below the physical stiffness K = {plant.K:g}; "
                "the renderable stiffness is always strictly less than K"
            )

    for attempt in range(MAX_PM_DOUBLINGS + 1):
        Im = Im0
        if spec.target == "null":
            Pt = spec.Pt if spec.Pt is not None else _pt_null(plant, Pm, Im, m, spec.bandwidth_hint, trace)
            It, it_d, it_j = _it_null_limit(plant, Pm, Pt, Im, m)
            if It > 0:
                which = "damping" if it_d <= it_j else "inertia"
                trace.append(f"torque I gain: maximised to It={It:.6g} under the {which} bound with margin {m:g}")
        else:
            Pt = spec.Pt if spec.Pt is not None else _pt_spring(plant, Pm, spec.Kd, spec.bandwidth_hint, trace)
            it_opt, _, _ = _it_null_limit(plant, Pm, Pt, Im, m)
            It = max(it_opt, 0.0) * spec.It_fraction
            trace.append(
                f"torque I gain: small It={It:.6g} ({spec.It_fraction:g} x null-optimal) to reject steady-state disturbances"
            )
            im_req = _im_for_stiffness(plant, Pt, Pm, It, kd_target) * (1 + 1e-9)
            if im_req > Im:
                Im = im_req
                trace.append(f"velocity I gain: raised to Im={Im:.6g} so that Kd_max >= Kd/(1-margin)")
        if It > 0 or spec.target != "null":
            gains = ControllerGains(Pm=Pm, Im=Im, Pt=Pt, It=max(It, 0.0))
            if _margins_ok(plant, gains, targets, m):
                trace.append("verified: closed-form passive with the requested margin for " + spec.target)
                return TuningResult(gains, trace)
        Pm *= 2.0
        trace.append(f"inertia bound not met with margin; doubling velocity P gain to Pm={Pm:.6g}")
    raise Infeasible(f"no gain set found after {MAX_PM_DOUBLINGS} velocity-gain doublings")
