"""Closed-form passivity bounds on damping, inertia and virtual stiffness."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .exceptions import InvalidTarget
from .model import ClosedFormCoefficients, ControllerGains, PlantParams, RenderTarget


class _Unbounded:
    """Sentinel for a bound that does not exist (compares above every number)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNBOUNDED"

    def __str__(self):
        return "unbounded"

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __reduce__(self):
        return (_Unbounded, ())


UNBOUNDED = _Unbounded()
Bound = Union[float, _Unbounded]

# Fixed tie-break order for the binding constraint.
CONSTRAINT_ORDER = ("damping", "inertia", "stiffness")


def is_unbounded(x) -> bool:
    return x is UNBOUNDED


def b_max(gains: ControllerGains) -> Bound:
    """Largest motor damping ``Pt Im / It`` compatible with passivity.

    Unbounded when either integral gain is zero: the damping condition
    then drops out of the null-impedance conditions entirely.
    """
    if gains.It == 0 or gains.Im == 0:
        return UNBOUNDED
    return gains.Pt * gains.Im / gains.It


def j_max_null(b: float, gains: ControllerGains) -> Bound:
    alpha = gains.Pm * gains.It + gains.Pt * gains.Im
    if alpha == 0:
        return UNBOUNDED
    return (gains.Pm + b) * (1 + gains.Pm * gains.Pt) / alpha


def kd_max(plant: PlantParams, gains: ControllerGains) -> Optional[float]:
    """Largest renderable virtual stiffness ``K beta / (beta + alpha K)``.

    ``None`` when no positive stiffness can be rendered passively
    (``beta <= 0``, which includes ``Im = 0``).
    """
    c = ClosedFormCoefficients(plant, gains)
    beta = c.beta
    if beta <= 0:
        return None
    return plant.K * beta / (beta + c.alpha * plant.K)


def j_max_spring(b: float, gains: ControllerGains, K: float, Kd: float) -> Bound:
    dK = K - Kd
    if dK <= 0:
        raise InvalidTarget(f"Kd={Kd} must be below the physical stiffness K={K}")
    alpha = gains.Pm * gains.It + gains.Pt * gains.Im
    if alpha == 0:
        return UNBOUNDED
    return (gains.Pm + b) * (dK * gains.Pm * gains.Pt + K) / (alpha * dK)


def j_max_spring_at_kd_max(b: float, gains: ControllerGains, K: float) -> Bound:
    """Inertia bound with the stiffness set to its own maximum."""
    alpha = gains.Pm * gains.It + gains.Pt * gains.Im
    if alpha == 0:
        return UNBOUNDED
    beta = gains.Pt * gains.Im**2 - b * gains.Im * gains.It
    return (gains.Pm + b) * (beta + alpha * K * (1 + gains.Pm * gains.Pt)) / (alpha**2 * K)


def kd_limit_without_integrators(plant: PlantParams, gains: ControllerGains) -> float:
    """Stiffness limit ``K (1 + Pm Pt) / (Pm Pt)`` for ``Im = It = 0``.

    Without integrators the impedance reduces to second order over a
    single origin pole and stays passive up to this stiffness, which
    exceeds ``K``.
    """
    pp = gains.Pm * gains.Pt
    return plant.K * (1 + pp) / pp


def j_max_undamped(gains: ControllerGains) -> Bound:
    """Null-impedance inertia bound of a model that ignores motor damping."""
    return j_max_null(0.0, gains)


def relative_margin(bound, actual) -> Optional[float]:
    """``(bound - actual) / bound``; 1.0 for an unbounded constraint, None for a missing bound."""
    if bound is None:
        return None
    if bound is UNBOUNDED:
        return 1.0
    return (bound - actual) / bound


def binding_constraint(margins: dict) -> Optional[str]:
    """Name of the constraint with the smallest margin; a missing bound (None) binds first."""
    present = [k for k in CONSTRAINT_ORDER if k in margins]
    if not present:
        return None
    missing = [k for k in present if margins[k] is None]
    if missing:
        return missing[0]
    return min(present, key=lambda k: (margins[k], CONSTRAINT_ORDER.index(k)))


@dataclass(frozen=True)
class BoundsReport:
    b_max: Bound
    J_max: Optional[Bound]
    Kd_max: Optional[float]
    binding: Optional[str]
    margins: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        def fmt(x):
            return "unbounded" if x is UNBOUNDED else x

        return {
            "b_max": fmt(self.b_max),
            "J_max": fmt(self.J_max),
            "Kd_max": fmt(self.Kd_max),
            "binding": self.binding,
            "margins": dict(self.margins),
        }


def bounds_report(plant: PlantParams, gains: ControllerGains, target: RenderTarget) -> BoundsReport:
    """All bounds relevant to ``target`` with per-constraint relative margins."""
    bm = b_max(gains)
    margins = {"damping": relative_margin(bm, plant.b)}
    if target.is_null_equivalent:
        Jm = j_max_null(plant.b, gains)
        margins["inertia"] = relative_margin(Jm, plant.J)
        return BoundsReport(bm, Jm, None, binding_constraint(margins), margins)
    Kd = target.Kd
    if gains.Im == 0 and gains.It == 0:
        kdm = kd_limit_without_integrators(plant, gains)
        Jm = UNBOUNDED
    else:
        kdm = kd_max(plant, gains)
        Jm = j_max_spring(plant.b, gains, plant.K, Kd) if Kd < plant.K else None
    margins["inertia"] = relative_margin(Jm, plant.J)
    margins["stiffness"] = relative_margin(kdm, Kd)
    return BoundsReport(bm, Jm, kdm, binding_constraint(margins), margins)
