"""Published design guidelines for the cascaded SEA controller, evaluated side by side.

The Vallery and Accoto rules are sufficient-only conditions taken as
printed; "ours" is the closed-form necessary and sufficient test.
"""
from __future__ import annotations

from typing import NamedTuple

from . import bounds as bnd
from .model import ClosedFormCoefficients, ControllerGains, PlantParams, RenderTarget
from .passivity import check_closed_form


class GuidelineVerdict(NamedTuple):
    name: str
    passed: bool
    margins: dict

    def as_dict(self):
        return {"name": self.name, "passed": self.passed, "margins": dict(self.margins)}


def _strict_all(margins):
    return all(m is not None and m > 0 for m in margins.values())


def vallery(plant: PlantParams, gains: ControllerGains, target: RenderTarget) -> GuidelineVerdict:
    """``Pm > J``, ``Pm > 2 Im``, ``Pt > 2 It``; for springs also ``Kd`` below the undamped stiffness bound."""
    margins = {
        "Pm>J": (gains.Pm - plant.J) / gains.Pm,
        "Pm>2Im": (gains.Pm - 2 * gains.Im) / gains.Pm,
        "Pt>2It": (gains.Pt - 2 * gains.It) / gains.Pt,
    }
    if not target.is_null_equivalent:
        undamped = PlantParams(plant.J, 0.0, plant.K)
        margins["Kd<Kd_max(b=0)"] = bnd.relative_margin(bnd.kd_max(undamped, gains), target.Kd)
    return GuidelineVerdict("vallery", _strict_all(margins), margins)


def accoto(plant: PlantParams, gains: ControllerGains, target: RenderTarget) -> GuidelineVerdict:
    """``J < (Pm+b) Pm Pt / alpha`` and ``b < Pt Im / It``; for springs also ``Kd < Kd_max``."""
    alpha = ClosedFormCoefficients(plant, gains).alpha
    j_bound = bnd.UNBOUNDED if alpha == 0 else (gains.Pm + plant.b) * gains.Pm * gains.Pt / alpha
    b_bound = bnd.UNBOUNDED if gains.It == 0 else gains.Pt * gains.Im / gains.It
    margins = {
        "J": bnd.relative_margin(j_bound, plant.J),
        "b": bnd.relative_margin(b_bound, plant.b),
    }
    if not target.is_null_equivalent:
        margins["Kd"] = bnd.relative_margin(bnd.kd_max(plant, gains), target.Kd)
    return GuidelineVerdict("accoto", _strict_all(margins), margins)


def ours(plant: PlantParams, gains: ControllerGains, target: RenderTarget) -> GuidelineVerdict:
    v = check_closed_form(plant, gains, target)
    return GuidelineVerdict("ours", v.passive, dict(v.margins))


def evaluate_prior_guidelines(plant: PlantParams, gains: ControllerGains, target: RenderTarget) -> dict:
    return {g.name: g for g in (vallery(plant, gains, target), accoto(plant, gains, target), ours(plant, gains, target))}
