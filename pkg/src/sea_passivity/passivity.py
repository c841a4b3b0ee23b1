"""Passivity decisions by two independent routes.

``check_numeric`` applies the three frequency-domain conditions to an
arbitrary rational impedance; ``check_closed_form`` evaluates the
inequality conditions on the plant and gains. ``agreement_sweep``
compares the two on random configurations.
"""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Optional

import numpy as np

from . import bounds as bnd
from .exceptions import NotSimplePole
from .model import ControllerGains, PlantParams, RenderTarget, build_impedance
from .polyalg import (
    RationalTransferFunction,
    even_poly_nonneg,
    real_part_polynomial,
    residue_simple_pole,
    roots,
)

DEFAULT_BOUNDARY_BAND = 1e-6
# |Re(p)| <= AXIS_TOL * max(1, |p|) puts a pole on the imaginary axis.
AXIS_TOL = 1e-9
# Residue counts as real when |Im r| <= RESIDUE_IMAG_TOL * |r|.
RESIDUE_IMAG_TOL = 1e-9


class Route(str, Enum):
    CLOSED_FORM = "closed_form"
    NUMERIC = "numeric"


class Condition(NamedTuple):
    id: str
    description: str
    margin: Optional[float]


@dataclass(frozen=True)
class PassivityVerdict:
    passive: bool
    route: Route
    failed_conditions: tuple = ()
    witness_frequency: Optional[float] = None
    marginal: bool = False
    margins: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "failed_conditions", tuple(self.failed_conditions))
        if self.passive and self.failed_conditions:
            raise ValueError("a passive verdict cannot list failed conditions")

    @property
    def failed_ids(self):
        return [c.id for c in self.failed_conditions]

    def as_dict(self):
        return {
            "passive": self.passive,
            "route": self.route.value,
            "marginal": self.marginal,
            "failed_conditions": [c._asdict() for c in self.failed_conditions],
            "witness_frequency": self.witness_frequency,
            "margins": dict(self.margins),
        }


def _group_axis_poles(poles, tol):
    """Cluster imaginary-axis poles that coincide numerically; returns (center, count) pairs."""
    groups = []
    for p in sorted(poles, key=lambda z: z.imag):
        if groups and abs(p.imag - groups[-1][0]) <= tol * max(1.0, abs(p)):
            c, n = groups[-1]
            groups[-1] = ((c * n + p.imag) / (n + 1), n + 1)
        else:
            groups.append((p.imag, 1))
    return groups


def check_numeric(tf: RationalTransferFunction, boundary_band: float = DEFAULT_BOUNDARY_BAND) -> PassivityVerdict:
    """Frequency-domain passivity test of a SISO impedance.

    (i) poles from the denominator roots; only simple imaginary-axis
    poles are tolerated. (iii) those poles must have real positive
    residues. (ii) ``Re{num(jw) den(-jw)}`` is formed as a polynomial
    and tested for nonnegativity, which shares the sign of
    ``Re{Z(jw)}`` away from poles.
    """
    failed = []
    marginal = False
    margins = {}

    poles = roots(tf.den) if tf.den.degree() >= 1 else []
    axis, unstable = [], []
    worst = -np.inf
    for p in poles:
        rel = p.real / max(1.0, abs(p))
        if abs(p.real) <= AXIS_TOL * max(1.0, abs(p)):
            axis.append(complex(0.0, p.imag))
            continue
        worst = max(worst, rel)
        if p.real > 0:
            unstable.append(p)
        elif -p.real <= boundary_band * abs(p):
            marginal = True
    margins["stability"] = None if worst == -np.inf else float(-worst)
    if unstable:
        failed.append(
            Condition("stability", f"{len(unstable)} pole(s) in the open right half plane", float(-worst))
        )

    groups = _group_axis_poles(axis, 1e-7)
    min_res = None
    for center, count in groups:
        if count > 1:
            failed.append(
                Condition("imaginary_pole", f"repeated imaginary-axis pole at {center:g}j", None)
            )
            continue
        try:
            r = residue_simple_pole(tf, complex(0.0, center))
        except NotSimplePole:
            failed.append(Condition("imaginary_pole", f"non-simple pole at {center:g}j", None))
            continue
        ok = abs(r.imag) <= RESIDUE_IMAG_TOL * abs(r) and r.real > 0
        rel = float(r.real / abs(r)) if r != 0 else 0.0
        min_res = rel if min_res is None else min(min_res, rel)
        if not ok:
            failed.append(
                Condition("residue", f"residue {r:.6g} at {center:g}j is not real positive", rel)
            )
    if groups:
        margins["residue"] = min_res

    rp = real_part_polynomial(tf)
    for n, c in rp.coeffs.items():
        if c != 0.0 and abs(c) <= boundary_band * rp.scale[n]:
            marginal = True
    res = even_poly_nonneg(rp.coeffs)
    witness = None
    if not res.nonneg:
        witness = res.witness
        z = tf(1j * witness)
        cosphi = float(z.real / abs(z)) if z != 0 else 0.0
        failed.append(
            Condition("positive_real", f"Re Z(jw) < 0 at w = {witness:.6g} rad/s", cosphi)
        )
        margins["positive_real"] = cosphi
    return PassivityVerdict(
        passive=not failed,
        route=Route.NUMERIC,
        failed_conditions=failed,
        witness_frequency=witness,
        marginal=marginal,
        margins=margins,
    )


_DESCRIPTIONS = {
    "damping": "motor damping exceeds Pt*Im/It",
    "inertia": "motor inertia exceeds its passivity bound",
    "stiffness": "virtual stiffness exceeds its passivity bound",
    "coincident_boundary": "damping and inertia bounds are both active (unstable)",
}


def _condition(cid, margin, extra=""):
    return Condition(cid, _DESCRIPTIONS[cid] + extra, margin)


def _near(m, band):
    return m is not None and abs(m) <= band


def check_closed_form(
    plant: PlantParams,
    gains: ControllerGains,
    target: RenderTarget,
    boundary_band: float = DEFAULT_BOUNDARY_BAND,
) -> PassivityVerdict:
    """Passivity from the closed-form necessary and sufficient conditions."""
    if target.is_null_equivalent:
        return _closed_form_null(plant, gains, boundary_band)
    return _closed_form_spring(plant, gains, target.Kd, boundary_band)


def _closed_form_null(plant, gains, band):
    J, b = plant.J, plant.b
    Im, It = gains.Im, gains.It
    bm = bnd.b_max(gains)
    Jm = bnd.j_max_null(b, gains)
    margins = {
        "damping": bnd.relative_margin(bm, b),
        "inertia": bnd.relative_margin(Jm, J),
    }
    failed = []
    if Im == 0 and It == 0:
        passive = True
    elif Im == 0:
        # Only the inertia bound remains, strictly.
        passive = J < Jm
        if not passive:
            failed.append(_condition("inertia", margins["inertia"]))
    elif It == 0:
        passive = J <= Jm
        if not passive:
            failed.append(_condition("inertia", margins["inertia"]))
    else:
        passive = (J < Jm and b <= bm) or (J <= Jm and b < bm)
        if b > bm:
            failed.append(_condition("damping", margins["damping"]))
        if J > Jm:
            failed.append(_condition("inertia", margins["inertia"]))
        if not passive and not failed:
            failed.append(_condition("coincident_boundary", 0.0))
    marginal = any(_near(m, band) for k, m in margins.items() if m != 1.0)
    return PassivityVerdict(passive, Route.CLOSED_FORM, failed, None, marginal, margins)


def _closed_form_spring(plant, gains, Kd, band):
    J, b, K = plant.J, plant.b, plant.K
    Im, It = gains.Im, gains.It
    failed = []
    if Im == 0 and It == 0:
        lim = bnd.kd_limit_without_integrators(plant, gains)
        margins = {"damping": 1.0, "inertia": 1.0, "stiffness": bnd.relative_margin(lim, Kd)}
        passive = Kd <= lim
        if not passive:
            failed.append(_condition("stiffness", margins["stiffness"]))
        marginal = _near(margins["stiffness"], band)
        return PassivityVerdict(passive, Route.CLOSED_FORM, failed, None, marginal, margins)
    if Im == 0:
        margins = {"damping": 1.0, "inertia": None, "stiffness": None}
        failed.append(
            _condition("stiffness", None, "; no positive stiffness is renderable without velocity integral action")
        )
        return PassivityVerdict(False, Route.CLOSED_FORM, failed, None, False, margins)

    bm = bnd.b_max(gains)
    kdm = bnd.kd_max(plant, gains)
    Jm = bnd.j_max_spring(b, gains, K, Kd) if Kd < K else None
    margins = {
        "damping": bnd.relative_margin(bm, b),
        "inertia": bnd.relative_margin(Jm, J),
        "stiffness": bnd.relative_margin(kdm, Kd),
    }
    if kdm is None:
        # beta <= 0: either b >= b_max, or the stiffness band is unstable.
        failed.append(_condition("damping", margins["damping"]))
        failed.append(_condition("stiffness", None, "; no positive stiffness is renderable"))
        passive = False
    else:
        passive = b < bm and Jm is not None and (
            (J < Jm and Kd <= kdm) or (J <= Jm and Kd < kdm)
        )
        if b >= bm:
            failed.append(_condition("damping", margins["damping"]))
        if Kd > kdm:
            failed.append(_condition("stiffness", margins["stiffness"]))
        if Jm is not None and J > Jm:
            failed.append(_condition("inertia", margins["inertia"]))
        if not passive and not failed:
            failed.append(_condition("coincident_boundary", 0.0))
    marginal = any(_near(m, band) for m in margins.values() if m != 1.0)
    return PassivityVerdict(passive, Route.CLOSED_FORM, failed, None, marginal, margins)


def check_both(plant, gains, target, boundary_band=DEFAULT_BOUNDARY_BAND):
    """Closed-form and numeric verdicts for one configuration."""
    cf = check_closed_form(plant, gains, target, boundary_band)
    nm = check_numeric(build_impedance(plant, gains, target), boundary_band)
    return cf, nm


# Agreement sweep ----------------------------------------------------------


@dataclass(frozen=True)
class SamplerConfig:
    """Random configuration generator for the route-agreement experiment.

    Plant constants and gains are drawn log-uniformly from their ranges;
    for spring targets ``Kd`` is uniform on ``kd_fraction * K``.
    """

    n_samples: int = 10_000
    target: str = "null"
    J_range: tuple = (1e-2, 1e3)
    b_range: tuple = (1e-2, 1e3)
    K_range: tuple = (1e-2, 1e3)
    gain_range: tuple = (1e-2, 1e3)
    kd_fraction: tuple = (0.0, 2.0)
    seed: int = 0
    boundary_band: float = DEFAULT_BOUNDARY_BAND
    n_jobs: int = 1


class Sample(NamedTuple):
    index: int
    plant: PlantParams
    gains: ControllerGains
    target: RenderTarget


def draw_samples(cfg: SamplerConfig) -> list:
    rng = np.random.default_rng(cfg.seed)

    def logu(lo_hi, size):
        lo, hi = lo_hi
        return np.exp(rng.uniform(np.log(lo), np.log(hi), size))

    n = cfg.n_samples
    J, b, K = logu(cfg.J_range, n), logu(cfg.b_range, n), logu(cfg.K_range, n)
    G = logu(cfg.gain_range, (n, 4))
    frac = rng.uniform(cfg.kd_fraction[0], cfg.kd_fraction[1], n)
    out = []
    for i in range(n):
        plant = PlantParams(float(J[i]), float(b[i]), float(K[i]))
        gains = ControllerGains(*(float(x) for x in G[i]))
        if cfg.target == "spring":
            target = RenderTarget.spring(float(frac[i] * K[i]))
        else:
            target = RenderTarget.null()
        out.append(Sample(i, plant, gains, target))
    return out


@dataclass
class SweepReport:
    n_samples: int
    n_marginal: int
    n_compared: int
    n_passive: int
    disagreements: list
    samples: list
    seconds: float

    @property
    def ok(self):
        return not self.disagreements


def agreement_sweep(cfg: SamplerConfig) -> SweepReport:
    """Run both routes on every sample; disagreements outside the boundary band are reported."""
    samples = draw_samples(cfg)
    t0 = time.perf_counter()

    def run(sample):
        return check_both(sample.plant, sample.gains, sample.target, cfg.boundary_band)

    if cfg.n_jobs > 1:
        with ThreadPoolExecutor(cfg.n_jobs) as pool:
            results = list(pool.map(run, samples))
    else:
        results = [run(s) for s in samples]
    n_marginal = n_passive = 0
    disagreements = []
    for sample, (cf, nm) in zip(samples, results):
        if cf.marginal:
            n_marginal += 1
            continue
        n_passive += cf.passive
        if cf.passive != nm.passive:
            disagreements.append((sample, cf, nm))
    return SweepReport(
        n_samples=len(samples),
        n_marginal=n_marginal,
        n_compared=len(samples) - n_marginal,
        n_passive=n_passive,
        disagreements=disagreements,
        samples=samples,
        seconds=time.perf_counter() - t0,
    )
