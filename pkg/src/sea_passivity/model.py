"""SEA plant, cascaded PI controller and render targets.

The output impedance seen at the spring port is built two ways:
from the closed-form numerator/denominator expressions, and by
solving the loop equations of the block diagram directly.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum

from .polyalg import Polynomial, RationalTransferFunction


def _require(cond, name, msg):
    if not cond:
        raise ValueError(f"{name}: {msg}")


def _finite(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


@dataclass(frozen=True)
class PlantParams:
    """Motor-side inertia ``J`` [kg m^2], viscous damping ``b`` [N m s/rad], spring ``K`` [N m/rad]."""

    J: float
    b: float
    K: float

    def __post_init__(self):
        for name in ("J", "b", "K"):
            _require(_finite(getattr(self, name)), name, "must be a finite number")
        _require(self.J > 0, "J", "must be > 0")
        _require(self.b >= 0, "b", "must be >= 0")
        _require(self.K > 0, "K", "must be > 0")


@dataclass(frozen=True)
class ControllerGains:
    """PI gains of the velocity loop (``Pm``, ``Im``) and torque loop (``Pt``, ``It``)."""

    Pm: float
    Im: float
    Pt: float
    It: float

    def __post_init__(self):
        for name in ("Pm", "Im", "Pt", "It"):
            _require(_finite(getattr(self, name)), name, "must be a finite number")
        _require(self.Pm > 0, "Pm", "must be > 0")
        _require(self.Pt > 0, "Pt", "must be > 0")
        _require(self.Im >= 0, "Im", "must be >= 0")
        _require(self.It >= 0, "It", "must be >= 0")


class TargetKind(str, Enum):
    NULL = "null"
    SPRING = "spring"


@dataclass(frozen=True)
class RenderTarget:
    variant: TargetKind = TargetKind.NULL
    Kd: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "variant", TargetKind(self.variant))
        _require(_finite(self.Kd), "Kd", "must be a finite number")
        _require(self.Kd >= 0, "Kd", "must be >= 0")
        if self.variant is TargetKind.NULL:
            _require(self.Kd == 0, "Kd", "must be 0 for a null target")

    @classmethod
    def null(cls):
        return cls(TargetKind.NULL, 0.0)

    @classmethod
    def spring(cls, Kd):
        return cls(TargetKind.SPRING, float(Kd))

    @property
    def stiffness(self) -> float:
        """Virtual stiffness; zero for a null target."""
        return self.Kd if self.variant is TargetKind.SPRING else 0.0

    @property
    def is_null_equivalent(self) -> bool:
        return self.stiffness == 0.0


@dataclass(frozen=True)
class ClosedFormCoefficients:
    """Intermediate quantities of the passivity conditions, recomputed on access."""

    plant: PlantParams
    gains: ControllerGains
    Kd: float = 0.0

    @property
    def alpha(self):
        g = self.gains
        return g.Pm * g.It + g.Pt * g.Im

    @property
    def gamma(self):
        g = self.gains
        return self.plant.K * g.Pm * g.Pt + g.Im

    @property
    def delta(self):
        g = self.gains
        return g.Pm * g.Pt * self.Kd + g.Im

    @property
    def beta(self):
        g = self.gains
        return g.Pt * g.Im**2 - self.plant.b * g.Im * g.It

    @property
    def eta(self):
        g, p = self.gains, self.plant
        return g.Pm**2 * g.Pt + g.Pm * g.Pt * p.b - p.J * self.alpha

    @property
    def deltaK(self):
        return self.plant.K - self.Kd

    @property
    def xi(self):
        """Routh quantity of the fourth-order characteristic polynomial; stable iff > 0."""
        p, g = self.plant, self.gains
        pmb = g.Pm + p.b
        a = self.alpha
        return (
            a * p.K * pmb * (p.K + self.gamma)
            - p.K * g.Im * g.It * pmb**2
            - p.J * p.K**2 * a**2
        )

    @property
    def d2(self):
        p, g = self.plant, self.gains
        return p.K**2 * g.Im * (g.Pt * g.Im - p.b * g.It)

    @property
    def d4(self):
        p, g = self.plant, self.gains
        return p.K**2 * ((g.Pm + p.b) * (1 + g.Pm * g.Pt) - p.J * self.alpha)

    @property
    def d4s(self):
        K = self.plant.K
        return K * (self.deltaK * self.beta - self.alpha * K * self.Kd)

    @property
    def d6(self):
        p, g = self.plant, self.gains
        return p.K * (self.deltaK * self.eta + p.K * (g.Pm + p.b))


def characteristic_polynomial(plant: PlantParams, gains: ControllerGains) -> Polynomial:
    """``J s^4 + (Pm+b) s^3 + (K+gamma) s^2 + alpha K s + K Im It``."""
    c = ClosedFormCoefficients(plant, gains)
    K = plant.K
    return Polynomial(
        (K * gains.Im * gains.It, c.alpha * K, K + c.gamma, gains.Pm + plant.b, plant.J)
    )


def build_null_impedance(plant: PlantParams, gains: ControllerGains) -> RationalTransferFunction:
    K = plant.K
    num = Polynomial((0.0, K * gains.Im, K * (gains.Pm + plant.b), K * plant.J))
    return RationalTransferFunction(num, characteristic_polynomial(plant, gains))


def build_spring_impedance(plant: PlantParams, gains: ControllerGains, Kd: float) -> RationalTransferFunction:
    if Kd < 0:
        raise ValueError("Kd: must be >= 0")
    c = ClosedFormCoefficients(plant, gains, Kd)
    K = plant.K
    num = Polynomial(
        (
            K * Kd * gains.Im * gains.It,
            K * c.alpha * Kd,
            K * c.delta,
            K * (gains.Pm + plant.b),
            K * plant.J,
        )
    )
    return RationalTransferFunction(num, characteristic_polynomial(plant, gains).shift_up(1))


def build_impedance(plant: PlantParams, gains: ControllerGains, target: RenderTarget) -> RationalTransferFunction:
    if target.is_null_equivalent:
        return build_null_impedance(plant, gains)
    return build_spring_impedance(plant, gains, target.Kd)


# Loop-equation assembly ----------------------------------------------------

_P = Polynomial
_ZERO = Polynomial(())


def _poly_det(m):
    """Determinant of a square matrix of polynomials by Leibniz expansion."""
    n = len(m)
    total = _ZERO
    for perm in itertools.permutations(range(n)):
        entries = [m[i][perm[i]] for i in range(n)]
        if any(e.is_zero for e in entries):
            continue
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = entries[0]
        for e in entries[1:]:
            term = term * e
        total = total - term if inversions % 2 else total + term
    return total


def assemble_block_diagram(plant: PlantParams, gains: ControllerGains, target: RenderTarget) -> RationalTransferFunction:
    """Output impedance from the loop equations of the cascaded controller.

    Sign conventions (chosen to reproduce the closed-form impedance):

    * spring torque ``tau_sea = K (theta_m - theta_end)``
    * motor: ``(J s^2 + b s) theta_m = tau_m - tau_sea``
    * velocity PI: ``tau_m = (Pm + Im/s)(omega_ref - s theta_m)``
    * torque PI: ``omega_ref = (Pt + It/s)(tau_d - tau_sea)``
    * impedance law with zero set point: ``tau_d = -Kd theta_end``
    * port impedance ``Z = -tau_sea / (s theta_end)``

    Each equation is cleared of its own denominators and the linear
    system in ``[theta_m, omega_ref, tau_m, tau_sea, tau_d]`` is solved
    for ``tau_sea`` per unit ``theta_end`` by Cramer's rule.
    """
    J, b, K = plant.J, plant.b, plant.K
    Pm, Im, Pt, It = gains.Pm, gains.Im, gains.Pt, gains.It
    Kd = target.stiffness
    vel_pi = _P((Im, Pm))
    trq_pi = _P((It, Pt))
    s = _P((0.0, 1.0))
    one = _P((1.0,))
    z = _ZERO
    # Rows: plant, velocity PI (times s), torque PI (times s), impedance law, spring.
    M = [
        [_P((0.0, b, J)), z, -one, one, z],
        [vel_pi * s, -vel_pi, s, z, z],
        [z, s, z, trq_pi, -trq_pi],
        [z, z, z, z, one],
        [_P((-K,)), z, z, one, z],
    ]
    rhs = [z, z, z, _P((-Kd,)), _P((-K,))]
    det = _poly_det(M)
    col = 3
    Mt = [[rhs[i] if j == col else M[i][j] for j in range(5)] for i in range(5)]
    tau = _poly_det(Mt)
    return RationalTransferFunction(-tau, det * s)
