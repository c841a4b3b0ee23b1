"""Bode data, phase extrema and regime segmentation of output impedances."""
from __future__ import annotations

from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .exceptions import EvalAtPole, InsufficientSpan
from .model import RenderTarget
from .polyalg import RationalTransferFunction, poly_eval_complex

DEFAULT_WMIN = 1e-3
DEFAULT_WMAX = 1e6
DEFAULT_PPD = 200


class BodeSample(NamedTuple):
    w: float
    magnitude_db: float
    phase_deg: float


class PhaseExtrema(NamedTuple):
    max_phase_deg: float
    argmax_w: float
    min_phase_deg: float
    argmin_w: float


class RegimeSegmentation(NamedTuple):
    boundaries: tuple
    labels: tuple


def frequency_grid(wmin=DEFAULT_WMIN, wmax=DEFAULT_WMAX, points_per_decade=DEFAULT_PPD) -> np.ndarray:
    if not (0 < wmin < wmax):
        raise ValueError("need 0 < wmin < wmax")
    if points_per_decade <= 0:
        raise ValueError("points_per_decade must be positive")
    decades = np.log10(wmax) - np.log10(wmin)
    n = int(round(decades * points_per_decade)) + 1
    return np.logspace(np.log10(wmin), np.log10(wmax), max(n, 2))


def _pole_hits(tf, w):
    den = np.abs(poly_eval_complex(tf.den, 1j * w))
    scale = sum(abs(c) * w**k for k, c in enumerate(tf.den.coeffs))
    return den <= 1e-12 * scale


def bode_arrays(tf: RationalTransferFunction, wmin=DEFAULT_WMIN, wmax=DEFAULT_WMAX, points_per_decade=DEFAULT_PPD):
    """``(w, magnitude_db, phase_deg)`` arrays with the phase unwrapped along the sweep."""
    w = frequency_grid(wmin, wmax, points_per_decade)
    hits = _pole_hits(tf, w)
    if hits.any():
        w = w.copy()
        w[hits] *= 10 ** (0.5 / points_per_decade)
        if _pole_hits(tf, w).any():
            raise EvalAtPole("frequency grid coincides with an imaginary-axis pole")
    z = tf(1j * w)
    mag = 20 * np.log10(np.abs(z))
    phase = np.unwrap(np.degrees(np.angle(z)), period=360.0)
    return w, mag, phase


def bode(tf: RationalTransferFunction, wmin=DEFAULT_WMIN, wmax=DEFAULT_WMAX, points_per_decade=DEFAULT_PPD) -> list:
    w, mag, phase = bode_arrays(tf, wmin, wmax, points_per_decade)
    return [BodeSample(float(a), float(b), float(c)) for a, b, c in zip(w, mag, phase)]


def _columns(samples):
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or len(arr) == 0:
        raise ValueError("need a non-empty sequence of Bode samples")
    return arr[:, 0], arr[:, 1], arr[:, 2]


def _refine(tf, w, phase, i, sign):
    """Golden-section search for a phase extremum bracketed by samples ``i-1 .. i+1``."""
    if tf is None or i == 0 or i == len(w) - 1:
        return float(phase[i]), float(w[i])
    ref = phase[i]

    def f(x):
        ph = np.degrees(np.angle(tf(1j * x)))
        ph += 360.0 * np.round((ref - ph) / 360.0)
        return -sign * ph

    res = minimize_scalar(f, bracket=(w[i - 1], w[i], w[i + 1]), method="golden", tol=1e-4)
    val = -sign * res.fun
    if sign * val > sign * phase[i] and w[i - 1] <= res.x <= w[i + 1]:
        return float(val), float(res.x)
    return float(phase[i]), float(w[i])


def phase_extrema(samples: Sequence[BodeSample], tf: Optional[RationalTransferFunction] = None) -> PhaseExtrema:
    """Largest and smallest phase over the sweep.

    Given the transfer function, each discrete extremum is refined
    between its neighbouring grid points.
    """
    w, _, phase = _columns(samples)
    imax, imin = int(np.argmax(phase)), int(np.argmin(phase))
    pmax, wmax_ = _refine(tf, w, phase, imax, +1)
    pmin, wmin_ = _refine(tf, w, phase, imin, -1)
    return PhaseExtrema(pmax, wmax_, pmin, wmin_)


def _crossing(lw, slope, i, level):
    """Log-interpolated frequency where the slope passes ``level`` between samples i-1 and i."""
    s0, s1 = slope[i - 1], slope[i]
    t = 0.5 if s1 == s0 else (level - s0) / (s1 - s0)
    return float(10 ** (lw[i - 1] + t * (lw[i] - lw[i - 1])))


def segment_regimes(samples: Sequence[BodeSample], target: RenderTarget) -> RegimeSegmentation:
    """Split a sweep into low-frequency, damping and physical-spring regimes.

    Regime slopes are +20 (inertia) or -20 (virtual stiffness) dB/decade
    at low frequency, about 0 in the damping band and -20 at high
    frequency. A boundary is placed where the log-log slope crosses the
    midpoint between adjacent regime slopes; the second boundary is the
    last entry into the high-frequency regime, so resonances in between
    stay inside the damping band.
    """
    w, mag, _ = _columns(samples)
    if len(w) < 3:
        raise InsufficientSpan("need at least three samples")
    lw = np.log10(w)
    slope = np.gradient(mag, lw)
    if target.is_null_equivalent:
        first = "inertial"
        leaving = slope <= 10.0
        level0 = 10.0
    else:
        first = "stiffness"
        leaving = slope >= -10.0
        level0 = -10.0
    if leaving[0] or not leaving.any():
        raise InsufficientSpan("low-frequency regime boundary is outside the sweep")
    i0 = int(np.argmax(leaving))
    b0 = _crossing(lw, slope, i0, level0)
    settled = slope <= -10.0
    if not settled[-1]:
        raise InsufficientSpan("high-frequency regime is not reached within the sweep")
    above = np.nonzero(~settled[i0:])[0]
    if len(above) == 0:
        raise InsufficientSpan("no damping band between the regimes")
    i1 = i0 + int(above[-1]) + 1
    b1 = _crossing(lw, slope, i1, -10.0)
    if not b0 < b1:
        raise InsufficientSpan("regime boundaries are not ordered")
    return RegimeSegmentation((b0, b1), (first, "damping", "spring"))


def regime_labels(samples: Sequence[BodeSample], seg: RegimeSegmentation) -> list:
    b0, b1 = seg.boundaries
    out = []
    for s in samples:
        if s.w < b0:
            out.append(seg.labels[0])
        elif s.w < b1:
            out.append(seg.labels[1])
        else:
            out.append(seg.labels[2])
    return out
