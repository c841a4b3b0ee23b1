"""Real-coefficient polynomial and rational-function algebra.

Coefficients are stored in ascending order: ``coeffs[k]`` multiplies
``s**k``. Everything here is a pure function of immutable values.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Sequence

import numpy as np
from scipy.linalg import matrix_balance

from .exceptions import NotSimplePole, ZeroPolynomial

# Leading coefficients below this fraction of max|coeff| are dropped.
LEADING_TOL = 1e-14
# Routh first-column entries below this fraction of their cancellation scale count as zero.
ROUTH_ZERO_TOL = 1e-12
# Coefficients of Re{num(jw)den(-jw)} below this fraction of their term scale are cancellation noise.
CANCELLATION_TOL = 1e-13


def _normalize(coeffs) -> tuple:
    c = [float(x) for x in coeffs]
    if not c:
        return ()
    cmax = max(abs(x) for x in c)
    if cmax == 0.0:
        return ()
    thresh = LEADING_TOL * cmax
    while c and abs(c[-1]) <= thresh:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class Polynomial:
    """Polynomial in ``s`` with real coefficients in ascending order.

    The zero polynomial is the empty tuple. Construction strips
    negligible leading coefficients so ``degree()`` is honest.
    """

    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _normalize(self.coeffs))

    @classmethod
    def from_descending(cls, coeffs: Sequence[float]) -> "Polynomial":
        return cls(tuple(coeffs)[::-1])

    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> float:
        return self.coeffs[-1] if self.coeffs else 0.0

    def descending(self) -> np.ndarray:
        return np.array(self.coeffs[::-1], dtype=float)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0.0

    def __call__(self, z):
        return poly_eval_complex(self, z)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self), len(other))
        return Polynomial(tuple(self[k] + other[k] for k in range(n)))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        return poly_mul(self, _as_poly(other))

    __rmul__ = __mul__

    def scaled(self, factor: float) -> "Polynomial":
        return Polynomial(tuple(factor * c for c in self.coeffs))

    def derivative(self) -> "Polynomial":
        return Polynomial(tuple(k * c for k, c in enumerate(self.coeffs) if k > 0))

    def trailing_zeros(self) -> int:
        """Multiplicity of the exact root at ``s = 0``."""
        n = 0
        for c in self.coeffs:
            if c != 0.0:
                break
            n += 1
        return n

    def shift_down(self, k: int) -> "Polynomial":
        """Divide by ``s**k``; the low ``k`` coefficients must be exactly zero."""
        if any(c != 0.0 for c in self.coeffs[:k]):
            raise ValueError(f"polynomial is not divisible by s**{k}")
        return Polynomial(self.coeffs[k:])

    def shift_up(self, k: int) -> "Polynomial":
        return Polynomial((0.0,) * k + self.coeffs) if self.coeffs else self

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0.0:
                continue
            terms.append(f"{c:g}" + ("" if k == 0 else "*s" if k == 1 else f"*s^{k}"))
        return "Polynomial(" + (" + ".join(terms) or "0") + ")"


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if np.isscalar(x):
        return Polynomial((float(x),))
    return Polynomial(tuple(x))


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    """Product of two polynomials (coefficient convolution)."""
    if a.is_zero or b.is_zero:
        return Polynomial(())
    return Polynomial(tuple(np.convolve(a.coeffs, b.coeffs)))


def poly_eval_complex(p: Polynomial, z):
    """Evaluate ``p`` at a complex point (or array of points) by Horner's rule."""
    acc = np.zeros_like(np.asarray(z, dtype=complex))
    for c in reversed(p.coeffs):
        acc = acc * z + c
    return complex(acc) if acc.ndim == 0 else acc


def _abs_scale(p: Polynomial, z) -> float:
    """``sum |c_k| |z|**k``, the natural magnitude against which ``|p(z)|`` is small."""
    r = abs(z)
    return float(sum(abs(c) * r**k for k, c in enumerate(p.coeffs)))


def roots(p: Polynomial) -> list:
    """All complex roots of ``p`` with multiplicity.

    Exact zero roots are split off first; the rest come from the
    eigenvalues of the balanced companion matrix, followed by one
    Newton step per root that is kept only if it lowers the residual.
    """
    if p.is_zero:
        raise ZeroPolynomial("roots of the zero polynomial are undefined")
    k = p.trailing_zeros()
    q = p.shift_down(k)
    out = [0j] * k
    m = q.degree()
    if m == 1:
        out.append(complex(-q.coeffs[0] / q.coeffs[1]))
    elif m >= 2:
        monic = np.array(q.coeffs[:-1]) / q.leading
        comp = np.zeros((m, m))
        comp[1:, :-1] = np.eye(m - 1)
        comp[:, -1] = -monic
        balanced, _ = matrix_balance(comp, permute=False)
        found = np.linalg.eigvals(balanced)
        dq = q.derivative()
        for r in found:
            r = complex(r)
            f = poly_eval_complex(q, r)
            df = poly_eval_complex(dq, r)
            if df != 0 and f != 0:
                cand = r - f / df
                if abs(poly_eval_complex(q, cand)) < abs(f):
                    r = cand
            out.append(r)
    return sorted(out, key=lambda z: (z.real, z.imag))


class RouthReport(NamedTuple):
    first_column: list
    stable: bool
    marginal: bool


def routh_stable(p: Polynomial) -> RouthReport:
    """Routh-Hurwitz test for all roots in the open left half plane.

    A first-column entry that vanishes relative to the terms it was
    computed from sets ``marginal`` and stops the table; no epsilon
    continuation is attempted.
    """
    if p.is_zero:
        raise ZeroPolynomial("Routh test of the zero polynomial")
    c = p.descending()
    if c[0] < 0:
        c = -c
    n = len(c) - 1
    width = n // 2 + 1
    r0 = np.zeros(width)
    r1 = np.zeros(width)
    r0[: len(c[0::2])] = c[0::2]
    r1[: len(c[1::2])] = c[1::2]
    first = [float(r0[0])]
    if n == 0:
        return RouthReport(first, False, False)
    cscale = np.max(np.abs(c))
    if abs(r1[0]) <= ROUTH_ZERO_TOL * cscale:
        return RouthReport(first + [float(r1[0])], False, True)
    first.append(float(r1[0]))
    prev2, prev1 = r0, r1
    for _ in range(n - 1):
        ratio = prev2[0] / prev1[0]
        a = np.append(prev2[1:], 0.0)
        b = ratio * np.append(prev1[1:], 0.0)
        row = a - b
        scale = np.maximum(np.abs(a), np.abs(b))
        if abs(row[0]) <= ROUTH_ZERO_TOL * scale[0] or row[0] == 0.0:
            first.append(float(row[0]))
            return RouthReport(first, False, True)
        first.append(float(row[0]))
        prev2, prev1 = prev1, row
    stable = all(x > 0 for x in first)
    return RouthReport(first, stable, False)


@dataclass(frozen=True)
class RationalTransferFunction:
    """Ratio of two real polynomials in ``s``.

    Shared exact factors of ``s`` are cancelled on construction; no
    other common factors are removed.
    """

    num: Polynomial
    den: Polynomial = field(default_factory=lambda: Polynomial((1.0,)))

    def __post_init__(self):
        num, den = _as_poly(self.num), _as_poly(self.den)
        if den.is_zero:
            raise ZeroPolynomial("transfer function denominator is zero")
        if num.is_zero:
            den = Polynomial((1.0,))
        else:
            k = min(num.trailing_zeros(), den.trailing_zeros())
            if k:
                num, den = num.shift_down(k), den.shift_down(k)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def from_descending(cls, num, den):
        return cls(Polynomial.from_descending(num), Polynomial.from_descending(den))

    def __call__(self, z):
        return poly_eval_complex(self.num, z) / poly_eval_complex(self.den, z)

    def __add__(self, other):
        other = _as_tf(other)
        return RationalTransferFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalTransferFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_tf(other))

    def __rsub__(self, other):
        return _as_tf(other) - self

    def __mul__(self, other):
        other = _as_tf(other)
        return RationalTransferFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_tf(other)
        if other.num.is_zero:
            raise ZeroDivisionError("division by the zero transfer function")
        return RationalTransferFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _as_tf(other) / self

    def normalized(self) -> "RationalTransferFunction":
        """Scale so the denominator is monic."""
        lead = self.den.leading
        return RationalTransferFunction(self.num.scaled(1 / lead), self.den.scaled(1 / lead))

    def poles(self) -> list:
        return roots(self.den)

    def zeros(self) -> list:
        return roots(self.num) if self.num.degree() >= 1 else []

    def relative_degree(self) -> int:
        return self.den.degree() - self.num.degree()


def _as_tf(x) -> RationalTransferFunction:
    if isinstance(x, RationalTransferFunction):
        return x
    return RationalTransferFunction(_as_poly(x))


S = RationalTransferFunction(Polynomial((0.0, 1.0)))


def coefficients_close(a: RationalTransferFunction, b: RationalTransferFunction, rtol=1e-9) -> bool:
    """Coefficient-wise agreement after monic normalisation of the denominators.

    Each coefficient is compared relative to the largest coefficient
    of its polynomial.
    """
    a, b = a.normalized(), b.normalized()
    for pa, pb in ((a.num, b.num), (a.den, b.den)):
        if len(pa) != len(pb):
            return False
        if pa.is_zero:
            continue
        scale = max(max(abs(x) for x in pa.coeffs), max(abs(x) for x in pb.coeffs))
        if any(abs(x - y) > rtol * scale for x, y in zip(pa.coeffs, pb.coeffs)):
            return False
    return True


def residue_simple_pole(tf: RationalTransferFunction, pole: complex, tol: float = 1e-8) -> complex:
    """Residue ``num(p) / den'(p)`` of ``tf`` at a simple pole ``p``."""
    pole = complex(pole)
    dden = tf.den.derivative()
    if abs(poly_eval_complex(tf.den, pole)) > 1e-6 * max(_abs_scale(tf.den, pole), 1e-300):
        raise ValueError(f"{pole} is not a root of the denominator")
    d = poly_eval_complex(dden, pole)
    if abs(d) <= tol * max(_abs_scale(dden, pole), 1e-300):
        raise NotSimplePole(f"pole at {pole} is not simple")
    return poly_eval_complex(tf.num, pole) / d


class NonnegResult(NamedTuple):
    nonneg: bool
    witness: float | None


def _real_positive(zs, rtol=1e-7):
    return sorted(
        z.real for z in zs if z.real > 0 and abs(z.imag) <= rtol * max(abs(z), 1e-300)
    )


def _eval_real(c: Sequence[float], x: float) -> float:
    acc = 0.0
    for a in reversed(c):
        acc = acc * x + a
    return acc


def even_poly_nonneg(d: Mapping[int, float]) -> NonnegResult:
    """Decide whether ``P(w) = sum d[k] w**k`` (even ``k`` only) is >= 0 for all real ``w``.

    With ``x = w**2`` the question becomes nonnegativity of ``q(x)`` on
    ``x >= 0``. After factoring out the lowest power of ``x`` the
    remaining factor ``r`` is nonnegative iff ``r(0) > 0``, its leading
    coefficient is positive and ``r`` is nonnegative at each of its
    positive critical points. Critical points are closed form up to a
    quadratic ``r`` and come from :func:`roots` beyond that.

    Returns ``(nonneg, witness)``; ``witness`` is a frequency ``w > 0``
    with ``P(w) < 0`` when ``nonneg`` is false.
    """
    for k in d:
        if k < 0 or k % 2:
            raise ValueError(f"exponent {k} is not a nonnegative even integer")
    deg = max(d, default=0) // 2
    q = [0.0] * (deg + 1)
    for k, v in d.items():
        q[k // 2] += float(v)
    while q and q[-1] == 0.0:
        q.pop()
    if not q:
        return NonnegResult(True, None)
    low = next(i for i, v in enumerate(q) if v != 0.0)
    r = q[low:]

    def qx(x):
        return x**low * _eval_real(r, x)

    crit = []
    if len(r) == 2:
        pass
    elif len(r) == 3:
        if r[2] != 0.0:
            xc = -r[1] / (2 * r[2])
            if xc > 0:
                crit.append(xc)
    elif len(r) > 3:
        dr = Polynomial(tuple(r)).derivative()
        crit = _real_positive(roots(dr))

    neg_at_zero = r[0] < 0
    neg_at_inf = r[-1] < 0
    neg_crit = [x for x in crit if _eval_real(r, x) < 0]
    if not (neg_at_zero or neg_at_inf or neg_crit):
        return NonnegResult(True, None)

    # Witness: the most negative q among positive critical points of q itself.
    qpoly = Polynomial(tuple(q))
    cand = list(neg_crit)
    if len(q) >= 2:
        dq = qpoly.derivative()
        if dq.degree() == 1:
            cand.append(-dq.coeffs[0] / dq.coeffs[1])
        elif dq.degree() >= 2:
            cand.extend(_real_positive(roots(dq)))
    cand = [x for x in cand if x > 0 and qx(x) < 0]
    if cand:
        x = min(cand, key=qx)
        return NonnegResult(False, float(np.sqrt(x)))
    pos_roots = _real_positive(roots(Polynomial(tuple(r)))) if len(r) > 1 else []
    if neg_at_zero:
        x = pos_roots[0] / 2 if pos_roots else 1.0
        while qx(x) >= 0 and x > 1e-300:
            x /= 2
    else:
        x = 2 * max(pos_roots + [1.0])
        while qx(x) >= 0 and x < 1e300:
            x *= 2
    return NonnegResult(False, float(np.sqrt(x)))


class RealPartPolynomial(NamedTuple):
    coeffs: dict
    scale: dict


def real_part_polynomial(tf: RationalTransferFunction) -> RealPartPolynomial:
    """Coefficients of ``P(w) = Re{num(jw) den(-jw)}``, built exactly from products.

    Odd powers vanish identically. ``scale[n]`` is the sum of absolute
    values of the products contributing to ``w**n``; entries smaller
    than ``CANCELLATION_TOL * scale[n]`` are treated as exact zeros.
    """
    a, b = tf.num.coeffs, tf.den.coeffs
    n_max = len(a) + len(b) - 2
    coeffs, scale = {}, {}
    for n in range(0, max(n_max, 0) + 1, 2):
        total = 0.0
        mag = 0.0
        for k in range(len(a)):
            m = n - k
            if m < 0 or m >= len(b):
                continue
            term = a[k] * b[m] * (-1) ** m
            total += term
            mag += abs(term)
        total *= (-1) ** (n // 2)
        if abs(total) <= CANCELLATION_TOL * mag:
            total = 0.0
        coeffs[n] = total
        scale[n] = mag
    return RealPartPolynomial(coeffs, scale)
