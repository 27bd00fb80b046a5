"""Estimating the nearest singularities of a function from its Taylor
coefficients.

Two families of estimators operate on windows of even-order coefficients:

* three-term solvers: assume the coefficients obey the recurrence induced
  by a conjugate pair of algebraic branch points A(1 - x/x0)^alpha at
  x0 = r e^(i theta) and its conjugate, and solve three consecutive
  recurrence equations for (r, cos 2theta, alpha). The "exact" variant
  keeps the full gamma-ratio factors; the "approx" variant keeps only
  their first-order large-index expansion.
* ratio (Domb-Sykes style) fits: a fourth-root ratio formula gives a
  per-index radius estimate whose linear extrapolation in 1/(2m) yields
  the radius and exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    NegativeRatio,
    NoConvergence,
    SingularJacobian,
    TooFewPoints,
    ZeroCoefficient,
)
from .series import RationalSeries

_COS_SLACK = 1e-9
_ALPHA_CAP = 4.5  # beyond this the root belongs to the spurious family
_OUTLIER_ALPHA_BAND = 0.25


@dataclass(frozen=True)
class CoefficientWindow:
    """Contiguous even-index slice of a series' coefficients, as floats.

    values[j] is the coefficient of x**(first_index + 2j).
    """

    values: tuple
    first_index: int
    degenerate: bool = False

    def __post_init__(self):
        if self.first_index % 2:
            raise ValueError("first_index must be even")
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    @property
    def last_index(self) -> int:
        return self.first_index + 2 * (len(self.values) - 1)

    def indices(self) -> range:
        return range(self.first_index, self.last_index + 2, 2)

    def contains(self, m2: int) -> bool:
        return self.first_index <= m2 <= self.last_index and m2 % 2 == 0

    def a(self, m2: int) -> float:
        if not self.contains(m2):
            raise ValueError(f"index {m2} outside window "
                             f"[{self.first_index}, {self.last_index}]")
        return self.values[(m2 - self.first_index) // 2]

    @classmethod
    def from_series(cls, series: RationalSeries, start: int = 0,
                    stop: Optional[int] = None) -> "CoefficientWindow":
        """Even coefficients of an even series as a float window."""
        if series.parity != "even":
            raise ValueError("expected an even series")
        if stop is None:
            stop = series.order
        stop -= stop % 2
        vals = [float(series.coefficient(k)) for k in range(start, stop + 2, 2)]
        return cls(tuple(vals), start)


@dataclass(frozen=True)
class SingularityEstimate:
    """Solution of the three-term equations anchored at index m_index."""

    m_index: int
    radius: float
    cos_two_theta: float
    alpha: float
    residual: float
    flagged: bool = False

    @property
    def theta_degrees(self) -> float:
        c = min(1.0, max(-1.0, self.cos_two_theta))
        return math.degrees(math.acos(c)) / 2.0


@dataclass(frozen=True)
class DombSykesFit:
    """Linear extrapolation of ratio estimates B(2m) against 1/(2m)."""

    window: tuple
    intercept: float
    slope: float
    radius: float
    alpha: float
    rms_residual: float
    n_points: int
    n_skipped: int


# ---------------------------------------------------------------------------
# the coefficient model


def model_coefficients(radius: float, theta: float, alpha: float,
                       m_max: int, amplitude: float = 1.0) -> CoefficientWindow:
    """Even coefficients of A(1 - x/x0)^alpha + conj, x0 = r e^(i theta).

    a_{2m} = amplitude * lam_{2m} * r^(-2m) * cos(2m theta), where lam_n
    is the binomial factor prod_{k<n}(k - alpha)/n!. A nonnegative integer
    alpha makes the model a polynomial (degenerate flag set).
    """
    degenerate = alpha >= 0 and float(alpha).is_integer()
    vals = []
    lam = 1.0
    n = 0
    for m in range(m_max + 1):
        vals.append(amplitude * lam * radius ** (-2 * m) * math.cos(2 * m * theta))
        # advance lam by two index steps
        for _ in range(2):
            lam *= (n - alpha) / (n + 1)
            n += 1
    return CoefficientWindow(tuple(vals), 0, degenerate=degenerate)


def asymptotic_coefficient(radius: float, theta: float, alpha: float, m2: int) -> float:
    """Large-index (Stirling) form of the model coefficient at x**m2.

    Diagnostic companion to model_coefficients; returns 0.0 when the
    exponent makes the reciprocal gamma factor vanish.
    """
    if alpha >= 0 and float(alpha).is_integer():
        return 0.0
    rec_gamma = 1.0 / math.gamma(-alpha)
    return rec_gamma * m2 ** (-(1.0 + alpha)) * radius ** (-m2) * math.cos(m2 * theta)


# ---------------------------------------------------------------------------
# three-term solvers
#
# With u = r^4 and s = 2 cos(2 theta) r^2 the model coefficients satisfy,
# at every even order p,
#
#     u - s * K1(p, alpha) * a_{p-2}/a_p + K2(p, alpha) * a_{p-4}/a_p = 0.
#
# Given alpha this is linear in (u, s); requiring the equations at
# p = m2-4, m2-2, m2 to be simultaneously consistent makes the 3x3
# determinant a polynomial in alpha (degree 6 exact, 2 approximate),
# whose real roots enumerate every candidate solution.


def _k1_poly_exact(p: int) -> np.ndarray:
    # (p-1-alpha)(p-2-alpha) / (p(p-1)), ascending powers of alpha
    quad = np.convolve([p - 1, -1.0], [p - 2, -1.0])
    return quad / (p * (p - 1))


def _k2_poly_exact(p: int) -> np.ndarray:
    quart = np.convolve(
        np.convolve([p - 1, -1.0], [p - 2, -1.0]),
        np.convolve([p - 3, -1.0], [p - 4, -1.0]),
    )
    return quart / (p * (p - 1) * (p - 2) * (p - 3))


def _k1_poly_approx(p: int) -> np.ndarray:
    # 1 - (2 + 2 alpha)/p
    return np.array([1.0 - 2.0 / p, -2.0 / p])


def _k2_poly_approx(p: int) -> np.ndarray:
    return np.array([1.0 - 4.0 / p, -4.0 / p])


def _polyval_asc(c: np.ndarray, x: float) -> float:
    return float(np.polynomial.polynomial.polyval(x, c))


def _pmul(a, b):
    return np.convolve(a, b)


def _psub(a, b):
    n = max(len(a), len(b))
    out = np.zeros(n)
    out[: len(a)] += a
    out[: len(b)] -= b
    return out


def _equation_rows(window: CoefficientWindow, m2: int, exact: bool):
    k1f = _k1_poly_exact if exact else _k1_poly_approx
    k2f = _k2_poly_exact if exact else _k2_poly_approx
    rows = []
    for p in (m2 - 4, m2 - 2, m2):
        ap = window.a(p)
        if ap == 0.0:
            raise ZeroCoefficient(f"coefficient at index {p} vanishes")
        r2 = window.a(p - 2) / ap
        r4 = window.a(p - 4) / ap
        rows.append((p, r2, r4, k1f(p), k2f(p)))
    return rows


def _consistency_roots(rows) -> np.ndarray:
    # det [[1, -K1_i R2_i, K2_i R4_i]] as ascending polynomial in alpha
    e2 = [-r2 * k1 for (_, r2, _, k1, _) in rows]
    e3 = [r4 * k2 for (_, _, r4, _, k2) in rows]
    one = np.array([1.0])
    det = _psub(
        _psub(_pmul(one, _psub(_pmul(e2[1], e3[2]), _pmul(e2[2], e3[1]))),
              _pmul(one, _psub(_pmul(e2[0], e3[2]), _pmul(e2[2], e3[0])))),
        -_pmul(one, _psub(_pmul(e2[0], e3[1]), _pmul(e2[1], e3[0]))),
    )
    # trim numerically dead leading coefficients before root finding
    scale = np.max(np.abs(det))
    if scale == 0.0:
        return np.array([])
    det = det / scale
    coeffs = np.trim_zeros(det[::-1], "f")
    if len(coeffs) < 2:
        return np.array([])
    roots = np.roots(coeffs)
    real = roots[np.abs(roots.imag) < 1e-8 * (1.0 + np.abs(roots.real))].real
    return np.unique(np.round(real, 12))


def _solve_linear(rows, alpha: float):
    A = np.array([[1.0, -r2 * _polyval_asc(k1, alpha)]
                  for (_, r2, _, k1, _) in rows])
    b = np.array([-r4 * _polyval_asc(k2, alpha)
                  for (_, _, r4, _, k2) in rows])
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    return float(sol[0]), float(sol[1])


def _residual(rows, u: float, s: float, alpha: float) -> float:
    worst = 0.0
    for (_, r2, r4, k1, k2) in rows:
        f = u - s * _polyval_asc(k1, alpha) * r2 + _polyval_asc(k2, alpha) * r4
        worst = max(worst, abs(f))
    return worst / max(1.0, abs(u))


def _newton_polish(rows, u: float, s: float, alpha: float,
                   max_iter: int = 100, tol: float = 1e-13):
    def fvec(v):
        uu, ss, aa = v
        return np.array([
            uu - ss * _polyval_asc(k1, aa) * r2 + _polyval_asc(k2, aa) * r4
            for (_, r2, r4, k1, k2) in rows
        ])

    def jac(v):
        _, ss, aa = v
        J = np.zeros((3, 3))
        for i, (_, r2, r4, k1, k2) in enumerate(rows):
            dk1 = np.polynomial.polynomial.polyval(aa, np.polyder(k1[::-1])[::-1])
            dk2 = np.polynomial.polynomial.polyval(aa, np.polyder(k2[::-1])[::-1])
            J[i, 0] = 1.0
            J[i, 1] = -_polyval_asc(k1, aa) * r2
            J[i, 2] = -ss * dk1 * r2 + dk2 * r4
        return J

    v = np.array([u, s, alpha], dtype=float)
    fv = fvec(v)
    scale = max(1.0, abs(u))
    for _ in range(max_iter):
        if np.max(np.abs(fv)) <= tol * scale:
            return float(v[0]), float(v[1]), float(v[2])
        J = jac(v)
        try:
            step = np.linalg.solve(J, -fv)
        except np.linalg.LinAlgError as exc:
            raise SingularJacobian("Newton system singular") from exc
        if not np.all(np.isfinite(step)):
            raise SingularJacobian("Newton step not finite")
        lam = 1.0
        for _ in range(12):
            trial = v + lam * step
            ft = fvec(trial)
            if np.linalg.norm(ft) < np.linalg.norm(fv):
                v, fv = trial, ft
                break
            lam *= 0.5
        else:
            # no progress possible; current iterate is the answer
            return float(v[0]), float(v[1]), float(v[2])
    if np.max(np.abs(fv)) <= 1e-9 * scale:
        return float(v[0]), float(v[1]), float(v[2])
    raise NoConvergence("three-term Newton polish did not converge")


def _three_term(window: CoefficientWindow, m2: int, exact: bool) -> SingularityEstimate:
    if m2 % 2:
        raise ValueError("anchor index must be even")
    if m2 - 8 < window.first_index or m2 > window.last_index:
        raise ValueError(
            f"anchor {m2} needs coefficients {m2 - 8}..{m2} inside the window"
        )
    rows = _equation_rows(window, m2, exact)
    candidates = []
    for alpha in _consistency_roots(rows):
        u, s = _solve_linear(rows, float(alpha))
        if not (u > 0.0 and math.isfinite(u) and math.isfinite(s)):
            continue
        r = u ** 0.25
        c2t = s / (2.0 * math.sqrt(u))
        candidates.append((r, c2t, float(alpha), u, s))
    if not candidates:
        raise NoConvergence(f"no admissible root at anchor {m2}")
    admissible = [c for c in candidates
                  if abs(c[1]) <= 1.0 + _COS_SLACK and abs(c[2]) <= _ALPHA_CAP]
    if admissible:
        # physical branch: the singularity farthest out among admissible
        # roots tracks the true one; the near root is the spurious twin
        r, c2t, alpha, u, s = max(admissible, key=lambda c: c[0])
    else:
        r, c2t, alpha, u, s = min(candidates, key=lambda c: abs(c[2] - 0.5))
    u, s, alpha = _newton_polish(rows, u, s, alpha)
    if u <= 0:
        raise NoConvergence(f"polished solution left the physical region at {m2}")
    r = u ** 0.25
    c2t = s / (2.0 * math.sqrt(u))
    res = _residual(rows, u, s, alpha)
    flagged = abs(c2t) > 1.0 + _COS_SLACK or abs(alpha - 0.5) > _OUTLIER_ALPHA_BAND
    return SingularityEstimate(
        m_index=m2, radius=r, cos_two_theta=c2t, alpha=alpha,
        residual=res, flagged=flagged,
    )


def three_term_exact(window: CoefficientWindow, m2: int) -> SingularityEstimate:
    """Solve the full-gamma-factor three-term equations anchored at m2."""
    return _three_term(window, m2, exact=True)


def three_term_approx(window: CoefficientWindow, m2: int) -> SingularityEstimate:
    """Solve the first-order-in-1/p three-term equations anchored at m2."""
    return _three_term(window, m2, exact=False)


# ---------------------------------------------------------------------------
# ratio estimates


def domb_sykes_B(window: CoefficientWindow, m2: int) -> float:
    """Fourth-root ratio estimate of 1/r at even index m2.

    B = ((a^2_{2m} - a_{2m+2} a_{2m-2}) / (a^2_{2m-2} - a_{2m} a_{2m-4}))^(1/4)
    """
    num = window.a(m2) ** 2 - window.a(m2 + 2) * window.a(m2 - 2)
    den = window.a(m2 - 2) ** 2 - window.a(m2) * window.a(m2 - 4)
    if den == 0.0:
        raise ZeroCoefficient(f"ratio denominator vanishes at {m2}")
    ratio = num / den
    if ratio < 0.0:
        raise NegativeRatio(f"ratio negative at {m2}; estimate undefined")
    return ratio ** 0.25


def domb_sykes_C(window: CoefficientWindow, m2: int) -> float:
    """Companion cosine estimate at even index m2 (tends to cos 2 theta)."""
    a0 = window.a(m2)
    if a0 == 0.0:
        raise ZeroCoefficient(f"coefficient at {m2} vanishes")
    B = domb_sykes_B(window, m2)
    b2 = B * B
    return 0.5 * (window.a(m2 - 2) * b2 / a0 + window.a(m2 + 2) / (a0 * b2))


def fit_domb_sykes(window: CoefficientWindow,
                   fit_range: Optional[tuple] = None) -> DombSykesFit:
    """Least-squares line B(2m) = intercept + slope/(2m) and the derived
    radius r = 1/intercept and exponent alpha = -slope/intercept - 1.

    Indices where the ratio under the fourth root is negative or its
    denominator vanishes are skipped. Default fit range: the upper half
    of the usable points, where the asymptotic line is cleanest.
    """
    lo_all = window.first_index + 4
    hi_all = window.last_index - 2
    usable = []
    skipped = 0
    for m2 in range(lo_all, hi_all + 2, 2):
        try:
            usable.append((m2, domb_sykes_B(window, m2)))
        except (NegativeRatio, ZeroCoefficient):
            skipped += 1
    if fit_range is not None:
        lo, hi = fit_range
        usable = [(m2, B) for (m2, B) in usable if lo <= m2 <= hi]
    else:
        usable = usable[len(usable) // 2:]
    if len(usable) < 8:
        raise TooFewPoints(f"only {len(usable)} usable ratio points")
    xs = np.array([1.0 / m2 for m2, _ in usable])
    ys = np.array([B for _, B in usable])
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = ys - (intercept + slope * xs)
    rms = float(np.sqrt(np.mean(resid ** 2)))
    radius = 1.0 / intercept
    alpha = -slope / intercept - 1.0
    return DombSykesFit(
        window=(usable[0][0], usable[-1][0]),
        intercept=float(intercept),
        slope=float(slope),
        radius=float(radius),
        alpha=float(alpha),
        rms_residual=rms,
        n_points=len(usable),
        n_skipped=skipped,
    )
