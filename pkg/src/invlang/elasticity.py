"""Real-line evaluation: the forward map, its inverse, the pole-reduced
forms, two closed-form approximations, and the limited-stretch rubber
response built on them.

The forward map is L(y) = coth(y) - 1/y, strictly increasing from
(-inf, inf) onto (-1, 1). Everything here is plain float arithmetic
except a narrow band |x| >= 0.99 where the pole-removed forms g and h
subtract two large, nearly equal quantities; that band is computed in
34-digit arithmetic and rounded once at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp

from .errors import DomainError, NoConvergence

_X_CAP = 1.0 - 1e-15       # inversion refuses beyond this
_ASYMPTOTIC_BAND = 1e-6    # |x| > 1 - band: closed asymptotic inversion
_MP_BAND = 0.99            # |x| >= band: reduced forms go to 34 digits
_MP_DPS = 34


@dataclass(frozen=True)
class MaterialParams:
    """Shear modulus and the locking value of the first invariant."""

    mu: float
    I_m: float

    def __post_init__(self):
        if not self.mu > 0:
            raise DomainError("shear modulus must be positive")
        if not self.I_m > 3:
            raise DomainError("I_m must exceed 3 (the unstrained invariant)")


@dataclass(frozen=True)
class StretchState:
    """First invariant with its fractional-extension coordinates.

    x = sqrt(I_1/I_m) is the argument the response functions take;
    x0 = sqrt(3/I_m) marks the unstrained state.
    """

    I_1: float
    x: float
    x0: float

    @classmethod
    def from_invariant(cls, I_1: float, params: MaterialParams) -> "StretchState":
        if not 3.0 <= I_1 <= params.I_m:
            raise DomainError(f"I_1={I_1} outside [3, I_m={params.I_m}]")
        return cls(I_1=I_1, x=math.sqrt(I_1 / params.I_m),
                   x0=math.sqrt(3.0 / params.I_m))


# Taylor coefficients of coth(y) - 1/y in ascending odd powers; below
# |y| = 0.2 the direct form loses ~2 digits to cancellation against 1/y,
# the series is exact to roundoff there (tail < 1e-18 relative)
_SERIES_C = (1.0 / 3.0, -1.0 / 45.0, 2.0 / 945.0, -1.0 / 4725.0,
             2.0 / 93555.0, -1382.0 / 638512875.0, 4.0 / 18243225.0)


def langevin(y: float) -> float:
    """coth(y) - 1/y with the removable singularity at 0 crossed by series.

    tanh saturates to 1 in double precision near |y| = 19, which is also
    the correct limit of coth there, so no large-|y| branch is needed.
    """
    if y == 0.0:
        return 0.0
    if abs(y) < 0.2:
        y2 = y * y
        acc = 0.0
        for c in reversed(_SERIES_C):
            acc = acc * y2 + c
        return acc * y
    return 1.0 / math.tanh(y) - 1.0 / y


def _langevin_slope(y: float) -> float:
    # 1/y^2 - 1/sinh^2 y; sinh overflows past ~710 where the second term
    # has long since underflowed anyway
    if abs(y) < 0.2:
        y2 = y * y
        acc = 0.0
        for k, c in zip(range(len(_SERIES_C) - 1, -1, -1), reversed(_SERIES_C)):
            acc = acc * y2 + (2 * k + 1) * c
        return acc
    if abs(y) > 350.0:
        return 1.0 / (y * y)
    s = math.sinh(y)
    return 1.0 / (y * y) - 1.0 / (s * s)


def cohen_approx(x: float) -> float:
    """Rounded Pade-type closed form 2x/(1-x^2) + x.

    Exact slope 3 at the origin and the right simple-pole behaviour at
    x = +-1; stays a few percent above the true inverse in between,
    which also makes it a safe Newton seed.
    """
    if not abs(x) < 1.0:
        raise DomainError(f"|x|={abs(x)} not inside (-1, 1)")
    return 2.0 * x / ((1.0 - x) * (1.0 + x)) + x


def rickaby_scott_approx(x: float) -> float:
    """Two-term reduced-series closed form (3x/(1-x^2))(1 - (2/5)x^2)."""
    if not abs(x) < 1.0:
        raise DomainError(f"|x|={abs(x)} not inside (-1, 1)")
    return 3.0 * x / ((1.0 - x) * (1.0 + x)) * (1.0 - 0.4 * x * x)


def inv_langevin(x: float) -> float:
    """Inverse of coth(y) - 1/y on (-1, 1), accurate to full double
    precision in the relative sense.

    Safeguarded Newton from the Cohen seed: the seed bounds the root
    from above and 0 from below, the bracket shrinks by sign at every
    iterate, and any Newton step leaving it is replaced by bisection.
    Beyond |x| = 1 - 1e-6 the equation degenerates to its asymptote and
    is solved by the fixed point y = 1/(1 - x + 2 exp(-2y)). Refuses
    within 1e-15 of the poles.
    """
    if not abs(x) < _X_CAP:
        raise DomainError(f"|x|={abs(x)} too close to the poles at +-1")
    if x == 0.0:
        return 0.0
    ax, sign = abs(x), math.copysign(1.0, x)

    if ax > 1.0 - _ASYMPTOTIC_BAND:
        y = 1.0 / (1.0 - ax)
        for _ in range(4):
            y = 1.0 / (1.0 - ax + 2.0 * math.exp(-2.0 * y))
        return sign * y

    lo = 0.0
    hi = 2.0 * ax / ((1.0 - ax) * (1.0 + ax)) + ax
    y = hi
    for _ in range(80):
        F = langevin(y) - ax
        if F < 0.0:
            lo = y
        else:
            hi = y
        ynew = y - F / _langevin_slope(y)
        if not lo < ynew < hi:
            ynew = 0.5 * (lo + hi)
        if abs(y - ynew) <= 4e-16 * y:
            return sign * ynew
        y = ynew
    raise NoConvergence(f"inversion stalled at x={x}")


def _inv_langevin_mp(ax, dps: int = _MP_DPS):
    """High-precision inversion for ax in [0.5, 1), where the root is
    large enough that mp.coth is cancellation-free."""
    with mp.workdps(dps):
        ax = mp.mpf(ax)
        y = 2 * ax / ((1 - ax) * (1 + ax)) + ax
        tol = mp.mpf(10) ** (-(dps - 2))
        for _ in range(120):
            F = mp.coth(y) - 1 / y - ax
            s = mp.sinh(y)
            dF = 1 / (y * y) - 1 / (s * s)
            step = F / dF
            y = y - step
            if abs(step) <= tol * y:
                return y
    raise NoConvergence(f"high-precision inversion stalled at x={ax}")


def reduced_eval(which: str, x: float) -> float:
    """f, g or h on [-1, 1] with the exact limits at the endpoints.

    f = (1-x^2) Linv(x)/(3x)        even, f(+-1) = 2/3
    g = Linv(x) - 2x/(1-x^2)        odd,  g(+-1) = +-1/2
    h = g/x                         even, h(0) = 1, h(+-1) = 1/2

    g and h subtract the pole term from the inverse; for |x| >= 0.99 the
    two terms agree to over two digits per decade of 1-x, so that band
    is evaluated in extended precision to keep full double accuracy up
    to the endpoint (the one-sided derivatives there are delicate).
    """
    if which not in ("f", "g", "h"):
        raise ValueError(f"unknown reduced form {which!r}")
    if not abs(x) <= 1.0:
        raise DomainError(f"|x|={abs(x)} outside [-1, 1]")
    ax, sign = abs(x), math.copysign(1.0, x)

    if ax == 1.0:
        return {"f": 2.0 / 3.0, "g": sign * 0.5, "h": 0.5}[which]

    if ax >= _MP_BAND:
        with mp.workdps(_MP_DPS):
            y = _inv_langevin_mp(ax)
            axm = mp.mpf(ax)
            if which == "f":
                val = (1 - axm) * (1 + axm) * y / (3 * axm)
            else:
                val = y - 2 * axm / ((1 - axm) * (1 + axm))
                if which == "h":
                    val = val / axm
            out = float(val)
        return out if which in ("f", "h") else sign * out

    if which == "f":
        if ax < 1e-8:
            return 1.0 - 0.4 * x * x  # series: (1 - x^2)(3x + (9/5)x^3...)/3x
        y = inv_langevin(ax)
        return (1.0 - ax) * (1.0 + ax) * y / (3.0 * ax)

    # g and h
    if ax < 1e-4:
        h = 1.0 - 0.2 * x * x  # next term is O(x^4), below roundoff here
        return h if which == "h" else x * h
    g = inv_langevin(ax) - 2.0 * ax / ((1.0 - ax) * (1.0 + ax))
    if which == "g":
        return sign * g
    return g / ax


def stress_response(x: float, params: MaterialParams) -> float:
    """Scalar stress coefficient mu * Linv(x)/(3x), with the removable
    point x=0 evaluating to mu."""
    if x < 0.0 or x >= 1.0:
        raise DomainError(f"x={x} outside [0, 1)")
    if x == 0.0:
        return params.mu
    return params.mu * inv_langevin(x) / (3.0 * x)


def _phi(x: float, y: float) -> float:
    # x y + log(y / sinh y), the antiderivative of the inverse up to a
    # constant; rewritten for large y where sinh overflows
    if y > 20.0:
        return y * (x - 1.0) + math.log(y) + math.log(2.0) - math.log1p(-math.exp(-2.0 * y))
    return x * y + math.log(y / math.sinh(y))


def strain_energy(I_1: float, params: MaterialParams) -> float:
    """Energy density (mu I_m / 3)[phi(x) - phi(x0)], zero at I_1 = 3.

    phi(x) = x Linv(x) + log(Linv(x)/sinh Linv(x)); the derivative in x
    is exactly Linv(x), so the energy increases strictly and diverges at
    the locking invariant.
    """
    if not 3.0 <= I_1 < params.I_m:
        raise DomainError(f"I_1={I_1} outside [3, I_m={params.I_m})")
    x = math.sqrt(I_1 / params.I_m)
    x0 = math.sqrt(3.0 / params.I_m)
    y = inv_langevin(x)
    y0 = inv_langevin(x0)
    return params.mu * params.I_m / 3.0 * (_phi(x, y) - _phi(x0, y0))
