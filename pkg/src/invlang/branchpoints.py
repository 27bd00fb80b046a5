"""Complex branch points of the inverse function of coth(w) - 1/w.

The forward map z = coth(w) - 1/w is entire except for poles at
w = +-ik*pi. Its inverse has square-root branch points wherever
dz/dw = 0, i.e. where sinh w = +-w. This module solves that equation in
the first quadrant to any requested precision, maps the roots to the
z plane, and provides the local square-root expansion data and the
variable transform that pushes the first conjugate singularity pair out
to the unit circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import mpmath as mp

from .errors import (
    AtSingularity,
    DomainError,
    NearPole,
    NoConvergence,
    NumericalError,
    QuadrantEscape,
)
from .series import langevin_series

_SERIES_CUTOFF = 0.5
_POLE_EXCLUSION = 1e-8


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision plus Newton stopping policy.

    mode "standard" targets double-like accuracy (16 digits); "extended"
    uses 40 digits and resolves 15 significant figures comfortably.
    newton_tol is relative to |w| and must stay at least 10x the unit
    roundoff of the working precision, otherwise the iteration would
    chase noise.
    """

    mode: str = "extended"
    dps: int = 40
    newton_tol: float = 0.0
    max_iter: int = 60

    def __post_init__(self):
        if self.mode not in ("standard", "extended"):
            raise ValueError("mode must be 'standard' or 'extended'")
        if self.newton_tol == 0.0:
            object.__setattr__(self, "newton_tol", 100.0 * 10.0 ** (-self.dps))
        if self.newton_tol < 10.0 * 10.0 ** (-self.dps):
            raise ValueError("newton_tol below 10x unit roundoff of dps")

    @classmethod
    def standard(cls) -> "PrecisionContext":
        return cls(mode="standard", dps=16)

    @classmethod
    def extended(cls, dps: int = 40) -> "PrecisionContext":
        if dps < 32:
            raise ValueError("extended mode needs at least 32 digits")
        return cls(mode="extended", dps=dps)


@dataclass(frozen=True)
class BranchPoint:
    """Root w_n of sinh w = (-1)^n w and its image z_n in the z plane.

    defining_residual: |sinh w - (-1)^n w| at the accepted root.
    consistency_residual: relative error in the identity w = 2z/(1 - z^2)
    that every branch point must satisfy.
    """

    n: int
    w: object
    z: object
    modulus: object
    defining_residual: object
    consistency_residual: object


@lru_cache(maxsize=4)
def _series_coeffs(order: int):
    s = langevin_series(order)
    return tuple(
        (k, int(c.numerator), int(c.denominator)) for k, c in s.nonzero_terms()
    )


def _nearest_pole_distance(w) -> float:
    # poles at i k pi, k = +-1, +-2, ...
    k0 = int(mp.nint(mp.im(w) / mp.pi))
    best = mp.inf
    for k in (k0 - 1, k0, k0 + 1):
        if k == 0:
            continue
        best = min(best, mp.fabs(w - mp.mpc(0, k * mp.pi)))
    return best


def langevin_complex(w, ctx: PrecisionContext):
    """z = coth(w) - 1/w for complex w at the context precision.

    Near the origin the removable singularity is crossed with the Taylor
    series; within 1e-8 of any pole ik*pi evaluation refuses (NearPole).
    """
    with mp.workdps(ctx.dps):
        w = mp.mpc(w)
        if w == 0:
            return mp.mpc(0)
        if _nearest_pole_distance(w) < _POLE_EXCLUSION:
            raise NearPole(f"w={w} within {_POLE_EXCLUSION} of a pole")
        if mp.fabs(w) < _SERIES_CUTOFF:
            acc = mp.mpc(0)
            wsq = w * w
            for k, num, den in reversed(_series_coeffs(2 * ctx.dps + 21)):
                acc = acc * wsq + mp.mpf(num) / den
            return acc * w
        return 1 / mp.tanh(w) - 1 / w


def langevin_derivative(w, ctx: PrecisionContext):
    """d/dw of coth(w) - 1/w, series-crossed at the origin like the
    function itself."""
    with mp.workdps(ctx.dps):
        w = mp.mpc(w)
        if _nearest_pole_distance(w) < _POLE_EXCLUSION:
            raise NearPole(f"w={w} within {_POLE_EXCLUSION} of a pole")
        if mp.fabs(w) < _SERIES_CUTOFF:
            acc = mp.mpc(0)
            wsq = w * w
            for k, num, den in reversed(_series_coeffs(2 * ctx.dps + 21)):
                acc = acc * wsq + mp.mpf(k * num) / den
            return acc
        s = mp.sinh(w)
        return 1 / (w * w) - 1 / (s * s)


def langevin_second_derivative(w, ctx: PrecisionContext):
    with mp.workdps(ctx.dps):
        w = mp.mpc(w)
        if _nearest_pole_distance(w) < _POLE_EXCLUSION:
            raise NearPole(f"w={w} within {_POLE_EXCLUSION} of a pole")
        s = mp.sinh(w)
        return -2 / w ** 3 + 2 * mp.cosh(w) / s ** 3


def seed(n: int, ctx: Optional[PrecisionContext] = None):
    """Starting guess for the n-th first-quadrant root of sinh w = +-w.

    The imaginary part sits between consecutive poles at (n + 1/2) pi;
    the real part makes |sinh| match |w| there.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    dps = ctx.dps if ctx is not None else 16
    with mp.workdps(dps):
        v = (n + mp.mpf(1) / 2) * mp.pi
        return mp.mpc(mp.asinh(v), v)


def solve_branch_point(n: int, ctx: PrecisionContext) -> BranchPoint:
    """Newton solve of sinh w = (-1)^n w from seed(n), first quadrant.

    Steps are clamped to unit length; an iterate that leaves the first
    quadrant is pulled back halfway repeatedly, and QuadrantEscape is
    raised if the retreat cannot recover. Convergence is declared when
    the relative step drops below ctx.newton_tol.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    sign = -1 if n % 2 else 1
    with mp.workdps(ctx.dps):
        w = seed(n, ctx)
        tol = mp.mpf(ctx.newton_tol)
        converged = False
        for _ in range(ctx.max_iter):
            F = mp.sinh(w) - sign * w
            dF = mp.cosh(w) - sign
            if dF == 0:
                raise NoConvergence(f"derivative vanished at iterate {w}")
            dw = F / dF
            if mp.fabs(dw) > 1:
                dw = dw / mp.fabs(dw)  # clamp to unit step
            trial = w - dw
            retreats = 0
            while (mp.re(trial) <= 0 or mp.im(trial) <= 0) and retreats < 60:
                dw /= 2
                trial = w - dw
                retreats += 1
            if mp.re(trial) <= 0 or mp.im(trial) <= 0:
                raise QuadrantEscape(f"iterate left the first quadrant near {w}")
            w = trial
            if mp.fabs(dw) <= tol * mp.fabs(w):
                converged = True
                break
        if not converged:
            raise NoConvergence(f"no convergence for n={n} in {ctx.max_iter} steps")
        z = langevin_complex(w, ctx)
        defining = mp.fabs(mp.sinh(w) - sign * w)
        consistency = mp.fabs(w - 2 * z / (1 - z * z)) / mp.fabs(w)
        return BranchPoint(
            n=n, w=w, z=z, modulus=mp.fabs(z),
            defining_residual=defining, consistency_residual=consistency,
        )


def verify_consistency(bp: BranchPoint, ctx: PrecisionContext):
    """Relative residual of w = 2z/(1 - z^2), recomputed from the stored
    values at context precision."""
    with mp.workdps(ctx.dps):
        w, z = mp.mpc(bp.w), mp.mpc(bp.z)
        return mp.fabs(w - 2 * z / (1 - z * z)) / mp.fabs(w)


def sqrt_expansion_coefficient(bp: BranchPoint, ctx: PrecisionContext):
    """Coefficient c in the local inverse expansion w - w_n = c sqrt(z - z_n).

    From the vanishing first derivative, z - z_n = (1/2) L''(w_n) (w - w_n)^2
    with L''(w_n) = 2 z_n / w_n^2, giving c = w_n / sqrt(z_n). The closed
    form for L'' is verified against the direct second derivative before
    use; disagreement means the branch point itself is off.
    """
    with mp.workdps(ctx.dps):
        w, z = mp.mpc(bp.w), mp.mpc(bp.z)
        direct = langevin_second_derivative(w, ctx)
        closed = 2 * z / (w * w)
        rel = mp.fabs(direct - closed) / mp.fabs(closed)
        if rel > mp.mpf(10) ** (-(ctx.dps - 8)):
            raise NumericalError(
                f"second-derivative identity off by {mp.nstr(rel, 3)} at n={bp.n}"
            )
        return w / mp.sqrt(z)


def second_derivative_identity_residual(bp: BranchPoint, ctx: PrecisionContext):
    """Relative difference between L''(w_n) computed directly and via the
    branch-point identity 2 z_n / w_n^2."""
    with mp.workdps(ctx.dps):
        w, z = mp.mpc(bp.w), mp.mpc(bp.z)
        direct = langevin_second_derivative(w, ctx)
        closed = 2 * z / (w * w)
        return mp.fabs(direct - closed) / mp.fabs(closed)


def first_quadrant_root_census(n_max: int, ctx: PrecisionContext) -> list:
    """Branch points for n = 1..n_max with monotonicity checks.

    Both Im(w_n) and |z_n| must increase strictly with n; a violation
    indicates a skipped or doubled root and raises NumericalError.
    """
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    out = []
    prev_v = None
    prev_mod = None
    for n in range(1, n_max + 1):
        bp = solve_branch_point(n, ctx)
        v = mp.im(bp.w)
        if prev_v is not None and not v > prev_v:
            raise NumericalError(f"Im(w) not increasing at n={n}")
        if prev_mod is not None and not bp.modulus > prev_mod:
            raise NumericalError(f"|z| not increasing at n={n}")
        prev_v, prev_mod = v, bp.modulus
        out.append(bp)
    return out


# ---------------------------------------------------------------------------
# geometry of the branch-point locus and the mapped variable


def ellipse_deviation(points: Sequence, semi_minor: float = 0.36):
    """Per-point deviation |x^2 + (y/b)^2 - 1| of branch points from the
    reference ellipse with unit semi-major axis. Returns (list, max).

    Purely diagnostic: the locus is only approximately elliptical and no
    tolerance is attached.
    """
    devs = []
    for bp in points:
        x = float(mp.re(bp.z))
        y = float(mp.im(bp.z))
        devs.append(abs(x * x + (y / semi_minor) ** 2 - 1.0))
    return devs, (max(devs) if devs else 0.0)


def ellipse_fit_semi_minor(points: Sequence) -> float:
    """Least-squares semi-minor axis b minimizing sum (y^2 t - (1-x^2))^2
    over t = 1/b^2, for the unit-semi-major ellipse family."""
    num = 0.0
    den = 0.0
    for bp in points:
        x = float(mp.re(bp.z))
        y = float(mp.im(bp.z))
        num += y * y * (1.0 - x * x)
        den += y ** 4
    if den == 0.0:
        raise DomainError("all points on the real axis")
    t = num / den
    if t <= 0.0:
        raise DomainError("fit left the ellipse family")
    return 1.0 / math.sqrt(t)


def euler_transform(z, radius: float, theta: float, ctx: Optional[PrecisionContext] = None):
    """Map z -> z / q(z)^(1/4) with q = (z^2 - r^2 e^(2it))(z^2 - r^2 e^(-2it)).

    q expands to z^4 - 2 z^2 r^2 cos(2 theta) + r^4 and vanishes exactly
    at the four conjugate/reflected singularities +-r e^(+-i theta), so
    the transform pushes them to infinity; the principal fourth root is
    taken. AtSingularity is raised inside a relative exclusion zone of
    about 1e-12 around those four points; the zone is fixed rather than
    precision-scaled because r and theta usually arrive as doubles.
    """
    dps = ctx.dps if ctx is not None else 16
    with mp.workdps(dps):
        z = mp.mpc(z)
        r = mp.mpf(radius)
        a = r * r * mp.exp(mp.mpc(0, 2) * mp.mpf(theta))
        q = (z * z - a) * (z * z - mp.conj(a))
        if mp.fabs(q) < mp.mpf("1e-12") * r ** 4:
            raise AtSingularity(f"transform singular at z={z}")
        zhat = z / q ** mp.mpf("0.25")
        return zhat
