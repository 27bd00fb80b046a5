"""Rational approximants built from Taylor series: continued fractions,
Pade tables, their pole/zero structure, and spurious-pole filtering.

Parity handling: an even series is treated as a function of t = x^2 and
all polynomial work happens in t; an odd series additionally records a
prefactor of x. Poles and zeros are mapped back to the x plane (each
nonzero t-root yields a +-sqrt pair) so downstream consumers always see
x-plane locations.

Continued-fraction construction by repeated reciprocal-and-subtract loses
roughly 3.5 decimal digits per level on these series, so the floating
build works at a precision that grows linearly with the requested depth
(4 * depth + 50 digits). The exact-rational build has no error at all but
its coefficient sizes blow up combinatorially; past depth ~60 it is far
too slow, which is why deep constructions default to the floating mode.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import mpmath as mp
import numpy as np
from gmpy2 import mpq

from .errors import InsufficientOrder, NoConvergence
from .series import RationalSeries

logger = logging.getLogger(__name__)

_DPS_PER_LEVEL = 4
_DPS_BASE = 50


def _adaptive_dps(depth: int) -> int:
    return _DPS_PER_LEVEL * depth + _DPS_BASE


@dataclass(frozen=True)
class RationalFunction:
    """Ratio of polynomials, denominator normalized to constant term 1.

    Coefficients ascend in the build variable: t = x^2 when
    squared_variable is set, plain x otherwise. odd_prefactor multiplies
    the whole function by x. Coefficients are exact rationals (mpq) or
    high-precision floats (mpf/mpc), depending on how it was built.
    """

    num: tuple
    den: tuple
    squared_variable: bool = False
    odd_prefactor: bool = False
    deflated: bool = False

    def __post_init__(self):
        num, den = tuple(self.num), tuple(self.den)
        if not den or den[0] == 0:
            raise ValueError("denominator must have nonzero constant term")
        if den[0] != 1:
            c = den[0]
            num = tuple(v / c for v in num)
            den = tuple(v / c for v in den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @property
    def degree_num(self) -> int:
        return _degree(self.num)

    @property
    def degree_den(self) -> int:
        return _degree(self.den)

    @property
    def exact(self) -> bool:
        return all(isinstance(c, (mpq, int)) for c in self.num + self.den)

    def eval_in_variable(self, t):
        return _polyval(self.num, t) / _polyval(self.den, t)

    def __call__(self, x):
        t = x * x if self.squared_variable else x
        val = self.eval_in_variable(t)
        return val * x if self.odd_prefactor else val

    def has_common_factor(self) -> bool:
        """Exact polynomial gcd test; only meaningful for exact
        coefficients (returns False otherwise)."""
        if not self.exact:
            return False
        g = _poly_gcd([mpq(c) for c in self.num], [mpq(c) for c in self.den])
        return _degree(g) > 0


@dataclass(frozen=True)
class ContinuedFraction:
    """b0 + a1 t / (1 + a2 t / (1 + ...)) in the build variable t."""

    leading: object
    partials: tuple
    squared_variable: bool = False
    odd_prefactor: bool = False
    exact: bool = True
    dps: int = 0
    terminated_early: bool = False

    @property
    def depth(self) -> int:
        return len(self.partials)


@dataclass(frozen=True)
class PoleZeroSet:
    """Pole and zero locations in the x plane, with pole residues.

    Conjugate-closed by construction for real-coefficient input.
    """

    poles: tuple
    zeros: tuple
    residues: tuple
    pole_multiplicity: tuple
    filtered: bool = False
    truncation_depth: int = 0


# ---------------------------------------------------------------------------
# small polynomial helpers (ascending coefficient lists)


def _degree(c: Sequence) -> int:
    d = len(c) - 1
    while d > 0 and c[d] == 0:
        d -= 1
    return d


def _polyval(c: Sequence, x):
    acc = 0 * x
    for v in reversed(c):
        acc = acc * x + v
    return acc


def _poly_gcd(a: list, b: list) -> list:
    a = a[: _degree(a) + 1]
    b = b[: _degree(b) + 1]
    while _degree(b) > 0 or b[0] != 0:
        if _degree(b) == 0:
            return [mpq(1)]
        # remainder of a by b
        r = list(a)
        db, lb = _degree(b), b[_degree(b)]
        while _degree(r) >= db and any(v != 0 for v in r):
            dr = _degree(r)
            if r[dr] == 0:
                break
            f = r[dr] / lb
            for i in range(db + 1):
                r[dr - db + i] -= f * b[i]
            r = r[: _degree(r) + 1]
            if dr == _degree(r):
                r[dr] = mpq(0)
                r = r[: _degree(r) + 1]
        a, b = b, r
        if all(v == 0 for v in b):
            break
    return a


# ---------------------------------------------------------------------------
# continued fractions


def _even_part(series: RationalSeries):
    """Coefficients in the build variable plus the parity bookkeeping."""
    if series.parity == "even":
        coeffs = [series.coefficient(2 * m) for m in range(series.order // 2 + 1)]
        return coeffs, True, False
    if series.parity == "odd":
        coeffs = [series.coefficient(2 * m + 1)
                  for m in range((series.order - 1) // 2 + 1)]
        return coeffs, True, True
    return list(series.coeffs), False, False


def _recip_series(c: list, order: int) -> list:
    # 1/c truncated; c[0] == 1 assumed
    out = [mpq(1) if isinstance(c[0], mpq) else mp.mpf(1)]
    for n in range(1, order + 1):
        s = 0
        for k in range(1, min(n, len(c) - 1) + 1):
            s += c[k] * out[n - k]
        out.append(-s)
    return out


def series_to_cf(series: RationalSeries, depth: int, mode: str = "auto",
                 dps: Optional[int] = None) -> ContinuedFraction:
    """Continued fraction of the series in its build variable.

    mode "exact" keeps every partial coefficient as an exact rational:
    error-free but exponentially expensive with depth. mode "float" works
    in mpmath at `dps` digits (default 4*depth + 50, sized so the last
    level still carries comfortably more than double precision). "auto"
    selects exact up to depth 40.

    A vanishing partial coefficient terminates construction early and the
    result carries terminated_early=True with the shorter depth.
    """
    E, squared, odd_pref = _even_part(series)
    if len(E) < depth + 1:
        raise InsufficientOrder(
            f"need {depth + 1} build-variable coefficients, have {len(E)}"
        )
    if E[0] == 0:
        raise ValueError("series must not vanish at 0 in its build variable")
    if mode == "auto":
        mode = "exact" if depth <= 40 else "float"
    if mode == "exact":
        b0, partials, truncated = _cf_from_tail([mpq(c) for c in E], depth)
        return ContinuedFraction(
            leading=b0, partials=tuple(partials), squared_variable=squared,
            odd_prefactor=odd_pref, exact=True, dps=0,
            terminated_early=truncated,
        )
    if mode != "float":
        raise ValueError("mode must be 'auto', 'exact', or 'float'")
    work_dps = dps if dps is not None else _adaptive_dps(depth)
    with mp.workdps(work_dps):
        Ef = [mp.mpf(int(c.numerator)) / mp.mpf(int(c.denominator))
              if isinstance(c, mpq) else mp.mpf(c) for c in E]
        b0, partials, truncated = _cf_from_tail(Ef, depth)
    return ContinuedFraction(
        leading=b0, partials=tuple(partials), squared_variable=squared,
        odd_prefactor=odd_pref, exact=False, dps=work_dps,
        terminated_early=truncated,
    )


def _cf_from_tail(E: list, depth: int) -> tuple:
    """Shared reciprocal-and-subtract ladder over any exact or float field."""
    b0 = E[0]
    partials = []
    truncated = False
    # T = (F/b0 - 1)/t, truncated to exactly the orders the ladder consumes
    T = [c / b0 for c in E[1: depth + 1]]
    for k in range(depth):
        if not T or T[0] == 0:
            truncated = True
            break
        a = T[0] * b0 if k == 0 else T[0]
        partials.append(a)
        n = min(len(T) - 1, depth - k - 1)
        if n <= 0:
            if k < depth - 1:
                truncated = True
            break
        # a_k / T = 1 + a_{k+1} t / (...): next tail is (1/(T/T(0)) - 1)/t
        norm = [c / T[0] for c in T]
        rec = _recip_series(norm, n)
        T = [rec[i + 1] for i in range(n)]
    return b0, partials, truncated


def cf_convergent(cf: ContinuedFraction, k: int) -> RationalFunction:
    """k-term convergent (term 1 is the constant; term j > 1 brings a_{j-1}).

    Three-term polynomial recurrence in the build variable:
    A_j = A_{j-1} + a_j t A_{j-2}, same for B.
    """
    if not 1 <= k <= cf.depth + 1:
        raise ValueError(f"k must be in [1, {cf.depth + 1}]")

    def recur():
        one = mpq(1) if cf.exact else mp.mpf(1)
        A_prev, B_prev = [one], []  # A_{-1} = 1, B_{-1} = 0
        A_cur, B_cur = [cf.leading], [one]
        for j in range(k - 1):
            a = cf.partials[j]
            A_next = _poly_add(A_cur, _poly_shift_scale(A_prev, a))
            B_next = _poly_add(B_cur, _poly_shift_scale(B_prev, a))
            A_prev, A_cur = A_cur, A_next
            B_prev, B_cur = B_cur, B_next
        return A_cur, B_cur

    if cf.exact:
        A, B = recur()
    else:
        with mp.workdps(max(cf.dps, 30)):
            A, B = recur()
    return RationalFunction(
        num=tuple(A), den=tuple(B),
        squared_variable=cf.squared_variable, odd_prefactor=cf.odd_prefactor,
    )


def _poly_add(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [0] * n
    for i, v in enumerate(a):
        out[i] = out[i] + v
    for i, v in enumerate(b):
        out[i] = out[i] + v
    return out


def _poly_shift_scale(a: list, c) -> list:
    return [0] + [c * v for v in a]


# ---------------------------------------------------------------------------
# Pade approximants


def pade(series: RationalSeries, L: int, M: int) -> RationalFunction:
    """[L/M] approximant with exact rational coefficients, in plain x.

    The denominator system is solved exactly; a singular system triggers
    deflation (M reduced until solvable) and sets the deflated flag.
    """
    if L < 0 or M < 0:
        raise ValueError("degrees must be nonnegative")
    if series.order < L + M:
        raise InsufficientOrder(f"need series order {L + M}")
    c = [mpq(series.coefficient(k)) for k in range(L + M + 1)]
    m_eff = M
    deflated = False
    while m_eff > 0:
        sol = _solve_pade_system(c, L, m_eff)
        if sol is not None:
            q = [mpq(1)] + sol
            break
        deflated = True
        m_eff -= 1
    else:
        q = [mpq(1)]
    p = []
    for i in range(L + 1):
        acc = mpq(0)
        for j in range(min(i, m_eff) + 1):
            acc += q[j] * c[i - j]
        p.append(acc)
    # remove any common factor picked up by deflation
    g = _poly_gcd(list(p), list(q))
    if _degree(g) > 0:
        p = _poly_divide_exact(p, g)
        q = _poly_divide_exact(q, g)
    return RationalFunction(num=tuple(p), den=tuple(q), deflated=deflated)


def _solve_pade_system(c: list, L: int, M: int):
    # rows i = 1..M: sum_{j=1..M} q_j c_{L+i-j} = -c_{L+i}
    A = [[c[L + i - j] if 0 <= L + i - j else mpq(0) for j in range(1, M + 1)]
         for i in range(1, M + 1)]
    b = [-c[L + i] for i in range(1, M + 1)]
    n = M
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(A[r][col]))
        if A[piv][col] == 0:
            return None
        A[col], A[piv] = A[piv], A[col]
        b[col], b[piv] = b[piv], b[col]
        for r in range(col + 1, n):
            f = A[r][col] / A[col][col]
            if f == 0:
                continue
            for cc in range(col, n):
                A[r][cc] -= f * A[col][cc]
            b[r] -= f * b[col]
    x = [mpq(0)] * n
    for r in range(n - 1, -1, -1):
        acc = b[r]
        for cc in range(r + 1, n):
            acc -= A[r][cc] * x[cc]
        x[r] = acc / A[r][r]
    return x


def _poly_divide_exact(a: list, d: list) -> list:
    # exact polynomial division, remainder must vanish
    a = list(a)
    dd = _degree(d)
    out = [mpq(0)] * (max(_degree(a) - dd, 0) + 1)
    while _degree(a) >= dd and any(v != 0 for v in a):
        da = _degree(a)
        if a[da] == 0:
            break
        f = a[da] / d[dd]
        out[da - dd] = f
        for i in range(dd + 1):
            a[da - dd + i] -= f * d[i]
    assert all(v == 0 for v in a), "non-exact polynomial division"
    return out


# ---------------------------------------------------------------------------
# root finding


def _to_mpc(c):
    if isinstance(c, mpq):
        return mp.mpc(mp.mpf(int(c.numerator)) / mp.mpf(int(c.denominator)))
    if isinstance(c, (mp.mpf, mp.mpc)):
        return mp.mpc(c)
    return mp.mpc(c)


def roots(coeffs: Sequence, dps: int = 60, tol: float = 1e-10,
          max_iter: int = 80) -> list:
    """All complex roots of a polynomial (ascending coefficients).

    Simultaneous (Aberth-Ehrlich) iteration in mpmath working precision,
    seeded from the float64 companion matrix; on failure every root is
    reseeded on a ring and re-iterated. A root is accepted when its
    backward error satisfies |p(z)| <= tol * sum |c_k| |z|^k, i.e. it is
    an exact root of a polynomial whose coefficients are relatively
    perturbed by at most tol. Input coefficients keep their original
    precision throughout; only the seeds go through double precision.
    """
    work = list(coeffs)
    while len(work) > 1 and work[-1] == 0:
        work.pop()
    zero_roots = 0
    while work and work[0] == 0:
        work.pop(0)
        zero_roots += 1
    out = [0j] * zero_roots
    deg = len(work) - 1
    if deg <= 0:
        return out
    with mp.workdps(dps):
        cm = [_to_mpc(c) for c in work]
        scale = max(mp.fabs(c) for c in cm)
        cm = [c / scale for c in cm]
        if deg == 1:
            out.append(complex(-cm[0] / cm[1]))
            return out
        cs64 = [complex(c) for c in cm]
        step_tol = mp.mpf(10) ** (-(dps // 2))
        found = _aberth(cm, _companion_seeds(cs64, deg), tol, max_iter, step_tol)
        if found is None:
            found = _aberth(cm, _ring_seeds(cs64, deg), tol, max_iter, step_tol)
        if found is None:
            raise NoConvergence("root iteration did not reach backward-error "
                                "tolerance")
        out.extend(complex(z) for z in found)
    return out


def _companion_seeds(cs: list, deg: int) -> list:
    try:
        arr = np.array(cs[::-1], dtype=complex)
        rts = np.roots(arr)
        if len(rts) == deg and np.all(np.isfinite(rts)):
            return [mp.mpc(z) for z in rts]
    except Exception:
        pass
    return _ring_seeds(cs, deg)


def _ring_seeds(cs: list, deg: int) -> list:
    # Cauchy bound on |root|, clamped to a sane ring radius
    if cs[-1] != 0:
        bound = 1.0 + max(abs(c / cs[-1]) for c in cs[:-1])
    else:
        bound = 1.0
    r = max(min(bound, 1e3), 1e-3)
    return [r * mp.mpc(mp.cos(2 * mp.pi * j / deg + 0.4),
                       mp.sin(2 * mp.pi * j / deg + 0.4))
            for j in range(deg)]


def _aberth(cm: list, zs: list, tol: float, max_iter: int, step_tol):
    """Simultaneous iteration; a root freezes once its update is tiny.

    Acceptance is decided afterwards by the backward bound
    |p(z)| <= tol * sum |c_k| |z|^k; returns None if any root fails it.
    Step freezing rather than the backward bound drives the loop because
    coefficients spanning many orders of magnitude make the bound slack
    long before the roots have actually settled.
    """
    deg = len(cm) - 1
    dcm = [k * cm[k] for k in range(1, deg + 1)]
    abs_c = [mp.fabs(c) for c in cm]
    frozen = [False] * deg
    zs = list(zs)
    for _ in range(max_iter):
        all_done = True
        for i in range(deg):
            if frozen[i]:
                continue
            z = zs[i]
            pz = _polyval(cm, z)
            dpz = _polyval(dcm, z)
            if pz == 0:
                frozen[i] = True
                continue
            if dpz == 0:
                zs[i] = z + mp.mpc("1e-8", "1e-8")
                all_done = False
                continue
            ratio = pz / dpz
            ssum = mp.mpc(0)
            for j in range(deg):
                if j != i:
                    dzz = z - zs[j]
                    if dzz != 0:
                        ssum += 1 / dzz
            denom = 1 - ratio * ssum
            step = ratio / denom if denom != 0 else ratio
            zs[i] = z - step
            if mp.fabs(step) <= step_tol * (1 + mp.fabs(zs[i])):
                frozen[i] = True
            else:
                all_done = False
        if all_done:
            break
    for i in range(deg):
        pz = _polyval(cm, zs[i])
        bscale = _polyval(abs_c, mp.fabs(zs[i]))
        if mp.fabs(pz) > tol * bscale:
            return None
    return zs


# ---------------------------------------------------------------------------
# pole/zero extraction and filtering


def pole_zero_set(rf: RationalFunction, truncation_depth: int = 0,
                  dps: int = 60) -> PoleZeroSet:
    """Poles and zeros of a rational function, mapped to the x plane.

    For a build in t = x^2, each nonzero t-root contributes the +-sqrt
    pair; residues follow via the chain rule. Multiplicity is estimated
    by clustering root sets at relative tolerance 1e-8.
    """
    t_poles = roots(rf.den, dps=dps)
    t_zeros = roots(rf.num, dps=dps)
    with mp.workdps(dps):
        num_c = [_to_mpc(c) for c in rf.num]
        den_c = [_to_mpc(c) for c in rf.den]
        dden = [k * den_c[k] for k in range(1, len(den_c))]
        poles, residues = [], []
        for tp in t_poles:
            tpm = mp.mpc(tp)
            a_val = _polyval(num_c, tpm)
            b_prime = _polyval(dden, tpm)
            if rf.squared_variable:
                if tp == 0:
                    xs = [mp.mpc(0)]
                else:
                    root = mp.sqrt(tpm)
                    xs = [root, -root]
                for x in xs:
                    poles.append(complex(x))
                    if b_prime != 0 and x != 0:
                        res = a_val / (b_prime * 2 * x)
                        if rf.odd_prefactor:
                            res *= x
                        residues.append(complex(res))
                    else:
                        residues.append(complex("inf"))
            else:
                poles.append(complex(tpm))
                residues.append(complex(a_val / b_prime) if b_prime != 0
                                else complex("inf"))
        zeros = []
        for tz in t_zeros:
            if rf.squared_variable:
                if tz == 0:
                    zeros.append(0j)
                else:
                    root = complex(mp.sqrt(mp.mpc(tz)))
                    zeros.extend([root, -root])
            else:
                zeros.append(complex(tz))
        if rf.odd_prefactor:
            zeros.append(0j)
    mult = _cluster_multiplicity(poles)
    return PoleZeroSet(
        poles=tuple(poles), zeros=tuple(zeros), residues=tuple(residues),
        pole_multiplicity=tuple(mult), filtered=False,
        truncation_depth=truncation_depth,
    )


def _cluster_multiplicity(points: list) -> list:
    if not points:
        return []
    scale = max(abs(p) for p in points) or 1.0
    tol = 1e-8 * scale
    mult = [1] * len(points)
    for i, p in enumerate(points):
        mult[i] = sum(1 for q in points if abs(p - q) <= tol)
    return mult


def filter_froissart(pz: PoleZeroSet, pair_tol: Optional[float] = None,
                     residue_tol: Optional[float] = None) -> PoleZeroSet:
    """Remove spurious pole-zero doublets from a pole map.

    A genuine doublet is a pole that a zero has collapsed onto: the pair
    annihilates and the residue it carries is vanishingly small. Both
    symptoms are required before a pole is dropped. Requiring the pair
    alone would also delete genuine poles of a branch-cut arc, where the
    approximant interlaces zeros between poles at spacings far below
    pair_tol while the residues stay many orders above the doublet
    floor. Dropped poles take their paired zeros with them.
    Defaults: pair_tol = 1e-6 * max |pole|, residue_tol = 1e-10 relative
    to the largest finite residue.
    """
    if not pz.poles:
        return PoleZeroSet(pz.poles, pz.zeros, pz.residues,
                           pz.pole_multiplicity, True, pz.truncation_depth)
    pole_scale = max(abs(p) for p in pz.poles)
    if pair_tol is None:
        pair_tol = 1e-6 * pole_scale
    if residue_tol is None:
        residue_tol = 1e-10
    finite_res = [abs(r) for r in pz.residues if math.isfinite(abs(r))]
    res_scale = max(finite_res) if finite_res else 1.0
    zeros_left = list(pz.zeros)
    keep_p, keep_r, keep_m = [], [], []
    dropped = 0
    for p, r, m in zip(pz.poles, pz.residues, pz.pole_multiplicity):
        paired = None
        for i, z in enumerate(zeros_left):
            if abs(p - z) <= pair_tol:
                paired = i
                break
        tiny = math.isfinite(abs(r)) and abs(r) <= residue_tol * res_scale
        if paired is not None and tiny:
            zeros_left.pop(paired)
            dropped += 1
            continue
        keep_p.append(p)
        keep_r.append(r)
        keep_m.append(m)
    if dropped:
        logger.info("filtered %d spurious pole(s) of %d (pair_tol=%.3e, "
                    "residue_tol=%.3e)", dropped, len(pz.poles), pair_tol,
                    residue_tol)
    return PoleZeroSet(
        poles=tuple(keep_p), zeros=tuple(zeros_left), residues=tuple(keep_r),
        pole_multiplicity=tuple(keep_m), filtered=True,
        truncation_depth=pz.truncation_depth,
    )
