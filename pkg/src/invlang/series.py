"""Exact Taylor series over arbitrary-precision rationals.

Builds the odd series of the Langevin function coth(y) - 1/y, reverts it to
get the inverse function's series, and derives the pole-reduced companions:

    f(x) = (1 - x^2) * Linv(x) / (3x)      even, finite at x = +-1
    g(x) = Linv(x) - 2x / (1 - x^2)        odd, pole subtracted
    h(x) = g(x) / x                        even, h(0) = 1

All coefficient arithmetic uses gmpy2.mpq so results are exact at any order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from gmpy2 import mpq, mpz

from .errors import InsufficientOrder, NoCycleFound, ZeroLinearCoefficient

Rational = mpq

_PARITIES = ("even", "odd", "none")


def _as_mpq(value) -> mpq:
    if isinstance(value, float):
        # floats round-trip through their exact binary value; callers that
        # want a decimal literal should pass a string or a Fraction
        return mpq(value)
    return mpq(value)


@dataclass(frozen=True)
class RationalSeries:
    """Dense truncated power series with exact rational coefficients.

    coeffs[k] is the coefficient of variable**k. The parity tag is part of
    the value: "even"/"odd" promise that the complementary coefficients
    vanish, which construction verifies.
    """

    coeffs: tuple
    parity: str = "none"
    variable: str = "x"

    def __post_init__(self):
        if self.parity not in _PARITIES:
            raise ValueError(f"parity must be one of {_PARITIES}")
        object.__setattr__(self, "coeffs", tuple(_as_mpq(c) for c in self.coeffs))
        if self.parity != "none":
            bad = 1 if self.parity == "even" else 0
            for k, c in enumerate(self.coeffs):
                if k % 2 == bad and c != 0:
                    raise ValueError(
                        f"coefficient of {self.variable}^{k} is nonzero but "
                        f"parity is {self.parity!r}"
                    )

    @property
    def order(self) -> int:
        """Highest represented power (truncation order)."""
        return len(self.coeffs) - 1

    def coefficient(self, power: int) -> mpq:
        if power < 0:
            return mpq(0)
        if power > self.order:
            raise InsufficientOrder(
                f"series truncated at order {self.order}, need power {power}"
            )
        return self.coeffs[power]

    def nonzero_terms(self) -> Iterator[tuple]:
        """Yield (power, coefficient) for structurally nonzero terms."""
        step = 2 if self.parity in ("even", "odd") else 1
        start = 0 if self.parity != "odd" else 1
        for k in range(start, len(self.coeffs), step):
            if self.coeffs[k] != 0:
                yield k, self.coeffs[k]

    def truncate(self, order: int) -> "RationalSeries":
        if order >= self.order:
            return self
        return RationalSeries(self.coeffs[: order + 1], self.parity, self.variable)

    def eval_float(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def as_floats(self) -> list:
        return [float(c) for c in self.coeffs]


# ---------------------------------------------------------------------------
# construction


def bernoulli_numbers(n: int) -> list:
    """B_0 .. B_n as exact rationals (B_1 = -1/2 convention)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = [mpq(1)]
    for m in range(1, n + 1):
        # sum_{j<m} C(m+1, j) B_j = -(m+1) B_m  rearranged
        acc = mpq(0)
        binom = mpz(1)  # C(m+1, 0)
        for j in range(m):
            acc += binom * out[j]
            binom = binom * (m + 1 - j) // (j + 1)
        out.append(-acc / (m + 1))
    return out


def langevin_series(order: int) -> RationalSeries:
    """Taylor series of coth(y) - 1/y about 0, truncated at `order`.

    Odd series; coefficient of y^(2n-1) is 2^(2n) B_{2n} / (2n)!.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    n_max = (order + 1) // 2
    bern = bernoulli_numbers(2 * n_max)
    coeffs = [mpq(0)] * (order + 1)
    fact = mpz(1)
    for k in range(1, 2 * n_max + 1):
        fact *= k
        if k % 2 == 0:
            power = k - 1
            if power <= order:
                coeffs[power] = mpq(mpz(1) << k, fact) * bern[k]
    return RationalSeries(tuple(coeffs), parity="odd", variable="y")


def inverse_langevin_series(order: int) -> RationalSeries:
    """Exact series of the inverse Langevin function to the given order.

    Uses the first-order differential equation satisfied by the function,
    (1 - x^2) w w' - 2x w' = w  with w(0) = 0, w'(0) = 3, which yields a
    quadratic-convolution recurrence. Cost is O(order^2) exact products,
    comfortably fast beyond order 450, where reversion by composition
    is far too slow.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    n_terms = (order + 1) // 2  # number of odd coefficients b_1, b_3, ...
    B = [mpq(3)]  # B[j] = coefficient of x^(2j+1)
    # P[j] = coefficient of x^(2j) in w^2; P[0] = 0, P[1] = b1^2
    P = [mpq(0), mpq(9)]
    for j in range(1, n_terms):
        m = 2 * j + 1
        # S = sum over interior products b_i b_{m+1-i}, i odd in [3, m-2]
        S = mpq(0)
        for a in range(1, j):
            S += B[a] * B[j - a]
        bm = ((m - 1) * P[j] - (m + 1) * S) / (2 * m + 4)
        B.append(bm)
        # extend w^2: coefficient of x^(2j+2)
        P.append(2 * B[0] * bm + S)
    coeffs = [mpq(0)] * (order + 1)
    for j, b in enumerate(B):
        coeffs[2 * j + 1] = b
    return RationalSeries(tuple(coeffs), parity="odd")


# ---------------------------------------------------------------------------
# generic series algebra (dense, exact)


def _mul_trunc(a: Sequence, b: Sequence, order: int) -> list:
    out = [mpq(0)] * (order + 1)
    for i, ai in enumerate(a):
        if i > order or ai == 0:
            continue
        hi = min(len(b) - 1, order - i)
        for j in range(hi + 1):
            bj = b[j]
            if bj != 0:
                out[i + j] += ai * bj
    return out


def _recip_trunc(a: Sequence, order: int) -> list:
    # Newton: r <- r (2 - a r), doubling correct order each pass
    if a[0] == 0:
        raise ZeroDivisionError("series has zero constant term")
    r = [1 / mpq(a[0])]
    known = 0
    while known < order:
        known = min(2 * known + 1, order)
        ar = _mul_trunc(a, r, known)
        two_minus = [-c for c in ar]
        two_minus[0] += 2
        r = _mul_trunc(r, two_minus, known)
    return r


def compose(outer: RationalSeries, inner: RationalSeries, order: int) -> RationalSeries:
    """Exact truncated composition outer(inner(x)); inner must have no
    constant term."""
    if inner.coefficient(0) != 0:
        raise ValueError("inner series must vanish at 0")
    acc = [mpq(0)] * (order + 1)
    # Horner from the top coefficient down
    for c in reversed(outer.coeffs[: order + 1]):
        acc = _mul_trunc(acc, inner.coeffs, order)
        acc[0] += c
    return RationalSeries(tuple(acc), parity="none", variable=inner.variable)


def _derivative(coeffs: Sequence) -> list:
    return [k * coeffs[k] for k in range(1, len(coeffs))]


def revert_series(series: RationalSeries, order: Optional[int] = None) -> RationalSeries:
    """Compositional inverse of a series with zero constant term.

    Newton iteration w <- w - (s(w) - x) / s'(w), doubling the correct
    order each pass. Exact but O(order^3)-ish in rational products; use
    inverse_langevin_series for that particular series at high order.
    """
    if order is None:
        order = series.order
    if series.coefficient(0) != 0:
        raise ValueError("series must have zero constant term")
    c1 = series.coefficient(1)
    if c1 == 0:
        raise ZeroLinearCoefficient("linear coefficient vanishes; not invertible")
    s = list(series.coeffs)
    ds = _derivative(s)
    w = [mpq(0), 1 / c1]
    known = 1
    while known < order:
        known = min(2 * known, order)
        wk = w + [mpq(0)] * (known + 1 - len(w))
        w_series = RationalSeries(tuple(wk))
        s_of_w = compose(RationalSeries(tuple(s)), w_series, known).coeffs
        num = list(s_of_w)
        num[1] -= 1  # subtract x
        ds_of_w = compose(RationalSeries(tuple(ds)), w_series, known).coeffs
        corr = _mul_trunc(num, _recip_trunc(ds_of_w, known), known)
        w = [wk[k] - corr[k] for k in range(known + 1)]
    parity = "odd" if series.parity == "odd" else "none"
    return RationalSeries(tuple(w[: order + 1]), parity=parity)


def revert_series_lagrange(series: RationalSeries, order: int) -> RationalSeries:
    """Compositional inverse by direct coefficient extraction.

    b_n = [t^(n-1)] (t / s(t))^n / n. Cubic cost; retained as an
    independent cross-check of revert_series at small orders.
    """
    if series.coefficient(0) != 0:
        raise ValueError("series must have zero constant term")
    if series.coefficient(1) == 0:
        raise ZeroLinearCoefficient("linear coefficient vanishes; not invertible")
    base = _recip_trunc(series.coeffs[1:], order)  # t/s(t) as series in t
    out = [mpq(0)] * (order + 1)
    power = [mpq(1)]
    for n in range(1, order + 1):
        power = _mul_trunc(power, base, order)
        out[n] = power[n - 1] / n
    return RationalSeries(tuple(out))


# ---------------------------------------------------------------------------
# pole reduction


def reduce_multiplicative(inv_series: RationalSeries, order: Optional[int] = None) -> RationalSeries:
    """Even series of (1 - x^2) * w(x) / (3x) for odd w.

    Removes the simple poles at x = +-1 multiplicatively; the result is
    finite on [-1, 1] with value 2/3 at both ends.
    """
    if inv_series.parity != "odd":
        raise ValueError("expected an odd series")
    if order is None:
        order = inv_series.order - 1
    order -= order % 2
    if inv_series.order < order + 1:
        raise InsufficientOrder(
            f"need input to order {order + 1}, have {inv_series.order}"
        )
    coeffs = [mpq(0)] * (order + 1)
    for m in range(0, order // 2 + 1):
        b_hi = inv_series.coefficient(2 * m + 1)
        b_lo = inv_series.coefficient(2 * m - 1) if m > 0 else mpq(0)
        coeffs[2 * m] = (b_hi - b_lo) / 3
    return RationalSeries(tuple(coeffs), parity="even")


def reduce_additive(inv_series: RationalSeries, order: Optional[int] = None) -> RationalSeries:
    """Odd series of w(x) - 2x / (1 - x^2): subtract the pole part.

    2x/(1-x^2) expands to 2 sum x^(2j+1), so every odd coefficient simply
    drops by 2. Finite on [-1, 1] with value 1/2 at x = 1.
    """
    if inv_series.parity != "odd":
        raise ValueError("expected an odd series")
    if order is None:
        order = inv_series.order
    if inv_series.order < order:
        raise InsufficientOrder(f"need input to order {order}")
    coeffs = [mpq(0)] * (order + 1)
    for k in range(1, order + 1, 2):
        coeffs[k] = inv_series.coefficient(k) - 2
    return RationalSeries(tuple(coeffs), parity="odd")


def h_series(g: RationalSeries, order: Optional[int] = None) -> RationalSeries:
    """Even series g(x)/x given odd g; h(0) = 1 for the reduced inverse."""
    if g.parity != "odd":
        raise ValueError("expected an odd series")
    if order is None:
        order = g.order - 1
    order -= order % 2
    if g.order < order + 1:
        raise InsufficientOrder(f"need input to order {order + 1}")
    coeffs = [mpq(0)] * (order + 1)
    for m in range(0, order // 2 + 1):
        coeffs[2 * m] = g.coefficient(2 * m + 1)
    return RationalSeries(tuple(coeffs), parity="even")


# ---------------------------------------------------------------------------
# sign-pattern analysis


@dataclass(frozen=True)
class SignCycle:
    """Periodic sign pattern of a series' nonzero coefficients.

    cycle_length: number of consecutive nonzero coefficients per period.
    sign_changes: oscillations per period (half the sign flips).
    start_index: power of the earliest coefficient from which the pattern
        holds to the end of the available data.
    pattern: observed signs over one period starting at start_index.
    """

    cycle_length: int
    sign_changes: int
    start_index: int
    pattern: str


def _runs(signs: Sequence) -> list:
    out = []
    start = 0
    for i in range(1, len(signs) + 1):
        if i == len(signs) or signs[i] != signs[start]:
            out.append((start, i - start, signs[start]))
            start = i
    return out


def sign_cycle(series: RationalSeries, min_cycles: int = 3) -> SignCycle:
    """Detect the asymptotic sign cycle of the nonzero coefficients.

    Decomposes the sign sequence into maximal runs. The period is taken
    from the last two complete runs; the onset is the earliest run from
    which every complete run length belongs to the tail's run-length set.
    The final (possibly truncated) run is ignored for length statistics.
    A one-off run of anomalous length mid-sequence therefore moves the
    onset forward rather than destroying detection.
    """
    terms = [(k, c) for k, c in series.nonzero_terms()]
    if len(terms) < 4:
        raise NoCycleFound("too few nonzero coefficients")
    powers = [k for k, _ in terms]
    signs = [1 if c > 0 else -1 for _, c in terms]
    runs = _runs(signs)
    if len(runs) < 4:
        raise NoCycleFound("fewer than four sign runs; no cycle established")
    body = runs[:-1]  # last run may be cut off by truncation
    tail_lengths = {body[-1][1], body[-2][1]}
    i = len(body) - 1
    while i >= 0 and body[i][1] in tail_lengths:
        i -= 1
    onset_run = body[i + 1]
    n_cycle = body[-1][1] + body[-2][1]
    available = len(signs) - onset_run[0]
    if available < min_cycles * n_cycle:
        raise NoCycleFound(
            f"only {available} coefficients after onset; need {min_cycles} cycles"
        )
    pattern = "".join("+" if s > 0 else "-" for s in signs[onset_run[0]: onset_run[0] + n_cycle])
    return SignCycle(
        cycle_length=n_cycle,
        sign_changes=1,
        start_index=powers[onset_run[0]],
        pattern=pattern,
    )


def singularity_argument(cycle: SignCycle, squared_variable: bool = False) -> float:
    """Angle (degrees) of the dominant conjugate singularity pair implied
    by a sign cycle: 360 * M / N, halved when coefficients index the
    squared variable, folded into (0, 180]."""
    angle = 360.0 * cycle.sign_changes / cycle.cycle_length
    if squared_variable:
        angle /= 2.0
    angle %= 360.0
    if angle > 180.0:
        angle = 360.0 - angle
    return angle
