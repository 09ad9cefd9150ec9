"""N-function algebra for the exponential Orlicz pair.

The pair driving everything here is

    P(t)  = e^|t| - 1 - |t|            (exponential growth)
    P*(t) = (|t| + 1) ln(|t| + 1) - |t|   (its Young conjugate, L log L growth)

with densities p(s) = sgn(s)(e^|s| - 1) and pbar(s) = sgn(s) ln(1 + |s|),
each the inverse of the other.  P* satisfies the doubling condition,
P does not; that asymmetry is why the conjugate side carries the
maximal-function machinery elsewhere in the package.

Generic pairs can be registered from a density; the conjugate is then
evaluated by a numeric Legendre transform (golden-section maximisation),
which is slow but only meant for cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import OverflowInIntegrand

# exp overflows near 709 in float64; refuse a little earlier so the
# integrand is still finite when we test it.
EXP_ARG_MAX = 700.0


def _check_exp_range(t: np.ndarray) -> None:
    if np.any(np.abs(t) > EXP_ARG_MAX):
        raise OverflowInIntegrand(
            "N-function argument exceeds %g; integrand would overflow" % EXP_ARG_MAX
        )


@dataclass(frozen=True)
class NFunction:
    """A complementary pair (P, P*) with densities.

    All four callables are vectorised over numpy arrays.  `principal`
    and `conjugate` are even and vanish at 0; the densities are odd and
    increasing.
    """

    name: str
    principal: Callable[[np.ndarray], np.ndarray]
    conjugate: Callable[[np.ndarray], np.ndarray]
    density: Callable[[np.ndarray], np.ndarray]
    conjugate_density: Callable[[np.ndarray], np.ndarray]
    doubling_conjugate: bool = True

    def P(self, t):
        t = np.asarray(t, dtype=float)
        return self.principal(t)

    def Pstar(self, t):
        t = np.asarray(t, dtype=float)
        return self.conjugate(t)

    def p(self, s):
        s = np.asarray(s, dtype=float)
        return self.density(s)

    def pbar(self, s):
        s = np.asarray(s, dtype=float)
        return self.conjugate_density(s)


def _exp_P(t):
    a = np.abs(t)
    _check_exp_range(a)
    return np.expm1(a) - a


def _exp_Pstar(t):
    a = np.abs(t)
    return (a + 1.0) * np.log1p(a) - a


def _exp_p(s):
    a = np.abs(s)
    _check_exp_range(a)
    return np.sign(s) * np.expm1(a)


def _exp_pbar(s):
    return np.sign(s) * np.log1p(np.abs(s))


def exponential_pair() -> NFunction:
    """The pair P(t) = e^|t| - 1 - |t|, P*(t) = (|t|+1)ln(|t|+1) - |t|."""
    return NFunction(
        name="exponential",
        principal=_exp_P,
        conjugate=_exp_Pstar,
        density=_exp_p,
        conjugate_density=_exp_pbar,
        doubling_conjugate=True,
    )


def quadratic_pair() -> NFunction:
    """Self-conjugate pair N(t) = t^2/2; used to reduce Orlicz tests to L2."""
    sq = lambda t: 0.5 * np.asarray(t, dtype=float) ** 2
    ident = lambda s: np.asarray(s, dtype=float)
    return NFunction(
        name="quadratic",
        principal=sq,
        conjugate=sq,
        density=ident,
        conjugate_density=ident,
        doubling_conjugate=True,
    )


def _golden_max(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12) -> float:
    """Golden-section maximisation of a unimodal f on [lo, hi]."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(200):
        if b - a < tol * (1.0 + abs(a) + abs(b)):
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def pair_from_density(name: str, principal: Callable, density: Callable,
                      search_cap: float = 1e6) -> NFunction:
    """Build an NFunction from (P, p), with P* by numeric Legendre transform.

    P*(y) = sup_x (x|y| - P(x)).  The sup is located by golden section on
    [0, x_hi] where x_hi solves p(x_hi) >= |y| (doubling the bracket).
    Intended for cross-checking, not production hot paths.
    """

    def conj_scalar(y: float) -> float:
        ay = abs(y)
        if ay == 0.0:
            return 0.0
        x_hi = 1.0
        while density(x_hi) < ay and x_hi < search_cap:
            x_hi *= 2.0
        xs = _golden_max(lambda x: x * ay - principal(x), 0.0, x_hi)
        return xs * ay - principal(xs)

    conj = np.vectorize(conj_scalar, otypes=[float])

    def conj_density_scalar(y: float) -> float:
        # pbar = p^{-1}: bisection on the monotone density.
        ay = abs(y)
        if ay == 0.0:
            return 0.0
        lo, hi = 0.0, 1.0
        while density(hi) < ay and hi < search_cap:
            hi *= 2.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if density(mid) < ay:
                lo = mid
            else:
                hi = mid
        return np.sign(y) * 0.5 * (lo + hi)

    conj_density = np.vectorize(conj_density_scalar, otypes=[float])

    return NFunction(
        name=name,
        principal=lambda t: principal(np.abs(np.asarray(t, dtype=float))),
        conjugate=conj,
        density=lambda s: np.sign(s) * density(np.abs(np.asarray(s, dtype=float))),
        conjugate_density=conj_density,
        doubling_conjugate=False,
    )


def young_gap(x, y, nf: NFunction | None = None):
    """P(x) + P*(y) - x*y.  Nonnegative; zero exactly on the graph y = p(x)."""
    if nf is None:
        nf = exponential_pair()
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return nf.P(x) + nf.Pstar(y) - x * y


def q_function(r):
    """Q(r) = (|r| + 1/2) ln(2|r| + 1) - |r|.

    A smoothed companion of P*; bounded above by 3 |r| ln(1 + |r|).
    """
    a = np.abs(np.asarray(r, dtype=float))
    return (a + 0.5) * np.log1p(2.0 * a) - a


Q_LOG_BOUND_CONSTANT = 3.0


def pstar_sandwich(a):
    """Return (lower, P*(a), upper) for the two-sided L log L comparison.

    lower = |a| ln(1 + |a|) / 2  <=  P*(a)  <=  |a| ln(1 + |a|) = upper.
    """
    t = np.abs(np.asarray(a, dtype=float))
    ref = t * np.log1p(t)
    return 0.5 * ref, _exp_Pstar(t), ref
