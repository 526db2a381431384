"""Eisenstein-type lattice sums over {m + n*tau}.

Every sum is organised row by row: the inner sum over ``m`` is done in
closed form and only the outer sum over ``n`` is truncated.  For
``j = 1`` the sums are conditionally convergent and this row order (n
outer, m inner) is part of the definition, not an implementation detail.
The swapped order (m outer) is available separately because it differs
from the Eisenstein order by 2*pi*i/tau.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError
from .gammatrig import zeta_even
from .params import DEFAULT_POLICY, LatticeParams, TruncationPolicy, check_tau
from .theta import theta_z_derivative

__all__ = [
    "LatticeParams", "TruncationPolicy", "DEFAULT_POLICY",
    "row_sum", "lattice_sum_delta", "half_shift_sum", "swapped_order_delta2",
    "delta_from_recursion", "delta2_from_theta", "direct_lattice_sum",
]

PI = math.pi


def row_sum(k: int, w, tol: float = 1e-17, max_terms: int = 100000) -> complex:
    """sum_{m in Z} (m + w)^{-k} for non-real w and k >= 2.

    Uses the exponential (Lipschitz) form of the derivatives of
    pi*cot(pi*w); for k = 2 this is pi^2/sin^2(pi*w) written in
    t = exp(2*pi*i*w), which stays accurate when Im w is large.
    """
    w = complex(w)
    if k < 2:
        raise ValueError("row_sum needs k >= 2")
    if w.imag == 0:
        raise DomainError("row_sum needs a non-real shift")
    if w.imag < 0:
        return (-1) ** k * row_sum(k, -w, tol, max_terms)
    t = cmath.exp(2j * PI * w)
    at = abs(t)
    peak = (k - 1) / -math.log(at) if at > 0 else 0.0
    s = 0j
    quiet = 0
    tr = 1.0 + 0j
    for r in range(1, max_terms):
        tr *= t
        term = r ** (k - 1) * tr
        s += term
        if r > peak and abs(term) <= tol * abs(s):
            quiet += 1
            if quiet >= 3:
                break
        else:
            quiet = 0
        if tr == 0:
            break
    else:
        raise ConvergenceError(f"row sum for w={w} did not converge")
    return (-2j * PI) ** k / math.factorial(k - 1) * s


def _sum_rows(first_row: complex, shifts, k: int, policy: TruncationPolicy) -> complex:
    """first_row + 2 * sum of row_sum(k, w) over the generator ``shifts``."""
    total = complex(first_row)
    quiet = 0
    for count, w in enumerate(shifts):
        if count >= policy.max_terms:
            raise ConvergenceError("outer lattice sum exceeded max_terms rows")
        row = 2 * row_sum(k, w)
        total += row
        if abs(row) < policy.series_tol * max(abs(total), 1e-300) * 1e-2:
            quiet += 1
            if quiet >= 3:
                return total
        else:
            quiet = 0
    raise AssertionError("unreachable")


def _count():
    n = 0
    while True:
        yield n
        n += 1


@lru_cache(maxsize=4096)
def _delta_cached(j: int, tau: complex, policy: TruncationPolicy) -> complex:
    rows = (n * tau for n in _count() if n >= 1)
    return _sum_rows(2 * zeta_even(j), rows, 2 * j, policy)


def lattice_sum_delta(j: int, tau, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """delta_{2j}(tau) = sum_n sum_m' (m + n*tau)^{-2j}, origin excluded.

    For j = 1 the order is fixed: n outer, m inner, each row in closed
    form (the n = 0 row is pi^2/3).
    """
    if j < 1:
        raise ValueError("j must be >= 1")
    return _delta_cached(int(j), check_tau(tau), policy)


@lru_cache(maxsize=4096)
def _half_cached(kind: str, j: int, tau: complex, policy: TruncationPolicy) -> complex:
    k = 2 * j
    if kind == "alpha":
        # rows w = 1/2 + n*tau; n = 0 row is real, n and -n agree
        first = 2 * (2**k - 1) * zeta_even(j)
        rows = (0.5 + n * tau for n in _count() if n >= 1)
    elif kind == "beta":
        # rows w = 1/2 + (n + 1/2)*tau; n and -n-1 agree
        first = 0j
        rows = (0.5 + (n + 0.5) * tau for n in _count())
    elif kind == "gamma":
        first = 0j
        rows = ((n + 0.5) * tau for n in _count())
    else:
        raise ValueError(f"unknown half-shift kind {kind!r}")
    return _sum_rows(first, rows, k, policy)


def half_shift_sum(kind: str, j: int, tau, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """alpha_{2j}, beta_{2j} or gamma_{2j}: sums over the half-shifted lattices.

    alpha: m + 1/2 + n*tau;  beta: m + 1/2 + (n + 1/2)*tau;
    gamma: m + (n + 1/2)*tau.  Same row order as ``lattice_sum_delta``.
    """
    if j < 1:
        raise ValueError("j must be >= 1")
    return _half_cached(str(kind), int(j), check_tau(tau), policy)


def swapped_order_delta2(tau, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """sum_m sum_n' (m + n*tau)^{-2} with m outer.

    Row m (inner sum over n) is tau^{-2} * pi^2/sin^2(pi*m/tau).
    """
    tau = check_tau(tau)
    rows = (m / tau for m in _count() if m >= 1)
    return _sum_rows(2 * zeta_even(1), rows, 2, policy) / tau**2


def delta_from_recursion(j_max: int, delta4, delta6) -> list:
    """delta_8 .. delta_{2*j_max} from delta_4, delta_6.

    Works on d_k = (2k+3) k! delta_{2k+4}, which obey
    sum_k C(n,k) d_k d_{n-k} = (2n+9)/(3n+6) d_{n+2}.
    """
    if j_max < 4:
        raise ValueError("j_max must be >= 4")
    if j_max > 64:
        raise OverflowError("j_max > 64 overflows double precision")
    kmax = j_max - 2
    d = [3 * complex(delta4), 5 * complex(delta6)]
    for n in range(0, kmax - 1):
        acc = 0j
        for k in range(n + 1):
            acc += math.comb(n, k) * d[k] * d[n - k]
        coeff = Fraction(3 * n + 6, 2 * n + 9)
        d.append(float(coeff) * acc)
    out = []
    for k in range(2, kmax + 1):
        scale = (2 * k + 3) * math.factorial(k)
        out.append(d[k] / scale)
    return out


def delta2_from_theta(tau, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """delta_2 = -pi^2 theta_1'''(0) / (3 theta_1'(0))."""
    t1 = theta_z_derivative(1, 1, 0, tau, policy)
    t3 = theta_z_derivative(1, 3, 0, tau, policy)
    return -PI**2 * t3 / (3 * t1)


def _min_ring_distance(tau: complex) -> float:
    """min |x + y*tau| over the boundary of the unit square max(|x|,|y|) = 1."""
    # edges y = +-1: distance from -+tau to the real segment [-1, 1]
    x = min(max(-tau.real, -1.0), 1.0)
    d1 = abs(x + tau)
    # edges x = +-1: distance from -1 to the segment {y*tau : |y| <= 1}
    y = min(max(-tau.real / abs(tau) ** 2, -1.0), 1.0)
    d2 = abs(1 + y * tau)
    return min(d1, d2)


def direct_lattice_sum(j: int, tau, radius: int, tol: float | None = None):
    """Brute-force square truncation of delta_{2j} for j >= 2.

    Returns (value, tail_bound).  The bound comes from comparing the
    8r points on ring r with the integral of r^{1-2j}.  If ``tol`` is
    given and the bound exceeds it, ConvergenceError is raised.
    """
    if j < 2:
        raise ValueError("direct truncation only converges absolutely for j >= 2")
    tau = check_tau(tau)
    rng = np.arange(-radius, radius + 1)
    m, n = np.meshgrid(rng, rng, indexing="ij")
    w = (m + n * tau).ravel()
    w = w[w != 0]
    val = complex(np.sum(w ** (-2 * j)))
    c = _min_ring_distance(tau)
    bound = 8 * c ** (-2 * j) * radius ** (2 - 2 * j) / (2 * j - 2)
    if tol is not None and bound > tol:
        raise ConvergenceError(f"tail bound {bound:.3g} exceeds tolerance {tol:.3g} at radius {radius}")
    return val, bound
