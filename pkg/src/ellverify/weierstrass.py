"""Weierstrass sigma, zeta, wp and wp' from their lattice definitions.

Evaluation happens in normalized coordinates u = z/(2*omega1) on the
lattice {m + n*tau}; results are rescaled afterwards.  Each function sums
exactly over the centered square 0 < max(|m|,|n|) <= R and adds the
contribution of the lattice points outside the square through its power
series in u, whose coefficients are Eisenstein tails
T_{2j} = delta_{2j} - (partial sum over the square).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .eisenstein import _min_ring_distance, lattice_sum_delta
from .errors import ConvergenceError, PoleError
from .params import DEFAULT_POLICY, LatticeParams, TruncationPolicy

_POLE_DISTANCE = 1e-9
_MAX_TAIL_J = 40
# Series cutoff for log(1-u) + u + u^2/2 when |u| is small.
_SMALL_U = 0.25
_SMALL_U_TERMS = 40


@dataclass(frozen=True)
class WeierstrassContext:
    """Immutable lattice data plus cached constants.

    Attributes set after construction: ``tau``, ``delta2``, ``delta4``,
    ``delta6``, ``e1``, ``e2``, ``e3``.
    """

    lattice: LatticeParams = field(default_factory=LatticeParams)
    policy: TruncationPolicy = DEFAULT_POLICY

    def __post_init__(self):
        tau = self.lattice.tau
        R = self.policy.lattice_radius
        rng = np.arange(-R, R + 1)
        m, n = np.meshgrid(rng, rng, indexing="ij")
        pts = (m + n * tau).ravel()
        pts = pts[pts != 0]
        ring = _min_ring_distance(tau) * R
        tails = [0j, 0j]
        bounds = [0.0, 0.0]
        for j in range(2, _MAX_TAIL_J + 1):
            partial = complex(np.sum(pts ** (-2 * j)))
            tails.append(lattice_sum_delta(j, tau, self.policy) - partial)
            # 8r points on ring r, each at distance >= c*r
            bounds.append(8 * ring ** (-2 * j) * R * R / (2 * j - 2))
        s = object.__setattr__
        s(self, "tau", tau)
        s(self, "_pts", pts)
        s(self, "_ring", ring)
        s(self, "_tails", tuple(tails))
        s(self, "_bounds", tuple(bounds))
        s(self, "delta2", lattice_sum_delta(1, tau, self.policy))
        s(self, "delta4", lattice_sum_delta(2, tau, self.policy))
        s(self, "delta6", lattice_sum_delta(3, tau, self.policy))
        w1, w2 = self.lattice.omega1, self.lattice.omega2
        s(self, "e1", wp(w1, self))
        s(self, "e2", wp(w2, self))
        s(self, "e3", wp(w1 + w2, self))

    @classmethod
    def from_tau(cls, tau, omega1=0.5, policy: TruncationPolicy = DEFAULT_POLICY):
        return cls(LatticeParams.from_tau(tau, omega1), policy)

    @property
    def scale(self) -> complex:
        return 2 * self.lattice.omega1

    def _tail(self, u: complex, weight):
        """sum_j weight(j) * T_{2j} * u^{power(j)} until the ring bound is negligible."""
        r = abs(u)
        if r > 0.5 * self._ring:
            raise ConvergenceError(
                f"|u|={r:.3g} too large for lattice radius {self.policy.lattice_radius}")
        total = 0j
        for j in range(2, _MAX_TAIL_J + 1):
            coeff, power = weight(j)
            total += coeff * self._tails[j] * u**power
            if abs(coeff) * self._bounds[j] * r**power < 1e-18:
                return total
        raise ConvergenceError("lattice tail series did not converge")

    def _check_pole(self, u: complex) -> None:
        tau = self.tau
        n0 = round(u.imag / tau.imag)
        m0 = round((u - n0 * tau).real)
        for dn in (-1, 0, 1):
            for dm in (-1, 0, 1):
                if abs(u - (m0 + dm) - (n0 + dn) * tau) < _POLE_DISTANCE:
                    raise PoleError(f"z is within {_POLE_DISTANCE} of a lattice point")


def _log_factors(u: complex, pts: np.ndarray) -> complex:
    """sum over pts of log(1 - u/w) + u/w + (u/w)^2/2, factor by factor."""
    x = u / pts
    small = np.abs(x) < _SMALL_U
    total = 0j
    xs = x[small]
    if xs.size:
        acc = np.zeros_like(xs)
        for k in range(_SMALL_U_TERMS, 2, -1):
            acc = acc * xs + 1.0 / k
        total -= complex(np.sum(acc * xs**3))
    xl = x[~small]
    if xl.size:
        total += complex(np.sum(np.log(1 - xl) + xl + 0.5 * xl * xl))
    return total


def sigma(z, ctx: WeierstrassContext) -> complex:
    """Weierstrass sigma(z | Lambda) from the infinite product.

    The product is accumulated as a sum of per-factor principal logs and
    exponentiated once, so no global branch of log(sigma) is needed.
    """
    u = complex(z) / ctx.scale
    if u == 0:
        return 0j
    x = u / ctx._pts
    if np.any(x == 1):
        return 0j
    s = _log_factors(u, ctx._pts)
    s += ctx._tail(u, lambda j: (-1.0 / (2 * j), 2 * j))
    return ctx.scale * u * cmath.exp(s)


def weier_zeta(z, ctx: WeierstrassContext) -> complex:
    """zeta(z | Lambda) = 1/z + sum' [1/(z-w) + 1/w + z/w^2]."""
    u = complex(z) / ctx.scale
    ctx._check_pole(u)
    p = ctx._pts
    s = 1 / u + complex(np.sum(1 / (u - p) + 1 / p + u / p**2))
    s += ctx._tail(u, lambda j: (-1.0, 2 * j - 1))
    return s / ctx.scale


def wp(z, ctx: WeierstrassContext) -> complex:
    """wp(z | Lambda) = 1/z^2 + sum' [1/(z-w)^2 - 1/w^2]."""
    u = complex(z) / ctx.scale
    ctx._check_pole(u)
    p = ctx._pts
    s = 1 / u**2 + complex(np.sum(1 / (u - p) ** 2 - 1 / p**2))
    s += ctx._tail(u, lambda j: (2.0 * j - 1, 2 * j - 2))
    return s / ctx.scale**2


def wp_prime(z, ctx: WeierstrassContext) -> complex:
    """d wp/dz = -2 sum_w 1/(z-w)^3, origin included."""
    u = complex(z) / ctx.scale
    ctx._check_pole(u)
    s = -2 / u**3 - 2 * complex(np.sum(1 / (u - ctx._pts) ** 3))
    s += ctx._tail(u, lambda j: ((2.0 * j - 1) * (2 * j - 2), 2 * j - 3))
    return s / ctx.scale**3


def half_period_values(ctx: WeierstrassContext):
    """(e1, e2, e3) = wp at omega1, omega2, omega1 + omega2."""
    return ctx.e1, ctx.e2, ctx.e3


def _canonical(u: complex, tau: complex) -> complex:
    n = round(u.imag / tau.imag)
    u = u - n * tau
    return u - round(u.real)


def wp_zero(ctx: WeierstrassContext, a=0.0, max_iter: int = 100) -> complex:
    """A solution alpha of wp(alpha) = a; the other one is -alpha mod the lattice.

    When a equals one of e1, e2, e3 the double root is the corresponding
    half-period and is returned directly.  Otherwise it is seeded at the smallest |wp - a| on a 32x32 grid over the fundamental
    parallelogram and polished by Newton with the analytic wp'.  Of the
    two representatives (reduced to the centered cell) the one with
    argument in [0, pi) is returned.
    """
    a = complex(a)
    w1, w2 = ctx.lattice.omega1, ctx.lattice.omega2
    # a half-period value is a double root (wp' = 0 there), where Newton is slow
    for e, h in ((ctx.e1, w1), (ctx.e2, w2), (ctx.e3, w1 + w2)):
        if abs(e - a) <= 1e-10 * max(1.0, abs(a)):
            return h
    grid = (np.arange(32) + 0.5) / 32
    best, z = math.inf, None
    for s in grid:
        for t in grid:
            cand = 2 * s * w1 + 2 * t * w2
            val = abs(wp(cand, ctx) - a)
            if val < best:
                best, z = val, cand
    for _ in range(max_iter):
        step = (wp(z, ctx) - a) / wp_prime(z, ctx)
        z -= step
        if abs(step) < 1e-15 * max(1.0, abs(z)):
            break
    else:
        raise ConvergenceError("Newton iteration for wp(z) = a did not converge")
    u = _canonical(z / ctx.scale, ctx.tau)
    v = _canonical(-u, ctx.tau)
    pick = u if 0 <= cmath.phase(u) < math.pi else v
    return pick * ctx.scale
