"""Jacobi theta functions theta_1..theta_4 in the (z | tau) convention.

The nome used by the q-series is ``q = exp(i*pi*tau)``.  The triple
product evaluators use ``Q = exp(2*pi*i*tau)`` and ``x = exp(2*pi*i*z)``
internally; callers only ever pass ``tau`` and ``z``.
"""
from __future__ import annotations

import cmath
import enum
import math

from .errors import ConvergenceError
from .params import DEFAULT_POLICY, TruncationPolicy, check_tau

PI = math.pi


class ThetaKind(enum.IntEnum):
    T1 = 1
    T2 = 2
    T3 = 3
    T4 = 4


def _kind(kind) -> ThetaKind:
    return ThetaKind(int(kind))


class _Stopper:
    """Relative stopping rule with a three-consecutive-terms guard."""

    def __init__(self, policy: TruncationPolicy):
        self.tol = policy.series_tol
        self.peak = 0.0
        self.quiet = 0

    def done(self, bound: float, partial: complex) -> bool:
        self.peak = max(self.peak, bound)
        scale = max(abs(partial), self.peak)
        if bound < self.tol * scale or scale == 0.0:
            self.quiet += 1
        else:
            self.quiet = 0
        return self.quiet >= 3


def _series(kind: ThetaKind, order: int, z: complex, tau: complex,
            policy: TruncationPolicy) -> complex:
    """Term-wise differentiated q-series, no argument reduction."""
    growth = abs(z.imag)
    stop = _Stopper(policy)
    shift = order * PI / 2
    s = 0j
    if kind in (ThetaKind.T1, ThetaKind.T2):
        for n in range(policy.max_terms):
            c = 2 * n + 1
            a = cmath.exp(1j * PI * tau * (n + 0.5) ** 2)
            arg = c * z + shift
            if kind is ThetaKind.T1:
                term = (-1) ** n * cmath.sin(arg)
            else:
                term = cmath.cos(arg)
            s += 2 * a * c**order * term
            bound = 2 * abs(a) * c**order * math.exp(min(c * growth, 700.0))
            if stop.done(bound, s):
                return s
    else:
        s = 1.0 + 0j if order == 0 else 0j
        for n in range(1, policy.max_terms):
            c = 2 * n
            a = cmath.exp(1j * PI * tau * n * n)
            sign = (-1) ** n if kind is ThetaKind.T4 else 1
            s += 2 * sign * a * c**order * cmath.cos(c * z + shift)
            bound = 2 * abs(a) * c**order * math.exp(min(c * growth, 700.0))
            if stop.done(bound, s):
                return s
    raise ConvergenceError(f"theta_{int(kind)} series not converged after {policy.max_terms} terms")


def _reduce(kind: ThetaKind, z: complex, tau: complex):
    """Split z = z0 + (m + n*tau)*pi with |Im z0| <= pi*Im(tau)/2.

    Returns (z0, n, log_multiplier_constant, sign) such that
    theta(z) = sign * exp(const - 2i*n*z0) * theta(z0).
    """
    n = 0
    if abs(z.imag) > PI * tau.imag / 2:
        n = round(z.imag / (PI * tau.imag))
    z1 = z - n * PI * tau
    m = round(z1.real / PI)
    z0 = z1 - m * PI
    if kind is ThetaKind.T1:
        sign = (-1) ** ((m + n) % 2)
    elif kind is ThetaKind.T2:
        sign = (-1) ** (m % 2)
    elif kind is ThetaKind.T3:
        sign = 1
    else:
        sign = (-1) ** (n % 2)
    const = -1j * PI * tau * n * n
    return z0, n, const, sign


def theta(kind, z, tau, policy: TruncationPolicy = DEFAULT_POLICY, *, reduce: bool = True) -> complex:
    """Jacobi theta function theta_k(z | tau).

    Parameters
    ----------
    kind : ThetaKind or int in 1..4
    z : complex
    tau : complex, Im(tau) > 0
    reduce : bool
        Move z into the strip |Im z| <= pi*Im(tau)/2 with the
        quasi-periodicity multiplier before summing.  Disable only to
        check that multiplier against the raw series.
    """
    return theta_z_derivative(kind, 0, z, tau, policy, reduce=reduce)


def theta_z_derivative(kind, order: int, z, tau, policy: TruncationPolicy = DEFAULT_POLICY,
                       *, reduce: bool = True) -> complex:
    """d^order/dz^order theta_k(z | tau), order <= 8."""
    kind = _kind(kind)
    if not 0 <= order <= 8:
        raise ValueError("derivative order must be in 0..8")
    z = complex(z)
    tau = check_tau(tau)
    if not reduce:
        return _series(kind, order, z, tau, policy)
    z0, n, const, sign = _reduce(kind, z, tau)
    if n == 0:
        return sign * _series(kind, order, z0, tau, policy)
    # Leibniz rule on M(z) * theta(z0) with M'(z) = -2i*n*M(z).
    mult = sign * cmath.exp(const - 2j * n * z0)
    total = 0j
    for j in range(order + 1):
        total += math.comb(order, j) * (-2j * n) ** (order - j) * _series(kind, j, z0, tau, policy)
    return mult * total


def theta1_prime0_product(tau, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """theta_1'(0|tau) = 2 q^{1/4} prod_{j>=1} (1 - q^{2j})^3 with q = e^{i pi tau}."""
    tau = check_tau(tau)
    q2 = cmath.exp(2j * PI * tau)
    p = 1.0 + 0j
    qj = q2
    quiet = 0
    for _ in range(policy.max_terms):
        p *= (1 - qj) ** 3
        quiet = quiet + 1 if abs(qj) < policy.series_tol else 0
        if quiet >= 3:
            return 2 * cmath.exp(1j * PI * tau / 4) * p
        qj *= q2
    raise ConvergenceError("theta_1'(0) product not converged")


def _pochhammer_factors(z: complex, tau: complex, policy: TruncationPolicy, kind: int) -> complex:
    Q = cmath.exp(2j * PI * tau)
    x = cmath.exp(2j * PI * z)
    spread = max(abs(x), 1 / abs(x)) if x != 0 else math.inf
    p = 1.0 + 0j
    quiet = 0
    if kind == 1:
        # (x;Q)(Q/x;Q)(Q;Q)
        Qj = 1.0 + 0j
        for j in range(policy.max_terms):
            Qj1 = Qj * Q
            p *= (1 - x * Qj) * (1 - Qj1 / x) * (1 - Qj1)
            quiet = quiet + 1 if abs(Qj1) * spread < policy.series_tol else 0
            if quiet >= 3:
                return p
            Qj = Qj1
    else:
        half = cmath.exp(1j * PI * tau)  # Q^{1/2}
        Qn = Q
        for n in range(1, policy.max_terms):
            Qh = Qn / half  # Q^{n - 1/2}
            p *= (1 - Qn) * (1 + Qh * x) * (1 + Qh / x)
            quiet = quiet + 1 if abs(Qh) * spread < policy.series_tol else 0
            if quiet >= 3:
                return p
            Qn *= Q
    raise ConvergenceError("q-Pochhammer product not converged")


def triple_product_theta1(z, tau, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """theta_1(pi z | tau) via i e^{pi i (tau/4 - z)} (x;Q)(Q/x;Q)(Q;Q).

    Here Q = e^{2 pi i tau}, not the series nome e^{i pi tau}.
    """
    z = complex(z)
    tau = check_tau(tau)
    pre = 1j * cmath.exp(1j * PI * (tau / 4 - z))
    return pre * _pochhammer_factors(z, tau, policy, 1)


def triple_product_theta3(z, tau, policy: TruncationPolicy = DEFAULT_POLICY) -> complex:
    """theta_3(pi z | tau) via prod (1 - Q^n)(1 + Q^{n-1/2} x)(1 + Q^{n-1/2}/x), Q = e^{2 pi i tau}."""
    z = complex(z)
    tau = check_tau(tau)
    return _pochhammer_factors(z, tau, policy, 3)


def theta_constants(tau, policy: TruncationPolicy = DEFAULT_POLICY):
    """(theta_2(0), theta_3(0), theta_4(0), theta_1'(0)) at tau."""
    return (theta(2, 0, tau, policy), theta(3, 0, tau, policy), theta(4, 0, tau, policy),
            theta_z_derivative(1, 1, 0, tau, policy))
