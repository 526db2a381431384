"""Catalog of identities as executable cases, plus the runner.

Each :class:`IdentityCase` pairs two evaluator factories.  A factory
takes a parameter binding (a dict that always holds ``tau`` and
``policy`` and whatever else the case's grid supplies) and returns a
function of ``z``.  Cases marked ``scalar`` compare constants and are
evaluated once per binding.

Sample points come from a deterministic Kronecker (R2) sequence over the
case's box; points closer than ``exclusion_radius`` to a zero or pole
listed by the case are skipped.
"""
from __future__ import annotations

import cmath
import math
import time
import traceback
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Mapping, Optional, Sequence

from . import gammatrig as gt
from .eisenstein import (delta2_from_theta, delta_from_recursion, half_shift_sum,
                         lattice_sum_delta, swapped_order_delta2)
from .lemma_engine import FunctionHandle, differentiate, fit_log_polynomial
from .params import DEFAULT_POLICY, TruncationPolicy
from .theta import (theta, theta1_prime0_product, theta_z_derivative, triple_product_theta1,
                    triple_product_theta3)
from .weierstrass import WeierstrassContext, sigma, weier_zeta, wp, wp_prime, wp_zero

PI = math.pi
DEFAULT_TAUS = (1j, 1.2j, 2j, 0.3 + 1.1j, -0.4 + 0.9j)
ABS_FLOOR = 1e-300

Binding = Mapping[str, Any]
Factory = Callable[[Binding], Callable[[complex], complex]]


# ----------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class SampleSpec:
    """Where to sample z and which points to keep away from.

    ``singular(binding)`` returns a function giving the distance from z
    to the nearest excluded point (zero or pole of either side).
    """

    count: int = 10
    lower_left: complex = -0.45 - 0.35j
    upper_right: complex = 0.45 + 0.35j
    singular: Optional[Callable[[Binding], Callable[[complex], float]]] = None
    exclusion_radius: float = 0.05
    scalar: bool = False
    scale_by_omega: bool = False


SCALAR = SampleSpec(count=1, scalar=True)


@dataclass(frozen=True)
class IdentityCase:
    id: str
    citation: str
    lhs: Factory
    rhs: Factory
    param_grid: tuple = ({},)
    sample_spec: SampleSpec = SampleSpec()
    tolerance: float = 1e-10
    erratum_note: Optional[str] = None
    uses_tau: bool = True
    tau_override: Optional[tuple] = None
    floor: float = ABS_FLOOR

    def __post_init__(self):
        if not self.id:
            raise ValueError("case id must be non-empty")
        if not self.citation:
            raise ValueError(f"case {self.id} needs a citation")
        if not self.param_grid:
            raise ValueError(f"case {self.id} has an empty parameter grid")
        if not 1e-12 <= self.tolerance <= 1e-6:
            raise ValueError(f"case {self.id}: tolerance {self.tolerance} outside [1e-12, 1e-6]")


@dataclass
class BindingResult:
    params: dict
    max_rel_err: float
    worst_point: complex
    error: Optional[str] = None


@dataclass
class CaseResult:
    case_id: str
    citation: str
    max_rel_err: float
    worst_point: complex
    passed: bool
    wall_time: float
    tolerance: float
    bindings: list = field(default_factory=list)
    error: Optional[str] = None
    erratum_note: Optional[str] = None


@dataclass(frozen=True)
class SuiteConfig:
    taus: tuple = DEFAULT_TAUS
    tolerance: Optional[float] = None
    policy: TruncationPolicy = DEFAULT_POLICY
    workers: int = 1

    def echo(self) -> dict:
        return {
            "taus": [[t.real, t.imag] for t in map(complex, self.taus)],
            "tolerance_override": self.tolerance,
            "lattice_radius": self.policy.lattice_radius,
            "series_tol": self.policy.series_tol,
            "max_terms": self.policy.max_terms,
        }


@dataclass
class VerificationReport:
    suite: str
    config: dict
    results: list

    @property
    def summary(self) -> dict:
        passed = sum(1 for r in self.results if r.passed)
        return {"total": len(self.results), "passed": passed, "failed": len(self.results) - passed}


# ----------------------------------------------------------------------------
# shared helpers


@lru_cache(maxsize=64)
def weierstrass_context(tau: complex, omega1: complex = 0.5,
                        policy: TruncationPolicy = DEFAULT_POLICY) -> WeierstrassContext:
    return WeierstrassContext.from_tau(tau, omega1, policy)


@lru_cache(maxsize=256)
def _wp_root(tau: complex, a: complex, policy: TruncationPolicy) -> complex:
    return wp_zero(weierstrass_context(tau, 0.5, policy), a)


def _ctx(b: Binding, tau=None) -> WeierstrassContext:
    return weierstrass_context(complex(tau if tau is not None else b["tau"]),
                               complex(b.get("omega1", 0.5)), b["policy"])


def lattice_distance(z: complex, p1: complex, p2: complex, offsets=(0j,)) -> float:
    """Distance from z to the nearest point of {m*p1 + n*p2 + offset}."""
    best = math.inf
    tau = p2 / p1
    for off in offsets:
        u = (z - off) / p1
        n0 = round(u.imag / tau.imag)
        m0 = round((u - n0 * tau).real)
        for dn in (-1, 0, 1):
            for dm in (-2, -1, 0, 1, 2):
                best = min(best, abs(z - off - (m0 + dm) * p1 - (n0 + dn) * p2))
    return best


def _theta_lattice(offsets=(0j,), scale=PI, multiple: int = 1):
    """Singular set {scale*(m + n*tau) + offsets} / multiple for theta cases."""
    def build(b):
        tau = complex(b["tau"])
        n = multiple(b) if callable(multiple) else multiple
        offs = [complex(o(b) if callable(o) else o) for o in offsets]
        return lambda z: lattice_distance(z * n, scale, scale * tau, [o * scale for o in offs])
    return build


def _weier_lattice(offsets=(0j,), multiple=1):
    def build(b):
        tau = complex(b["tau"])
        w = 2 * complex(b.get("omega1", 0.5))
        n = multiple(b) if callable(multiple) else multiple
        return lambda z: lattice_distance(z * n, w, w * tau, [o * w for o in offsets])
    return build


def _real_poles(spacing: Callable[[Binding], float], offset: float = 0.0):
    def build(b):
        s = spacing(b)
        return lambda z: math.hypot((z.real - offset) - s * round((z.real - offset) / s), z.imag)
    return build


def _gamma_poles(shift: float = 0.0):
    def dist(z):
        w = z + shift
        if w.real > 0.5:
            return abs(w.imag) + max(w.real, 0.0)
        return abs(w - round(w.real))
    return lambda b: dist


def _union(*builders):
    def build(b):
        fns = [bl(b) for bl in builders]
        return lambda z: min(f(z) for f in fns)
    return build


def T(k: int, z, b: Binding, tau=None) -> complex:
    return theta(k, z, b["tau"] if tau is None else tau, b["policy"])


def T1p(b: Binding, tau=None) -> complex:
    return theta_z_derivative(1, 1, 0, b["tau"] if tau is None else tau, b["policy"])


def _const(fn):
    """Lift a binding -> value function into a z-independent evaluator factory."""
    return lambda b: (lambda z, _v=None: fn(b))


def _prod(values) -> complex:
    out = 1.0 + 0j
    for v in values:
        out *= v
    return out


# ----------------------------------------------------------------------------
# gamma / digamma / trig cases


def _gamma_cases():
    g, psi, psi1 = gt.gamma_fn, gt.digamma, gt.trigamma
    right_box = dict(lower_left=0.15 - 0.9j, upper_right=2.4 + 0.9j)
    yield IdentityCase(
        "EQ3", "Gamma(z)Gamma(z+1/2) = 2^(1-2z) sqrt(pi) Gamma(2z)",
        lambda b: lambda z: g(z) * g(z + 0.5),
        lambda b: lambda z: 2 ** (1 - 2 * z) * math.sqrt(PI) * g(2 * z),
        sample_spec=SampleSpec(**right_box), tolerance=1e-10, uses_tau=False)
    yield IdentityCase(
        "EQ4", "Gamma(1-z)Gamma(z) = pi/sin(pi z)",
        lambda b: lambda z: g(1 - z) * g(z),
        lambda b: lambda z: PI / cmath.sin(PI * z),
        sample_spec=SampleSpec(lower_left=-1.8 - 0.8j, upper_right=1.8 + 0.8j,
                               singular=_real_poles(lambda b: 1.0), exclusion_radius=0.05),
        tolerance=1e-10, uses_tau=False)
    yield IdentityCase(
        "EQ5", "prod_k Gamma(z+k/n) = (2pi)^((n-1)/2) n^(1/2) exp(-n z ln n) Gamma(nz)",
        lambda b: lambda z: _prod(g(z + k / b["n"]) for k in range(b["n"])),
        lambda b: lambda z: ((2 * PI) ** ((b["n"] - 1) / 2) * math.sqrt(b["n"])
                             * cmath.exp(-b["n"] * z * math.log(b["n"])) * g(b["n"] * z)),
        param_grid=tuple({"n": n} for n in (2, 3, 4, 5)),
        sample_spec=SampleSpec(**right_box), tolerance=1e-10, uses_tau=False)
    yield IdentityCase(
        "PSI_NTUPLE", "sum_k psi(z+k/n) = n psi(nz) - n ln n",
        lambda b: lambda z: sum(psi(z + k / b["n"]) for k in range(b["n"])),
        lambda b: lambda z: b["n"] * psi(b["n"] * z) - b["n"] * math.log(b["n"]),
        param_grid=tuple({"n": n} for n in (2, 3, 5)),
        sample_spec=SampleSpec(**right_box), tolerance=1e-10, uses_tau=False)
    yield IdentityCase(
        "PSI1_NTUPLE", "sum_k psi'(z+k/n) = n^2 psi'(nz)",
        lambda b: lambda z: sum(psi1(z + k / b["n"]) for k in range(b["n"])),
        lambda b: lambda z: b["n"] ** 2 * psi1(b["n"] * z),
        param_grid=tuple({"n": n} for n in (2, 3, 5)),
        sample_spec=SampleSpec(**right_box), tolerance=1e-10, uses_tau=False)
    yield IdentityCase(
        "GAUSS_PSI", "sum_{k=1}^{n} psi(k/n) = -n(gamma + ln n)",
        _const(lambda b: sum(psi(k / b["n"]) for k in range(1, b["n"] + 1))),
        _const(lambda b: -b["n"] * (gt.EULER_GAMMA + math.log(b["n"]))),
        param_grid=({"n": 3}, {"n": 5}), sample_spec=SCALAR, tolerance=1e-11, uses_tau=False)
    yield IdentityCase(
        "TRIGAMMA_DUP", "psi'(z) + psi'(z+1/2) = 4 psi'(2z)",
        lambda b: lambda z: psi1(z) + psi1(z + 0.5),
        lambda b: lambda z: 4 * psi1(2 * z),
        sample_spec=SampleSpec(**right_box), tolerance=1e-10, uses_tau=False)
    yield IdentityCase(
        "TRIGAMMA_REFLECTION", "psi'(1-z) + psi'(z) = pi^2/sin^2(pi z)",
        lambda b: lambda z: psi1(1 - z) + psi1(z),
        lambda b: lambda z: PI**2 / cmath.sin(PI * z) ** 2,
        sample_spec=SampleSpec(lower_left=-1.8 - 0.8j, upper_right=1.8 + 0.8j,
                               singular=_real_poles(lambda b: 1.0), exclusion_radius=0.05),
        tolerance=1e-10, uses_tau=False,
        erratum_note="printed right-hand side -pi^2/cos(pi z); differentiating the reflection "
                     "formula gives pi^2/sin^2(pi z), which is what is checked")


def _trig_cases():
    ns = tuple({"n": n} for n in (2, 3, 4, 6))

    def shifts(b, z):
        return [z + k * PI / b["n"] for k in range(b["n"])]

    spec = SampleSpec(lower_left=-1.4 - 0.6j, upper_right=1.4 + 0.6j,
                      singular=_real_poles(lambda b: PI / b["n"]), exclusion_radius=0.05)
    yield IdentityCase(
        "EQ6", "sum_k 1/sin^2(z + pi k/n) = n^2/sin^2(nz)",
        lambda b: lambda z: sum(1 / cmath.sin(w) ** 2 for w in shifts(b, z)),
        lambda b: lambda z: b["n"] ** 2 / cmath.sin(b["n"] * z) ** 2,
        param_grid=ns, sample_spec=spec, uses_tau=False)
    yield IdentityCase(
        "EQ7", "sum_k cot(z + pi k/n) = n cot(nz)",
        lambda b: lambda z: sum(1 / cmath.tan(w) for w in shifts(b, z)),
        lambda b: lambda z: b["n"] / cmath.tan(b["n"] * z),
        param_grid=ns, sample_spec=spec, uses_tau=False,
        erratum_note="printed without the factor n on the right; integrating the sum of "
                     "1/sin^2 with a vanishing constant gives n cot(nz)")
    yield IdentityCase(
        "EQ8", "prod_k sin(z + k pi/n) = C1(n) sin(nz), C1(n) = prod_{k>=1} sin(k pi/n)/n",
        lambda b: lambda z: _prod(cmath.sin(w) for w in shifts(b, z)),
        lambda b: lambda z: (_prod(math.sin(k * PI / b["n"]) for k in range(1, b["n"])) / b["n"]
                             * cmath.sin(b["n"] * z)),
        param_grid=ns, sample_spec=spec, uses_tau=False)
    yield IdentityCase(
        "EQ9", "prod_k sin(z + k pi/n) = 2^(1-n) sin(nz)",
        lambda b: lambda z: _prod(cmath.sin(w) for w in shifts(b, z)),
        lambda b: lambda z: 2.0 ** (1 - b["n"]) * cmath.sin(b["n"] * z),
        param_grid=ns, sample_spec=spec, uses_tau=False)
    yield IdentityCase(
        "EQ10", "prod_k sin^2(z + k pi/n) = n^2 2^(2-2n) / sum_k sin^-2(z + k pi/n)",
        lambda b: lambda z: _prod(cmath.sin(w) ** 2 for w in shifts(b, z)),
        lambda b: lambda z: (b["n"] ** 2 * 2.0 ** (2 - 2 * b["n"])
                             / sum(cmath.sin(w) ** -2 for w in shifts(b, z))),
        param_grid=ns, sample_spec=spec, uses_tau=False)
    yield IdentityCase(
        "EULER_SIN", "prod_{k=1}^{n-1} sin(k pi/n) = n/2^(n-1)",
        _const(lambda b: _prod(math.sin(k * PI / b["n"]) for k in range(1, b["n"]))),
        _const(lambda b: b["n"] / 2.0 ** (b["n"] - 1)),
        param_grid=ns, sample_spec=SCALAR, tolerance=1e-12, uses_tau=False)
    yield IdentityCase(
        "REMARK2_TRIG", "pi^2/sin^2(pi z) - 4pi^2/3 = -4pi^2/(3 sin^2(pi z)) sin(pi z - pi/3) sin(pi z + pi/3)",
        lambda b: lambda z: PI**2 / cmath.sin(PI * z) ** 2 - 4 * PI**2 / 3,
        lambda b: lambda z: (-4 * PI**2 / (3 * cmath.sin(PI * z) ** 2)
                             * cmath.sin(PI * z - PI / 3) * cmath.sin(PI * z + PI / 3)),
        sample_spec=SampleSpec(lower_left=-0.9 - 0.6j, upper_right=0.9 + 0.6j,
                               singular=_union(_real_poles(lambda b: 1.0),
                                               _real_poles(lambda b: 1.0, 1 / 3),
                                               _real_poles(lambda b: 1.0, -1 / 3))),
        uses_tau=False)


# ----------------------------------------------------------------------------
# theta and Eisenstein cases


def _theta_cases():
    box = SampleSpec(lower_left=-1.2 - 0.5j, upper_right=1.2 + 0.5j)
    zeros1 = _theta_lattice()

    def eq12_lhs(b):
        m, n = b["m"], b["n"]
        return lambda z: theta(1, z + (m + n * b["tau"]) * PI, b["tau"], b["policy"], reduce=False)

    def eq12_rhs(b):
        m, n, tau = b["m"], b["n"], complex(b["tau"])
        return lambda z: ((-1) ** ((m + n) % 2) * cmath.exp(-1j * PI * tau * n * n)
                          * cmath.exp(-2j * n * z) * T(1, z, b))

    yield IdentityCase(
        "EQ12", "theta1(z + (m + n tau)pi | tau) = (-1)^(m+n) q^(-n^2) exp(-2inz) theta1(z | tau)",
        eq12_lhs, eq12_rhs,
        param_grid=tuple({"m": m, "n": n} for m, n in ((1, 0), (0, 1), (1, 1), (-1, 2))),
        sample_spec=SampleSpec(lower_left=-1.2 - 0.5j, upper_right=1.2 + 0.5j,
                               singular=zeros1, exclusion_radius=0.05),
        tolerance=1e-10)
    yield IdentityCase(
        "EQ14", "ln[theta1(pi z | tau)/(pi z theta1'(0 | tau))] = -sum_j delta_2j z^(2j)/(2j)",
        lambda b: lambda z: T(1, PI * z, b) / (PI * z * T1p(b)),
        lambda b: lambda z: cmath.exp(-sum(lattice_sum_delta(j, b["tau"], b["policy"]) * z ** (2 * j) / (2 * j)
                                           for j in range(1, 41))),
        sample_spec=SampleSpec(lower_left=-0.25 - 0.25j, upper_right=0.25 + 0.25j,
                               singular=lambda b: abs, exclusion_radius=0.05),
        tolerance=1e-10)
    yield IdentityCase(
        "EQ15", "delta_2 = -pi^2 theta1'''(0 | tau) / (3 theta1'(0 | tau))",
        _const(lambda b: lattice_sum_delta(1, b["tau"], b["policy"])),
        _const(lambda b: delta2_from_theta(b["tau"], b["policy"])),
        sample_spec=SCALAR, tolerance=1e-10)
    yield IdentityCase(
        "EQ21", "theta1'(0, q) = 2 q^(1/4) prod_j (1 - q^(2j))^3",
        _const(lambda b: T1p(b)),
        _const(lambda b: theta1_prime0_product(b["tau"], b["policy"])),
        sample_spec=SCALAR, tolerance=1e-10)
    yield IdentityCase(
        "EQ24", "theta1'(0, q) = theta2(0, q) theta3(0, q) theta4(0, q)",
        _const(lambda b: T1p(b)),
        _const(lambda b: T(2, 0, b) * T(3, 0, b) * T(4, 0, b)),
        sample_spec=SCALAR, tolerance=1e-10)
    yield IdentityCase(
        "EQ40", "theta1(z + pi tau/2 | tau) = i exp(-iz) exp(-i pi tau/4) theta4(z | tau)",
        lambda b: lambda z: T(1, z + PI * b["tau"] / 2, b),
        lambda b: lambda z: 1j * cmath.exp(-1j * z) * cmath.exp(-1j * PI * b["tau"] / 4) * T(4, z, b),
        sample_spec=SampleSpec(lower_left=-1.2 - 0.5j, upper_right=1.2 + 0.5j,
                               singular=_theta_lattice(offsets=(lambda b: b["tau"] / 2,))),
        tolerance=1e-10,
        erratum_note="printed with prefactor -i; the series definitions give +i "
                     "(the sign does not affect the exponential-factor argument where it is used)")
    yield IdentityCase(
        "EQ45", "theta1(z | 1 + tau) = i^(1/2) theta1(z | tau)",
        lambda b: lambda z: T(1, z, b, tau=b["tau"] + 1),
        lambda b: lambda z: cmath.exp(1j * PI / 4) * T(1, z, b),
        sample_spec=SampleSpec(lower_left=-1.2 - 0.5j, upper_right=1.2 + 0.5j, singular=zeros1),
        tolerance=1e-9, erratum_note="i^(1/2) taken as the principal value exp(i pi/4)")

    def eq45_const(b):
        f = FunctionHandle(lambda z: T(1, z, b, tau=b["tau"] + 1))
        g = FunctionHandle(lambda z: T(1, z, b))
        path = [0.6 + 0.25j + 0.3 * cmath.exp(2j * PI * k / 48) for k in range(48)]
        (c0,), residual = fit_log_polynomial(f, g, None, 0, len(path), path=path)
        if residual > 1e-9:
            raise ValueError(f"theta1(z|tau+1)/theta1(z|tau) not constant: residual {residual:.3g}")
        return cmath.exp(c0)

    yield IdentityCase(
        "EQ45_CONST", "theta1(z | 1 + tau) = i^(1/2) theta1(z | tau)",
        _const(eq45_const), _const(lambda b: cmath.exp(1j * PI / 4)),
        sample_spec=SCALAR, tolerance=1e-9,
        erratum_note="fits log(theta1(z|tau+1)/theta1(z|tau)) by a constant along a closed path")

    def eq46_rhs(b):
        tau = complex(b["tau"])
        pre = -1j * cmath.sqrt(-1j * tau)
        return lambda z: pre * cmath.exp(1j * tau * z * z / PI) * T(1, tau * z, b)

    yield IdentityCase(
        "EQ46", "theta1(z | -1/tau) = -i(-i tau)^(1/2) exp(i tau z^2/pi) theta1(tau z | tau)",
        lambda b: lambda z: T(1, z, b, tau=-1 / complex(b["tau"])),
        eq46_rhs,
        sample_spec=SampleSpec(lower_left=-0.8 - 0.4j, upper_right=0.8 + 0.4j,
                               singular=lambda b: (lambda z: lattice_distance(z, PI, -PI / complex(b["tau"])))),
        tolerance=1e-9, erratum_note="(-i tau)^(1/2) is the principal square root")
    yield IdentityCase(
        "EQ47", "theta1(pi z | tau) = i exp(pi i (tau/4 - z)) (x;q)(q/x;q)(q;q)",
        lambda b: lambda z: T(1, PI * z, b),
        lambda b: lambda z: triple_product_theta1(z, b["tau"], b["policy"]),
        sample_spec=SampleSpec(lower_left=-0.45 - 0.3j, upper_right=0.45 + 0.3j,
                               singular=_theta_lattice(scale=1.0)),
        tolerance=1e-10)
    yield IdentityCase(
        "EQ48", "theta3(pi z, q) = prod_n (1 - q^n)(1 + q^(n-1/2) x)(1 + q^(n-1/2)/x)",
        lambda b: lambda z: T(3, PI * z, b),
        lambda b: lambda z: triple_product_theta3(z, b["tau"], b["policy"]),
        sample_spec=SampleSpec(lower_left=-0.45 - 0.3j, upper_right=0.45 + 0.3j,
                               singular=_theta_lattice(scale=1.0, offsets=(lambda b: 0.5 + b["tau"] / 2,))),
        tolerance=1e-10)

    def landen_lhs(b):
        k = b["form"]
        return lambda z: T(1, k * z, b, tau=k * b["tau"])

    def landen_rhs(b):
        if b["form"] == 2:
            c = 1 / T(4, 0, b, tau=2 * b["tau"])
            return lambda z: c * T(1, z, b) * T(2, z, b)
        c = 1 / (T(3, 0, b) * T(4, 0, b) * T(3, PI / 4, b))
        return lambda z: c * T(1, z, b) * T(1, PI / 4 - z, b) * T(1, PI / 4 + z, b) * T(2, z, b)

    yield IdentityCase(
        "REMARK3_LANDEN", "theta1(4z|4tau) = theta1(z)theta1(pi/4-z)theta1(pi/4+z)theta2(z)/(theta3(0)theta4(0)theta3(pi/4)); "
                          "theta1(2z|2tau) = theta1(z)theta2(z)/theta4(0|2tau)",
        landen_lhs, landen_rhs, param_grid=({"form": 2}, {"form": 4}),
        sample_spec=SampleSpec(lower_left=-0.6 - 0.4j, upper_right=0.6 + 0.4j,
                               singular=_theta_lattice(multiple=lambda b: b["form"])),
        tolerance=1e-10)


def _eisenstein_cases():
    yield IdentityCase(
        "DELTA2_TRIPLE", "3 delta_2 = alpha_2 + beta_2 + gamma_2",
        _const(lambda b: 3 * lattice_sum_delta(1, b["tau"], b["policy"])),
        _const(lambda b: sum(half_shift_sum(k, 1, b["tau"], b["policy"]) for k in ("alpha", "beta", "gamma"))),
        sample_spec=SCALAR, tolerance=1e-9)

    def recursion(b):
        p = b["policy"]
        vals = delta_from_recursion(b["j"], lattice_sum_delta(2, b["tau"], p), lattice_sum_delta(3, b["tau"], p))
        return vals[-1]

    yield IdentityCase(
        "EQ23", "sum_k C(n,k) d_k d_(n-k) = (2n+9)/(3n+6) d_(n+2), d_k = (2k+3) k! delta_(2k+4)",
        _const(recursion), _const(lambda b: lattice_sum_delta(b["j"], b["tau"], b["policy"])),
        param_grid=tuple({"j": j} for j in (4, 5, 6)), sample_spec=SCALAR, tolerance=1e-8, floor=1.0,
        erratum_note="compared with an absolute floor of 1 because delta_10 vanishes on the square lattice")
    yield IdentityCase(
        "EQ44_ORDER", "delta_2(-1/tau) = tau^2 sum_n sum_m' 1/(m tau + n)^2",
        _const(lambda b: lattice_sum_delta(1, -1 / complex(b["tau"]), b["policy"])),
        _const(lambda b: complex(b["tau"]) ** 2 * swapped_order_delta2(b["tau"], b["policy"])),
        sample_spec=SCALAR, tolerance=1e-8)
    yield IdentityCase(
        "EISENSTEIN_SWAP", "sum_m sum_n' 1/(m + n tau)^2 = delta_2(tau) - 2 pi i/tau",
        _const(lambda b: swapped_order_delta2(b["tau"], b["policy"])),
        _const(lambda b: lattice_sum_delta(1, b["tau"], b["policy"]) - 2j * PI / complex(b["tau"])),
        sample_spec=SCALAR, tolerance=1e-8)


# ----------------------------------------------------------------------------
# Weierstrass cases


def _weierstrass_cases():
    box = SampleSpec(lower_left=-0.42 - 0.3j, upper_right=0.42 + 0.3j, singular=_weier_lattice())
    origin_box = SampleSpec(lower_left=-0.42 - 0.3j, upper_right=0.42 + 0.3j,
                            singular=_weier_lattice(), exclusion_radius=0.05)

    def eq19_rhs(b):
        ctx = _ctx(b)
        c = 1 / (PI * T1p(b))
        return lambda z: cmath.exp(z * z * ctx.delta2 / 2) * T(1, PI * z, b) * c

    yield IdentityCase(
        "EQ19", "sigma(z, tau) = exp(z^2 delta_2(tau)/2) theta1(pi z | tau)/(pi theta1'(0 | tau))",
        lambda b: (lambda ctx: lambda z: sigma(z, ctx))(_ctx(b)), eq19_rhs,
        sample_spec=box, tolerance=1e-8)

    def eq20_rhs(b):
        w1 = complex(b["omega1"])
        tau = complex(b["tau"])
        t1p = T1p(b)
        eta1 = -PI**2 / (12 * w1) * theta_z_derivative(1, 3, 0, tau, b["policy"]) / t1p
        return lambda z: (2 * w1 * cmath.exp(eta1 * z * z / (2 * w1))
                          * T(1, PI * z / (2 * w1), b) / (PI * t1p))

    yield IdentityCase(
        "EQ20", "sigma(z | Lambda) = 2 omega1 exp(eta1 z^2/(2 omega1)) theta1(pi z/(2 omega1), q)/(pi theta1'(0, q))",
        lambda b: (lambda ctx: lambda z: sigma(z, ctx))(_ctx(b)), eq20_rhs,
        param_grid=tuple({"omega1": w} for w in (0.5, 1.0, 0.7 * cmath.exp(0.2j))),
        sample_spec=SampleSpec(lower_left=-0.42 - 0.3j, upper_right=0.42 + 0.3j,
                               singular=_weier_lattice(), scale_by_omega=True),
        tolerance=1e-8)

    def eq22_lhs(b):
        ctx = _ctx(b)
        return lambda z: differentiate(lambda w: wp_prime(w, ctx), z, 1, 1e-3)

    def eq22_rhs(b):
        ctx = _ctx(b)
        return lambda z: 6 * wp(z, ctx) ** 2 - 30 * ctx.delta4

    yield IdentityCase(
        "EQ22", "d^2 wp/dz^2 = 6 wp^2 - 30 delta_4", eq22_lhs, eq22_rhs,
        sample_spec=SampleSpec(lower_left=-0.42 - 0.3j, upper_right=0.42 + 0.3j,
                               singular=_weier_lattice(), exclusion_radius=0.15),
        tolerance=1e-8)

    def laurent(kind):
        def build(b):
            ctx = _ctx(b)
            d = [0j, 0j] + [lattice_sum_delta(k, b["tau"], b["policy"]) for k in range(2, 41)]
            if kind == "zeta":
                return lambda z: 1 / z - sum(d[k] * z ** (2 * k - 1) for k in range(2, 41))
            return lambda z: 1 / z**2 + sum((2 * k - 1) * d[k] * z ** (2 * k - 2) for k in range(2, 41))
        return build

    small = SampleSpec(lower_left=-0.25 - 0.25j, upper_right=0.25 + 0.25j,
                       singular=lambda b: abs, exclusion_radius=0.05)
    yield IdentityCase(
        "EQ17", "zeta(z, tau) = 1/z - sum_k delta_2k(tau) z^(2k-1)",
        lambda b: (lambda ctx: lambda z: weier_zeta(z, ctx))(_ctx(b)), laurent("zeta"),
        sample_spec=small, tolerance=1e-10)
    yield IdentityCase(
        "EQ18", "wp(z, tau) = 1/z^2 + sum_k (2k-1) delta_2k(tau) z^(2k-2)",
        lambda b: (lambda ctx: lambda z: wp(z, ctx))(_ctx(b)), laurent("wp"),
        sample_spec=small, tolerance=1e-10)

    def eq25_lhs(b):
        ctx = _ctx(b)
        return lambda z: wp(z, ctx) - ctx.e1

    def eq25_rhs(b):
        w1 = complex(b["omega1"])
        c = (PI * T(3, 0, b) * T(4, 0, b) / (2 * w1)) ** 2
        return lambda z: c * T(2, PI * z / (2 * w1), b) ** 2 / T(1, PI * z / (2 * w1), b) ** 2

    yield IdentityCase(
        "EQ25", "wp(z | Lambda) - e1 = (pi theta3(0, q) theta4(0, q)/(2 omega1))^2 theta2^2(pi z/(2 omega1), q)/theta1^2(pi z/(2 omega1), q)",
        eq25_lhs, eq25_rhs, param_grid=({"omega1": 0.5}, {"omega1": 1.0}),
        sample_spec=SampleSpec(lower_left=-0.42 - 0.3j, upper_right=0.42 + 0.3j,
                               singular=_weier_lattice(offsets=(0j, 0.5)), scale_by_omega=True),
        tolerance=1e-8)

    def thm2_parts(b):
        tau = complex(b["tau"])
        a = complex(b["a"])
        alpha1 = _wp_root(tau, a, b["policy"])
        alpha2 = -alpha1
        return a, alpha1, alpha2

    def thm2_lhs(b):
        ctx = _ctx(b)
        a = complex(b["a"])
        return lambda z: wp(z, ctx) - a

    def thm2_rhs(b):
        a, a1, a2 = thm2_parts(b)
        c = PI**2 * T1p(b) ** 2 / (T(1, PI * a1, b) * T(1, PI * a2, b))
        return lambda z: c * T(1, PI * z - PI * a1, b) * T(1, PI * z - PI * a2, b) / T(1, PI * z, b) ** 2

    def thm2_sing(b):
        _, a1, a2 = thm2_parts(b)
        tau = complex(b["tau"])
        return lambda z: lattice_distance(z, 1.0, tau, (0j, a1, a2))

    yield IdentityCase(
        "THM2", "wp(z | Lambda) - a = C theta1(pi z/(2 omega1) - pi alpha1/(2 omega1), q) "
                "theta1(pi z/(2 omega1) - pi alpha2/(2 omega1), q)/theta1^2(pi z/(2 omega1), q), "
                "C = pi^2/(4 omega1^2) theta1'^2(0, q)/(theta1(pi alpha1/(2 omega1), q) theta1(pi alpha2/(2 omega1), q))",
        thm2_lhs, thm2_rhs, param_grid=tuple({"a": a} for a in (0.0, 2 + 1j, -1.5)),
        sample_spec=SampleSpec(lower_left=-0.42 - 0.3j, upper_right=0.42 + 0.3j, singular=thm2_sing),
        tolerance=1e-7)

    def cor1_rhs(b):
        a1 = _wp_root(complex(b["tau"]), 0j, b["policy"])
        c = -PI**2 * T1p(b) ** 2 / T(1, PI * a1, b) ** 2
        return lambda z: c * T(1, PI * z - PI * a1, b) * T(1, PI * z + PI * a1, b) / T(1, PI * z, b) ** 2

    def cor1_sing(b):
        a1 = _wp_root(complex(b["tau"]), 0j, b["policy"])
        return lambda z: lattice_distance(z, 1.0, complex(b["tau"]), (0j, a1, -a1))

    yield IdentityCase(
        "COR1", "wp(z | Lambda) = -pi^2 theta1'^2(0, q)/theta1^2(pi alpha1, q) theta1(pi z - pi alpha1, q) theta1(pi z + pi alpha1, q)/theta1^2(pi z, q)",
        lambda b: (lambda ctx: lambda z: wp(z, ctx))(_ctx(b)), cor1_rhs,
        sample_spec=SampleSpec(lower_left=-0.42 - 0.3j, upper_right=0.42 + 0.3j, singular=cor1_sing),
        tolerance=1e-7)
    yield IdentityCase(
        "REMARK2_LIMIT", "wp(z) = pi^2/sin^2(pi z) - pi^2/3",
        lambda b: (lambda ctx: lambda z: wp(z, ctx))(_ctx(b)),
        lambda b: lambda z: PI**2 / cmath.sin(PI * z) ** 2 - PI**2 / 3,
        param_grid=({},), tau_override=(8j,),
        sample_spec=SampleSpec(lower_left=-0.45 - 0.4j, upper_right=0.45 + 0.4j, singular=_weier_lattice()),
        tolerance=1e-6)

    def eq29_rhs(b):
        ctx = _ctx(b)
        return lambda z: -wp_prime(z, ctx) * sigma(z, ctx) ** 4

    yield IdentityCase(
        "EQ29", "sigma(2z, tau) = -wp_z(z, tau) sigma^4(z, tau)",
        lambda b: (lambda ctx: lambda z: sigma(2 * z, ctx))(_ctx(b)), eq29_rhs,
        sample_spec=SampleSpec(lower_left=-0.42 - 0.3j, upper_right=0.42 + 0.3j,
                               singular=_weier_lattice(multiple=2)),
        tolerance=1e-8)

    def eq30_rhs(b):
        ctx = _ctx(b)
        c = sigma(0.5, ctx) / T(2, 0, b)
        zh = weier_zeta(0.5, ctx)
        return lambda z: c * cmath.exp(zh * z + 0.5 * ctx.delta2 * z * z) * T(2, PI * z, b)

    yield IdentityCase(
        "EQ30", "sigma(z + 1/2, tau) = sigma(1/2, tau)/theta2(0 | tau) exp(zeta(1/2, tau) z + delta_2(tau) z^2/2) theta2(pi z | tau)",
        lambda b: (lambda ctx: lambda z: sigma(z + 0.5, ctx))(_ctx(b)), eq30_rhs,
        sample_spec=SampleSpec(lower_left=-0.42 - 0.3j, upper_right=0.42 + 0.3j,
                               singular=_weier_lattice(offsets=(0.5,))),
        tolerance=1e-8)

    def eq31_rhs(b):
        ctx = _ctx(b)
        c = 2 / (PI * (T(2, 0, b) * T(3, 0, b) * T(4, 0, b)) ** 2)
        return lambda z: (c * cmath.exp(2 * ctx.delta2 * z * z)
                          * _prod(T(k, PI * z, b) for k in (1, 2, 3, 4)))

    yield IdentityCase(
        "EQ31", "sigma(2z, tau) = 2/(pi theta2^2(0) theta3^2(0) theta4^2(0)) exp(2 delta_2 z^2) theta1(pi z, tau) theta2(pi z, tau) theta3(pi z, tau) theta4(pi z, tau)",
        lambda b: (lambda ctx: lambda z: sigma(2 * z, ctx))(_ctx(b)), eq31_rhs,
        sample_spec=SampleSpec(lower_left=-0.42 - 0.3j, upper_right=0.42 + 0.3j,
                               singular=_weier_lattice(multiple=2)),
        tolerance=1e-8)

    def eq33_rhs(b):
        c = -2 * PI**3 * (T(2, 0, b) * T(3, 0, b) * T(4, 0, b)) ** 2
        return lambda z: c * T(2, PI * z, b) * T(3, PI * z, b) * T(4, PI * z, b) / T(1, PI * z, b) ** 3

    yield IdentityCase(
        "EQ33", "wp_z(z) = -2 pi^3 [theta2(0) theta3(0) theta4(0)]^2 theta1^-3(pi z | tau) theta2(pi z, tau) theta3(pi z, tau) theta4(pi z, tau)",
        lambda b: (lambda ctx: lambda z: wp_prime(z, ctx))(_ctx(b)), eq33_rhs,
        sample_spec=SampleSpec(lower_left=-0.42 - 0.3j, upper_right=0.42 + 0.3j,
                               singular=_weier_lattice(multiple=2)),
        tolerance=1e-8,
        erratum_note="printed with [theta2(0) theta3(0) theta4(0)]^2 in the denominator; "
                     "dividing the sigma(2z) product by sigma^4(z) puts it in the numerator")


# ----------------------------------------------------------------------------
# n-tuple cases


def _ntuple_cases():
    def eq32_rhs(b):
        c = 2 / (T(2, 0, b) * T(3, 0, b) * T(4, 0, b))
        return lambda z: c * _prod(T(k, z, b) for k in (1, 2, 3, 4))

    yield IdentityCase(
        "EQ32", "theta1(2z | tau) = 2/(theta2(0 | tau) theta3(0 | tau) theta4(0 | tau)) theta1(z | tau) theta2(z | tau) theta3(z | tau) theta4(z | tau)",
        lambda b: lambda z: T(1, 2 * z, b), eq32_rhs,
        sample_spec=SampleSpec(lower_left=-1.2 - 0.5j, upper_right=1.2 + 0.5j,
                               singular=_theta_lattice(multiple=2)),
        tolerance=1e-10)

    def eq34_const(b, tau):
        n = b["n"]
        return (n * theta_z_derivative(1, 1, 0, n * tau, b["policy"])
                / (theta_z_derivative(1, 1, 0, tau, b["policy"])
                   * _prod(theta(1, k * PI / n, tau, b["policy"]) for k in range(1, n))))

    def eq34_rhs(b):
        tau = complex(b["tau"])
        n = b["n"]
        c = eq34_const(b, tau)
        return lambda z: c * _prod(T(1, z + k * PI / n, b) for k in range(n))

    yield IdentityCase(
        "EQ34", "theta1(nz | n tau) = n theta1'(0 | n tau)/(theta1'(0 | tau) prod_{k=1}^{n-1} theta1(k pi/n | tau)) prod_{k=0}^{n-1} theta1(z + k pi/n | tau)",
        lambda b: lambda z: T(1, b["n"] * z, b, tau=b["n"] * b["tau"]), eq34_rhs,
        param_grid=tuple({"n": n} for n in (2, 3, 4)),
        sample_spec=SampleSpec(lower_left=-1.2 - 0.5j, upper_right=1.2 + 0.5j,
                               singular=_theta_lattice(multiple=lambda b: b["n"])),
        tolerance=1e-10)

    def eq34_limit_rhs(b):
        # both sides of the n-tuple relation multiplied by exp(-i pi n tau/4)/2^n
        tau = complex(b["tau"])
        n = b["n"]
        p = b["policy"]

        def s(z, t):
            return cmath.exp(-1j * PI * t / 4) * theta(1, z, t, p) / 2

        def sp(t):
            return cmath.exp(-1j * PI * t / 4) * theta_z_derivative(1, 1, 0, t, p) / 2

        c = sp(tau) * _prod(s(k * PI / n, tau) for k in range(1, n)) / (n * sp(n * tau))
        return lambda z: c * s(n * z, n * tau)

    yield IdentityCase(
        "EQ34_LIMIT", "lim exp(-i pi tau/4) theta1(z | tau) = 2 sin(z); prod_k sin(z + k pi/n) = 2^(1-n) sin(nz)",
        lambda b: lambda z: _prod(cmath.sin(z + k * PI / b["n"]) for k in range(b["n"])),
        eq34_limit_rhs, param_grid=tuple({"n": n} for n in (2, 3, 4)), tau_override=(8j,),
        sample_spec=SampleSpec(lower_left=-1.2 - 0.5j, upper_right=1.2 + 0.5j,
                               singular=_real_poles(lambda b: PI / b["n"])),
        tolerance=1e-6)

    def thm3_odd_rhs(b):
        l = b["l"]
        n = 2 * l + 1
        tau = complex(b["tau"])
        shifts = [k * PI / n + j * PI * tau / n for k in range(-l, l + 1) for j in range(-l, l + 1)]
        cinv = _prod(T(1, s, b) for s in shifts if s != 0) / n
        return lambda z: _prod(T(1, z + s, b) for s in shifts) / cinv

    yield IdentityCase(
        "THM3_ODD", "theta1((2l+1) z | tau) = C prod_{k=-l}^{l} prod_{j=-l}^{l} theta1(z + k pi/(2l+1) + j pi tau/(2l+1) | tau), "
                    "C^-1 = 1/(2l+1) prod' theta1(k pi/(2l+1) + j pi tau/(2l+1) | tau)",
        lambda b: lambda z: T(1, (2 * b["l"] + 1) * z, b), thm3_odd_rhs,
        param_grid=({"l": 1}, {"l": 2}),
        sample_spec=SampleSpec(lower_left=-0.8 - 0.4j, upper_right=0.8 + 0.4j,
                               singular=_theta_lattice(multiple=lambda b: 2 * b["l"] + 1)),
        tolerance=1e-10)

    def even_shifts(l, tau):
        n = 2 * l
        return [k * PI / n + j * PI * tau / n for k in range(-(l - 1), l + 1) for j in range(-(l - 1), l)]

    def thm3_even_rhs(b):
        l = b["l"]
        n = 2 * l
        tau = complex(b["tau"])
        shifts = even_shifts(l, tau)
        ms = [m * PI / n for m in range(-(l - 1), l + 1)]
        cinv = (_prod(T(4, m, b) for m in ms) * _prod(T(1, s, b) for s in shifts if s != 0)) / n
        return lambda z: (_prod(T(4, z + m, b) for m in ms) * _prod(T(1, z + s, b) for s in shifts)) / cinv

    yield IdentityCase(
        "THM3_EVEN", "theta1(2lz, tau) = C prod_{m=-(l-1)}^{l} theta4(z + m pi/2l) prod_{k=-(l-1)}^{l} prod_{j=-(l-1)}^{l-1} theta1(z + k pi/2l + j pi tau/2l | tau)",
        lambda b: lambda z: T(1, 2 * b["l"] * z, b), thm3_even_rhs,
        param_grid=({"l": 1}, {"l": 2}),
        sample_spec=SampleSpec(lower_left=-0.8 - 0.4j, upper_right=0.8 + 0.4j,
                               singular=_theta_lattice(multiple=lambda b: 2 * b["l"])),
        tolerance=1e-10)

    def thm3_even_c1(b):
        l = b["l"]
        n = 2 * l
        tau = complex(b["tau"])
        shifts = [k * PI / n + j * PI * tau / n for k in range(-(l - 1), l + 1) for j in range(-(l - 1), l + 1)]
        f = FunctionHandle(lambda z: T(1, n * z, b))
        g = FunctionHandle(lambda z: _prod(T(1, z + s, b) for s in shifts))
        path = [0.1 + 0.05j + 0.08 * cmath.exp(2j * PI * k / 64) for k in range(64)]
        coeffs, residual = fit_log_polynomial(f, g, None, 1, len(path), path=path)
        if residual > 1e-8:
            raise ValueError(f"log ratio is not linear: residual {residual:.3g}")
        return coeffs[1]

    yield IdentityCase(
        "THM3_EVEN_C1", "theta1(2lz | tau) = C exp(C1 z) prod_{k=-(l-1)}^{l} prod_{j=-(l-1)}^{l} theta1(z + k pi/n + j pi tau/n | tau), C1 = 2il",
        _const(thm3_even_c1), _const(lambda b: 2j * b["l"]),
        param_grid=({"l": 1}, {"l": 2}), sample_spec=SCALAR, tolerance=1e-7)

    def eq41_lhs(b):
        n = b["n"]
        ctx = _ctx(b, tau=n * complex(b["tau"]))
        return lambda z: wp_prime(n * z, ctx)

    def eq41_rhs(b):
        n = b["n"]
        ctx = _ctx(b)
        d = n**3 * _prod(wp_prime(k / n, ctx) for k in range(1, n))
        return lambda z: _prod(wp_prime(z + k / n, ctx) for k in range(n)) / d

    note41 = ("constant printed with wp_z(k pi/n, tau); the shifts k/n are used throughout. "
              "For even n the factor wp_z(z + 1/2) vanishes at z = 0 and wp_z(1/2) = 0 in the constant, "
              "so the relation cannot hold; only odd n agree")
    yield IdentityCase(
        "EQ41", "wp_z(nz, n tau) = 1/(n^3 prod_{k=1}^{n-1} wp_z(k/n, tau)) prod_{k=0}^{n-1} wp_z(z + k/n, tau)",
        eq41_lhs, eq41_rhs, param_grid=({"n": 2}, {"n": 3}),
        sample_spec=SampleSpec(lower_left=-0.42 - 0.3j, upper_right=0.42 + 0.3j,
                               singular=_weier_lattice(multiple=lambda b: 2 * b["n"])),
        tolerance=1e-8, erratum_note=note41)

    def eq42_lhs(b):
        ctx = _ctx(b)
        return lambda z: wp_prime(b["n"] * z, ctx)

    def eq42_rhs(b):
        n = b["n"]
        ctx = _ctx(b)
        tau = complex(b["tau"])
        shifts = [k / n + j * tau / n for k in range(n) for j in range(n)]
        d = n**3 * _prod(wp_prime(s, ctx) for s in shifts if s != 0)
        return lambda z: _prod(wp_prime(z + s, ctx) for s in shifts) / d

    yield IdentityCase(
        "EQ42_43", "wp_z(nz | tau) = C prod_{k=0}^{n-1} prod_{j=0}^{n-1} wp_z(z + k/n + j tau/n, tau), "
                   "C^-1 = n^3 prod' wp_z(k/n + j tau/n, tau)",
        eq42_lhs, eq42_rhs, param_grid=({"n": 2}, {"n": 3}),
        sample_spec=SampleSpec(lower_left=-0.42 - 0.3j, upper_right=0.42 + 0.3j,
                               singular=_weier_lattice(multiple=lambda b: 2 * b["n"])),
        tolerance=1e-8,
        erratum_note="for even n the half-period shifts cancel the pole at z = 0, so only odd n agree")


def build_catalog() -> list:
    """All identity cases in catalog order."""
    cases = []
    for group in (_gamma_cases, _trig_cases, _theta_cases, _eisenstein_cases,
                  _weierstrass_cases, _ntuple_cases):
        cases.extend(group())
    ids = [c.id for c in cases]
    if len(set(ids)) != len(ids):
        raise AssertionError("duplicate case ids in catalog")
    return cases


# ----------------------------------------------------------------------------
# running

_R2 = 1.32471795724474602596  # plastic number; (1/g, 1/g^2) is a low-discrepancy direction


def sample_points(spec: SampleSpec, binding: Binding) -> list:
    """Deterministic sample z values for one parameter binding."""
    if spec.scalar:
        return [0j]
    dist = spec.singular(binding) if spec.singular is not None else None
    scale = 2 * complex(binding.get("omega1", 0.5)) if spec.scale_by_omega else 1.0
    ll, ur = spec.lower_left, spec.upper_right
    a1, a2 = 1 / _R2, 1 / _R2**2
    out = []
    k = 0
    while len(out) < spec.count:
        k += 1
        if k > 1000 * spec.count:
            raise RuntimeError("could not place sample points away from singularities")
        x = (0.5 + k * a1) % 1.0
        y = (0.5 + k * a2) % 1.0
        z = complex(ll.real + x * (ur.real - ll.real), ll.imag + y * (ur.imag - ll.imag)) * scale
        if dist is not None and dist(z) < spec.exclusion_radius * abs(scale):
            continue
        out.append(z)
    return out


def rel_err(lhs: complex, rhs: complex, floor: float = ABS_FLOOR) -> float:
    lhs, rhs = complex(lhs), complex(rhs)
    if not (cmath.isfinite(lhs) and cmath.isfinite(rhs)):
        return math.inf
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), floor)


def _bindings(case: IdentityCase, taus, policy):
    taus = case.tau_override if case.tau_override is not None else (taus if case.uses_tau else (None,))
    for tau in taus:
        for params in case.param_grid:
            b = dict(params)
            b["policy"] = policy
            if tau is not None:
                b["tau"] = complex(tau)
            yield b


def run_case(case: IdentityCase, overrides: Optional[Mapping[str, Any]] = None) -> CaseResult:
    """Evaluate one case over its grid; failures and exceptions are reported in-band.

    ``overrides`` may hold ``tolerance``, ``taus`` and ``policy``.
    """
    overrides = dict(overrides or {})
    tol = overrides.get("tolerance") or case.tolerance
    taus = tuple(overrides.get("taus") or DEFAULT_TAUS)
    policy = overrides.get("policy") or DEFAULT_POLICY
    start = time.perf_counter()
    worst, worst_z, error = 0.0, 0j, None
    per = []
    for b in _bindings(case, taus, policy):
        shown = {k: v for k, v in b.items() if k != "policy"}
        b_worst, b_z, b_err = 0.0, 0j, None
        try:
            lhs, rhs = case.lhs(b), case.rhs(b)
            for z in sample_points(case.sample_spec, b):
                e = rel_err(lhs(z), rhs(z), case.floor)
                if not e <= b_worst:  # also catches nan
                    b_worst, b_z = e, z
        except Exception as exc:  # evaluator failures are data
            b_worst = math.inf
            b_err = f"{type(exc).__name__}: {exc}"
            tb = traceback.extract_tb(exc.__traceback__)
            if tb:
                b_err += f" (at {tb[-1].name}:{tb[-1].lineno})"
        per.append(BindingResult(shown, b_worst, b_z, b_err))
        if not b_worst <= worst:
            worst, worst_z = b_worst, b_z
        if b_err and error is None:
            error = f"{b_err} with {shown}" if shown else b_err
    passed = all(r.max_rel_err <= tol for r in per)
    return CaseResult(case.id, case.citation, worst, worst_z, passed,
                      time.perf_counter() - start, tol, per, error, case.erratum_note)


def select_cases(suite_filter: Optional[Sequence[str]] = None, catalog=None) -> list:
    catalog = build_catalog() if catalog is None else catalog
    if not suite_filter:
        return list(catalog)
    return [c for c in catalog if any(c.id.startswith(p) for p in suite_filter)]


def run_suite(suite_filter: Optional[Sequence[str]] = None, config: SuiteConfig = SuiteConfig(),
              name: Optional[str] = None) -> VerificationReport:
    """Run every case whose id starts with one of the prefixes (all when empty)."""
    cases = select_cases(suite_filter)
    overrides = {"tolerance": config.tolerance, "taus": tuple(config.taus), "policy": config.policy}
    if config.workers > 1:
        with ThreadPoolExecutor(config.workers) as pool:
            results = list(pool.map(lambda c: run_case(c, overrides), cases))
    else:
        results = [run_case(c, overrides) for c in cases]
    label = name or (",".join(suite_filter) if suite_filter else "all")
    return VerificationReport(label, config.echo(), results)
