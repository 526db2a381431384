"""Numerical zero/pole bookkeeping for meromorphic functions.

The workflow mirrors how equalities between meromorphic functions are
established by comparing singularities:

1. ``locate_zeros_poles`` finds zeros and poles (with signed orders) in
   a rectangle from argument-principle integrals of f'/f.
2. ``match_records`` checks that two functions share them.
3. ``log_derivative`` compares n-th derivatives of log f and log g.
4. ``fit_log_polynomial`` recovers the leftover factor exp(c0 + c1 z + c2 z^2).
5. ``contour_decay_probe`` shows how the contour integrals of
   log(f)/(z-a)^{n+1} behave on growing rectangles.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import quad_vec

from .errors import (BoundarySingularityError, BranchTrackingError, InstabilityError,
                     RankDeficiencyError, WindingError)

# Primary grid offset (in units of cell_size) followed by three retries.
JITTERS = (0.0137 + 0.0082j, 0.0311 + 0.0197j, 0.0459 + 0.0071j, 0.0073 + 0.0389j)
# Quadrature targets: analytic f' is smooth to rounding, a finite-difference
# f' carries noise near 1e-11 that an adaptive rule cannot resolve.
_QUAD_EPS_ANALYTIC = 1e-11
_QUAD_EPS_NUMERIC = 1e-8
_MAX_UNWRAP_SAMPLES = 2**14
# Thresholds on cell-normalized moments (coordinates scaled by the half-diagonal).
_EMPTY_MOMENT = 1e-6
_SINGLE_SPREAD = 1e-3


@dataclass(frozen=True)
class FunctionHandle:
    """A complex function with an optional analytic derivative."""

    evaluate: Callable[[complex], complex]
    derivative: Optional[Callable[[complex], complex]] = None
    label: str = ""

    def __call__(self, z) -> complex:
        return complex(self.evaluate(complex(z)))

    def d(self, z, step: float = 1e-3) -> complex:
        """f'(z): analytic if available, else Richardson-refined central difference."""
        z = complex(z)
        if self.derivative is not None:
            return complex(self.derivative(z))
        return _central(self.__call__, z, 1, step)

    def validate(self, points: Sequence[complex], rtol: float = 1e-6) -> None:
        """Check the analytic derivative against central differences at ``points``."""
        if self.derivative is None:
            return
        for z in points:
            exact = complex(self.derivative(complex(z)))
            approx = _central(self.__call__, complex(z), 1, 1e-4)
            if abs(exact - approx) > rtol * max(abs(exact), abs(approx), 1e-300):
                raise ValueError(f"derivative of {self.label or 'handle'} disagrees at z={z}")

    def times(self, other: "FunctionHandle", label: str = "") -> "FunctionHandle":
        deriv = None
        if self.derivative is not None and other.derivative is not None:
            deriv = lambda z: self.derivative(z) * other.evaluate(z) + self.evaluate(z) * other.derivative(z)
        return FunctionHandle(lambda z: self.evaluate(z) * other.evaluate(z), deriv,
                              label or f"({self.label})*({other.label})")


@dataclass(frozen=True)
class Region:
    lower_left: complex
    upper_right: complex

    def __post_init__(self):
        object.__setattr__(self, "lower_left", complex(self.lower_left))
        object.__setattr__(self, "upper_right", complex(self.upper_right))
        if not (self.lower_left.real < self.upper_right.real
                and self.lower_left.imag < self.upper_right.imag):
            raise ValueError("Region corners must satisfy lower_left < upper_right componentwise")

    def contains(self, z: complex) -> bool:
        return (self.lower_left.real <= z.real <= self.upper_right.real
                and self.lower_left.imag <= z.imag <= self.upper_right.imag)

    def corners(self):
        a, b = self.lower_left, self.upper_right
        return (a, complex(b.real, a.imag), b, complex(a.real, b.imag))


@dataclass(frozen=True)
class ZeroPoleRecord:
    location: complex
    order: int

    def __post_init__(self):
        object.__setattr__(self, "location", complex(self.location))
        if self.order == 0 or int(self.order) != self.order:
            raise ValueError("order must be a nonzero integer")


@dataclass
class MatchReport:
    matched_pairs: list = field(default_factory=list)
    unmatched_left: list = field(default_factory=list)
    unmatched_right: list = field(default_factory=list)
    success: bool = True


# ----------------------------------------------------------------------------
# finite differences

_STENCILS = {
    1: ((-1, -0.5), (1, 0.5)),
    2: ((-1, 1.0), (0, -2.0), (1, 1.0)),
    3: ((-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)),
}


def _stencil(func, z: complex, order: int, h: float) -> complex:
    return sum(c * func(z + k * h) for k, c in _STENCILS[order]) / h**order


def _central(func, z: complex, order: int, h: float, check: bool = False) -> complex:
    d1 = _stencil(func, z, order, h)
    d2 = _stencil(func, z, order, h / 2)
    rich = (4 * d2 - d1) / 3
    if check and abs(d2 - d1) > 1e-5 * max(abs(rich), 1e-8):
        raise InstabilityError(f"Richardson steps disagree at z={z}: {d1} vs {d2}")
    return rich


def differentiate(func: Callable[[complex], complex], z, order: int = 1, h: float = 1e-3) -> complex:
    """order-th derivative (1..3) by central differences with one Richardson step."""
    if order == 0:
        return complex(func(complex(z)))
    if order not in _STENCILS:
        raise ValueError("order must be 0..3")
    return _central(lambda w: complex(func(w)), complex(z), order, h)


# ----------------------------------------------------------------------------
# argument principle


def _segment_moments(logder, a: complex, b: complex, center: complex, radius: float,
                     eps: float) -> np.ndarray:
    """integral over [a, b] of f'/f * [1, w, w^2] dz with w = (z - center)/radius."""
    d = b - a

    def integrand(t):
        z = a + t * d
        val = logder(z)
        w = (z - center) / radius
        return np.array([val, val * w, val * w * w]) * d

    with np.errstate(all="ignore"):
        try:
            res, err = quad_vec(integrand, 0.0, 1.0, epsabs=eps, epsrel=eps, limit=4000)
        except (ZeroDivisionError, OverflowError, ValueError) as exc:
            raise BoundarySingularityError(f"quadrature failed on [{a}, {b}]: {exc}") from exc
    if not np.all(np.isfinite(res)) or err > 1e-6 * max(1.0, float(np.max(np.abs(res)))):
        raise BoundarySingularityError(f"quadrature did not settle on [{a}, {b}] (err={err:.3g})")
    return res


def _logder_of(f: FunctionHandle, step: float):
    if f.derivative is not None:
        logder = lambda z: f.derivative(z) / f(z)
        logder.eps = _QUAD_EPS_ANALYTIC
        return logder

    def logder(z):
        return _central(f.__call__, z, 1, step) / f(z)
    logder.eps = _QUAD_EPS_NUMERIC
    return logder


def _cell_moments(logder, ll: complex, ur: complex) -> np.ndarray:
    """(W, M1, M2): winding number and first two moments of the zeros minus
    poles, in coordinates centred on the cell and scaled by its half-diagonal."""
    corners = (ll, complex(ur.real, ll.imag), ur, complex(ll.real, ur.imag))
    center = (ll + ur) / 2
    radius = abs(ur - ll) / 2
    total = np.zeros(3, dtype=complex)
    for k in range(4):
        total += _segment_moments(logder, corners[k], corners[(k + 1) % 4], center, radius,
                                  logder.eps)
    return total / (2j * math.pi)


def winding_number(f: FunctionHandle, region: Region, step: float | None = None) -> complex:
    """(1/2 pi i) * contour integral of f'/f around ``region``, not rounded."""
    diam = abs(region.upper_right - region.lower_left)
    step = step if step is not None else 1e-5 * diam
    return complex(_cell_moments(_logder_of(f, step), region.lower_left, region.upper_right)[0])


def _polish(f: FunctionHandle, logder, z: complex, order: int, ll: complex, ur: complex) -> complex:
    """Order-aware Newton z <- z - order * f/f'; falls back to z if it wanders off."""
    z0 = z
    for _ in range(30):
        try:
            step = order / logder(z)
        except ZeroDivisionError:
            break
        if not cmath.isfinite(step):
            break
        z = z - step
        if not (ll.real <= z.real <= ur.real and ll.imag <= z.imag <= ur.imag):
            return z0
        if abs(step) < 1e-15 * max(1.0, abs(z)):
            break
    return z


def _resolve(f, logder, ll, ur, tol, depth, max_depth, out):
    mom = _cell_moments(logder, ll, ur)
    W = mom[0]
    order = int(round(W.real))
    if abs(W - order) >= 0.2:
        raise WindingError(f"non-integer winding {W} on cell {ll}..{ur}")
    radius = abs(ur - ll) / 2
    if order == 0 and abs(mom[1]) < _EMPTY_MOMENT and abs(mom[2]) < _EMPTY_MOMENT:
        return
    center = (ll + ur) / 2
    if order != 0:
        mean = mom[1] / order
        spread = math.sqrt(abs(mom[2] / order - mean * mean))
        single = abs(order) == 1 and spread < _SINGLE_SPREAD
        if single or spread * radius <= tol or depth >= max_depth:
            z = _polish(f, logder, center + mean * radius, order, ll, ur)
            out.append(ZeroPoleRecord(z, order))
            return
    elif depth >= max_depth:
        return
    # split slightly off-centre so the new edges avoid symmetric positions
    xm = ll.real + 0.5137 * (ur.real - ll.real)
    ym = ll.imag + 0.4921 * (ur.imag - ll.imag)
    for a, b in (((ll.real, ll.imag), (xm, ym)), ((xm, ll.imag), (ur.real, ym)),
                 ((ll.real, ym), (xm, ur.imag)), ((xm, ym), (ur.real, ur.imag))):
        _resolve(f, logder, complex(*a), complex(*b), tol, depth + 1, max_depth, out)


def _locate(f, region, cell_size, tol, jitter):
    ll, ur = region.lower_left, region.upper_right
    x0 = ll.real - jitter.real * cell_size
    y0 = ll.imag - jitter.imag * cell_size
    nx = max(1, math.ceil((ur.real - x0) / cell_size))
    ny = max(1, math.ceil((ur.imag - y0) / cell_size))
    logder = _logder_of(f, 1e-5 * cell_size)
    max_depth = max(4, math.ceil(math.log2(cell_size / tol)) + 2)
    found = []
    for i in range(nx):
        for k in range(ny):
            a = complex(x0 + i * cell_size, y0 + k * cell_size)
            b = a + complex(cell_size, cell_size)
            _resolve(f, logder, a, b, tol, 0, max_depth, found)
    return [r for r in found if region.contains(r.location)]


def locate_zeros_poles(f: FunctionHandle, region: Region, cell_size: float, tol: float = 1e-8) -> list:
    """Zeros (positive order) and poles (negative order) of f inside ``region``.

    The region is covered by square cells of side ``cell_size`` on a grid
    shifted by a fixed small offset.  Each cell's winding number of f
    comes from adaptive quadrature of f'/f; cells that contain anything
    are split until their contents form a single cluster (spread below
    ``tol``), whose location is the first moment of f'/f polished by
    an order-aware Newton step.  Records are sorted by (Re, Im).
    """
    last = None
    for jitter in JITTERS:
        try:
            recs = _locate(f, region, cell_size, tol, jitter)
            return sorted(recs, key=lambda r: (round(r.location.real, 9), round(r.location.imag, 9)))
        except (BoundarySingularityError, WindingError) as exc:
            last = exc
    raise BoundarySingularityError(f"zero/pole search failed for every grid offset: {last}")


def match_records(a: Sequence[ZeroPoleRecord], b: Sequence[ZeroPoleRecord], tol: float) -> MatchReport:
    """Greedy nearest-neighbour pairing; orders must agree exactly."""
    report = MatchReport()
    remaining = list(b)
    for rec in a:
        best, best_d = None, math.inf
        for cand in remaining:
            d = abs(cand.location - rec.location)
            if d < best_d:
                best, best_d = cand, d
        if best is not None and best_d < tol and best.order == rec.order:
            report.matched_pairs.append((rec, best, best_d))
            remaining.remove(best)
        else:
            report.unmatched_left.append(rec)
    report.unmatched_right = remaining
    report.success = not report.unmatched_left and not report.unmatched_right
    return report


def log_derivative(f: FunctionHandle, z, n: int = 1, h: float = 1e-3) -> complex:
    """d^n/dz^n log f(z) for n = 1..4.

    L = f'/f is formed pointwise; for n >= 2 it is differentiated n-1
    times by central differences with steps h and h/2 and combined by
    Richardson extrapolation.  InstabilityError is raised when the two
    steps disagree by more than 1e-5 relative.
    """
    if not 1 <= n <= 4:
        raise ValueError("n must be in 1..4")
    z = complex(z)
    inner = min(h, 1e-3)

    def L(w):
        return f.d(w, inner) / f(w)

    if n == 1:
        return L(z)
    return _central(L, z, n - 1, h, check=True)


# ----------------------------------------------------------------------------
# log-ratio fitting and contour probes


def _rectangle_path(region: Region, samples: int) -> np.ndarray:
    corners = region.corners() + (region.corners()[0],)
    lengths = [abs(corners[k + 1] - corners[k]) for k in range(4)]
    s = np.arange(samples) * (sum(lengths) / samples)
    out = np.empty(samples, dtype=complex)
    acc = 0.0
    for k in range(4):
        sel = (s >= acc) & (s < acc + lengths[k])
        out[sel] = corners[k] + (s[sel] - acc) / lengths[k] * (corners[k + 1] - corners[k])
        acc += lengths[k]
    return out


def _tracked_log(values: np.ndarray) -> np.ndarray:
    """Continuous log along a sample sequence; None if a step jumps by >= pi/2."""
    logs = np.log(values)
    im = logs.imag.copy()
    for k in range(1, im.size):
        jump = im[k] - im[k - 1]
        jump -= 2 * math.pi * math.floor((jump + math.pi) / (2 * math.pi))
        if jump <= -math.pi:
            jump += 2 * math.pi
        if abs(jump) >= math.pi / 2:
            return None
        im[k] = im[k - 1] + jump
    return logs.real + 1j * im


def fit_log_polynomial(f: FunctionHandle, g: FunctionHandle, region: Region, degree: int = 2,
                       samples: int = 256, path: Optional[Sequence[complex]] = None):
    """Fit log(f/g) = c0 + c1 z + ... + c_degree z^degree along a path.

    The default path is the boundary of ``region``.  The logarithm is
    tracked continuously (sample count doubles while any step exceeds
    pi/2), and Im(c0) is reported in (-pi, pi].

    Returns
    -------
    coeffs : tuple of complex, lowest degree first
    residual : float, max |fit - log(f/g)| over the samples
    """
    if not 0 <= degree <= 2:
        raise ValueError("degree must be 0, 1 or 2")
    n = samples
    while True:
        pts = np.asarray(path, dtype=complex) if path is not None else _rectangle_path(region, n)
        ratio = np.array([f(z) / g(z) for z in pts])
        logs = _tracked_log(ratio)
        if logs is not None:
            break
        if path is not None or n >= _MAX_UNWRAP_SAMPLES:
            raise BranchTrackingError("log(f/g) jumps by more than pi/2 between samples")
        n *= 2
    V = np.vander(pts, degree + 1, increasing=True)
    if np.linalg.matrix_rank(V) < degree + 1:
        raise RankDeficiencyError("sample path does not determine the polynomial")
    coeffs, *_ = np.linalg.lstsq(V, logs, rcond=None)
    residual = float(np.max(np.abs(V @ coeffs - logs)))
    c0 = coeffs[0]
    k = math.floor((c0.imag + math.pi) / (2 * math.pi))
    if c0.imag - 2 * math.pi * k <= -math.pi:
        k -= 1
    coeffs[0] = c0 - 2j * math.pi * k
    return tuple(complex(c) for c in coeffs), residual


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)


def _edge_nodes(a: complex, b: complex, panels: int):
    edges = np.linspace(0.0, 1.0, panels + 1)
    t = ((edges[:-1, None] + edges[1:, None]) / 2 + (edges[1:, None] - edges[:-1, None]) / 2 * _GL_NODES).ravel()
    w = ((edges[1:, None] - edges[:-1, None]) / 2 * _GL_WEIGHTS).ravel()
    return a + t * (b - a), w * (b - a)


def _horizontal_log_correction(records, corners, a: complex, n: int) -> complex:
    """Integral of (F - G) / (z - a)^{n+1} around the rectangle.

    G is log f continued along the contour from the lower right corner;
    F is continued from the right edge along horizontal lines.  They
    agree on the right and top edges, differ by -2*pi*i*N(y) at height y
    on the left edge (N(y): zeros minus poles above y) and by
    -2*pi*i*N_total on the bottom edge.
    """
    lr, ur, ul, ll = corners

    def prim(z):  # antiderivative of (z - a)^{-(n+1)}
        return (z - a) ** (-n) / (-n)

    total = 0j
    n_total = 0
    for rec in records:
        n_total += rec.order
        # left edge runs downward; the jump is active below Im(rec)
        top = complex(ll.real, rec.location.imag)
        total += rec.order * (prim(ll) - prim(top))
    total += n_total * (prim(lr) - prim(ll))
    return -2j * math.pi * total


def contour_decay_probe(f: FunctionHandle, a, n: int, half_sizes: Sequence[float],
                        panels_per_unit: float = 4.0, cell_size: float = 1.0,
                        records: Optional[Sequence[ZeroPoleRecord]] = None) -> list:
    """Contour integrals of log f(z) / (z - a)^{n+1} over squares centred at ``a``.

    The logarithm follows the generalized Littlewood convention: a
    principal determination at the lower right corner, continued up the
    right edge and from there along horizontal lines.  Numerically log f
    is tracked along the contour on Gauss-Legendre panels (refined until
    no step jumps by pi/2 or more) and the horizontal-continuation
    offsets are added from the zeros and poles inside each square, taken
    from ``records`` when given and from ``locate_zeros_poles`` otherwise.
    """
    a = complex(a)
    out = []
    for s in half_sizes:
        corners = [a + complex(s, -s), a + complex(s, s), a + complex(-s, s), a + complex(-s, -s)]
        panels = max(2, math.ceil(2 * s * panels_per_unit))
        while True:
            zs, ws = [], []
            for k in range(4):
                z, w = _edge_nodes(corners[k], corners[(k + 1) % 4], panels)
                zs.append(z)
                ws.append(w)
            z = np.concatenate(zs)
            w = np.concatenate(ws)
            vals = np.array([f(p) for p in z])
            if np.any(vals == 0) or not np.all(np.isfinite(vals)):
                raise BoundarySingularityError(f"f vanishes or blows up on the contour of half-size {s}")
            logs = _tracked_log(vals)
            if logs is not None:
                break
            panels *= 2
            if 80 * panels > _MAX_UNWRAP_SAMPLES:
                raise BranchTrackingError(f"cannot track log f on the contour of half-size {s}")
        box = Region(corners[3], corners[1])
        if records is None:
            inside = locate_zeros_poles(f, box, cell_size, 1e-8)
        else:
            inside = [r for r in records if box.contains(r.location)]
        integral = complex(np.sum(w * logs / (z - a) ** (n + 1)))
        out.append(integral + _horizontal_log_correction(inside, corners, a, n))
    return out
