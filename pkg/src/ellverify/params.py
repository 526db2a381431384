"""Parameter objects threaded through the elliptic evaluators."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError

# Below this the q-series need hundreds of terms; such tau are rejected.
MIN_IM_TAU = 0.05


def check_tau(tau) -> complex:
    tau = complex(tau)
    if not tau.imag > 0:
        raise DomainError(f"tau={tau} is not in the upper half-plane")
    if tau.imag < MIN_IM_TAU:
        raise DomainError(f"Im(tau)={tau.imag} is below the supported minimum {MIN_IM_TAU}")
    return tau


@dataclass(frozen=True)
class TruncationPolicy:
    """Cutoffs shared by every series, product and lattice sum.

    ``series_tol`` is relative: a series stops once three consecutive
    term bounds fall below ``series_tol`` times the larger of the partial
    sum and the largest term bound seen so far.
    """

    lattice_radius: int = 60
    series_tol: float = 1e-14
    max_terms: int = 400

    def __post_init__(self):
        if int(self.lattice_radius) != self.lattice_radius or self.lattice_radius < 4:
            raise ValueError("lattice_radius must be an integer >= 4")
        if not self.series_tol >= 16 * 2.220446049250313e-16:
            raise ValueError("series_tol must be at least 16 machine epsilons")
        if int(self.max_terms) != self.max_terms or self.max_terms < 16:
            raise ValueError("max_terms must be an integer >= 16")


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class LatticeParams:
    """Period lattice {2m*omega1 + 2n*omega2}.

    ``tau`` and ``nome_q`` are always derived from the half-periods.
    """

    omega1: complex = 0.5
    omega2: complex = 0.5j

    def __post_init__(self):
        object.__setattr__(self, "omega1", complex(self.omega1))
        object.__setattr__(self, "omega2", complex(self.omega2))
        if self.omega1 == 0:
            raise DomainError("omega1 must be nonzero")
        check_tau(self.omega2 / self.omega1)

    @classmethod
    def from_tau(cls, tau, omega1=0.5) -> "LatticeParams":
        return cls(omega1, complex(omega1) * complex(tau))

    @property
    def tau(self) -> complex:
        return self.omega2 / self.omega1

    @property
    def nome_q(self) -> complex:
        return cmath.exp(1j * math.pi * self.tau)
