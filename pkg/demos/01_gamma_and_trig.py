"""
Gamma, digamma and finite trigonometric products
================================================

The gamma family is evaluated by recurrence plus a Stirling series, with
reflection for the left half plane.  Here we check the duplication rule,
Gauss' digamma sum and a sine product directly, then run the matching
catalog cases.
"""
import cmath
import math

import numpy as np

from ellverify.gammatrig import digamma, gamma_fn, trigamma
from ellverify.identity_suite import build_catalog, run_case

# Duplication: Gamma(2z) against 2^(2z-1)/sqrt(pi) Gamma(z) Gamma(z+1/2)
for z in (0.3, 1.7 + 0.4j, -0.45 + 0.2j):
    lhs = gamma_fn(2 * z)
    rhs = 2 ** (2 * z - 1) / math.sqrt(math.pi) * gamma_fn(z) * gamma_fn(z + 0.5)
    print(f"z = {z!s:>14}  Gamma(2z) = {lhs:.12g}  rel diff {abs(lhs - rhs) / abs(lhs):.1e}")

# Gauss: sum_k psi(k/n) = -n (gamma + ln n)
for n in (3, 5):
    s = sum(digamma(k / n) for k in range(1, n + 1))
    print(f"n = {n}: sum psi(k/n) = {s.real:.15f}, closed form {-n * (np.euler_gamma + math.log(n)):.15f}")

# trigamma at 1/2 is pi^2/2
print(f"trigamma(1/2) = {trigamma(0.5).real:.15f}, pi^2/2 = {math.pi ** 2 / 2:.15f}")

# Product of sines: prod_{k<n} sin(k pi/n) = n / 2^(n-1)
for n in (3, 4, 6):
    p = math.prod(math.sin(k * math.pi / n) for k in range(1, n))
    print(f"n = {n}: sine product {p:.16f} vs {n / 2 ** (n - 1):.16f}")

# sin(nz) as a product of shifted sines, at an arbitrary complex point
z, n = 0.37 + 0.21j, 4
prod = 2 ** (n - 1) * np.prod([cmath.sin(z + k * math.pi / n) for k in range(n)])
print(f"sin(4z) = {cmath.sin(n * z):.14g}, product form {prod:.14g}")

# Suite filters match id prefixes (EQ3 would also pick up EQ30..EQ34), so pick exact ids
wanted = {"EQ3", "EQ4", "EQ5", "EQ6", "EQ7", "EQ8", "EQ9", "EQ10", "GAUSS_PSI", "EULER_SIN"}
for r in (run_case(c) for c in build_catalog() if c.id in wanted):
    print(f"{r.case_id:<14} max rel err {r.max_rel_err:.2e}  {'pass' if r.passed else 'FAIL'}")
