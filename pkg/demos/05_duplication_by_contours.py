"""
Recovering the duplication rule from zeros, poles and two values
=================================================================

Two meromorphic functions with the same zeros and poles differ by the
exponential of an entire function.  If their log-derivatives of order two
agree, that entire function is linear, so two function values fix it.
We run this pipeline on f = Gamma(2z) and g = Gamma(z) Gamma(z + 1/2).
"""
import cmath
import math

from ellverify.gammatrig import gamma_fn
from ellverify.lemma_engine import (FunctionHandle, Region, fit_log_polynomial, locate_zeros_poles,
                                    log_derivative, match_records)

f = FunctionHandle(lambda z: gamma_fn(2 * z), label="Gamma(2z)")
g = FunctionHandle(lambda z: gamma_fn(z) * gamma_fn(z + 0.5), label="Gamma(z)Gamma(z+1/2)")

# 1. singularity tables: in the left half plane both have simple poles at -k/2
left = Region(-1.8 - 0.5j, -0.2 + 0.5j)
report = match_records(locate_zeros_poles(f, left, 0.5), locate_zeros_poles(g, left, 0.5), 1e-8)
print("poles matched:", [(round(a.location.real, 10), a.order) for a, _, _ in report.matched_pairs])
print("match success:", report.success)

# 2. second log-derivatives agree
for z in (0.4, 0.9 + 0.3j, 2.6 + 0.8j):
    a, b = log_derivative(f, z, 2), log_derivative(g, z, 2)
    print(f"z = {z}: (log f)'' = {a:.10g}, (log g)'' = {b:.10g}")

# 3. g/f = C2 exp(C1 z); the values at 1/2 and 1 fix both constants
r_half, r_one = g(0.5) / f(0.5), g(1.0) / f(1.0)
c1 = 2 * cmath.log(r_one / r_half)
c2 = r_half * cmath.exp(-c1 / 2)
print(f"C1 = {c1.real:.15f}  (-2 ln 2 = {-2 * math.log(2):.15f})")
print(f"C2 = {c2.real:.15f}  (2 sqrt(pi) = {2 * math.sqrt(math.pi):.15f})")

# The same constants from a least-squares fit of log(g/f) along a contour
coeffs, residual = fit_log_polynomial(g, f, Region(0.4 - 0.3j, 1.6 + 0.3j), 1)
print(f"contour fit: C1 = {coeffs[1]:.15g}, C2 = {cmath.exp(coeffs[0]):.15g}, residual {residual:.1e}")
