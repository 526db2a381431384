"""
Weierstrass functions from theta functions
==========================================

sigma, zeta and wp are built in the normalised variable z / (2 omega1), so
any half period omega1 reuses the same theta evaluations.  We check the
differential equation, the half-period values and the zero of wp, then
watch wp degenerate into a trigonometric function as Im tau grows.
"""
import cmath
import math

from ellverify.identity_suite import weierstrass_context
from ellverify.lemma_engine import differentiate
from ellverify.weierstrass import half_period_values, sigma, weier_zeta, wp, wp_prime, wp_zero

ctx = weierstrass_context(1.2j)
z = 0.31 + 0.12j
print(f"sigma = {sigma(z, ctx):.14g}\nzeta  = {weier_zeta(z, ctx):.14g}\nwp    = {wp(z, ctx):.14g}")

# wp'' = 6 wp^2 - g2/2 with g2 = 60 delta4 (the check differentiates numerically, so expect ~1e-8)
second = differentiate(lambda w: wp_prime(w, ctx), z, 1, 1e-3)
print(f"wp'' - (6 wp^2 - 30 delta4) = {abs(second - (6 * wp(z, ctx) ** 2 - 30 * ctx.delta4)):.1e}")

e1, e2, e3 = half_period_values(ctx)
print(f"e1, e2, e3 = {e1:.10g}, {e2:.10g}, {e3:.10g};  sum {abs(e1 + e2 + e3):.1e}")

a = wp_zero(ctx)
print(f"wp vanishes at {a:.14g} (|wp| = {abs(wp(a, ctx)):.1e})")
a = wp_zero(ctx, 2 + 1j)
print(f"wp = 2 + i at {a:.14g}")

# On the square lattice the zero of wp is the double root at (1 + i)/2
print("square lattice zero:", wp_zero(weierstrass_context(1j)))

# Im tau -> infinity: wp tends to pi^2/sin^2(pi z) - pi^2/3
ctx8 = weierstrass_context(8j)
for z in (0.2, 0.3 + 0.1j):
    limit = math.pi ** 2 / cmath.sin(math.pi * z) ** 2 - math.pi ** 2 / 3
    print(f"tau = 8i, z = {z}: wp - limit = {abs(wp(z, ctx8) - limit):.1e}")
