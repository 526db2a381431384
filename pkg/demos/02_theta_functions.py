"""
Jacobi theta functions
======================

Theta functions take (z | tau) with nome q = exp(i pi tau).  Arguments with
large imaginary part are first reduced by quasiperiodicity, so the series
stays short.  We compare the series with the triple product, look at the
theta constants and locate the zeros of each theta in one period cell.
"""
import math

from ellverify.lemma_engine import FunctionHandle, Region, locate_zeros_poles
from ellverify.theta import (theta, theta_constants, theta_z_derivative, triple_product_theta1,
                             triple_product_theta3)

PI = math.pi
tau = 0.3 + 1.1j

z = 0.41 + 0.17j
print("series vs triple product at z =", z)
print("  theta1:", theta(1, PI * z, tau), triple_product_theta1(z, tau))
print("  theta3:", theta(3, PI * z, tau), triple_product_theta3(z, tau))

t2, t3, t4, t1p = theta_constants(tau)
print(f"theta1'(0) = {t1p:.14g}")
print(f"theta2 theta3 theta4 = {t2 * t3 * t4:.14g}")
print(f"Jacobi quartic t3^4 - t2^4 - t4^4 = {abs(t3 ** 4 - t2 ** 4 - t4 ** 4):.1e}")

# Far up the strip the reduction keeps the evaluation well conditioned
print("theta1 at z = 0.3 + 9.5i:", theta(1, 0.3 + 9.5j, tau))

# Zeros: theta1 at 0, theta2 at 1/2, theta3 at 1/2 + tau/2, theta4 at tau/2 (in z/pi units)
cell = Region(0.25 + tau / 4 - (0.5 + 0.5j * tau.imag), 0.25 + tau / 4 + (0.5 + 0.5j * tau.imag))
for k in (1, 2, 3, 4):
    f = FunctionHandle(lambda w, k=k: theta(k, PI * w, tau), lambda w, k=k: PI * theta_z_derivative(k, 1, PI * w, tau))
    recs = locate_zeros_poles(f, cell, 1.2)
    print(f"theta{k}: " + ", ".join(f"order {r.order} at {r.location:.12f}" for r in recs))
