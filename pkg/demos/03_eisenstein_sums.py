"""
Lattice sums
============

delta_2j(tau) is the sum of (m + n tau)^(-2j) over the punctured lattice.
Each row m + n tau, m in Z, has a closed form through cot derivatives, so
the double sum collapses to a rapidly converging sum over n.  At 2j = 2 the
double sum is only conditionally convergent, and swapping the order of
summation shifts the value by 2 pi i / tau.
"""
import math

from ellverify.eisenstein import (delta2_from_theta, delta_from_recursion, direct_lattice_sum,
                                  half_shift_sum, lattice_sum_delta, swapped_order_delta2)

tau = 1j
d4 = lattice_sum_delta(2, tau)
closed = math.gamma(0.25) ** 8 / (960 * math.pi ** 2)
print(f"delta4(i) = {d4.real:.15f}   Gamma(1/4)^8/(960 pi^2) = {closed:.15f}")
print(f"delta6(i) = {abs(lattice_sum_delta(3, tau)):.1e}  (vanishes on the square lattice)")

# Truncated square sums converge slowly; the bound shrinks like R^(2-2j)
for radius in (10, 40, 160):
    v, bound = direct_lattice_sum(2, tau, radius)
    print(f"radius {radius:>3}: |error| {abs(v - d4):.2e}  bound {bound:.2e}")

tau = 0.3 + 1.1j
d2 = lattice_sum_delta(1, tau)
print(f"\ndelta2 via rows    = {d2:.14g}")
print(f"delta2 via theta   = {delta2_from_theta(tau):.14g}")
print(f"swapped order      = {swapped_order_delta2(tau):.14g}")
print(f"delta2 - 2 pi i/tau = {d2 - 2j * math.pi / tau:.14g}")

alpha, beta, gamma = (half_shift_sum(k, 1, tau) for k in ("alpha", "beta", "gamma"))
print(f"alpha + beta + gamma - 3 delta2 = {abs(alpha + beta + gamma - 3 * d2):.1e}")

# Higher sums from delta4 and delta6 alone
d4, d6 = lattice_sum_delta(2, tau), lattice_sum_delta(3, tau)
for j, v in zip((4, 5, 6), delta_from_recursion(6, d4, d6)):
    print(f"delta{2 * j}: recursion {v:.12g}  lattice {lattice_sum_delta(j, tau):.12g}")
