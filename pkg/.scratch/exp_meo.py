"""Exact MEO availability under the orbit mixture vs the binomial approximation."""
import numpy as np
from scipy.integrate import quad
from scipy.stats import binom
import math

Re, Rm = 6371.0, 26371.0
theta_max = math.acos(Re/Rm)            # horizon branch for phi_M = pi/6
c0 = math.cos(theta_max)                # = Re/Rm
p1 = (1 - c0) / 2
print("theta_max:", theta_max, "p1:", p1)

def q_of_u(u):
    # u = cos(inclination), orbit-arc fraction within range
    s = math.sqrt(1 - u*u)
    if s <= c0:
        return 0.0
    return math.acos(c0 / s) / math.pi

NM, NO = 6, 2
# pmf of per-orbit count: integrate binomial(NM, q(u)) over u ~ U[-1, 1]
def orbit_pmf():
    pmf = np.zeros(NM + 1)
    for j in range(NM + 1):
        val, _ = quad(lambda u: binom.pmf(j, NM, q_of_u(u)) * 0.5, -1, 1, limit=400,
                      points=[-math.sqrt(1-c0*c0), math.sqrt(1-c0*c0)])
        pmf[j] = val
    return pmf

pmf1 = orbit_pmf()
print("per-orbit pmf:", pmf1, "sum:", pmf1.sum())
# convolve two orbits
pmf2 = np.convolve(pmf1, pmf1)
print("two-orbit pmf sum:", pmf2.sum())
N = NM * NO
print(f"{'K':>2} {'exact P(>=K)':>14} {'binomial':>12} {'delta':>10}")
for K in range(1, 9):
    exact = pmf2[K:].sum()
    approx = 1 - binom.cdf(K - 1, N, p1)
    print(f"{K:>2} {exact:>14.6f} {approx:>12.6f} {approx-exact:>10.4f}")
