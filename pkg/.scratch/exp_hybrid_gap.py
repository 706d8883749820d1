"""Hybrid availability: convolution with exact MEO mixture vs binomial."""
import numpy as np, math
from scipy.integrate import quad
from scipy.stats import binom

Re, Rm, Rl = 6371.0, 26371.0, 7371.0
c0 = Re/Rm
p1 = (1 - c0)/2
NM, NO = 6, 2
N = NM*NO

def q_of_u(u):
    s = math.sqrt(1-u*u)
    return 0.0 if s <= c0 else math.acos(c0/s)/math.pi

pmf1 = np.array([quad(lambda u: binom.pmf(j, NM, q_of_u(u))*0.5, -1, 1, limit=400,
                 points=[-math.sqrt(1-c0*c0), math.sqrt(1-c0*c0)])[0] for j in range(NM+1)])
pmf_mix = np.convolve(pmf1, pmf1)
pmf_bin = binom.pmf(np.arange(N+1), N, p1)

# LEO at Table 2 defaults
half = math.pi/8
theta_L = math.asin(math.sin(half)/(Re/Rl)) - half
pL = (1 - math.cos(theta_L))/2
NL = 2000
print("theta_L:", theta_L, "pL:", pL, "mean:", NL*pL)

def hybrid_tail(K, pmf_m):
    # exact: P(n_L + n_M >= K)
    total = 0.0
    for k, pm in enumerate(pmf_m):
        if k >= K:
            total += pm
        else:
            total += pm * (1 - binom.cdf(K-k-1, NL, pL))
    return total

print(f"{'K':>2} {'mix(true)':>10} {'bin(thm)':>10} {'delta':>9}")
for K in range(1, 7):
    t_mix = hybrid_tail(K, pmf_mix)
    t_bin = hybrid_tail(K, pmf_bin)
    print(f"{K:>2} {t_mix:>10.5f} {t_bin:>10.5f} {t_bin-t_mix:>9.5f}")
