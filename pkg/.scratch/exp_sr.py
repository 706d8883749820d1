import numpy as np
from scipy.integrate import quad
from constelsim.channel import SrFadingParams, sr_cdf, sr_pdf, sr_sample

p = SrFadingParams(m=19.4, b0=0.158, omega=1.29)
print("cdf(0) =", sr_cdf(p, 0.0))
print("cdf(big) =", sr_cdf(p, 1000*(p.omega + 2*p.b0)))
print("cdf(1) =", sr_cdf(p, 1.0))
val, err = quad(lambda w: sr_pdf(p, w), 0, 1.0, epsabs=1e-12, epsrel=1e-10, limit=200)
print("quad pdf [0,1] =", val, "diff:", abs(val - sr_cdf(p, 1.0)))
norm, err = quad(lambda w: sr_pdf(p, w), 0, np.inf, epsabs=1e-12, epsrel=1e-10, limit=200)
print("pdf normalization =", norm, "err est", err)
# finite differences
for w in (0.1, 0.5, 1.0, 2.0):
    h = 1e-6
    fd = (sr_cdf(p, w + h) - sr_cdf(p, w - h)) / (2 * h)
    pd = sr_pdf(p, w)
    print(f"w={w}: fd={fd:.10g} pdf={pd:.10g} rel={abs(fd-pd)/pd:.2e}")
# sampler moments
rng = np.random.default_rng(7)
draws = sr_sample(p, rng, size=1_000_000)
print("sample mean:", draws.mean(), "expected:", p.mean_power)
# quick KS
from scipy.stats import kstest
stat = kstest(draws[:200000], lambda w: sr_cdf(p, w)).statistic
print("KS stat (2e5 draws):", stat)
# omega=0 reduces to exponential mean 2 b0
p0 = SrFadingParams(m=19.4, b0=0.158, omega=0.0)
w = 0.37
import math
print("omega=0 cdf:", sr_cdf(p0, w), "exp:", 1 - math.exp(-w/(2*0.158)))
print("omega=0 pdf:", sr_pdf(p0, w), "exp:", math.exp(-w/(2*0.158))/(2*0.158))
