"""First oracle pass over the analytic module at baseline defaults."""
import math, time
import numpy as np
from constelsim.config import default_config
from constelsim import analytic as an

cfg = default_config()
print("theta_L_max:", cfg.leo_theta_max, " (expect ~0.06615)")
print("theta_M_max:", cfg.meo_theta_max, " (expect 1.3268)")
print("d_M_max:", cfg.meo_d_max_km, " (expect ~25590)")

print("leo_availability(3):", an.leo_availability(cfg, 3), "(expect ~0.37)")
t0 = time.time()
p1 = an.meo_single_availability(cfg)
print("meo_single_availability:", p1, "(expect 0.379204...)", "dt", time.time()-t0)
print("  identity (1-cos)/2 =", (1-math.cos(cfg.meo_theta_max))/2)
print("n_meo_max:", an.n_meo_max(cfg), "(expect 9)")
for K in (1,2,3,4,5,6):
    print("K:", K, "meo_avail:", round(an.meo_availability(cfg,K),6),
          "hybrid_avail:", round(an.hybrid_availability(cfg,K),6))

# p_zero at defaults
mix = an.interference_mixture(cfg, serving_angle=0.03)
print("theta_d_max:", mix.theta_d_max, "(expect ~0.0597)")
print("p_zero:", mix.p_zero, "(expect ~0.168)")

# conditional density normalization (coarse spec for speed here)
spec = an.QuadratureSpec(1e-6, 1e-10, 200)
from scipy.integrate import quad
t0 = time.time()
norm, err = quad(lambda i: an.interference_mixture(cfg, 0.03, spec).conditional_density(i), 0, np.inf, limit=200)
print("conditional density normalization:", norm, "err", err, "dt", time.time()-t0)
