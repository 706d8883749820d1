import time
import numpy as np
from constelsim.config import default_config, load_settings, build_system_config
from constelsim import analytic as an

cfg = default_config()
t0 = time.time()
probs = an.leo_rank_coverage_probs(cfg, 6)
print("leo rank probs:", np.round(probs, 6), "dt", round(time.time()-t0, 2))
print("leo_localizability(6):", float(np.prod(probs)))
# availability-only counterparts for comparison (gamma->0 limit would equal these)
from scipy.stats import binom
p = (1-np.cos(cfg.leo_theta_max))/2
tails = [binom.sf(k-1, cfg.leo.n_sats, p) for k in range(1,7)]
print("avail tails:     ", np.round(tails, 6))

t0 = time.time()
p1c = an.meo_single_localizability(cfg)
print("meo_single_localizability:", p1c, "vs avail", 0.3792044, "dt", round(time.time()-t0,2))
t0 = time.time()
print("meo_localizability(4):", an.meo_localizability(cfg, 4), "dt", round(time.time()-t0,2))
t0 = time.time()
print("hybrid_localizability(6):", an.hybrid_localizability(cfg, 6), "dt", round(time.time()-t0,2))

# h_L = 2000 case (interference-dominated)
s = load_settings(overrides={"leo.altitude_km": "2000"})
cfg2 = build_system_config(s)
t0 = time.time()
probs2 = an.leo_rank_coverage_probs(cfg2, 6)
print("h2000 rank probs:", np.round(probs2, 6), "dt", round(time.time()-t0, 2))
p2 = (1-np.cos(cfg2.leo_theta_max))/2
tails2 = [binom.sf(k-1, cfg2.leo.n_sats, p2) for k in range(1,7)]
print("h2000 avail tails:", np.round(tails2, 6))
