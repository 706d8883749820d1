import time
import numpy as np
from constelsim.config import default_config, load_settings, build_system_config
from constelsim import analytic as an
from constelsim.mc import McSpec, simulate

cfg = default_config()
spec = McSpec(n_trials=20000, master_seed=5, k_max=6, sum_all_interferers=True)
t0 = time.time()
s = simulate(cfg, spec)
print("all-interferer sim dt:", round(s.elapsed_s,1))
probs = an.leo_rank_coverage_probs(cfg, 6)
print("rank  analytic  mc-marg   bias(an-mc)")
for k in range(6):
    print(f"{k+1}  {probs[k]:.5f}  {s.leo_rank_pass[k]:.5f}  {probs[k]-s.leo_rank_pass[k]:+.5f}")
print("LEO loc:  analytic", np.round(np.cumprod(probs),6))
print("          mc      ", np.round(s.leo_loc,6))
hyb_an = [an.hybrid_localizability(cfg, k) for k in range(1,7)]
meo_an = [an.meo_localizability(cfg, k) for k in range(1,7)]
print("MEO loc:  analytic", np.round(meo_an,5))
print("          mc      ", np.round(s.meo_loc,5), "(joint count tail)")
print("HYB loc:  analytic", np.round(hyb_an,5))
print("          mc      ", np.round(s.hybrid_loc,5), "se", np.round(s.hybrid_loc_se,5))
print("deltas   ", np.round(np.array(hyb_an)-s.hybrid_loc,5))
# availability check
av_an = {
 "leo": [an.leo_availability(cfg,k) for k in range(1,7)],
 "meo": [an.meo_availability(cfg,k) for k in range(1,7)],
 "hyb": [an.hybrid_availability(cfg,k) for k in range(1,7)]}
print("avail deltas leo:", np.round(np.array(av_an["leo"])-s.leo_avail,5))
print("avail deltas meo:", np.round(np.array(av_an["meo"])-s.meo_avail,5))
print("avail deltas hyb:", np.round(np.array(av_an["hyb"])-s.hybrid_avail,5))
print("meo_single_avail:", s.meo_single_avail)
print("dt:", round(time.time()-t0,1))

# h_L = 2000 bias-sign config
s2k = load_settings(overrides={"leo.altitude_km": "2000"})
cfg2 = build_system_config(s2k)
t0 = time.time()
s2 = simulate(cfg2, McSpec(n_trials=20000, master_seed=5, k_max=6, sum_all_interferers=True))
probs2 = an.leo_rank_coverage_probs(cfg2, 6)
print("\nh2000: LEO loc analytic", np.round(np.cumprod(probs2),5))
print("h2000: LEO loc mc      ", np.round(s2.leo_loc,5))
print("h2000 bias (an-mc):", np.round(np.cumprod(probs2)-s2.leo_loc,5), "dt", round(time.time()-t0,1))
