import time
import numpy as np
from constelsim.config import default_config
from constelsim import analytic as an
from constelsim.mc import McSpec, simulate, run_validation, validation_csv

cfg = default_config()
t0 = time.time()
spec = McSpec(n_trials=20000, master_seed=3, k_max=6, sum_all_interferers=False)
s = simulate(cfg, spec)
print("matched-mode sim dt:", round(s.elapsed_s, 1))
probs = an.leo_rank_coverage_probs(cfg, 6)
print("rank   analytic   mc-marginal   diff      3SE(marg)")
rank_se = np.sqrt(s.leo_rank_pass*(1-s.leo_rank_pass)/spec.n_trials)
for k in range(6):
    print(f"{k+1}   {probs[k]:.5f}   {s.leo_rank_pass[k]:.5f}   {probs[k]-s.leo_rank_pass[k]:+.5f}   {3*rank_se[k]:.5f}")
print()
print("LEO loc products: analytic", np.round(np.cumprod(probs),6))
print("                  mc      ", np.round(s.leo_loc, 6), "se", np.round(s.leo_loc_se,6))
print("meo single pass: mc", s.meo_single_pass, "analytic", an.meo_single_localizability(cfg))
print("meo single avail: mc", s.meo_single_avail, "analytic", an.meo_single_availability(cfg))
hyb_an = [an.hybrid_localizability(cfg, k) for k in range(1,7)]
print("hybrid loc: analytic", np.round(hyb_an,5))
print("            mc      ", np.round(s.hybrid_loc,5), "se", np.round(s.hybrid_loc_se,5))
print("total dt:", round(time.time()-t0,1))
