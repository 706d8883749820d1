import math, time
import numpy as np
from scipy.integrate import quad
from constelsim.config import default_config
from constelsim import analytic as an

cfg = default_config()
spec = an.QuadratureSpec(1e-7, 1e-12, 200)
mix = an.interference_mixture(cfg, 0.03, spec)
scale = mix.watts_per_fading
print("watts_per_fading:", scale)
t0 = time.time()
# log substitution: I = exp(u), dI = exp(u) du
val, err = quad(lambda u: mix.conditional_density(math.exp(u)) * math.exp(u),
                math.log(scale) - 25, math.log(scale) + 6, limit=300)
print("normalization:", val, "err", err, "dt", time.time() - t0)
