import numpy as np
from scipy.stats import binom
from constelsim.mc import _compose_localizability

rank = np.array([0.63555, 0.39435, 0.22720, 0.10680, 0.04155, 0.01590])
p1c = 0.3681916666666667
pmf = binom.pmf(np.arange(13), 12, p1c)
out = _compose_localizability(rank, pmf, [1,2,3,4,5,6], cutoff=9)
print("composite:", np.round(out, 5))
# manual K=1
lp = np.concatenate([[1.0], np.cumprod(rank)])
manual = pmf[0]*lp[1] + pmf[1:10].sum()
print("manual K=1:", manual)
