"""
Building blocks: framelets and fractional gradients
===================================================

A quick tour of the two linear operators the kernel prior is built on.
"""

import numpy as np

from framedeblur import framelet
from framedeblur.fracgrad import frac_grad, gl_coeffs

rng = np.random.default_rng(0)

# The piecewise-linear B-spline framelet is undecimated, so one level of
# analysis turns an H x W image into 9 full-size subbands.
g = rng.random((32, 32))
w = framelet.analyze(g)
print("subbands:", w.shape)

# It is a tight frame: synthesis undoes analysis and energy is preserved.
print("reconstruction error:", np.abs(framelet.synthesize(w) - g).max())
print("energy ratio:", np.sum(w**2) / np.sum(g**2))

# A delta kernel has a few large coefficients and many zeros, which is what
# an l0 penalty on framelet coefficients rewards.
delta = np.zeros((9, 9))
delta[4, 4] = 1.0
wd = framelet.analyze(delta)
print("nonzero coefficients of a delta:", np.count_nonzero(wd), "of", wd.size)

# Grunwald-Letnikov coefficients interpolate between familiar stencils.
for order in (0.5, 1.0, 1.1, 1.5):
    print(f"order {order}:", np.round(gl_coeffs(order, 4).coeffs, 4))

# Order 1 gives the plain backward difference (the first row wraps around
# periodically, hence the -1 there).
step = np.zeros((8, 8))
step[4:] = 1.0
print(frac_grad(step, gl_coeffs(1.0), "h")[:, 0])

# A fractional order spreads the response of an edge over a few pixels.
print(np.round(frac_grad(step, gl_coeffs(1.1), "h")[:, 0], 3))
