"""The central supertile is a rotated, dilated copy of the central tile."""
import cmath
import math

from pentatile import pack_complex, estimate_lambda, skeleton_nesting_error
from pentatile.geometry import LAMBDA_EXACT

print("target |lambda| = %.5f, arg = 36 deg" % abs(LAMBDA_EXACT))
for n in (2, 3):
    for m in range(4):
        p = pack_complex(n, m)
        lam = estimate_lambda(p)
        err = skeleton_nesting_error(p, lam)
        print(f"n={n} m={m}  |lambda|={lam.modulus:.4f}  arg={math.degrees(lam.argument):7.3f}"
              f"  fit rms={lam.fit_residual:.1e}  nesting={err:.4f}")

# lambda^5 should be real and negative
lam = estimate_lambda(pack_complex(3, 3)).value
print("lambda^5 =", lam ** 5, " arg", round(math.degrees(cmath.phase(lam ** 5)), 2))
