"""Why the naive Wiener-amalgam convolution relation fails, numerically.

Two concrete computations:

1. On the real line, with Y = L^1_w for w(x) = e^x, translate a unit box to
   T and its mirror to -T-1.  Both amalgam factors decay like e^{-T}, but the
   convolution keeps a fixed amount of mass near the origin, so the empirical
   constant of the would-be relation grows like e^{2T} - there is no finite
   constant.

2. On the affine group, the window e^{-|x|} min(a^alpha, a^{-beta}) has a
   finite amalgam norm, but the self-convolution f^vee * f decays only like
   a^{-beta} along the scale axis, so its amalgam norm over scales in [1, B]
   grows like B^{1-beta}: the convolution leaves the space entirely.
"""

import numpy as np

from coorbitkit import experiments as ex

print("=" * 70)
print("Real line: empirical constant of the convolution relation")
print("=" * 70)
report = ex.run_counterexample_realline(t_list=(1.0, 2.0, 3.0),
                                        half_width=12.0, step=0.005)
for row in report.curves["ratio"]:
    t = row["parameter"]
    print(f"  T = {t:g}:  ratio = {row['value']:10.3f}   (e^(2T) = {np.exp(2 * t):10.3f})")
growth = next(m for m in report.metrics if m.name == "ratio_growth")
print(f"  growth R(3)/R(1) = {growth.value:.2f}, predicted e^4 = {np.exp(4):.2f}")

print()
print("=" * 70)
print("Affine group: the self-convolution escapes the amalgam space")
print("=" * 70)
report = ex.run_counterexample_affine()
for row in report.curves["selfconv"]:
    a = row["parameter"]
    print(f"  (f_vee * f)(0, {a:g}) = {row['value']:.4f}   "
          f">= lower bound {row['bound']:.4f}")
for row in report.curves["partial_norm"]:
    print(f"  partial amalgam norm up to B = {row['parameter']:g}: {row['value']:.2f}")
ratio = next(m for m in report.metrics if m.name == "norm_growth_ratio")
print(f"  norm growth ratio = {ratio.value:.3f} (diverges like B^(1/2) as B grows)")
print()
print("all pass flags:", report.all_pass)
