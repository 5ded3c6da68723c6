#!/usr/bin/env python3
"""Advantage estimation and the published bounds.

Estimates the real-vs-ideal advantage of two distinguishers with 95%
confidence intervals, then evaluates the four security-statement bounds at
desk-scale parameters to show where they are vacuous (> 1) and where they
actually constrain the measurement.  Measured advantages are lower bounds
on insecurity: they quantify one fixed distinguisher, not the best one.
"""

from fractions import Fraction

from kafw import game
from kafw.game import ConstructionSpec, bound_formula, estimate_advantage
from kafw.gf2 import DomainParams
from kafw.schedules import builtin, random_affine

P8 = DomainParams.for_width(8)
P16 = DomainParams.for_width(16)

print("== 4-round boomerang vs fresh affine schedules (n=8, 2000 trials/world) ==")
spec = ConstructionSpec(
    P8, 4, lambda rng: random_affine(P8, 4, rng), "kafw", "permutation", single_f=False
)
est = estimate_advantage(game.boomerang4_distinguisher(), spec, 2000, base_seed=11)
print(
    f"p_real={est.p_real:.4f} p_ideal={est.p_ideal:.4f} "
    f"advantage={est.advantage:.4f} +/- {est.ci_halfwidth:.4f} "
    f"(q_e={est.mean_q_e:.0f}/trial)"
)

print("\n== Generic birthday attack vs the good 4-round schedule (n=16) ==")
spec = ConstructionSpec(P16, 4, builtin("minimal4", P16), "kafw", "function", True)
est = estimate_advantage(game.birthday_distinguisher(512, 512, 4), spec, 60, base_seed=12)
print(
    f"q_e=q_g=512: p_real={est.p_real:.3f} p_ideal={est.p_ideal:.3f} "
    f"advantage={est.advantage:.3f} +/- {est.ci_halfwidth:.3f}"
)
print("(the birthday bound is why the provable security stops at ~2^(n/2) queries)")

print("\n== Published bounds at desk scale: n=8, q_f=0, q_e=4 ==")
deltas = (Fraction(3, 256), Fraction(2, 256), Fraction(2, 256))
for theorem, d in ((1, deltas), (2, deltas), (5, None), (6, None)):
    res = bound_formula(theorem, 0, 4, 256, *(d or ()))
    tag = "VACUOUS" if res.vacuous else "live"
    print(f"theorem {theorem}: bound = {res.value} = {float(res.value):.4f}  [{tag}]")
print("Only the 4-round random-function bound stays below 1 here; the")
print("measured null-probe advantages sit far beneath it.")
