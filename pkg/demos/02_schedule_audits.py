#!/usr/bin/env python3
"""Key-schedule goodness audits.

Measures the exact uniformity / XOR-universality / cross-uniformity counts
of the field-cubic reference schedule, and runs the affine bijectivity and
matrix-difference conditions on the good and the deliberately bad 6-round
instances.
"""

from kafw.auditor import (
    check_corollary1_affine,
    check_corollary1_nl,
    check_definition1,
    check_definition3,
)
from kafw.gf2 import DomainParams
from kafw.schedules import builtin

P8 = DomainParams.for_width(8)

print("== Non-linear 4-round audits (exact counts, exhaustive over all 256 keys) ==")
for name, check in (("minimal4", check_corollary1_nl), ("tweakem4", check_definition1)):
    rep = check(builtin(name, P8))
    print(
        f"{name:10s} delta1*N={rep.delta1_times_n} delta2*N={rep.delta2_times_n} "
        f"delta3*N={rep.delta3_times_n} good_like={rep.good_like}"
    )
print("reference bounds for this construction family: (3, 2, 2)")

print("\n== Affine 6-round audits ==")
for name in ("ortho6", "filled6", "identity_bad(6)"):
    s = builtin(name, P8)
    rep = check_definition3(s) if name != "filled6" else check_corollary1_affine(s)
    witnesses = {
        label: ("invertible" if w is None else f"{w:02x}")
        for label, w in rep.kernel_witnesses.items()
    }
    print(f"{name:16s} passed={rep.passed} bijective={rep.phi_bijectivity} {witnesses}")

print("\nA failing audit emits a concrete witness offset: any difference it")
print("names is mapped identically by the paired round-key matrices, which is")
print("exactly the handle the related-key attacks need.")
