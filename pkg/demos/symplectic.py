"""Decide symplecticity for every real class and compare with printed forms.

A verdict is either a closed form with nonzero cube or the certificate that
the cubic on closed 2-forms vanishes identically.
"""

from nilmodels import canonical_model, decide_symplectic, enumerate_classes, is_symplectic_form
from nilmodels.algebra import MinimalAlgebra

PRINTED = {
    "L6_1": "x1x3+x2x6+x3x5",
    "L6_12[a=-1]": "x1x6+2*x2x5+x3x4",
    "L6_15": "x1x4+x2x6+x3x5",
    "L6_16": "x1x6+x1x5+x2x4+x3x5",
    "L6_17[a=-1]": "x1x6+x1x5+x2x4+x3x5",
}

count = 0
for lab in enumerate_classes("R", 6):
    alg = canonical_model(lab, "R")
    v = decide_symplectic(alg)
    count += v.symplectic
    print(f"{str(lab):14s} {'omega = ' + str(v.omega) if v.symplectic else v.certificate}")
print(f"\n{count} symplectic classes out of 34\n")

print("forms that do not survive a direct check:")
for label, text in PRINTED.items():
    alg = canonical_model(label, "R")
    omega = MinimalAlgebra.from_strings([text] + [""] * 5).diffs[0]
    state = "closed" if not alg.d(omega) else "not closed"
    print(f"  {label:12s} {text:22s} {state}, symplectic: {is_symplectic_form(alg, omega)}")
