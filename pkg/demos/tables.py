"""Print every six-dimensional class over a chosen field with its invariants.

    python3 demos/tables.py [Q|R|C|F3|F5|F7]
"""

import sys

from nilmodels import canonical_model, decide_symplectic, enumerate_classes
from nilmodels.symplectic import UnsupportedMode

mode = sys.argv[1] if len(sys.argv) > 1 else "R"
labels = enumerate_classes(mode, 6)
print(f"{len(labels)} classes over {mode}\n")
for lab in labels:
    # a symbolic Q family is shown through one nonsquare member
    alg = canonical_model(f"{lab.name}[a=-1]" if lab.symbolic else lab, mode)
    try:
        sym = "symplectic" if decide_symplectic(alg).symplectic else "-"
    except UnsupportedMode:
        sym = "?"
    print(f"{str(lab):16s} f={alg.filtration.signature!s:12s} betti={alg.betti}  "
          f"{sym:10s}  {', '.join(r for r in alg.rows() if r != '0')}")
