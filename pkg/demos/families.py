"""How the four one-parameter families behave as the field changes.

Over Q each nonsquare parameter class gives its own homotopy type; over R
only the sign survives; over C everything collapses.
"""

from nilmodels import classify, family_member

params = [-1, 2, 3, 5, -6, 4, 0]
for name in ("L6_2", "L6_8", "L6_12", "L6_17"):
    print(name)
    for a in params:
        alg = family_member(name, a)
        row = [str(classify(alg, mode).label) for mode in ("Q", "R", "C")]
        print(f"  a={a:>3}:  Q {row[0]:16s} R {row[1]:16s} C {row[2]}")
    print()

# A scrambled model: the classifier still recovers the class and hands back the basis change.
from nilmodels import scramble  # noqa: E402

alg, g = scramble(family_member("L6_2", 12), seed="demo")
res = classify(alg)
print("scrambled L6_2 with a=12 ->", res.label)
print("witness rows (new generators in old ones):")
for row in res.matrix:
    print("  ", " ".join(f"{str(x):>6s}" for x in row))
assert alg.change_basis(res.matrix) == res.target
