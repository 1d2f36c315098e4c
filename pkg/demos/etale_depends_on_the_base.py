"""Walkthrough: the same quotient map classified over two bases.

Take R = Q[t] and the quotient B = R/(t^2).  Viewed as an R-algebra map
the comparison map of cotangent modules is an isomorphism of zero
modules, so every predicate holds -- the map is tangent-etale.  Viewed
over Q the differential dt survives in the source but dies in the
target, so the map is an immersion and nothing epi-flavoured holds.

The report still annotates the relative case: the Jacobian splitting
criterion fails for the presentation R/(t^2), which is exactly the gap
between tangent-etale and formally etale.
"""

from tangentcat.classify import classify_affine
from tangentcat.cli import human_report
from tangentcat.kahler import kahler_module, relative_kahler, zero_module_evidence
from tangentcat.polycore import QQ, context, poly_parse
from tangentcat.presentations import free_algebra, morphism, present

T = context("t")

# absolute picture: Q[t] -> Q[t]/(t^2)
A = free_algebra(QQ, ("t",))
B = present(QQ, ("t",), (poly_parse("t^2", T, QQ),))
trunc = morphism(A, B, (poly_parse("t", T, QQ),))

omega_B = kahler_module(B)
print("Omega of Q[t]/(t^2): generators", ", ".join(omega_B.labels),
      "with relations", [[str(c) for c in row] for row in omega_B.relations])
zero, ev = zero_module_evidence(relative_kahler(trunc))
print("relative differentials vanish:", zero, ev)
print()
print(human_report(classify_affine(trunc, name="trunc")))
print()

# relative picture: the same quotient presented over the base R = Q[t]
R = free_algebra(QQ, ("t",))
AR = present(QQ, (), (), base=R)
BR = present(QQ, (), (poly_parse("t^2", T, QQ),), base=R)
qrel = morphism(AR, BR, (), over_base=True)

print(human_report(classify_affine(qrel, name="qrel", base_name="R")))
