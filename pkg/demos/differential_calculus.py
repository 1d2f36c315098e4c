"""Walkthrough: polynomial maps, the differential combinator, sections.

Three short acts:
  1. D[f] for a quadratic map, and the axiom checks that pin it down.
  2. Linearizing a bundle section with quadratic noise in the fibre.
  3. The fold map over N: unramified without being an immersion.
"""

from tangentcat.cdc import (
    cdc_context,
    cdc_map,
    classify_linear,
    differential,
    is_section_of,
    linearize_section,
    section_context,
    verify_cdc_axioms,
)
from tangentcat.cli import human_report
from tangentcat.polycore import NN, QQ, poly_parse


def mk(dom, n, texts, ctx=None):
    c = ctx if ctx is not None else cdc_context(n)
    return cdc_map(dom, n, tuple(poly_parse(t, c, dom) for t in texts), context=c)


# --- act one: the differential ----------------------------------------------
f = mk(QQ, 2, ("x1^2 + x2", "x1*x2"))
Df = differential(f)
print("f   =", ", ".join(str(c) for c in f.components))
print("D[f] =", ", ".join(str(c) for c in Df.components))
g = mk(QQ, 2, ("x1*x2",))
checks = verify_cdc_axioms(f, g)
print(f"axioms: {sum(c.holds for c in checks)}/{len(checks)} hold")
print()

# --- act two: a noisy section, straightened ---------------------------------
tap = mk(QQ, 2, ("x1",))
s = mk(QQ, 3, ("w1", "w1^2 + x1*w1"), ctx=section_context(2, 1))
print("section components:", ", ".join(str(c) for c in s.components))
print("is a section of theta(tap):", is_section_of(tap, s)[0])
lin = linearize_section(tap, s)
print("linearized        :", ", ".join(str(c) for c in lin.components))
print()

# --- act three: no negation, no coincidence ---------------------------------
print(human_report(classify_linear([[1, 1]], NN, name="fold")))
