"""The separability criterion in action.

A separable state's variety must be a union of linear subspaces.  The
contrapositive certifies entanglement: find a smooth point whose tangent
space leaves the variety and no union of linear subspaces can cut it out.

Only the witness is a certificate.  Linear or inconclusive outcomes say
nothing - linearity is necessary, not sufficient, for separability.
"""

from detvar import ExactComplex, linearity_decide
from detvar.catalog import cyclic_cubic_state, maximally_mixed
from detvar.states import random_separable
from detvar.variety import variety_of_state

EC = ExactComplex

# a smooth cubic curve: no union of lines can produce it
v = variety_of_state(cyclic_cubic_state(EC(8)))
verdict = linearity_decide(v, seed=42)
print("cyclic family t=2:", verdict.tag, "->", verdict.conclusion)
print("  witness residual:", f"{verdict.residual:.3e}")
print("  witness point:", [complex(round(z.real, 4), round(z.imag, 4))
                           for z in verdict.point])

# a separable state: the determinant splits into linear forms, exactly
sep = random_separable(3, 3, 3, seed=5)
verdict_sep = linearity_decide(variety_of_state(sep), seed=42)
print("separable 3x3:", verdict_sep.tag, "->", verdict_sep.conclusion)
for f in verdict_sep.forms:
    print("  factor:", f.render())

# the maximally mixed state: empty variety, criterion silent
verdict_mm = linearity_decide(variety_of_state(maximally_mixed(3, 3)))
print("maximally mixed:", verdict_mm.tag, "->", verdict_mm.conclusion)
