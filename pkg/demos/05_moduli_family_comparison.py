"""Distinguishing local-unitary orbits by exact plane-cubic moduli.

Two members of the cyclic family with t^3 = 27 and s^3 = -27 are globally
unitarily equivalent - identical spectra, identical reduced spectra,
identical entropies.  Every spectral invariant is blind to the difference.
The variety is not: its cubic reduces to a Hesse form whose moduli value
K(lambda^3) = lambda^3 (lambda^3 + 216)^3 / (27 - lambda^3)^3 is an exact
rational, and the two values differ.
"""

from fractions import Fraction

from detvar import ExactComplex, entropy_and_spectra, hesse_reduce, lu_compare, moduli_value
from detvar.catalog import cyclic_cubic_state
from detvar.variety import variety_of_state

EC = ExactComplex

left = cyclic_cubic_state(EC(27))    # t = 3*omega enters only through t^3
right = cyclic_cubic_state(EC(-27))  # s = -3

sa = entropy_and_spectra(left)
sb = entropy_and_spectra(right)
print("global spectra deviation:",
      max(abs(x - y) for x, y in zip(sa.spectrum, sb.spectrum)))
print("entropies:", round(sa.entropy, 12), "vs", round(sb.entropy, 12))

for name, st in (("t^3=27", left), ("s^3=-27", right)):
    g = variety_of_state(st).essential_generators[0]
    h = hesse_reduce(g)
    print(f"{name}: lambda^3 = {h.lambda_cubed.render()},",
          f"K = {moduli_value(h).render()}")

cmp = lu_compare(Fraction(27), Fraction(-27))
print("verdict:", cmp.verdict)
