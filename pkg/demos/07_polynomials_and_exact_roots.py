"""The symbolic engine underneath: sparse polynomials, exact roots, factors.

The load-bearing primitive is complete Gaussian-rational root finding for
univariate polynomials: Sturm isolation plus a Stern-Brocot denominator
search on the real axis, lifted to Q(i) through a real/imaginary split and
a Sylvester resultant.  No floating point, no integer factorization, and
"no root" comes back as a certificate rather than a shrug.
"""

from fractions import Fraction

from detvar import ExactComplex, Poly, linear_factorization, symbolic_det, univariate_roots
from detvar.exactroots import gaussian_rational_roots, rational_roots
from detvar.factorization import split_linear_approx

EC = ExactComplex
F = Fraction

# complete rational root finding, multiplicities included
# (97x - 31)(x^2 + 1) = 97x^3 - 31x^2 + 97x - 31, ascending coefficients:
print("rational roots of (97x - 31)(x^2 + 1):",
      [(str(r), m) for r, m in rational_roots([F(-31), F(97), F(-31), F(97)])])

# Q(i) roots: z^2 + 2i = (z - (1-i))(z + (1-i))
roots = gaussian_rational_roots([EC(0, 2), EC(0), EC(1)])
print("roots of z^2 + 2i:", [(z.render(), m) for z, m in roots])

# a symbolic determinant and its factor structure
x, y, z = (Poly.variable(i, 3) for i in range(3))
fermat = x ** 3 + y ** 3 + z ** 3 - (x * y * z).scale(3)
fl = linear_factorization(fermat)
print("\nx^3 + y^3 + z^3 - 3xyz:")
print("  rational factor:", fl.linear_factors[0].render())
print("  residual:", fl.residual.render())
print("  re-multiplies exactly:", fl.remultiply(3) == fermat)

unit, forms = split_linear_approx(fermat)
print("  numeric full split into", len(forms), "lines (the other two need a",
      "cube root of unity)")

# numeric univariate roots, for the sampling pathway
print("\nAberth roots of z^3 - 1:",
      [complex(round(r.real, 9), round(r.imag, 9)) for r in univariate_roots([-1, 0, 0, 1])])
