"""Exact Gaussian-rational and approximate complex scalars.

Every quantity in the package travels one of two pathways:

* exact  -- ``ExactComplex``, a complex number with ``Fraction`` real and
  imaginary parts.  Field arithmetic in Q(i) is exact; ``Fraction`` keeps
  denominators positive and reduced, so values are always canonical.
* approx -- plain ``complex`` (binary64 components).

``Tolerance`` is the single knob for every floating comparison downstream;
no other module defines its own epsilon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DivisionByZero

RationalLike = Union[int, Fraction]


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class ExactComplex:
    """Element of Q(i): ``re + im*i`` with arbitrary-precision rationals."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _as_fraction(re))
        object.__setattr__(self, "im", _as_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("ExactComplex is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def coerce(x) -> "ExactComplex":
        if isinstance(x, ExactComplex):
            return x
        if isinstance(x, (int, Fraction)):
            return ExactComplex(x)
        raise TypeError(f"cannot coerce {x!r} to ExactComplex")

    @staticmethod
    def parse(text: str) -> "ExactComplex":
        """Parse a rational literal like ``"3/4"`` (no imaginary part)."""
        return ExactComplex(Fraction(text.strip()))

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        other = ExactComplex.coerce(other)
        return ExactComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = ExactComplex.coerce(other)
        return ExactComplex(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return ExactComplex.coerce(other) - self

    def __neg__(self):
        return ExactComplex(-self.re, -self.im)

    def __mul__(self, other):
        other = ExactComplex.coerce(other)
        return ExactComplex(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def inverse(self) -> "ExactComplex":
        n = self.norm_sq()
        if n == 0:
            raise DivisionByZero("inverse of exact zero")
        return ExactComplex(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * ExactComplex.coerce(other).inverse()

    def __rtruediv__(self, other):
        return ExactComplex.coerce(other) * self.inverse()

    def conjugate(self) -> "ExactComplex":
        return ExactComplex(self.re, -self.im)

    def norm_sq(self) -> Fraction:
        """|z|^2, exact."""
        return self.re * self.re + self.im * self.im

    # -- predicates / conversion ---------------------------------------

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, ExactComplex):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    def __repr__(self):
        if self.im == 0:
            return f"ExactComplex({self.re})"
        return f"ExactComplex({self.re}, {self.im})"

    def render(self) -> str:
        """Human-readable ``a/b + c/d*i`` form used in reports."""
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re} {sign} {abs(self.im)}*i"


EC_ZERO = ExactComplex(0)
EC_ONE = ExactComplex(1)
EC_I = ExactComplex(0, 1)


def exact_field_ops(a: ExactComplex, b: ExactComplex, op: str) -> ExactComplex:
    """Dispatch-style entry point over {add, sub, mul, div, conj, inv}.

    Operator syntax on ExactComplex is the normal way to compute; this
    exists as the explicitly named surface (conj/inv ignore ``b``).
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "conj":
        return a.conjugate()
    if op == "inv":
        return a.inverse()
    raise ValueError(f"unknown op {op!r}")


@dataclass(frozen=True)
class Tolerance:
    """Single tolerance policy for every floating comparison.

    abs_eps/rel_eps feed ``approx_close``; eig_cutoff separates numerical
    zero eigenvalues (and leading coefficients) from real ones.
    """

    abs_eps: float = 1e-9
    rel_eps: float = 1e-9
    eig_cutoff: float = 1e-10

    def __post_init__(self):
        if not (self.abs_eps > 0 and self.rel_eps > 0 and self.eig_cutoff > 0):
            raise ValueError("tolerance fields must be strictly positive")


DEFAULT_TOL = Tolerance()


def approx_close(a: complex, b: complex, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff |a-b| <= abs_eps + rel_eps*max(|a|,|b|)."""
    a = complex(a)
    b = complex(b)
    if not (math.isfinite(a.real) and math.isfinite(a.imag)
            and math.isfinite(b.real) and math.isfinite(b.imag)):
        raise ValueError("approx_close requires finite inputs")
    return abs(a - b) <= tol.abs_eps + tol.rel_eps * max(abs(a), abs(b))
