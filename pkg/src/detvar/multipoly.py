"""Sparse multivariate polynomials over exact Gaussian rationals.

Terms live in a dict keyed by exponent vector; no zero coefficient is ever
stored.  The monomial order is graded lexicographic throughout (fixed, so
output renders deterministically and golden files diff cleanly).

An approximate pathway (kind="approx", python complex coefficients) exists
for numeric pencils; exact division and fraction-free elimination are
reserved for the exact kind.
"""

from __future__ import annotations

import cmath
import math
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    ArityMismatch,
    BadOrder,
    DegenerateLeadingCoefficient,
    DivisionByZero,
    NoConvergence,
    NonSquare,
    ZeroDirection,
)
from .scalars import DEFAULT_TOL, EC_ONE, EC_ZERO, ExactComplex, Tolerance

Exponents = Tuple[int, ...]


def _coerce_coeff(c, kind: str):
    if kind == "exact":
        return ExactComplex.coerce(c)
    return complex(c)


def _is_zero_coeff(c, kind: str) -> bool:
    if kind == "exact":
        return c.is_zero()
    return c == 0


def grlex_key(exps: Exponents):
    return (sum(exps), exps)


class Poly:
    """Sparse polynomial; immutable by convention."""

    __slots__ = ("nvars", "kind", "terms")

    def __init__(self, nvars: int, terms: Dict[Exponents, object], kind: str = "exact"):
        clean = {}
        for e, c in terms.items():
            if len(e) != nvars:
                raise ArityMismatch(f"exponent vector {e} does not have {nvars} entries")
            if not _is_zero_coeff(c, kind):
                clean[tuple(e)] = c
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(nvars: int, kind: str = "exact") -> "Poly":
        return Poly(nvars, {}, kind)

    @staticmethod
    def const(nvars: int, c, kind: str = "exact") -> "Poly":
        return Poly(nvars, {tuple([0] * nvars): _coerce_coeff(c, kind)}, kind)

    @staticmethod
    def variable(i: int, nvars: int, kind: str = "exact") -> "Poly":
        e = [0] * nvars
        e[i] = 1
        one = EC_ONE if kind == "exact" else 1 + 0j
        return Poly(nvars, {tuple(e): one}, kind)

    @staticmethod
    def univariate(coeffs: Sequence, kind: str = "exact") -> "Poly":
        """Ascending coefficient list -> polynomial in one variable."""
        return Poly(1, {(k,): _coerce_coeff(c, kind) for k, c in enumerate(coeffs)}, kind)

    # -- basic queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, i: int) -> int:
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def used_vars(self) -> List[int]:
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(i)
        return sorted(used)

    def leading(self) -> Tuple[Exponents, object]:
        """Leading (exponents, coeff) in graded lex order."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def coeff(self, exps: Exponents):
        zero = EC_ZERO if self.kind == "exact" else 0j
        return self.terms.get(tuple(exps), zero)

    def sorted_terms(self) -> List[Tuple[Exponents, object]]:
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    # -- ring operations -----------------------------------------------------

    def _require_same_ring(self, other: "Poly"):
        if self.nvars != other.nvars:
            raise ArityMismatch(f"nvars mismatch: {self.nvars} vs {other.nvars}")
        if self.kind != other.kind:
            raise ArityMismatch("mixed exact/approx polynomial arithmetic")

    def __add__(self, other: "Poly") -> "Poly":
        self._require_same_ring(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                out[e] = out[e] + c
            else:
                out[e] = c
        return Poly(self.nvars, out, self.kind)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()}, self.kind)

    def scale(self, c) -> "Poly":
        c = _coerce_coeff(c, self.kind)
        if _is_zero_coeff(c, self.kind):
            return Poly.zero(self.nvars, self.kind)
        return Poly(self.nvars, {e: v * c for e, v in self.terms.items()}, self.kind)

    def __mul__(self, other: "Poly") -> "Poly":
        self._require_same_ring(other)
        out: Dict[Exponents, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                prod = c1 * c2
                if e in out:
                    out[e] = out[e] + prod
                else:
                    out[e] = prod
        return Poly(self.nvars, out, self.kind)

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative polynomial power")
        result = Poly.const(self.nvars, 1, self.kind)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return (self.nvars, self.kind, self.terms) == (other.nvars, other.kind, other.terms)

    def __hash__(self):
        return hash((self.nvars, self.kind, tuple(sorted(self.terms.items(), key=lambda t: t[0]))))

    # -- calculus / evaluation -------------------------------------------------

    def derivative(self, i: int) -> "Poly":
        out: Dict[Exponents, object] = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            e2 = list(e)
            e2[i] -= 1
            out[tuple(e2)] = c * e[i]
        return Poly(self.nvars, out, self.kind)

    def evaluate(self, point: Sequence):
        """Exact when both the poly and the point are exact, else complex."""
        exact = self.kind == "exact" and all(isinstance(x, ExactComplex) for x in point)
        if exact:
            acc = EC_ZERO
            for e, c in self.terms.items():
                term = c
                for i, k in enumerate(e):
                    for _ in range(k):
                        term = term * point[i]
                acc = acc + term
            return acc
        pt = [x.to_complex() if isinstance(x, ExactComplex) else complex(x) for x in point]
        acc = 0j
        for e, c in self.terms.items():
            cv = c.to_complex() if isinstance(c, ExactComplex) else c
            term = cv
            for i, k in enumerate(e):
                if k:
                    term *= pt[i] ** k
            acc += term
        return acc

    def evaluation_scale(self, point: Sequence) -> float:
        """Sum of |coeff * monomial| at the point: the natural magnitude
        against which a near-zero evaluation should be judged."""
        pt = [x.to_complex() if isinstance(x, ExactComplex) else complex(x) for x in point]
        acc = 0.0
        for e, c in self.terms.items():
            cv = abs(c.to_complex() if isinstance(c, ExactComplex) else c)
            for i, k in enumerate(e):
                if k:
                    cv *= abs(pt[i]) ** k
            acc += cv
        return acc

    def to_approx(self) -> "Poly":
        if self.kind == "approx":
            return self
        return Poly(self.nvars, {e: c.to_complex() for e, c in self.terms.items()}, "approx")

    # -- exact division ----------------------------------------------------------

    def exact_div(self, q: "Poly") -> "Poly":
        """Exact quotient self/q; raises DivisionByZero / ValueError if q is
        zero or does not divide self.  Leading-term elimination in graded
        lex order, valid precisely because the division is exact."""
        self._require_same_ring(q)
        if self.kind != "exact":
            raise TypeError("exact_div on approx polynomials")
        if q.is_zero():
            raise DivisionByZero("polynomial division by zero")
        if self.is_zero():
            return Poly.zero(self.nvars, self.kind)
        lead_q, cq = q.leading()
        rem = dict(self.terms)
        quot: Dict[Exponents, object] = {}
        while rem:
            e = max(rem, key=grlex_key)
            diff = tuple(a - b for a, b in zip(e, lead_q))
            if any(d < 0 for d in diff):
                raise ValueError("polynomial division is not exact")
            c = rem[e] / cq
            quot[diff] = c
            for e2, c2 in q.terms.items():
                tgt = tuple(a + b for a, b in zip(diff, e2))
                val = rem.get(tgt, EC_ZERO) - c * c2
                if val.is_zero():
                    rem.pop(tgt, None)
                else:
                    rem[tgt] = val
        return Poly(self.nvars, quot, self.kind)

    def divides_into(self, p: "Poly") -> Optional["Poly"]:
        """p / self when the division is exact, else None."""
        try:
            return p.exact_div(self)
        except ValueError:
            return None

    # -- rendering ------------------------------------------------------------

    def render(self, names: Optional[Sequence[str]] = None) -> str:
        """Canonical graded-lex text form: "coeff*r1^a*r2^b" joined by " + "."""
        if not self.terms:
            return "0"
        if names is None:
            names = [f"r{i + 1}" for i in range(self.nvars)]
        parts = []
        for e, c in self.sorted_terms():
            if self.kind == "exact":
                cs = c.render()
                if ("+" in cs[1:]) or ("-" in cs[1:]) or "i" in cs:
                    cs = f"({cs})"
            else:
                cs = repr(c)
            monos = [f"{names[i]}^{k}" for i, k in enumerate(e) if k]
            parts.append("*".join([cs] + monos))
        return " + ".join(parts)

    def __repr__(self):
        return f"Poly({self.render()})"


# ---------------------------------------------------------------------------
# Linear forms
# ---------------------------------------------------------------------------

class LinearForm:
    """a_1 x_1 + ... + a_k x_k + constant, normalized so the first nonzero
    coefficient is 1 (the constant alone is never a valid form)."""

    __slots__ = ("coefficients", "constant", "nvars")

    def __init__(self, coefficients: Sequence, constant=0, normalize: bool = True):
        def conv(c):
            if isinstance(c, (float, complex)) and not isinstance(c, bool):
                return complex(c)
            return ExactComplex.coerce(c)

        coeffs = [conv(c) for c in coefficients]
        const = conv(constant)
        if any(isinstance(c, complex) for c in coeffs) or isinstance(const, complex):
            coeffs = [c.to_complex() if isinstance(c, ExactComplex) else c for c in coeffs]
            const = const.to_complex() if isinstance(const, ExactComplex) else const
        if normalize:
            lead = next((c for c in coeffs if not _is_lf_zero(c)), None)
            if lead is None:
                raise ValueError("linear form needs a nonzero coefficient")
            inv = (1.0 / lead) if isinstance(lead, complex) else lead.inverse()
            coeffs = [c * inv for c in coeffs]
            const = const * inv
        object.__setattr__(self, "coefficients", tuple(coeffs))
        object.__setattr__(self, "constant", const)
        object.__setattr__(self, "nvars", len(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("LinearForm is immutable")

    @property
    def kind(self) -> str:
        return "approx" if isinstance(self.constant, complex) else "exact"

    @staticmethod
    def variable(i: int, nvars: int) -> "LinearForm":
        coeffs = [EC_ZERO] * nvars
        coeffs[i] = EC_ONE
        return LinearForm(coeffs, EC_ZERO, normalize=False)

    def is_homogeneous(self) -> bool:
        return _is_lf_zero(self.constant)

    def to_poly(self, nvars: Optional[int] = None, kind: Optional[str] = None) -> Poly:
        nvars = self.nvars if nvars is None else nvars
        kind = self.kind if kind is None else kind

        def conv(c):
            if kind == "approx" and isinstance(c, ExactComplex):
                return c.to_complex()
            return c

        if nvars < self.nvars:
            raise ArityMismatch("cannot shrink a linear form")
        terms: Dict[Exponents, object] = {}
        for i, c in enumerate(self.coefficients):
            if not _is_lf_zero(c):
                e = [0] * nvars
                e[i] = 1
                terms[tuple(e)] = conv(c)
        if not _is_lf_zero(self.constant):
            terms[tuple([0] * nvars)] = conv(self.constant)
        return Poly(nvars, terms, kind)

    def evaluate(self, point: Sequence):
        acc = self.constant
        for c, x in zip(self.coefficients, point):
            acc = acc + c * x
        return acc

    def __eq__(self, other):
        if not isinstance(other, LinearForm):
            return NotImplemented
        return self.coefficients == other.coefficients and self.constant == other.constant

    def __hash__(self):
        return hash((self.coefficients, self.constant))

    def render(self, names: Optional[Sequence[str]] = None) -> str:
        return self.to_poly().render(names)

    def __repr__(self):
        return f"LinearForm({self.render()})"


def _is_lf_zero(c) -> bool:
    return c == 0 if isinstance(c, complex) else c.is_zero()


# ---------------------------------------------------------------------------
# Ring-op dispatch surface
# ---------------------------------------------------------------------------

def poly_ring_ops(p: Poly, q: Poly, op: str) -> Poly:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "scale":
        # q must be a constant polynomial here
        if q.degree() > 0:
            raise ValueError("scale expects a constant second operand")
        return p.scale(q.coeff(tuple([0] * q.nvars)))
    raise ValueError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# Symbolic determinants and minors
# ---------------------------------------------------------------------------

def _det_cofactor(rows: List[List[Poly]]) -> Poly:
    n = len(rows)
    nvars = rows[0][0].nvars
    kind = rows[0][0].kind
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    acc = Poly.zero(nvars, kind)
    for j in range(n):
        if rows[0][j].is_zero():
            continue
        sub = [[rows[i][c] for c in range(n) if c != j] for i in range(1, n)]
        term = rows[0][j] * _det_cofactor(sub)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def _det_bareiss_poly(rows: List[List[Poly]]) -> Poly:
    """Fraction-free elimination over the polynomial ring.  Every division
    performed is exact (Bareiss identity), so exact_div never fails on
    valid input."""
    n = len(rows)
    nvars = rows[0][0].nvars
    a = [row[:] for row in rows]
    one = Poly.const(nvars, 1)
    sign = 1
    prev = one
    for k in range(n - 1):
        if a[k][k].is_zero():
            pivot = next((r for r in range(k + 1, n) if not a[r][k].is_zero()), None)
            if pivot is None:
                return Poly.zero(nvars)
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num if prev is one else num.exact_div(prev)
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return d if sign == 1 else -d


def _det_subset_expansion(rows: List[List[Poly]]) -> Poly:
    """Division-free determinant by dynamic programming over column subsets
    (used on the approx pathway, where exact division is unavailable)."""
    n = len(rows)
    nvars = rows[0][0].nvars
    kind = rows[0][0].kind
    # state: mask of used columns -> minor of the first popcount(mask) rows
    states = {0: Poly.const(nvars, 1, kind)}
    for i in range(n):
        nxt: Dict[int, Poly] = {}
        for mask, minor in states.items():
            parity = 0
            for j in range(n):
                bit = 1 << j
                if mask & bit:
                    parity ^= 1
                    continue
                entry = rows[i][j]
                if entry.is_zero():
                    continue
                term = minor * entry
                if parity:
                    term = -term
                key = mask | bit
                nxt[key] = (nxt[key] + term) if key in nxt else term
        states = nxt
    full = (1 << n) - 1
    return states.get(full, Poly.zero(nvars, kind))


def symbolic_det(rows: List[List[Poly]]) -> Poly:
    """Exact determinant of a square matrix of polynomials.

    Cofactor expansion up to 4x4; fraction-free elimination from 5x5 on
    (subset expansion instead when the entries are approximate).
    """
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise NonSquare("symbolic_det needs a square matrix")
    if n == 0:
        raise NonSquare("empty matrix")
    nv = rows[0][0].nvars
    kd = rows[0][0].kind
    for r in rows:
        for p in r:
            if p.nvars != nv or p.kind != kd:
                raise ArityMismatch("entries must share nvars and kind")
    if n <= 4:
        return _det_cofactor(rows)
    if kd == "exact":
        return _det_bareiss_poly(rows)
    return _det_subset_expansion(rows)


def minors(rows: List[List[Poly]], k: int) -> List[Poly]:
    """All k x k minors, in lexicographic row-subset then column-subset order."""
    from itertools import combinations

    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    if k > min(nr, nc) or k < 1:
        raise BadOrder(f"cannot take {k}x{k} minors of a {nr}x{nc} matrix")
    out = []
    for rsub in combinations(range(nr), k):
        for csub in combinations(range(nc), k):
            sub = [[rows[i][j] for j in csub] for i in rsub]
            out.append(symbolic_det(sub))
    return out


# ---------------------------------------------------------------------------
# Substitution and restriction
# ---------------------------------------------------------------------------

def substitute_affine(p: Poly, mapping: Dict[int, LinearForm]) -> Poly:
    """Compose p with x_i -> mapping[i] (a linear form, constants allowed).

    The map must cover every variable of p; forms must share p's arity so
    the result lives in the same ring.
    """
    for i in range(p.nvars):
        if i not in mapping:
            raise ArityMismatch(f"substitution map misses variable {i}")
        if mapping[i].nvars != p.nvars:
            raise ArityMismatch("substitution forms must share the ring arity")
    images = [mapping[i].to_poly(p.nvars, p.kind) for i in range(p.nvars)]
    acc = Poly.zero(p.nvars, p.kind)
    pow_cache: Dict[Tuple[int, int], Poly] = {}

    def img_pow(i: int, k: int) -> Poly:
        key = (i, k)
        if key not in pow_cache:
            pow_cache[key] = images[i] ** k
        return pow_cache[key]

    for e, c in p.terms.items():
        term = Poly.const(p.nvars, c, p.kind)
        for i, k in enumerate(e):
            if k:
                term = term * img_pow(i, k)
        acc = acc + term
    return acc


def restrict_to_line(p: Poly, base: Sequence, direction: Sequence) -> Poly:
    """The univariate polynomial s -> p(base + s*direction).

    Exact when p, base and direction are all exact.
    """
    if len(base) != p.nvars or len(direction) != p.nvars:
        raise ArityMismatch("point arity mismatch")
    exact = p.kind == "exact" and all(isinstance(x, ExactComplex) for x in base) \
        and all(isinstance(x, ExactComplex) for x in direction)
    kind = "exact" if exact else "approx"
    if exact:
        dirv = list(direction)
        basev = list(base)
        zero, one = EC_ZERO, EC_ONE
    else:
        dirv = [x.to_complex() if isinstance(x, ExactComplex) else complex(x) for x in direction]
        basev = [x.to_complex() if isinstance(x, ExactComplex) else complex(x) for x in base]
        zero, one = 0j, 1 + 0j
    if all(_is_zero_coeff(d, kind) for d in dirv):
        raise ZeroDirection("restriction direction is zero")

    def convolve(a: List, b: List) -> List:
        out = [zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return out

    # per-variable (base_i + s*dir_i)^k, cached
    cache: Dict[Tuple[int, int], List] = {}

    def lin_pow(i: int, k: int) -> List:
        key = (i, k)
        if key not in cache:
            acc = [one]
            for _ in range(k):
                acc = convolve(acc, [basev[i], dirv[i]])
            cache[key] = acc
        return cache[key]

    coeffs: List = [zero]
    for e, c in p.terms.items():
        cv = c.to_complex() if (not exact and isinstance(c, ExactComplex)) else c
        term = [cv]
        for i, k in enumerate(e):
            if k:
                term = convolve(term, lin_pow(i, k))
        if len(term) > len(coeffs):
            coeffs = coeffs + [zero] * (len(term) - len(coeffs))
        for idx, v in enumerate(term):
            coeffs[idx] = coeffs[idx] + v
    return Poly.univariate(coeffs, kind)


def gradient(p: Poly, at: Sequence) -> List[complex]:
    """Numeric gradient vector of p at a point."""
    return [complex(p.derivative(i).evaluate(at)) for i in range(p.nvars)]


def univariate_coeffs(p: Poly) -> List:
    """Ascending coefficient list of a 1-variable polynomial."""
    if p.nvars != 1:
        raise ArityMismatch("univariate_coeffs needs a 1-variable polynomial")
    d = p.degree()
    zero = EC_ZERO if p.kind == "exact" else 0j
    out = [zero] * (d + 1 if d >= 0 else 1)
    for (k,), c in p.terms.items():
        out[k] = c
    return out


# ---------------------------------------------------------------------------
# Univariate complex roots (Aberth-Ehrlich simultaneous iteration)
# ---------------------------------------------------------------------------

_ABERTH_MAX_ITER = 200


def univariate_roots(p, tol: Tolerance = DEFAULT_TOL) -> List[complex]:
    """All complex roots of a univariate polynomial, approximate pathway.

    Accepts a 1-variable Poly (either kind) or an ascending coefficient
    sequence.  Each returned root z satisfies |p(z)| <= abs_eps * scale(z)
    with scale the coefficient-magnitude sum at z.
    """
    if isinstance(p, Poly):
        coeffs = [c.to_complex() if isinstance(c, ExactComplex) else complex(c)
                  for c in univariate_coeffs(p)]
    else:
        coeffs = [complex(c) for c in p]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    deg = len(coeffs) - 1
    if deg < 1:
        raise DegenerateLeadingCoefficient("need degree >= 1")
    cmax = max(abs(c) for c in coeffs)
    if abs(coeffs[-1]) <= tol.eig_cutoff * cmax:
        raise DegenerateLeadingCoefficient(
            f"leading coefficient {abs(coeffs[-1]):.3e} below cutoff")

    # deflate exact zero roots
    zeros_at_origin = 0
    while coeffs[0] == 0:
        coeffs.pop(0)
        zeros_at_origin += 1
    deg = len(coeffs) - 1
    roots = [0j] * zeros_at_origin
    if deg == 0:
        return roots
    lead = coeffs[-1]
    monic = [c / lead for c in coeffs]

    if deg == 1:
        return roots + [-monic[0]]
    if deg == 2:
        b, c0 = monic[1], monic[0]
        disc = cmath.sqrt(b * b - 4 * c0)
        # Citardauq branch keeps the small root accurate
        if abs(-b + disc) >= abs(-b - disc):
            r1 = (-b + disc) / 2
        else:
            r1 = (-b - disc) / 2
        r2 = c0 / r1 if r1 != 0 else (-b - disc) / 2
        return roots + [r1, r2]

    def val_and_deriv(z):
        v = 0j
        d = 0j
        for c in reversed(monic):
            d = d * z + v
            v = v * z + c
        return v, d

    def residual_ok(z):
        scale = sum(abs(c) * (abs(z) ** k) for k, c in enumerate(coeffs))
        v = 0j
        for c in reversed(coeffs):
            v = v * z + c
        return abs(v) <= tol.abs_eps * max(scale, 1e-300)

    radius = 1.0 + max(abs(c) for c in monic[:-1])
    centroid = -monic[-2] / deg
    zs = [centroid + 0.8 * radius * cmath.exp(2j * math.pi * (k / deg) + 0.4j)
          for k in range(deg)]

    for _ in range(_ABERTH_MAX_ITER):
        max_step = 0.0
        for k in range(deg):
            v, d = val_and_deriv(zs[k])
            if v == 0:
                continue
            newton = v / d if d != 0 else v * 1e6
            s = 0j
            for j in range(deg):
                if j != k:
                    diff = zs[k] - zs[j]
                    if diff == 0:
                        diff = 1e-12 * (1 + abs(zs[k]))
                    s += 1.0 / diff
            denom = 1.0 - newton * s
            delta = newton / denom if denom != 0 else newton
            zs[k] -= delta
            max_step = max(max_step, abs(delta))
        if all(residual_ok(z) for z in zs):
            return roots + zs
        if max_step < 1e-300:
            break
    if all(residual_ok(z) for z in zs):
        return roots + zs
    raise NoConvergence(f"Aberth iteration did not settle in {_ABERTH_MAX_ITER} steps")
