"""Determinantal varieties of bipartite states.

For a state with ensemble matrix A (columns the ensemble rays, blocked
A_1..A_m over side A), the pencil N(r) = sum_i r_i A_i is an n x t matrix
of linear forms.  The variety V_A is the projective zero locus of the n x n
minors of N(r); equivalently (and this is the built-in cross-check) the
locus where the Hermitian form det(sum_ij r_i conj(r_j) rho_ij) vanishes.
The two criteria must agree on every tested point; a disagreement raises
InconsistentRepresentations because it can only mean a bug or a bad
tolerance, never a property of the state.

Verdict semantics: a nonlinearity witness certifies entanglement (the
contrapositive of the separability criterion).  Empty, Full, LinearUnion
and Inconclusive all map to "criterion inconclusive": linearity is
necessary, not sufficient, for separability.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    InconsistentRepresentations,
    SamplingExhausted,
    SingularPoint,
)
from .factorization import FactorList, linear_factorization
from .linalg import Matrix, det_exact
from .multipoly import (
    LinearForm,
    Poly,
    minors,
    restrict_to_line,
    symbolic_det,
    univariate_coeffs,
    univariate_roots,
)
from .scalars import DEFAULT_TOL, EC_ZERO, ExactComplex, Tolerance
from .states import BipartiteState

WITNESS_FACTOR = 10.0      # witness threshold is WITNESS_FACTOR * abs_eps
HYPERPLANE_RADIUS = 0.1    # relative step when probing a tangent hyperplane
NEWTON_MAX_STEPS = 50
SAMPLING_BUDGET = 100      # line draws per requested point


# ---------------------------------------------------------------------------
# pencil
# ---------------------------------------------------------------------------

class PencilMatrix:
    """n x t matrix of homogeneous linear forms in the side variables.

    Entry (k, l) equals sum_i r_i * (A_i)[k, l] with the raw ensemble
    coefficients (deliberately not scale-normalized, so the matrix printed
    for the worked examples matches the construction on the nose).
    """

    def __init__(self, side: str, n_rows: int, t_cols: int, m_vars: int,
                 entry_forms: List[List[LinearForm]], kind: str):
        self.side = side
        self.n = n_rows
        self.t = t_cols
        self.m = m_vars
        self.entry_forms = entry_forms
        self.kind = kind

    def entry_polys(self) -> List[List[Poly]]:
        return [[f.to_poly(self.m, self.kind) for f in row] for row in self.entry_forms]

    def evaluate(self, point: Sequence) -> List[List[object]]:
        return [[f.evaluate(point) for f in row] for row in self.entry_forms]

    def __repr__(self):
        return f"PencilMatrix(side={self.side}, {self.n}x{self.t} in {self.m} vars)"


def pencil_matrix(s: BipartiteState, side: str = "A") -> PencilMatrix:
    """Assemble the pencil from the ensemble blocks (side B re-blocks)."""
    state = s if side == "A" else s.swapped()
    terms = state.ensemble_terms()  # MissingEnsemble if absent
    m, n = state.m, state.n
    t = len(terms)
    exact = state.exact_ensemble
    kind = "exact" if exact else "approx"
    zero = EC_ZERO if exact else 0j
    entry_forms: List[List[LinearForm]] = []
    for k in range(n):
        row = []
        for l in range(t):
            coeffs = []
            vec = terms[l][1]
            for i in range(m):
                x = vec[i * n + k]
                if not exact and isinstance(x, ExactComplex):
                    x = x.to_complex()
                coeffs.append(x)
            if all((c.is_zero() if isinstance(c, ExactComplex) else c == 0)
                   for c in coeffs):
                coeffs = [zero] * m
            row.append(LinearForm(coeffs, zero, normalize=False))
        entry_forms.append(row)
    return PencilMatrix(side, n, t, m, entry_forms, kind)


# ---------------------------------------------------------------------------
# variety
# ---------------------------------------------------------------------------

class Variety:
    """Generators plus the Hermitian-form evaluator for one side."""

    def __init__(self, side: str, m_vars: int, n_minor: int,
                 generators: List[Poly], pencil: PencilMatrix,
                 state: BipartiteState, mode: str,
                 structural: Optional[str]):
        self.side = side
        self.m = m_vars
        self.n = n_minor
        self.generators = generators
        self.pencil = pencil
        self.state = state
        self.mode = mode
        self.structural = structural  # "Empty" | "Full" | None
        self._blocks_exact = None
        self._blocks_approx = None

    @property
    def essential_generators(self) -> List[Poly]:
        return [g for g in self.generators if not g.is_zero()]

    def is_hypersurface(self) -> bool:
        return len(self.essential_generators) == 1

    # -- Hermitian-form evaluator (the independent membership oracle) ------

    def _state_blocks(self, exact: bool):
        base = self.state if self.side == "A" else self.state.swapped()
        rho = base.density_matrix()
        m, n = base.m, base.n
        if exact and rho.kind != "exact":
            exact = False
        if exact:
            if self._blocks_exact is None:
                self._blocks_exact = [
                    [[[rho[i * n + r, j * n + c] for c in range(n)] for r in range(n)]
                     for j in range(m)] for i in range(m)]
            return self._blocks_exact, True
        if self._blocks_approx is None:
            arr = rho.to_numpy().reshape(m, n, m, n)
            self._blocks_approx = arr
        return self._blocks_approx, False

    def hermitian_matrix(self, point: Sequence):
        """M(r) = sum_ij r_i conj(r_j) rho_ij; exact when possible."""
        want_exact = self.mode == "exact" and all(
            isinstance(x, ExactComplex) for x in point)
        blocks, exact = self._state_blocks(want_exact)
        m, n = self.m, self.n
        if exact:
            acc = [[EC_ZERO] * n for _ in range(n)]
            for i in range(m):
                if point[i].is_zero():
                    continue
                for j in range(m):
                    if point[j].is_zero():
                        continue
                    w = point[i] * point[j].conjugate()
                    bij = blocks[i][j]
                    for r in range(n):
                        for c in range(n):
                            if not bij[r][c].is_zero():
                                acc[r][c] = acc[r][c] + w * bij[r][c]
            return Matrix.exact(acc)
        pt = np.array([x.to_complex() if isinstance(x, ExactComplex) else complex(x)
                       for x in point])
        w = np.einsum("i,j->ij", pt, pt.conj())
        mat = np.einsum("ij,irjc->rc", w, blocks)
        return Matrix.approx(mat)

    def hermitian_value(self, point: Sequence):
        mat = self.hermitian_matrix(point)
        if mat.kind == "exact":
            return det_exact(mat)
        return complex(np.linalg.det(mat.to_numpy()))

    def hermitian_residual(self, point: Sequence) -> float:
        """|det M(r)| relative to the Hadamard bound of M(r)."""
        mat = self.hermitian_matrix(point)
        arr = mat.to_numpy()
        det = complex(np.linalg.det(arr))
        bound = 1.0
        for k in range(arr.shape[0]):
            bound *= max(float(np.linalg.norm(arr[k])), 1e-300)
        return abs(det) / bound

    def generator_residual(self, point: Sequence) -> float:
        worst = 0.0
        for g in self.essential_generators:
            val = abs(complex(g.evaluate(point)))
            scale = max(g.evaluation_scale(point), 1e-300)
            worst = max(worst, val / scale)
        return worst

    def __repr__(self):
        return (f"Variety(side={self.side}, {len(self.generators)} generators "
                f"of degree {self.n} in CP^{self.m - 1}, mode={self.mode})")


def _empty_certificate(gens: List[Poly], m: int) -> bool:
    """Monomial generator sets: projectively empty iff a pure power of
    every variable is present (then no nonzero support survives)."""
    nonzero = [g for g in gens if not g.is_zero()]
    if not nonzero or not all(len(g.terms) == 1 for g in nonzero):
        return False
    pure = set()
    for g in nonzero:
        e = next(iter(g.terms))
        support = [i for i, k in enumerate(e) if k]
        if len(support) == 1:
            pure.add(support[0])
    return pure == set(range(m))


def variety_generators(p: PencilMatrix) -> Variety:
    """Minors of the pencil; short-circuits to Full when t < n."""
    state = getattr(p, "_state", None)
    if p.t < p.n:
        v = Variety(p.side, p.m, p.n, [], p, state, p.kind, "Full")
        return v
    gens = minors(p.entry_polys(), p.n)
    for g in gens:
        if not g.is_zero() and (not g.is_homogeneous() or g.degree() != p.n):
            raise InconsistentRepresentations(
                "minor generator is not homogeneous of the pencil size")
    structural: Optional[str] = None
    if all(g.is_zero() for g in gens):
        structural = "Full"
    elif _empty_certificate(gens, p.m):
        structural = "Empty"
    return Variety(p.side, p.m, p.n, gens, p, state, p.kind, structural)


def variety_of_state(s: BipartiteState, side: str = "A") -> Variety:
    pen = pencil_matrix(s, side)
    pen._state = s
    v = variety_generators(pen)
    v.state = s
    return v


# ---------------------------------------------------------------------------
# points
# ---------------------------------------------------------------------------

def project_normalize(point: Sequence):
    """Scale so the max-modulus coordinate becomes exactly 1 (ties broken
    by lowest index).  Works on exact and approx points alike."""
    if all(isinstance(x, ExactComplex) for x in point):
        best, best_n = None, None
        for i, x in enumerate(point):
            nsq = x.norm_sq()
            if best is None or nsq > best_n:
                best, best_n = i, nsq
        if best_n == 0:
            raise ValueError("cannot normalize the zero point")
        inv = point[best].inverse()
        return tuple(x * inv for x in point)
    pt = [x.to_complex() if isinstance(x, ExactComplex) else complex(x) for x in point]
    mods = [abs(x) for x in pt]
    best = max(range(len(pt)), key=lambda i: (mods[i], -i))
    if mods[best] == 0:
        raise ValueError("cannot normalize the zero point")
    inv = 1.0 / pt[best]
    return tuple(x * inv for x in pt)


def membership(v: Variety, point: Sequence, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Point membership by both criteria; they must agree."""
    point = project_normalize(point)
    if v.structural == "Full":
        return True
    exact = v.mode == "exact" and all(isinstance(x, ExactComplex) for x in point)
    if exact:
        gen_zero = all(g.evaluate(point).is_zero() for g in v.essential_generators)
        herm = v.hermitian_value(point)
        herm_zero = herm.is_zero() if isinstance(herm, ExactComplex) else herm == 0
        if gen_zero != herm_zero:
            raise InconsistentRepresentations(
                f"exact membership disagrees: generators {gen_zero}, "
                f"Hermitian determinant {herm_zero}")
        return gen_zero
    gen_ok = v.generator_residual(point) <= tol.abs_eps
    herm_ok = v.hermitian_residual(point) <= tol.abs_eps
    if gen_ok != herm_ok:
        raise InconsistentRepresentations(
            f"membership criteria disagree at {point}: generator residual "
            f"{v.generator_residual(point):.3e}, Hermitian residual "
            f"{v.hermitian_residual(point):.3e}")
    return gen_ok


def _random_exact_point(rng: random.Random, m: int) -> List[ExactComplex]:
    while True:
        pt = [ExactComplex(Fraction(rng.randint(-9, 9), rng.randint(1, 3)),
                           Fraction(rng.randint(-9, 9), rng.randint(1, 3)))
              for _ in range(m)]
        if any(not x.is_zero() for x in pt):
            return pt


def _random_approx_point(rng: random.Random, m: int) -> List[complex]:
    return [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(m)]


def _newton_polish(system: List[Poly], m: int, z0: Sequence[complex], tol: Tolerance
                   ) -> Optional[Tuple[complex, ...]]:
    """Damped Gauss-Newton on a generator system in the chart that pins the
    max-modulus coordinate."""
    gens = [g.to_approx() for g in system]
    partials = [[g.derivative(i) for i in range(m)] for g in gens]
    z = list(project_normalize(z0))
    pin = max(range(m), key=lambda i: abs(z[i]))
    free = [i for i in range(m) if i != pin]

    def fvec(zz):
        out = []
        for g in gens:
            val = complex(g.evaluate(zz))
            scale = max(g.evaluation_scale(zz), 1e-300)
            out.append(val / scale)
        return np.array(out)

    target = 1e-3 * tol.abs_eps
    f = fvec(z)
    for _ in range(NEWTON_MAX_STEPS):
        if float(np.max(np.abs(f))) <= target:
            return tuple(z)
        jac = np.zeros((len(gens), len(free)), dtype=complex)
        for gi, g in enumerate(gens):
            scale = max(g.evaluation_scale(z), 1e-300)
            for ci, i in enumerate(free):
                jac[gi, ci] = complex(partials[gi][i].evaluate(z)) / scale
        step, *_ = np.linalg.lstsq(jac, -f, rcond=None)
        improved = False
        for damp in range(9):
            cand = list(z)
            for ci, i in enumerate(free):
                cand[i] = z[i] + step[ci] / (2 ** damp)
            fc = fvec(cand)
            if float(np.linalg.norm(fc)) < float(np.linalg.norm(f)):
                z, f = cand, fc
                improved = True
                break
        if not improved:
            break
    if float(np.max(np.abs(f))) <= target:
        return tuple(z)
    return None


def _rationalize_point(z: complex, max_den: int = 10000) -> Optional[ExactComplex]:
    fr = Fraction(z.real).limit_denominator(max_den)
    fi = Fraction(z.imag).limit_denominator(max_den)
    if abs(float(fr) - z.real) < 1e-6 and abs(float(fi) - z.imag) < 1e-6:
        return ExactComplex(fr, fi)
    return None


def _analysis_system(v: Variety, tol: Tolerance) -> Tuple[List[LinearForm], List[Poly]]:
    """Peel exact common linear factors off the generators.

    A hyperplane dividing every minor is a full linear component of the
    variety; random lines land on it constantly, hiding any codimension-2
    components behind it from the sampler.  Candidates are found by fitting
    hyperplanes through cheaply sampled variety points, then verified by
    exact division before anything is peeled, so the result is a
    certificate, not a guess.  Cached on the variety.
    """
    cache = getattr(v, "_analysis_cache", None)
    if cache is not None:
        return cache
    gens = v.essential_generators
    forms: List[LinearForm] = []
    if v.mode != "exact" or len(gens) <= 1:
        v._analysis_cache = (forms, gens)
        return v._analysis_cache

    if v.m <= 3:
        # small ambient spaces admit a fully exact route: every common
        # linear factor divides any one generator, and those factors the
        # exact engine enumerates completely (repetitions included, which
        # sampling cannot resolve past sqrt(eps) accuracy)
        from .errors import UnsupportedShape

        current = list(gens)
        try:
            progress = True
            while progress and current:
                progress = False
                pick = min(current, key=lambda g: len(g.terms))
                for form in linear_factorization(pick).linear_factors:
                    fp = form.to_poly(v.m)
                    quotients = []
                    for g in current:
                        q = fp.divides_into(g)
                        if q is None:
                            break
                        quotients.append(q)
                    else:
                        forms.append(form)
                        current = [q for q in quotients if q.degree() >= 1]
                        progress = True
                        break
            v._analysis_cache = (forms, current)
            return v._analysis_cache
        except UnsupportedShape:
            forms = []

    rng = random.Random(20211)

    def cheap_points(system: List[Poly], want: int) -> List[Tuple[complex, ...]]:
        pts = []
        for _ in range(40):
            if len(pts) >= want:
                break
            base = _random_exact_point(rng, v.m)
            direction = _random_exact_point(rng, v.m)
            try:
                roots = univariate_roots(restrict_to_line(system[0], base, direction), tol)
            except Exception:
                continue
            bc = [x.to_complex() for x in base]
            dc = [x.to_complex() for x in direction]
            for s in roots:
                q = tuple(b + s * d for b, d in zip(bc, dc))
                if max(abs(z) for z in q) < 1e-12:
                    continue
                q = project_normalize(q)
                worst = 0.0
                for g in system:
                    worst = max(worst, abs(complex(g.evaluate(q)))
                                / max(g.evaluation_scale(q), 1e-300))
                if worst < 1e-9:
                    pts.append(q)
        return pts

    current = list(gens)
    for _ in range(v.m):  # at most m-1 independent hyperplanes can divide
        pts = cheap_points(current, 24)
        if len(pts) < 4:
            break
        arr = np.array([list(p) for p in pts])
        peeled_one = False
        for _ in range(40):
            idx = rng.sample(range(len(pts)), 3)
            triple = arr[idx]
            _, sv, vh = np.linalg.svd(triple)
            normal = vh[-1].conj()
            resid = np.abs(arr @ normal.conj())
            if int(np.sum(resid < 1e-7)) < max(4, len(pts) // 3):
                continue
            top = max(range(v.m), key=lambda i: abs(normal[i]))
            normal = normal / normal[top]
            coeffs = [_rationalize_point(complex(z)) for z in normal]
            if any(c is None for c in coeffs):
                continue
            form = LinearForm(coeffs, EC_ZERO, normalize=True)
            fp = form.to_poly(v.m)
            quotients = []
            ok = True
            for g in current:
                q = fp.divides_into(g)
                if q is None:
                    ok = False
                    break
                quotients.append(q)
            if ok:
                forms.append(form)
                current = [q for q in quotients if q.degree() >= 1]
                peeled_one = True
                break
        if not peeled_one or not current:
            break
    v._analysis_cache = (forms, current)
    return v._analysis_cache


def _coeffs_in_var(p: Poly, var: int) -> List[Poly]:
    """Bivariate approx polynomial viewed as univariate in `var` with
    coefficients univariate in the other variable."""
    other = 1 - var
    d = p.degree_in(var)
    buckets: List[dict] = [dict() for _ in range(d + 1)]
    for e, c in p.terms.items():
        buckets[e[var]][(e[other],)] = buckets[e[var]].get((e[other],), 0j) + c
    return [Poly(1, b, "approx") for b in buckets]


def _plane_slice_candidates(gens: List[Poly], m: int, rng: random.Random,
                            tol: Tolerance) -> List[Tuple[complex, ...]]:
    """Intersect the first two generators with a random projective 2-plane
    and return the finitely many candidate points (resultant + roots).

    This is what reaches codimension-2 components that random lines miss.
    """
    a = np.array(_random_approx_point(rng, m))
    b = np.array(_random_approx_point(rng, m))
    c = np.array(_random_approx_point(rng, m))

    def slice_poly(g: Poly) -> Poly:
        ga = g.to_approx()
        # compose with r = a + s*b + u*c by substituting linear forms in (s, u)
        acc = Poly.zero(2, "approx")
        cache = {}

        def coord_pow(i: int, k: int) -> Poly:
            key = (i, k)
            if key not in cache:
                lin = Poly(2, {(0, 0): complex(a[i]), (1, 0): complex(b[i]),
                               (0, 1): complex(c[i])}, "approx")
                out = Poly.const(2, 1, "approx")
                for _ in range(k):
                    out = out * lin
                cache[key] = out
            return cache[key]

        for e, coeff in ga.terms.items():
            term = Poly.const(2, coeff, "approx")
            for i, k in enumerate(e):
                if k:
                    term = term * coord_pow(i, k)
            acc = acc + term
        return acc

    g1 = slice_poly(gens[0])
    g2 = slice_poly(gens[1])
    if g1.degree_in(1) < 1 or g2.degree_in(1) < 1:
        return []
    ca = _coeffs_in_var(g1, 1)
    cb = _coeffs_in_var(g2, 1)
    da, db = len(ca) - 1, len(cb) - 1
    size = da + db
    zero = Poly.zero(1, "approx")
    rows = []
    for i in range(db):
        row = [zero] * size
        for k, cf in enumerate(reversed(ca)):
            row[i + k] = cf
        rows.append(row)
    for i in range(da):
        row = [zero] * size
        for k, cf in enumerate(reversed(cb)):
            row[i + k] = cf
        rows.append(row)
    res = symbolic_det(rows)
    coeffs = [complex(x) for x in univariate_coeffs(res)]
    cmax = max((abs(x) for x in coeffs), default=0.0)
    if cmax == 0.0:
        return []
    while coeffs and abs(coeffs[-1]) < 1e-10 * cmax:
        coeffs.pop()
    if len(coeffs) < 2:
        return []
    try:
        s_roots = univariate_roots(coeffs, tol)
    except Exception:
        return []
    out = []
    for s0 in s_roots:
        u_coeffs = [complex(sum(cf * (s0 ** k) for (k,), cf in cpoly.terms.items()))
                    for cpoly in ca]
        umax = max((abs(x) for x in u_coeffs), default=0.0)
        if umax == 0.0:
            continue
        while u_coeffs and abs(u_coeffs[-1]) < 1e-10 * umax:
            u_coeffs.pop()
        if len(u_coeffs) < 2:
            continue
        try:
            u_roots = univariate_roots(u_coeffs, tol)
        except Exception:
            continue
        for u0 in u_roots:
            pt = tuple(complex(x) for x in (a + s0 * b + u0 * c))
            if max(abs(z) for z in pt) > 1e-12:
                out.append(project_normalize(pt))
    return out


def sample_points(v: Variety, count: int, seed: int,
                  tol: Tolerance = DEFAULT_TOL) -> List[Tuple[complex, ...]]:
    """Sample membership-verified points of the variety.

    Hypersurface mode intersects random (exact, when possible) lines with
    the single generator.  General mode peels certified common linear
    factors first, then seeds damped Gauss-Newton with line roots of the
    first remaining generator, falling back to random 2-plane slices
    (resultant + root pairing) for components that lines cannot hit.
    Every returned point passes membership with a healthy margin.
    """
    if v.structural in ("Empty", "Full"):
        raise SamplingExhausted(f"variety verdict is structurally {v.structural}")
    peeled_forms, agens = _analysis_system(v, tol)
    if not agens:
        raise SamplingExhausted(
            "variety equals the union of its peeled hyperplanes; nothing left to sample")
    rng = random.Random(seed)
    first = agens[0]
    hypersurface = len(agens) == 1
    clean = 0.1 * tol.abs_eps  # acceptance bar, well above the polish target
    out: List[Tuple[complex, ...]] = []

    def system_residual(pt) -> float:
        worst = 0.0
        for g in agens:
            worst = max(worst, abs(complex(g.evaluate(pt)))
                        / max(g.evaluation_scale(pt), 1e-300))
        return worst

    def accept(cand) -> bool:
        if v.generator_residual(cand) > clean:
            return False
        if v.hermitian_residual(cand) > clean:
            return False
        out.append(cand)
        return True

    budget = SAMPLING_BUDGET * count
    newton_budget = 20 * count
    for _ in range(budget):
        if len(out) >= count:
            break
        if v.mode == "exact":
            base = _random_exact_point(rng, v.m)
            direction = _random_exact_point(rng, v.m)
        else:
            base = _random_approx_point(rng, v.m)
            direction = _random_approx_point(rng, v.m)
        try:
            restriction = restrict_to_line(first, base, direction)
            roots = univariate_roots(restriction, tol)
        except Exception:
            continue
        base_c = [x.to_complex() if isinstance(x, ExactComplex) else complex(x)
                  for x in base]
        dir_c = [x.to_complex() if isinstance(x, ExactComplex) else complex(x)
                 for x in direction]
        for s in roots:
            if len(out) >= count:
                break
            cand = tuple(b + s * d for b, d in zip(base_c, dir_c))
            if max(abs(z) for z in cand) < 1e-12:
                continue
            cand = project_normalize(cand)
            res0 = system_residual(cand)
            if res0 > clean:
                if hypersurface or newton_budget <= 0:
                    continue
                newton_budget -= 1
                polished = _newton_polish(agens, v.m, cand, tol)
                if polished is None:
                    continue
                cand = project_normalize(polished)
                if system_residual(cand) > clean:
                    continue
            accept(cand)
        if not hypersurface and len(out) < count and newton_budget <= 0:
            break
    if len(out) < count and not hypersurface and len(agens) >= 2:
        # spread the quota across slices: one slice meets every component,
        # and taking everything it offers would fill the sample with points
        # from whichever component comes first in the root ordering
        per_slice = max(2, count // 4)
        for _ in range(12):
            if len(out) >= count:
                break
            taken = 0
            for cand in _plane_slice_candidates(agens, v.m, rng, tol):
                if len(out) >= count or taken >= per_slice:
                    break
                if system_residual(cand) > clean:
                    polished = _newton_polish(agens, v.m, cand, tol)
                    if polished is None:
                        continue
                    cand = project_normalize(polished)
                    if system_residual(cand) > clean:
                        continue
                if accept(cand):
                    taken += 1
    if len(out) < count:
        raise SamplingExhausted(
            f"found {len(out)}/{count} points after {budget} line draws")
    return out


def tangent_form(v: Variety, point: Sequence, tol: Tolerance = DEFAULT_TOL) -> LinearForm:
    """Tangent hyperplane at a smooth point: coefficients are the gradient
    of the (first nonsingular) determinant generator.

    Peeled generators are preferred: on components hidden behind hyperplane
    factors the raw minors all have degenerate gradients."""
    point = project_normalize(point)
    pt = [x.to_complex() if isinstance(x, ExactComplex) else complex(x) for x in point]
    _, agens = _analysis_system(v, tol)
    candidates = list(agens) + [g for g in v.essential_generators if g not in agens]
    for g in candidates:
        ga = g.to_approx()
        grad = [complex(ga.derivative(i).evaluate(pt)) for i in range(v.m)]
        scale = max(max(ga.derivative(i).evaluation_scale(pt) for i in range(v.m)), 1e-300)
        norm = max(abs(x) for x in grad)
        if norm > WITNESS_FACTOR * tol.abs_eps * scale:
            top = max(range(v.m), key=lambda i: abs(grad[i]))
            inv = 1.0 / grad[top]
            return LinearForm([x * inv for x in grad], 0j, normalize=False)
    raise SingularPoint("every generator gradient vanishes at the point")


def _jacobian(v: Variety, pt: List[complex]) -> np.ndarray:
    # the peeled system gives crisp tangent data on components hidden
    # behind hyperplane components; it vanishes on all of them too
    _, agens = _analysis_system(v, DEFAULT_TOL)
    gens = [g.to_approx() for g in (agens or v.essential_generators)]
    rows = []
    for g in gens:
        scale = max(g.evaluation_scale(pt), 1e-300)
        rows.append([complex(g.derivative(i).evaluate(pt)) / scale for i in range(v.m)])
    return np.array(rows, dtype=complex)


_RANK_GAP_MIN = 1e3


def _gap_rank(svals: np.ndarray, ncols: int, noise_floor: float = 0.0) -> Optional[int]:
    """Numerical rank by the dominant spectral gap; None when ambiguous.

    Singular values are floored at the larger of the float-noise scale of
    the top value and the caller's noise floor (typically derived from how
    accurately the evaluation point sits on the variety), so phantom
    directions cannot inflate the rank.
    """
    s = [max(float(x), 0.0) for x in svals] + [0.0] * (ncols - len(svals))
    if s[0] < max(noise_floor, 1e-12):
        return 0
    noise = max(1e-13 * s[0], noise_floor)
    best_r, best_gap = None, 1.0
    for r in range(1, ncols + 1):
        lo = s[r] if r < ncols else 0.0
        if s[r - 1] <= noise:
            break
        gap = s[r - 1] / max(lo, noise)
        if gap > best_gap:
            best_gap, best_r = gap, r
    if best_r is None or best_gap < _RANK_GAP_MIN:
        return None
    return best_r


def _kernel_directions(v: Variety, pt: List[complex], tol: Tolerance
                       ) -> Optional[List[np.ndarray]]:
    """Numerical kernel of the generator Jacobian at pt, orthogonalized
    against the point direction.  None when the rank has no clean spectral
    gap or is not stable across two nearby evaluations (the smoothness
    guard: probing is only meaningful where the tangent data is crisp)."""
    _, agens = _analysis_system(v, tol)
    system = agens or v.essential_generators
    point_res = 0.0
    smooth = False
    for g in system:
        ga = g.to_approx()
        point_res = max(point_res, abs(complex(ga.evaluate(pt)))
                        / max(ga.evaluation_scale(pt), 1e-300))
        grad = max(abs(complex(ga.derivative(i).evaluate(pt))) for i in range(v.m))
        gscale = max(max(ga.derivative(i).evaluation_scale(pt) for i in range(v.m)),
                     1e-300)
        if grad > WITNESS_FACTOR * tol.abs_eps * gscale:
            smooth = True
    if not smooth:
        # every generator is singular here (e.g. a component crossing);
        # tangent containment is not a valid test at such points
        return None
    floor = max(100.0 * point_res, 1e-14)
    jac = _jacobian(v, pt)
    _, s1, vh = np.linalg.svd(jac)
    rank = _gap_rank(s1, v.m, floor)
    if rank is None or rank == 0:
        return None
    rng_local = np.random.default_rng(9173)
    pert = [z + 1e-10 * complex(c1, c2)
            for z, c1, c2 in zip(pt, rng_local.standard_normal(v.m),
                                 rng_local.standard_normal(v.m))]
    s2 = np.linalg.svd(_jacobian(v, pert), compute_uv=False)
    if _gap_rank(s2, v.m, max(floor, 1e-9)) != rank:
        return None
    kernel = [vh[k].conj() for k in range(rank, v.m)]
    p = np.array(pt)
    p = p / np.linalg.norm(p)
    dirs = []
    for vec in kernel:
        w = vec - p * np.vdot(p, vec)
        norm = float(np.linalg.norm(w))
        if norm > 1e-8:
            dirs.append(w / norm)
    return dirs


def _witness_search_at(v: Variety, point: Sequence, rng: random.Random,
                       tol: Tolerance, radius: float,
                       probes: int = 20) -> Optional[Tuple[Tuple[complex, ...], float]]:
    """Probe the tangent space at a smooth point; an off-variety probe
    (Hermitian residual above threshold) certifies local curvature."""
    pt = [complex(x.to_complex() if isinstance(x, ExactComplex) else x)
          for x in project_normalize(point)]
    dirs = _kernel_directions(v, pt, tol)
    if dirs is None or not dirs:
        # singular point, or a zero-dimensional component whose tangent
        # space is the point itself: nothing to probe
        return None
    threshold = WITNESS_FACTOR * tol.abs_eps
    best: Optional[Tuple[Tuple[complex, ...], float]] = None
    for _ in range(probes):
        combo = np.zeros(v.m, dtype=complex)
        for d in dirs:
            combo += complex(rng.gauss(0, 1), rng.gauss(0, 1)) * d
        norm = float(np.linalg.norm(combo))
        if norm < 1e-12:
            continue
        q = np.array(pt) + radius * combo / norm
        q = project_normalize(tuple(complex(z) for z in q))
        res = v.hermitian_residual(q)
        if res > threshold and (best is None or res > best[1]):
            best = (q, res)
    return best


class VarietyVerdict:
    """Outcome of the linearity analysis.

    tag in {"Empty", "Full", "LinearUnion", "NonlinearWitness",
    "Inconclusive"}.  Only a NonlinearWitness certifies entanglement; the
    other verdicts leave the criterion inconclusive.
    """

    def __init__(self, tag: str,
                 forms: Optional[List[LinearForm]] = None,
                 factor_list: Optional[FactorList] = None,
                 point: Optional[Tuple[complex, ...]] = None,
                 tangent: Optional[LinearForm] = None,
                 residual: Optional[float] = None,
                 probe: Optional[Tuple[complex, ...]] = None,
                 reason: Optional[str] = None):
        self.tag = tag
        self.forms = forms
        self.factor_list = factor_list
        self.point = point
        self.tangent = tangent
        self.residual = residual
        self.probe = probe
        self.reason = reason

    @property
    def conclusion(self) -> str:
        return "entangled" if self.tag == "NonlinearWitness" else "inconclusive"

    def __repr__(self):
        extra = ""
        if self.tag == "NonlinearWitness":
            extra = f", residual={self.residual:.3e}"
        elif self.reason:
            extra = f", reason={self.reason!r}"
        return f"VarietyVerdict({self.tag}{extra})"


def nonlinearity_witness(v: Variety, samples: int = 12, seed: int = 42,
                         tol: Tolerance = DEFAULT_TOL,
                         radius: float = HYPERPLANE_RADIUS) -> VarietyVerdict:
    """Search for a smooth point whose tangent space leaves the variety.

    Sound because a union of linear subspaces contains, at each smooth
    point, its own tangent space: surviving probe residuals certify that
    no such union can cut out the variety, hence (by the separability
    criterion) the state is entangled.
    """
    if v.structural in ("Empty", "Full"):
        return VarietyVerdict(v.structural)
    if v.mode == "exact":
        forms, agens = _analysis_system(v, tol)
        if forms and not agens:
            # every generator is a constant times the same hyperplane product:
            # the variety is certified to be exactly that union
            return VarietyVerdict("LinearUnion", forms=forms)
    rng = random.Random(seed)
    try:
        points = sample_points(v, samples, seed, tol)
    except SamplingExhausted as exc:
        return VarietyVerdict("Inconclusive", reason=f"sampling exhausted: {exc}")
    for p in points:
        hit = _witness_search_at(v, p, rng, tol, radius)
        if hit is not None:
            q, res = hit
            try:
                tangent = tangent_form(v, p, tol)
            except SingularPoint:
                continue
            return VarietyVerdict("NonlinearWitness", point=tuple(p),
                                  tangent=tangent, residual=res, probe=q)
    return VarietyVerdict("Inconclusive",
                          reason=f"no witness found in {len(points)} samples")


def linearity_decide(v: Variety, seed: int = 42, samples: int = 12,
                     tol: Tolerance = DEFAULT_TOL,
                     radius: float = HYPERPLANE_RADIUS) -> VarietyVerdict:
    """Decide linearity where the exact machinery applies, otherwise fall
    back to the witness search.

    Hypersurface case with at most three active variables and degree <= 6:
    exact factor extraction either splits the determinant completely into
    linear forms (LinearUnion) or leaves a residual certified to contain
    no Q(i)-linear factor, in which case the witness search probes the
    residual's zero locus.
    """
    if v.structural in ("Empty", "Full"):
        return VarietyVerdict(v.structural)
    if v.mode != "exact":
        return nonlinearity_witness(v, samples, seed, tol, radius)
    gens = v.essential_generators
    if len(gens) == 1:
        g = gens[0]
        if len(g.used_vars()) <= 3 and g.degree() <= 6:
            fl = linear_factorization(g)
            if fl.full_split():
                return VarietyVerdict("LinearUnion", forms=fl.linear_factors,
                                      factor_list=fl)
            verdict = _residual_witness(v, fl, seed, samples, tol, radius)
            verdict.factor_list = fl
            return verdict
    return nonlinearity_witness(v, samples, seed, tol, radius)


def _residual_witness(v: Variety, fl: FactorList, seed: int, samples: int,
                      tol: Tolerance, radius: float) -> VarietyVerdict:
    """Witness search against the non-linear residual of a partial split.

    Points are sampled from the residual's own zero locus (a subset of the
    variety since the residual divides the generator); tangent probes then
    use the Hermitian oracle of the full state as usual.
    """
    residual = fl.residual
    rng = random.Random(seed)
    found = 0
    for attempt in range(SAMPLING_BUDGET * samples):
        if found >= samples:
            break
        base = _random_exact_point(rng, v.m)
        direction = _random_exact_point(rng, v.m)
        try:
            restriction = restrict_to_line(residual, base, direction)
            roots = univariate_roots(restriction.to_approx(), tol)
        except Exception:
            continue
        base_c = [x.to_complex() for x in base]
        dir_c = [x.to_complex() for x in direction]
        clean = 0.1 * tol.abs_eps
        for s in roots:
            cand = tuple(b + s * d for b, d in zip(base_c, dir_c))
            if max(abs(z) for z in cand) < 1e-12:
                continue
            cand = project_normalize(cand)
            if v.generator_residual(cand) > clean or v.hermitian_residual(cand) > clean:
                continue
            found += 1
            hit = _residual_probe(v, residual, cand, rng, tol, radius)
            if hit is not None:
                q, res, tangent = hit
                return VarietyVerdict("NonlinearWitness", point=cand,
                                      tangent=tangent, residual=res, probe=q)
            if found >= samples:
                break
    return VarietyVerdict(
        "Inconclusive",
        reason=f"rational linear factors extracted but no witness on the "
               f"residual after {found} samples")


def _residual_probe(v: Variety, residual: Poly, point: Sequence,
                    rng: random.Random, tol: Tolerance, radius: float,
                    probes: int = 20):
    """Tangent probe using the residual's gradient as the hyperplane."""
    pt = [complex(x) if not isinstance(x, ExactComplex) else x.to_complex()
          for x in point]
    ra = residual.to_approx()
    grad = np.array([complex(ra.derivative(i).evaluate(pt)) for i in range(v.m)])
    gscale = max(max(ra.derivative(i).evaluation_scale(pt) for i in range(v.m)), 1e-300)
    if float(np.max(np.abs(grad))) <= WITNESS_FACTOR * tol.abs_eps * gscale:
        return None
    # orthonormal basis of the tangent hyperplane {grad . r = 0}
    g = grad / np.linalg.norm(grad)
    basis = []
    for i in range(v.m):
        e = np.zeros(v.m, dtype=complex)
        e[i] = 1.0
        w = e - g.conj() * (g @ e)
        for b in basis:
            w = w - b * np.vdot(b, w)
        norm = float(np.linalg.norm(w))
        if norm > 1e-8:
            basis.append(w / norm)
    top = max(range(v.m), key=lambda i: abs(grad[i]))
    tangent = LinearForm([complex(x / grad[top]) for x in grad], 0j, normalize=False)
    threshold = WITNESS_FACTOR * tol.abs_eps
    best = None
    for _ in range(probes):
        combo = np.zeros(v.m, dtype=complex)
        for b in basis:
            combo += complex(rng.gauss(0, 1), rng.gauss(0, 1)) * b
        norm = float(np.linalg.norm(combo))
        if norm < 1e-12:
            continue
        q = np.array(pt) + radius * combo / norm
        q = project_normalize(tuple(complex(z) for z in q))
        res = v.hermitian_residual(q)
        if res > threshold and (best is None or res > best[1]):
            best = (q, res, tangent)
    return best


class CovarianceResult:
    """Boolean outcome plus the residual evidence behind it."""

    def __init__(self, ok: bool, max_residual: float, checked: int):
        self.ok = ok
        self.max_residual = max_residual
        self.checked = checked

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return (f"CovarianceResult(ok={self.ok}, max_residual="
                f"{self.max_residual:.3e}, checked={self.checked})")


def verify_lu_covariance(s: BipartiteState, u, samples: int = 5, seed: int = 42,
                         tol: Tolerance = DEFAULT_TOL) -> CovarianceResult:
    """Check V_A(T(rho)) = U_A^{-1}(V_A(rho)) by point mapping.

    Points r sampled on V_A(T(rho)) are pushed through r'_l = sum_i r_i
    (U_A)_{il} and must land on V_A(rho); the converse direction uses the
    inverse map.  Residuals are Hermitian-determinant residuals at the
    mapped points.
    """
    from .states import apply_local_unitary

    threshold = WITNESS_FACTOR * tol.abs_eps
    transformed = apply_local_unitary(s, u)
    ua = u.u_a.to_numpy()
    fwd = ua.T                      # r -> r' = U_A^T r
    bwd = ua.conj()                 # inverse direction: ((U_A)^T)^-1 = conj(U_A)
    v_orig = variety_of_state(s, "A")
    v_trans = variety_of_state(transformed, "A")
    max_res = 0.0
    checked = 0
    for variety_from, variety_to, mat in ((v_trans, v_orig, fwd),
                                          (v_orig, v_trans, bwd)):
        if variety_from.structural in ("Empty", "Full"):
            continue
        try:
            pts = sample_points(variety_from, samples, seed, tol)
        except SamplingExhausted:
            continue
        for p in pts:
            vec = np.array([complex(x) for x in p])
            mapped = tuple(mat @ vec)
            res = variety_to.hermitian_residual(project_normalize(mapped))
            max_res = max(max_res, res)
            checked += 1
    return CovarianceResult(max_res <= threshold and checked > 0, max_res, checked)
