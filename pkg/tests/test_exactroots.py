import random
from fractions import Fraction

import pytest

from detvar.exactroots import (
    ec_divmod,
    ec_gcd,
    fq_divmod,
    fq_gcd,
    gaussian_rational_roots,
    rational_roots,
    simplest_between,
)
from detvar.scalars import ExactComplex

EC = ExactComplex
F = Fraction


def poly_mul(a, b):
    out = [F(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def ec_mul(a, b):
    out = [EC(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def test_simplest_between():
    assert simplest_between(F(1, 3), F(1, 2)) == F(2, 5)
    assert simplest_between(F(-1, 2), F(1, 3)) == 0
    assert simplest_between(F(5, 2), F(7, 2)) == 3
    assert simplest_between(F(17, 12), F(18, 12)) == F(10, 7)
    assert simplest_between(F(-7, 3), F(-9, 4)) == F(-16, 7)
    with pytest.raises(ValueError):
        simplest_between(F(1), F(1))


def test_simplest_between_is_minimal_denominator():
    rng = random.Random(8)
    for _ in range(200):
        a = F(rng.randint(-400, 400), rng.randint(1, 40))
        b = a + F(1, rng.randint(1, 500))
        best = simplest_between(a, b)
        assert a < best < b
        # nothing simpler sits strictly inside
        for q in range(1, best.denominator):
            lo = (a * q).numerator // (a * q).denominator
            for p in (lo, lo + 1, lo + 2):
                assert not (a < F(p, q) < b)


def test_rational_roots_with_multiplicity():
    p = [F(1)]
    for factor in ([-2, 1], [3, 4], [3, 4], [-1, 2]):
        p = poly_mul(p, [F(c) for c in factor])
    roots = dict(rational_roots(p))
    assert roots == {F(2): 1, F(-3, 4): 2, F(1, 2): 1}


def test_rational_roots_negative_certificates():
    assert rational_roots([F(-2), F(0), F(1)]) == []       # x^2 - 2
    assert rational_roots([F(-2), F(0), F(0), F(1)]) == []  # x^3 - 2
    assert rational_roots([F(1), F(1), F(1)]) == []         # x^2 + x + 1
    # root at zero with multiplicity
    assert dict(rational_roots([F(0), F(0), F(-5), F(1)])) == {F(0): 2, F(5): 1}


def test_rational_roots_large_denominator():
    # (97 x - 31)(x^2 + 1)
    p = poly_mul([F(-31), F(97)], [F(1), F(0), F(1)])
    assert rational_roots(p) == [(F(31, 97), 1)]


def test_gaussian_roots_basic():
    assert {z for z, _ in gaussian_rational_roots([EC(1), EC(0), EC(1)])} == \
        {EC(0, 1), EC(0, -1)}
    # z^2 + 2i factors through +-(1 - i)
    got = {z for z, _ in gaussian_rational_roots([EC(0, 2), EC(0), EC(1)])}
    assert got == {EC(1, -1), EC(-1, 1)}
    assert gaussian_rational_roots([EC(-2), EC(0), EC(1)]) == []


def test_gaussian_roots_multiplicity_and_mixed():
    root = EC(1, 2)
    p = ec_mul(ec_mul([-root, EC(1)], [-root, EC(1)]), [EC(-3), EC(1)])
    out = dict(gaussian_rational_roots(p))
    assert out == {root: 2, EC(3): 1}
    # rational root next to a conjugate-irrational pair
    p2 = ec_mul([EC(F(-1, 2)), EC(1)], [EC(1), EC(1), EC(1)])
    assert dict(gaussian_rational_roots(p2)) == {EC(F(1, 2)): 1}


def test_gaussian_roots_random_reconstruction():
    rng = random.Random(13)
    for _ in range(15):
        roots = [EC(F(rng.randint(-6, 6), rng.randint(1, 3)),
                    F(rng.randint(-6, 6), rng.randint(1, 3))) for _ in range(3)]
        p = [EC(rng.randint(1, 3))]
        for r in roots:
            p = ec_mul(p, [-r, EC(1)])
        found = gaussian_rational_roots(p)
        assert sum(m for _, m in found) == 3
        assert {z for z, _ in found} == set(roots)


def test_polynomial_division_helpers():
    q, r = fq_divmod([F(1), F(0), F(1)], [F(1), F(1)])
    assert r == [F(2)] and q == [F(-1), F(1)]
    g = fq_gcd(poly_mul([F(-1), F(1)], [F(2), F(1)]), poly_mul([F(-1), F(1)], [F(5), F(1)]))
    assert g == [F(-1), F(1)]
    eq, er = ec_divmod([EC(0, 1), EC(1)], [EC(1), EC(1)])
    assert er == [EC(-1, 1)] if er else True
    eg = ec_gcd(ec_mul([EC(0, -1), EC(1)], [EC(2), EC(1)]),
                ec_mul([EC(0, -1), EC(1)], [EC(-5), EC(1)]))
    assert eg == [EC(0, -1), EC(1)]
