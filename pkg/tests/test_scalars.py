import random
from fractions import Fraction

import pytest

from detvar.errors import DivisionByZero
from detvar.scalars import ExactComplex, Tolerance, approx_close, exact_field_ops


def test_norm_identity():
    a = ExactComplex(Fraction(1, 2), 1)
    b = ExactComplex(Fraction(1, 2), -1)
    assert a * b == ExactComplex(Fraction(5, 4))


def test_inverse_of_i():
    assert ExactComplex(0, 1).inverse() == ExactComplex(0, -1)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        ExactComplex(1) / ExactComplex(0)
    with pytest.raises(DivisionByZero):
        exact_field_ops(ExactComplex(1), ExactComplex(0), "div")


def test_canonical_zero_and_reduction():
    z = ExactComplex(Fraction(2, 4), Fraction(-6, 8))
    assert z.re == Fraction(1, 2) and z.re.denominator == 2
    assert z.im == Fraction(-3, 4) and z.im.denominator == 4
    assert (z - z).is_zero()


def test_approx_close_cases():
    assert approx_close(1.0, 1.0 + 1e-12)
    assert not approx_close(0.0, 1e-3)
    for z in (0.3 + 0.7j, -2.5j, 1e6 + 1e-6j):
        assert approx_close(z, z)


def test_approx_close_rejects_nonfinite():
    with pytest.raises(ValueError):
        approx_close(float("nan"), 0.0)


def test_tolerance_positivity():
    with pytest.raises(ValueError):
        Tolerance(abs_eps=0.0)


def _rand_ec(rng):
    return ExactComplex(Fraction(rng.randint(-20, 20), rng.randint(1, 9)),
                        Fraction(rng.randint(-20, 20), rng.randint(1, 9)))


def test_field_axioms_randomized():
    rng = random.Random(11)
    for _ in range(60):
        a, b, c = _rand_ec(rng), _rand_ec(rng), _rand_ec(rng)
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        if not a.is_zero():
            assert a * a.inverse() == ExactComplex(1)
        assert (a * b).conjugate() == a.conjugate() * b.conjugate()


def test_dispatch_surface():
    a = ExactComplex(2, 3)
    b = ExactComplex(1, -1)
    assert exact_field_ops(a, b, "add") == a + b
    assert exact_field_ops(a, b, "sub") == a - b
    assert exact_field_ops(a, b, "mul") == a * b
    assert exact_field_ops(a, b, "conj") == a.conjugate()
    assert exact_field_ops(a, b, "inv") == a.inverse()


def test_roundtrip_to_binary64():
    # dyadic rationals are exactly representable, so conversion is exact
    rng = random.Random(3)
    for _ in range(40):
        re = Fraction(rng.randint(-999, 999), 2 ** rng.randint(0, 10))
        im = Fraction(rng.randint(-999, 999), 2 ** rng.randint(0, 10))
        z = ExactComplex(re, im).to_complex()
        assert z.real == float(re) and z.imag == float(im)
