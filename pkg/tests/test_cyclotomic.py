from fractions import Fraction

from levelzero.cyclotomic import Cyclo, cyclo_sum, cyclotomic_coeffs


def test_cyclotomic_polynomials():
    assert cyclotomic_coeffs(1) == (-1, 1)
    assert cyclotomic_coeffs(2) == (1, 1)
    assert cyclotomic_coeffs(4) == (1, 0, 1)
    assert cyclotomic_coeffs(6) == (1, -1, 1)
    # degree is Euler phi
    assert len(cyclotomic_coeffs(12)) - 1 == 4


def test_root_sums_vanish():
    for e in (2, 3, 4, 5, 6, 8, 9, 12):
        assert cyclo_sum(Cyclo.root(e, k) for k in range(e)).is_zero()


def test_arithmetic():
    z = Cyclo.root(3)
    assert z * z * z == 1
    assert z + z.conj() == -1
    # cross-order products land in the lcm field
    w = Cyclo.root(4)
    x = z * w
    assert x * x.conj() == 1
    assert (Cyclo.integer(2) + Cyclo.rational(Fraction(1, 2))) \
        == Cyclo.rational(Fraction(5, 2))


def test_rational_detection():
    z = Cyclo.root(5)
    s = cyclo_sum(Cyclo.root(5, k) for k in range(1, 5))
    assert s.is_rational() and s.rational_value() == -1
    assert not z.is_rational()
    assert (z - z).is_zero()


def test_division_and_keys():
    z = Cyclo.root(8)
    half = z / 2
    assert half * 2 == z
    # key is order-insensitive for equal values
    a = Cyclo.root(2)
    b = Cyclo.integer(-1)
    assert a == b and a.key() == b.key()
    assert hash(a) == hash(b)


def test_embedding_errors():
    z = Cyclo.root(3)
    try:
        z.to_order(4)
    except ValueError:
        pass
    else:
        raise AssertionError("expected an embedding failure")
