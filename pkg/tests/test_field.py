import itertools

import numpy as np
import pytest

from wordlab.errors import DivisionByZero, NotPrime, ParseError
from wordlab.field import is_irreducible, make_field, parse_field

SMALL_FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (2, 4), (3, 3), (3, 4), (2, 6)]


def test_prime_field_modulus_is_x():
    F = make_field(5, 1)
    assert F.q == 5
    assert F.modulus == (0, 1)


def test_f4_modulus_by_exhaustion():
    # monic quadratics over F_2 with no root in F_2
    rootless = [c for c in itertools.product(range(2), repeat=2)
                if all((c[0] + c[1] * x + x * x) % 2 for x in range(2))]
    assert rootless == [(1, 1)]
    assert make_field(2, 2).modulus == (1, 1, 1)


def test_not_prime():
    with pytest.raises(NotPrime):
        make_field(4, 1)


def test_f4_examples():
    F = make_field(2, 2)
    t = F.element([0, 1])
    assert F.mul(t, F.add(t, 1)) == 1
    assert F.frobenius(t) == F.add(t, 1)
    for a in F.elements():
        assert F.mul(1, a) == a


def test_inverse_of_zero():
    with pytest.raises(DivisionByZero):
        make_field(3, 2).inv(0)


@pytest.mark.parametrize("p,f", [pf for pf in SMALL_FIELDS if pf[0] ** pf[1] <= 81])
def test_field_axioms_exhaustive(p, f):
    F = make_field(p, f)
    q = F.q
    a, b, c = (x.ravel() for x in np.indices((q, q, q)))
    add, mul = F.add_arr, F.mul_arr
    assert np.array_equal(add(add(a, b), c), add(a, add(b, c)))
    assert np.array_equal(mul(mul(a, b), c), mul(a, mul(b, c)))
    assert np.array_equal(mul(a, add(b, c)), add(mul(a, b), mul(a, c)))
    x, y = (v.ravel() for v in np.indices((q, q)))
    assert np.array_equal(add(x, y), add(y, x))
    assert np.array_equal(mul(x, y), mul(y, x))
    nz = np.arange(1, q)
    assert np.all(mul(nz, F.inv_arr(nz)) == 1)


@pytest.mark.parametrize("p,f", [pf for pf in SMALL_FIELDS if pf[0] ** pf[1] <= 81])
def test_scalar_and_table_routes_agree(p, f):
    F = make_field(p, f)
    for a in F.elements():
        for b in F.elements():
            assert F.mul(a, b) == int(F.mul_arr(a, b))
            assert F.add(a, b) == int(F.add_arr(a, b))


@pytest.mark.parametrize("p,f", SMALL_FIELDS)
def test_fermat_and_frobenius_order(p, f):
    F = make_field(p, f)
    every = np.arange(F.q)
    assert np.array_equal(F.pow_arr(every, F.q), every)
    x = every
    for _ in range(f):
        x = F.frobenius_arr(x)
    assert np.array_equal(x, every)
    for a in list(F.elements())[:20]:
        assert F.pow(a, F.q) == a
        assert F.frobenius(a, f) == a


@pytest.mark.parametrize("p,f", SMALL_FIELDS)
def test_modulus_is_least_irreducible(p, f):
    F = make_field(p, f)
    assert is_irreducible(list(F.modulus), p)
    if f > 1:
        for low in itertools.product(range(p), repeat=f):
            if list(low) == list(F.modulus[:-1]):
                break
            assert not is_irreducible(list(low) + [1], p)


def test_parse_field_spec():
    assert parse_field("F2^3").q == 8
    assert parse_field("F7").q == 7
    assert parse_field("F2^3").spec == "F2^3"
    with pytest.raises(ParseError):
        parse_field("GF(8)")
