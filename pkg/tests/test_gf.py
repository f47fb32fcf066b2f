from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scrollforge.gf import (
    FieldError,
    FieldSpec,
    FieldTooSmallError,
    NotPrimePowerError,
    field,
    field_of_order,
    is_irreducible,
    least_irreducible,
    make_tower,
    prime_power,
)


def test_prime_power_decomposition():
    assert prime_power(7) == (7, 1)
    assert prime_power(8) == (2, 3)
    assert prime_power(9) == (3, 2)
    for bad in (1, 6, 10, 12, 0):
        with pytest.raises(NotPrimePowerError):
            prime_power(bad)


def test_small_q_rejected_with_distinct_error():
    with pytest.raises(FieldTooSmallError):
        make_tower(4)
    with pytest.raises(FieldTooSmallError):
        make_tower(5)
    with pytest.raises(NotPrimePowerError):
        make_tower(6)
    assert not issubclass(FieldTooSmallError, NotPrimePowerError)


def test_prime_field_products():
    F = field_of_order(7)
    assert F.mul(3, 5) == 1
    assert F.inv(3) == 5
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


def test_gf8_modulus_and_reduction():
    F = field_of_order(8)
    assert F.spec.modulus == (1, 1, 0, 1)  # x^3 + x + 1
    x, x2 = F.from_coeffs([0, 1]), F.from_coeffs([0, 0, 1])
    assert F.coeffs(F.mul(x, x2)) == (1, 1, 0)  # x * x^2 = x + 1


def test_moduli_are_irreducible_by_brute_force():
    # a cubic over GF(p) is irreducible iff it has no root
    for q, p in ((7, 7), (8, 2), (9, 3)):
        T = make_tower(q)
        mod = T.ext.spec.modulus
        assert len(mod) == 3 * T.base.k + 1
        if T.base.k == 1:
            assert all(sum(c * a**i for i, c in enumerate(mod)) % p for a in range(p))
    assert make_tower(7).ext.spec.modulus == (2, 0, 0, 1)


def test_least_irreducible_is_deterministic_and_checked():
    assert least_irreducible(2, 3) == least_irreducible(2, 3)
    assert is_irreducible((1, 1, 0, 1), 2)
    assert not is_irreducible((1, 0, 0, 1), 2)  # x^3 + 1 = (x + 1)(x^2 + x + 1)
    with pytest.raises(FieldError):
        FieldSpec(2, 3, (1, 0, 0, 1))
    with pytest.raises(FieldError):
        FieldSpec(4, 1, (0, 1))


def test_field_spec_json():
    F = field_of_order(7)
    assert F.spec.to_json() == {"p": 7, "k": 1, "modulus": [0, 1]}
    assert FieldSpec.from_json(F.spec.to_json()) == F.spec


@pytest.mark.parametrize("q", [7, 8, 9])
def test_fermat_little_exhaustive(q):
    F = field_of_order(q)
    assert all(F.pow(x, q - 1) == 1 for x in range(1, q))
    assert all(F.mul(x, F.inv(x)) == 1 for x in range(1, q))


@pytest.mark.parametrize("q", [7, 8, 9])
def test_field_axioms_sampled(q):
    F = field_of_order(q)
    rng = random.Random(q)
    for _ in range(1000):
        a, b, c = (rng.randrange(q) for _ in range(3))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
        assert F.sub(F.add(a, b), b) == a


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 342), st.integers(0, 342))
def test_extension_field_division(a, b):
    E = make_tower(7).ext
    if b:
        assert E.mul(E.div(a, b), b) == a


@pytest.mark.parametrize("q", [7, 8, 9])
def test_tower_embedding_and_frobenius(q):
    T = make_tower(q)
    F, E = T.base, T.ext
    for x, y in itertools.product(range(q), repeat=2):
        assert T.embed(F.add(x, y)) == E.add(T.embed(x), T.embed(y))
        assert T.embed(F.mul(x, y)) == E.mul(T.embed(x), T.embed(y))
    fixed = [z for z in range(E.order) if T.frobenius(z) == z]
    assert sorted(fixed) == sorted(T.embed(x) for x in range(q))
    assert T.frobenius(T.omega) != T.omega
    rng = random.Random(0)
    for z in rng.sample(range(E.order), 100):
        assert T.frobenius(T.frobenius(T.frobenius(z))) == z


def test_fixed_field_size_at_seven():
    T = make_tower(7)
    assert sum(1 for z in range(343) if T.frobenius(z) == z) == 7


def test_omega_basis_coordinates():
    T = make_tower(8)
    seen = {T.from_coords(c) for c in itertools.product(range(8), repeat=3)}
    assert len(seen) == 512
    for z in (0, 1, T.omega, 100, 511):
        assert T.from_coords(T.coords(z)) == z
    with pytest.raises(FieldError):
        T.restrict(T.omega)


def test_field_elements_and_mixed_fields():
    F7, F8 = field_of_order(7), field_of_order(8)
    a = F7(3)
    assert a * F7(5) == 1
    assert (a**6) == 1
    assert -a == F7(4)
    with pytest.raises(FieldError):
        a + F8(1)
    with pytest.raises(ZeroDivisionError):
        F7(0).inverse()


def test_field_cache_returns_same_object():
    assert field(2, 3) is field_of_order(8)
