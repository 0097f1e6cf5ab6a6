"""Cyclotomic integers and finite field arithmetic."""

import cmath

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matkloos.errors import (
    CompositeP,
    DegreeMismatch,
    PrimeMismatch,
    ReducibleModulus,
)
from matkloos.ffield import (
    CycloInt,
    FqElem,
    cyclo_abs,
    embed_field,
    fq_trace,
    is_prime,
    make_field,
    poly_roots,
    psi_char,
)


def cyclos(p):
    return st.builds(
        lambda cs: CycloInt(p, cs),
        st.lists(st.integers(-50, 50), min_size=p - 1, max_size=p - 1),
    )


class TestCycloInt:
    def test_zeta_power_relation(self):
        # 1 + zeta + ... + zeta^(p-1) = 0
        for p in (2, 3, 5, 7):
            assert CycloInt.from_exponent_counts(p, [1] * p) == CycloInt.zero(p)

    def test_zeta_multiplication_cycles(self):
        z = CycloInt.zeta(5)
        assert z ** 5 == CycloInt.one(5)
        assert z ** 4 * z == 1
        assert z * CycloInt.zeta(5, 3) == CycloInt.zeta(5, 4)

    def test_rational_detection(self):
        x = CycloInt.from_int(7, -42)
        assert x.is_rational()
        assert x.as_int() == -42
        assert not CycloInt.zeta(7).is_rational()

    def test_to_complex_matches_roots_of_unity(self):
        p = 5
        for k in range(p):
            expect = cmath.exp(2j * cmath.pi * k / p)
            assert abs(CycloInt.zeta(p, k).to_complex() - expect) < 1e-12

    def test_abs_of_integer(self):
        assert cyclo_abs(CycloInt.from_int(3, -6)) == pytest.approx(6.0)

    def test_prime_mismatch_rejected(self):
        with pytest.raises(PrimeMismatch):
            CycloInt.one(3) + CycloInt.one(5)

    def test_json_roundtrip(self):
        x = CycloInt(5, (3, -1, 0, 2))
        assert CycloInt.from_json(x.to_json()) == x

    @given(cyclos(5), cyclos(5), cyclos(5))
    @settings(max_examples=60, deadline=None)
    def test_ring_axioms(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)
        assert a - a == CycloInt.zero(5)
        assert a * 1 == a

    @given(cyclos(7), cyclos(7))
    @settings(max_examples=40, deadline=None)
    def test_complex_homomorphism(self, a, b):
        lhs = (a * b).to_complex()
        rhs = a.to_complex() * b.to_complex()
        assert abs(lhs - rhs) < 1e-6 * (1 + abs(rhs))


class TestPrimeField:
    def test_is_prime_small(self):
        assert [n for n in range(2, 30) if is_prime(n)] == [
            2, 3, 5, 7, 11, 13, 17, 19, 23, 29,
        ]

    def test_make_field_rejects_composite(self):
        with pytest.raises(CompositeP):
            make_field(6)

    def test_elements_and_arithmetic(self, F5):
        xs = F5.elements()
        assert len(xs) == 5
        two, three = F5.element(2), F5.element(3)
        assert two + three == F5.zero()
        assert two * three == F5.one()
        assert (two / three) * three == two

    def test_trace_is_identity_on_prime_field(self, F7):
        for x in F7.iter_elements():
            assert fq_trace(x) == x.index()


class TestExtensionField:
    def test_rejects_reducible_modulus(self):
        # x^2 + 1 = (x + 1)^2 over F_2
        with pytest.raises(ReducibleModulus):
            make_field(2, 2, modulus=[1, 0, 1])

    def test_f4_structure(self):
        F4 = make_field(2, 2)
        xs = F4.elements()
        assert len(xs) == 4
        g = F4.gen()
        assert g * g * g == F4.one()
        assert g * g == g + F4.one()  # x^2 = x + 1 mod the Conway-style modulus

    def test_gen_satisfies_modulus(self):
        F25 = make_field(5, 2)
        g = F25.gen()
        acc = F25.zero()
        for c in reversed(F25.modulus):
            acc = acc * g + c
        assert acc == F25.zero()

    def test_multiplicative_generator_is_primitive(self):
        from matkloos.oracle import multiplicative_generator

        F25 = make_field(5, 2)
        g = multiplicative_generator(F25)
        powers = {(g ** k).index() for k in range(24)}
        assert len(powers) == 24

    def test_inverse_roundtrip(self):
        F27 = make_field(3, 3)
        for x in F27.iter_elements():
            if x:
                assert x * x.inverse() == F27.one()

    def test_frobenius_trace_additive(self):
        F9 = make_field(3, 2)
        for x in F9.iter_elements():
            for y in F9.iter_elements():
                assert fq_trace(x + y) == (fq_trace(x) + fq_trace(y)) % 3

    def test_embed_preserves_operations(self, F5):
        F25 = make_field(5, 2)
        emb = embed_field(F5, F25)
        for a in F5.iter_elements():
            for b in F5.iter_elements():
                assert emb(a) + emb(b) == emb(a + b)
                assert emb(a) * emb(b) == emb(a * b)

    def test_embed_rejects_bad_degree(self):
        F125 = make_field(5, 3)
        F25 = make_field(5, 2)
        with pytest.raises(DegreeMismatch):
            embed_field(F25, F125)

    def test_field_json_roundtrip(self):
        F8 = make_field(2, 3)
        back = type(F8).from_json(F8.to_json())
        assert back == F8


class TestPolyRoots:
    def test_split_quadratic(self, F7):
        # (x - 2)(x - 5) = x^2 - 7x + 10 = x^2 + 3
        roots, cofactor = poly_roots([F7.element(3), F7.zero(), F7.one()], F7)
        assert sorted(r.index() for r, _ in roots) == [2, 5]
        assert all(m == 1 for _, m in roots)
        assert len(cofactor) == 1

    def test_repeated_root_multiplicity(self, F5):
        # (x - 2)^2 = x^2 + x + 4
        roots, cofactor = poly_roots([F5.element(4), F5.one(), F5.one()], F5)
        assert [(r.index(), m) for r, m in roots] == [(2, 2)]
        assert len(cofactor) == 1

    def test_irreducible_leaves_cofactor(self, F3):
        roots, cofactor = poly_roots([F3.one(), F3.zero(), F3.one()], F3)
        assert roots == []
        assert len(cofactor) == 3

    def test_root_in_extension(self):
        F4 = make_field(2, 2)
        # x^2 + x + 1 splits over F_4
        roots, _ = poly_roots([F4.one(), F4.one(), F4.one()], F4)
        assert len(roots) == 2
        for r, m in roots:
            assert m == 1
            assert r * r + r + F4.one() == F4.zero()


class TestPsi:
    def test_zero_maps_to_one(self, F5):
        assert psi_char(F5.zero()) == CycloInt.one(5)

    def test_character_is_multiplicative_over_addition(self, F3):
        F9 = make_field(3, 2)
        for x in F9.iter_elements():
            for y in F9.iter_elements():
                assert psi_char(x) * psi_char(y) == psi_char(x + y)

    def test_sum_over_field_vanishes(self):
        for ctx in (make_field(3), make_field(5), make_field(2, 2)):
            total = CycloInt.zero(ctx.p)
            for x in ctx.iter_elements():
                total = total + psi_char(x)
            assert not total
