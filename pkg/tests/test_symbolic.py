"""Polynomials in Z[A, G, K]: recursion, closed forms, cell tables."""

import itertools
import json

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.parsing.sympy_parser import parse_expr, standard_transformations, convert_xor

from matkloos.combinat import Involution, involutions, partitions
from matkloos.errors import NonCanonicalPartition, RangeError
from matkloos.ffield import CycloInt
from matkloos.symbolic import (
    A,
    G,
    K,
    ONE,
    KPoly,
    full_block_cell_poly,
    identity_cell_poly,
    involution_closed_form,
    kpoly_eval,
    n4_cell_table,
    partition_poly,
    scalar_cell_poly,
    shape_epsilons,
    single_block_poly,
    transposition_cell_poly,
)

_TRANSFORMS = standard_transformations + (convert_xor,)


def _parse(text):
    return sympy.expand(parse_expr(text, transformations=_TRANSFORMS))


def kpolys():
    term = st.tuples(
        st.integers(-9, 9), st.integers(0, 4), st.integers(0, 3), st.integers(0, 4)
    )
    return st.builds(
        lambda ts: sum(
            (KPoly.term(c, a=a, g=g, k=k) for c, a, g, k in ts), KPoly.zero()
        ),
        st.lists(term, max_size=5),
    )


class TestKPolyAlgebra:
    def test_constants(self):
        assert A * ONE == A
        assert K - K == KPoly.zero()
        assert not KPoly.zero()
        assert bool(A)

    def test_int_coercion(self):
        assert KPoly.term(3) == 3
        assert KPoly.zero() == 0
        assert 2 * A == A + A

    def test_pow(self):
        assert (A + K) ** 2 == A * A + 2 * A * K + K * K
        assert A ** 0 == ONE
        with pytest.raises(RangeError):
            A ** -1

    def test_negative_exponent_rejected(self):
        with pytest.raises(RangeError):
            KPoly.term(1, a=-1)

    def test_expand_g(self):
        assert G.expand_g() == A - 1
        assert (G * G).expand_g() == A * A - 2 * A + 1
        assert (A * K).expand_g() == A * K

    def test_render(self):
        p = A ** 3 * K ** 3 - 2 * A ** 4 * K
        assert str(p) == "A^3*K^3 - 2*A^4*K"
        assert p.q_display() == "q^3*K^3 - 2*q^4*K"
        assert G.q_display() == "(q-1)"

    def test_json_roundtrip(self):
        p = A * K ** 2 + G * A ** 2 - 3 * ONE
        assert KPoly.from_json(p.to_json()) == p
        # serialized term order is deterministic
        assert p.to_json() == json.loads(json.dumps(p.to_json()))

    @given(kpolys(), kpolys(), kpolys())
    @settings(max_examples=60, deadline=None)
    def test_ring_axioms(self, x, y, z):
        assert (x + y) + z == x + (y + z)
        assert x * y == y * x
        assert x * (y + z) == x * y + x * z
        assert x - x == KPoly.zero()

    @given(kpolys(), st.integers(2, 7), st.integers(-4, 4))
    @settings(max_examples=40, deadline=None)
    def test_eval_is_hom(self, x, q, k1i):
        # rational K_1 stand-in keeps everything in Z inside Z[zeta_5]
        k1 = CycloInt.from_int(5, k1i)
        lhs = kpoly_eval(x * x, q, k1)
        rhs = kpoly_eval(x, q, k1) * kpoly_eval(x, q, k1)
        assert lhs == rhs


PRINTED = {
    (1, 1): "q*K^2 + q^2*(q-1)",
    (2,): "q*K^2 - q^2",
    (1, 1, 1): "q^3*K^3 + (q^5 + 2*q^4)*(q-1)*K",
    (1, 2): "q^3*K^3 + q^4*(q-2)*K",
    (3,): "q^3*K^3 - 2*q^4*K",
    (2, 2): "q^6*K^4 + q^7*(q-3)*K^2 + q^8*(q^2-q+1)",
}


class TestPartitionPoly:
    @pytest.mark.parametrize("lam", sorted(PRINTED))
    def test_published_tables(self, lam):
        got = _parse(partition_poly(lam).q_display())
        want = _parse(PRINTED[lam])
        assert sympy.simplify(got - want) == 0

    def test_trivial_partition(self):
        assert partition_poly((1,)) == K

    def test_rejects_bad_partition(self):
        with pytest.raises(NonCanonicalPartition):
            partition_poly((2, 1))
        with pytest.raises(NonCanonicalPartition):
            partition_poly((0, 2))

    def test_scalar_matches_closed_form(self):
        for n in range(1, 7):
            lhs = partition_poly((1,) * n).expand_g()
            rhs = involution_closed_form(n).expand_g()
            assert lhs == rhs

    def test_single_block_matches_chebyshev(self):
        for n in range(1, 8):
            assert partition_poly((n,)) == single_block_poly(n)

    def test_specialization_consistency(self):
        # at K_1 = q - 1 ("alpha = 0 formally") every P_lambda collapses to
        # a polynomial in q alone; sanity check degrees stay in range
        for lam in partitions(4):
            p = partition_poly(lam)
            v = kpoly_eval(p, 3, CycloInt.from_int(3, 2))
            assert v.is_rational()

    def test_memoization_returns_equal_objects(self):
        assert partition_poly((1, 2)) == partition_poly((1, 2))


class TestShapeEpsilons:
    def test_patterns(self):
        assert shape_epsilons((1, 1, 1)) == (0, 0)
        assert shape_epsilons((2, 1)) == (1, 0)
        assert shape_epsilons((1, 2)) == (0, 1)
        assert shape_epsilons((3,)) == (1, 1)
        assert shape_epsilons((2, 2)) == (1, 0, 1)

    def test_rejects_nonpositive(self):
        with pytest.raises(NonCanonicalPartition):
            shape_epsilons((0, 3))


class TestCellTheorems:
    def test_identity_cell(self):
        assert identity_cell_poly(3) == A ** 3 * K ** 3
        assert identity_cell_poly(4) == A ** 6 * K ** 4

    def test_adjacent_transposition_boundary(self):
        # eps_1 = 0 for shape (1, 2): G A branch
        got = transposition_cell_poly((1, 2), 1, 2)
        assert got == KPoly.term(1, a=4, g=1, k=1)

    def test_adjacent_transposition_interior(self):
        # eps_1 = 1 for shape (2, 1): -A branch
        got = transposition_cell_poly((2, 1), 1, 2)
        assert got == KPoly.term(-1, a=4, k=1)

    def test_distant_transposition_vanishes_on_interior_edge(self):
        assert transposition_cell_poly((3,), 1, 3) == KPoly.zero()

    def test_distant_transposition_both_boundaries(self):
        # shape (1,1,1): eps = (0,0), (13) has d = 0
        got = transposition_cell_poly((1, 1, 1), 1, 3)
        assert got == KPoly.term(1, a=3 + 2, g=1, k=1)

    def test_out_of_range(self):
        with pytest.raises(RangeError):
            transposition_cell_poly((1, 1, 1), 2, 2)

    def test_full_block_adjacent_cycles_only(self):
        w_adj = Involution((1, 0, 2, 3))
        w_far = Involution((2, 1, 0, 3))
        assert full_block_cell_poly(4, w_adj) == KPoly.term(-1, a=7, k=2)
        assert full_block_cell_poly(4, w_far) == KPoly.zero()

    def test_scalar_cell_sum_is_closed_form(self):
        for n in range(1, 7):
            total = sum(
                (scalar_cell_poly(n, w) for w in involutions(n)), KPoly.zero()
            )
            assert total == involution_closed_form(n)


@pytest.fixture(scope="module")
def table():
    return n4_cell_table()


class TestGoldenTable:
    def test_size_and_coverage(self, table):
        by_n = {}
        for c in table:
            by_n.setdefault(sum(c.shape), []).append(c)
        assert len(by_n[2]) == 2 * 2
        assert len(by_n[3]) == 4 * 4
        assert len(by_n[4]) == 8 * 10
        for n, group in by_n.items():
            shapes = {c.shape for c in group}
            assert len(shapes) == 2 ** (n - 1)

    def test_eps_consistent(self, table):
        for c in table:
            assert c.eps == shape_epsilons(c.shape)

    def test_identity_column(self, table):
        for c in table:
            if str(c.w) == "id":
                assert c.poly == identity_cell_poly(sum(c.shape))

    def test_transposition_columns_match_theorem(self, table):
        for c in table:
            cyc = c.w.cycles()
            if len(cyc) != 1:
                continue
            i, j = cyc[0]
            want = transposition_cell_poly(c.shape, i + 1, j + 1)
            assert c.poly == want, (c.shape, str(c.w))

    def test_full_block_rows_match_theorem(self, table):
        for c in table:
            if len(c.shape) == 1:
                n = c.shape[0]
                assert c.poly == full_block_cell_poly(n, c.w), str(c.w)

    def test_row_sums_are_partition_polys(self, table):
        sums = {}
        for c in table:
            key = c.shape
            sums[key] = sums.get(key, KPoly.zero()) + c.poly
        for shape, total in sums.items():
            lam = tuple(sorted(shape))
            assert total.expand_g() == partition_poly(lam).expand_g(), shape

    def test_scalar_row_equals_involution_terms(self, table):
        for c in table:
            if c.shape == (1, 1, 1, 1):
                assert c.poly == scalar_cell_poly(4, c.w)


class TestEvalNumeric:
    def test_matches_sympy(self):
        qs, ks = sympy.symbols("q K")
        for lam in [(1, 1), (2,), (1, 2), (3,), (2, 2)]:
            p = partition_poly(lam)
            expr = _parse(p.q_display())
            for q, k1i in itertools.product((2, 3, 5), (-2, 0, 1, 3)):
                want = int(expr.subs({qs: q, ks: k1i}))
                got = kpoly_eval(p, q, CycloInt.from_int(5, k1i))
                assert got == CycloInt.from_int(5, want)
