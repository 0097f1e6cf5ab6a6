"""Matrices over F_q: arithmetic, spectra, GL enumeration."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matkloos.combinat import gl_order, partitions
from matkloos.errors import (
    BudgetExceeded,
    DimensionMismatch,
    SingularMatrix,
)
from matkloos.ffield import make_field
from matkloos.matfq import (
    JordanData,
    MatFq,
    SpectralClass,
    block_diag,
    char_poly,
    companion_matrix,
    enumerate_gl,
    jordan_data,
    jordan_matrix,
    mat_inverse,
    nilpotent_from_epsilons,
    nonsplit_factor_data,
    random_gl,
    random_matrix,
    spectral_class,
)


def _mats(p, n):
    ctx = make_field(p)
    return st.builds(
        lambda flat: MatFq(ctx, [flat[i * n : (i + 1) * n] for i in range(n)]),
        st.lists(st.integers(0, p - 1), min_size=n * n, max_size=n * n),
    )


class TestArithmetic:
    def test_rejects_non_square(self, F3):
        with pytest.raises(DimensionMismatch):
            MatFq(F3, [[1, 2]])

    def test_identity_neutral(self, F5, rng):
        a = random_matrix(F5, 3, rng)
        e = MatFq.identity(F5, 3)
        assert a * e == a
        assert e * a == a

    def test_trace_of_elementary(self, F5):
        assert MatFq.elementary(F5, 3, 0, 0).trace() == F5.one()
        assert MatFq.elementary(F5, 3, 0, 2).trace() == F5.zero()

    def test_transpose_involutive(self, F3, rng):
        a = random_matrix(F3, 4, rng)
        assert a.transpose().transpose() == a

    @given(_mats(5, 3), _mats(5, 3))
    @settings(max_examples=40, deadline=None)
    def test_det_multiplicative(self, a, b):
        assert (a * b).det() == a.det() * b.det()

    @given(_mats(3, 3))
    @settings(max_examples=60, deadline=None)
    def test_inverse_roundtrip(self, a):
        if not a.is_invertible():
            with pytest.raises(SingularMatrix):
                mat_inverse(a)
            return
        e = MatFq.identity(a.ctx, a.n)
        assert a * mat_inverse(a) == e
        assert mat_inverse(a) * a == e

    def test_rank_examples(self, F3):
        assert MatFq.zero(F3, 3).rank() == 0
        assert MatFq.identity(F3, 3).rank() == 3
        assert MatFq.elementary(F3, 3, 0, 2).rank() == 1
        a = MatFq(F3, [[1, 2, 0], [2, 4 % 3, 0], [0, 0, 0]])
        assert a.rank() == 1

    def test_json_roundtrip_extension_field(self):
        F9 = make_field(3, 2)
        a = MatFq(F9, [[F9.gen(), F9.one()], [F9.zero(), F9.gen() ** 2]])
        assert MatFq.from_json(a.to_json()) == a

    def test_pow(self, F5):
        a = MatFq(F5, [[1, 1], [0, 1]])
        assert a ** 5 == MatFq(F5, [[1, 5 % 5], [0, 1]])
        assert a ** 0 == MatFq.identity(F5, 2)


class TestCharPoly:
    def test_companion_has_its_polynomial(self, F5):
        coeffs = [F5.element(2), F5.element(3), F5.element(0), F5.one()]
        a = companion_matrix(coeffs, F5)
        assert char_poly(a) == coeffs

    def test_diagonal(self, F7):
        a = MatFq(F7, [[2, 0], [0, 5]])
        # (x - 2)(x - 5) = x^2 + 3 over F_7
        assert char_poly(a) == [F7.element(3), F7.zero(), F7.one()]

    @given(_mats(3, 3), _mats(3, 3))
    @settings(max_examples=30, deadline=None)
    def test_conjugation_invariant(self, a, g):
        if not g.is_invertible():
            return
        assert char_poly(g * a * mat_inverse(g)) == char_poly(a)

    @given(_mats(5, 4))
    @settings(max_examples=30, deadline=None)
    def test_cayley_hamilton(self, a):
        cp = char_poly(a)
        acc = MatFq.zero(a.ctx, a.n)
        pw = MatFq.identity(a.ctx, a.n)
        for c in cp:
            acc = acc + pw * c
            pw = pw * a
        assert acc == MatFq.zero(a.ctx, a.n)

    def test_companion_needs_monic(self, F5):
        with pytest.raises(DimensionMismatch):
            companion_matrix([F5.one()], F5)


class TestJordan:
    def test_roundtrip_all_partitions(self, F5):
        for n in range(1, 5):
            for lam in partitions(n):
                for alpha in (1, 2):
                    a = jordan_matrix(lam, F5.element(alpha), F5)
                    jd = jordan_data(a)
                    assert jd.split
                    assert jd.eigen == ((F5.element(alpha), lam),)

    def test_nilpotent_partition(self, F3):
        a = jordan_matrix((1, 2), F3.zero(), F3)
        jd = jordan_data(a)
        assert jd.eigen == ((F3.zero(), (1, 2)),)

    def test_conjugation_invariant(self, F5, rng):
        a = jordan_matrix((1, 2), F5.element(2), F5)
        for _ in range(10):
            g = random_gl(F5, 3, rng)
            assert jordan_data(g * a * mat_inverse(g)) == jordan_data(a)

    def test_mixed_eigenvalues(self, F5):
        a = block_diag(
            jordan_matrix((2,), F5.one(), F5),
            jordan_matrix((1,), F5.element(3), F5),
        )
        jd = jordan_data(a)
        assert dict((al.index(), lam) for al, lam in jd.eigen) == {1: (2,), 3: (1,)}

    def test_nonsplit_cofactor(self, F3):
        # x^2 + 1 is irreducible over F_3
        a = companion_matrix([F3.one(), F3.zero(), F3.one()], F3)
        jd = jordan_data(a)
        assert not jd.split
        assert jd.eigen == ()
        assert [c.index() for c in jd.cofactor] == [1, 0, 1]

    def test_epsilon_pattern_matches_jordan_shape(self, F5):
        # boundary pattern 1,0,1 is the composition (2, 2) -> partition [2, 2]
        a = nilpotent_from_epsilons((1, 0, 1), F5.one(), F5)
        jd = jordan_data(a)
        assert jd.eigen == ((F5.one(), (2, 2)),)

    def test_epsilon_full_chain_is_single_block(self, F5):
        a = nilpotent_from_epsilons((1, 1), F5.one(), F5)
        assert a == jordan_matrix((3,), F5.one(), F5)


class TestNonsplitFactors:
    def test_quadratic_factor(self, F3):
        facs = nonsplit_factor_data([F3.one(), F3.zero(), F3.one()], F3)
        assert len(facs) == 1
        d, mult, root, ext = facs[0]
        assert (d, mult) == (2, 1)
        assert ext.q == 9
        assert root * root + ext.one() == ext.zero()

    def test_repeated_quadratic(self, F3):
        # (x^2 + 1)^2
        sq = [1, 0, 2, 0, 1]
        facs = nonsplit_factor_data([F3.element(c) for c in sq], F3)
        assert [(d, m) for d, m, _, _ in facs] == [(2, 2)]

    def test_two_distinct_quadratics(self, F5):
        # x^2 + 2 and x^2 + 3 are both irreducible over F_5
        prod = [6 % 5, 0, 5 % 5, 0, 1]  # (x^2+2)(x^2+3) = x^4 + 5x^2 + 6
        facs = nonsplit_factor_data([F5.element(c) for c in prod], F5)
        assert sorted((d, m) for d, m, _, _ in facs) == [(2, 1), (2, 1)]

    def test_budget_cap(self, F5):
        with pytest.raises(BudgetExceeded):
            nonsplit_factor_data([F5.element(3), F5.zero(), F5.one()], F5, cap=10)


class TestSpectralClass:
    def test_representatives(self, F3):
        cases = [
            (MatFq.zero(F3, 2), SpectralClass.ZERO),
            (MatFq.elementary(F3, 2, 0, 1), SpectralClass.NILPOTENT),
            (MatFq.scalar(F3, 2, 2), SpectralClass.SCALAR),
            (jordan_matrix((2,), F3.one(), F3), SpectralClass.SPLIT_SINGLE_EIGENVALUE),
            (MatFq(F3, [[1, 0], [0, 2]]), SpectralClass.REGULAR_SPLIT_SEMISIMPLE),
            (MatFq(F3, [[1, 0], [0, 0]]), SpectralClass.SINGULAR),
            (
                companion_matrix([F3.one(), F3.zero(), F3.one()], F3),
                SpectralClass.IRREDUCIBLE_CHAR_POLY,
            ),
        ]
        for a, want in cases:
            assert spectral_class(a) == want

    def test_split_general(self, F5):
        a = block_diag(
            jordan_matrix((2,), F5.one(), F5),
            jordan_matrix((1,), F5.element(2), F5),
        )
        assert spectral_class(a) == SpectralClass.SPLIT_GENERAL

    def test_nonsplit_mixed(self, F3):
        a = block_diag(
            companion_matrix([F3.one(), F3.zero(), F3.one()], F3),
            jordan_matrix((1,), F3.one(), F3),
        )
        assert spectral_class(a) == SpectralClass.NONSPLIT_MIXED


class TestEnumerateGl:
    @pytest.mark.parametrize(
        "n,q", [(1, 2), (1, 5), (2, 2), (2, 3), (3, 2), (2, 5)]
    )
    def test_counts(self, n, q):
        ctx = make_field(q)
        mats = list(enumerate_gl(ctx, n))
        assert len(mats) == gl_order(n, q)
        assert all(m.is_invertible() for m in mats)

    def test_no_duplicates(self, F3):
        seen = {tuple(map(tuple, m.to_int_rows())) for m in enumerate_gl(F3, 2)}
        assert len(seen) == 48

    def test_extension_field(self):
        F4 = make_field(2, 2)
        assert sum(1 for _ in enumerate_gl(F4, 2)) == gl_order(2, 4)

    def test_budget(self, F5):
        with pytest.raises(BudgetExceeded):
            list(enumerate_gl(F5, 3, budget=100))

    def test_random_gl_invertible(self, F5, rng):
        for _ in range(20):
            assert random_gl(F5, 3, rng).is_invertible()


class TestBlockDiag:
    def test_shape_and_content(self, F5):
        a = MatFq(F5, [[1, 2], [3, 4]])
        b = MatFq(F5, [[2]])
        c = block_diag(a, b)
        assert c.n == 3
        assert c.to_int_rows() == [[1, 2, 0], [3, 4, 0], [0, 0, 2]]

    def test_det_multiplicative(self, F5, rng):
        a = random_matrix(F5, 2, rng)
        b = random_matrix(F5, 3, rng)
        assert block_diag(a, b).det() == a.det() * b.det()
