"""Partitions, involutions, q-analogs, rank counts."""

import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from matkloos.combinat import (
    Involution,
    check_partition,
    gl_order,
    involutions,
    n_stat,
    partitions,
    poly_eval,
    q_binomial,
    rank_count,
)
from matkloos.errors import NonCanonicalPartition, NotInvolution, RangeError

# OEIS A000041 and A000085
PARTITION_COUNTS = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30]
TELEPHONE = [1, 1, 2, 4, 10, 26, 76, 232, 764]


class TestPartitions:
    def test_counts(self):
        for n, want in enumerate(PARTITION_COUNTS):
            assert len(list(partitions(n))) == want

    def test_parts_canonical(self):
        for lam in partitions(7):
            assert check_partition(lam) == lam
            assert sum(lam) == 7
            assert list(lam) == sorted(lam)

    def test_no_duplicates(self):
        lams = list(partitions(8))
        assert len(lams) == len(set(lams))

    def test_check_rejects_decreasing(self):
        with pytest.raises(NonCanonicalPartition):
            check_partition((2, 1))

    def test_check_rejects_nonpositive(self):
        with pytest.raises(NonCanonicalPartition):
            check_partition((0, 1))


class TestInvolutions:
    def test_telephone_numbers(self):
        for n, want in enumerate(TELEPHONE):
            assert sum(1 for _ in involutions(n)) == want

    def test_square_to_identity(self):
        for w in involutions(6):
            m = w.map
            assert all(m[m[i]] == i for i in range(6))

    def test_cycle_fixed_point_split(self):
        for n in range(7):
            for w in involutions(n):
                assert 2 * w.e + w.f == n
                assert len(w.cycles()) == w.e

    def test_crossings_equal_n_stat(self):
        for w in involutions(6):
            assert w.crossings == n_stat(w.map)

    def test_rejects_non_involution(self):
        with pytest.raises(NotInvolution):
            Involution((1, 2, 0))

    def test_str_cycle_notation(self):
        assert str(Involution((0, 1, 2))) == "id"
        assert str(Involution((1, 0, 2))) == "(12)"
        assert str(Involution((1, 0, 3, 2))) == "(12)(34)"

    def test_n_stat_brute_force(self):
        # independent count of pairs i < j with w(j) < w(i) <= j
        for perm in itertools.permutations(range(5)):
            want = 0
            for i in range(5):
                for j in range(i + 1, 5):
                    if perm[j] < perm[i] <= j:
                        want += 1
            assert n_stat(perm) == want

    def test_max_n_stat_is_quarter_square(self):
        for n in range(1, 9):
            best = max(w.crossings for w in involutions(n))
            assert best == n * n // 4


class TestQBinomial:
    def test_known_coefficients(self):
        assert q_binomial(4, 2) == (1, 1, 2, 1, 1)
        assert q_binomial(3, 1) == (1, 1, 1)
        assert q_binomial(5, 0) == (1,)

    def test_specializes_to_binomial_at_one(self):
        for k in range(8):
            for j in range(k + 1):
                assert poly_eval(q_binomial(k, j), 1) == math.comb(k, j)

    def test_symmetry(self):
        for k in range(8):
            for j in range(k + 1):
                assert q_binomial(k, j) == q_binomial(k, k - j)

    def test_counts_subspaces(self):
        # [3 choose 1]_2 = number of lines in F_2^3 = 7
        assert poly_eval(q_binomial(3, 1), 2) == 7
        # [4 choose 2]_3 = number of planes in F_3^4 = 130
        assert poly_eval(q_binomial(4, 2), 3) == 130

    def test_out_of_range(self):
        with pytest.raises(RangeError):
            q_binomial(2, 3)

    @given(st.integers(0, 9), st.integers(0, 9), st.integers(2, 5))
    @settings(max_examples=50, deadline=None)
    def test_pascal_recurrence(self, k, j, q):
        if j > k or k == 0 or j == 0 or j == k:
            return
        lhs = poly_eval(q_binomial(k, j), q)
        rhs = poly_eval(q_binomial(k - 1, j - 1), q) + q**j * poly_eval(
            q_binomial(k - 1, j), q
        )
        assert lhs == rhs


class TestGlOrder:
    def test_known_orders(self):
        assert gl_order(0, 3) == 1
        assert gl_order(1, 7) == 6
        assert gl_order(2, 2) == 6
        assert gl_order(2, 3) == 48
        assert gl_order(2, 5) == 480
        assert gl_order(3, 2) == 168
        assert gl_order(3, 3) == 11232

    def test_product_formula(self):
        for n in range(1, 5):
            for q in (2, 3, 4, 5):
                want = 1
                for i in range(n):
                    want *= q**n - q**i
                assert gl_order(n, q) == want


class TestRankCount:
    @staticmethod
    def _rank_mod_p(rows, p):
        rows = [list(r) for r in rows]
        rank = 0
        for col in range(len(rows[0]) if rows else 0):
            pivot = next(
                (r for r in range(rank, len(rows)) if rows[r][col] % p), None
            )
            if pivot is None:
                continue
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            inv = pow(rows[rank][col], -1, p)
            rows[rank] = [(x * inv) % p for x in rows[rank]]
            for r in range(len(rows)):
                if r != rank and rows[r][col]:
                    f = rows[r][col]
                    rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[rank])]
            rank += 1
        return rank

    def test_exhaustive_small(self):
        # count k x l matrices of each rank by brute force
        for q in (2, 3):
            for k in range(1, 4):
                for l in range(1, 4):
                    seen = [0] * (min(k, l) + 1)
                    for flat in itertools.product(range(q), repeat=k * l):
                        rows = [flat[i * l : (i + 1) * l] for i in range(k)]
                        seen[self._rank_mod_p(rows, q)] += 1
                    for j, count in enumerate(seen):
                        assert rank_count(k, l, j, q) == count

    def test_total_is_q_to_kl(self):
        for q in (2, 3, 5, 7):
            for k in range(1, 5):
                for l in range(1, 5):
                    total = sum(rank_count(k, l, j, q) for j in range(min(k, l) + 1))
                    assert total == q ** (k * l)

    def test_full_rank_square_is_gl(self):
        for q in (2, 3, 5):
            for n in range(1, 5):
                assert rank_count(n, n, n, q) == gl_order(n, q)
