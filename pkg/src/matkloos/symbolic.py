"""The ring Z[A, G, K] and every characteristic-independent formula.

A plays the role of the field size q, G of the unit-group size q - 1, and
K of the degree-one sum K_1(alpha).  G is kept as its own variable instead
of being written A - 1: the two carry different weights, and several cell
polynomials are single monomials only in this presentation.  Identity
checks that mix the two conventions substitute G -> A - 1 first via
KPoly.expand_g.

Everything here is exact integer arithmetic; evaluation lands in CycloInt.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .combinat import Involution, Partition, check_partition, involutions
from .errors import NonCanonicalPartition, RangeError
from .ffield import CycloInt

Monomial = tuple[int, int, int]


class KPoly:
    """Sparse polynomial in A, G, K with integer coefficients.

    Monomial keys are exponent triples (A, G, K); zero coefficients are
    never stored, so equality is plain map equality.  Instances are never
    mutated after construction.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean: dict[Monomial, int] = {}
        for mono, c in dict(terms or {}).items():
            a, g, k = (int(e) for e in mono)
            if a < 0 or g < 0 or k < 0:
                raise RangeError(f"negative exponent in monomial {mono}")
            c = int(c)
            if c:
                clean[(a, g, k)] = c
        self.terms = clean

    @classmethod
    def term(cls, c: int, a: int = 0, g: int = 0, k: int = 0) -> "KPoly":
        return cls({(a, g, k): c})

    @classmethod
    def zero(cls) -> "KPoly":
        return cls()

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = KPoly.term(other)
        if not isinstance(other, KPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __add__(self, other):
        if isinstance(other, int):
            other = KPoly.term(other)
        if not isinstance(other, KPoly):
            return NotImplemented
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, 0) + c
        return KPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return KPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = KPoly.term(other)
        if not isinstance(other, KPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return KPoly({m: c * other for m, c in self.terms.items()})
        if not isinstance(other, KPoly):
            return NotImplemented
        out: dict[Monomial, int] = {}
        for (a1, g1, k1), c1 in self.terms.items():
            for (a2, g2, k2), c2 in other.terms.items():
                mono = (a1 + a2, g1 + g2, k1 + k2)
                out[mono] = out.get(mono, 0) + c1 * c2
        return KPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise RangeError(f"KPoly power {e!r} must be a non-negative int")
        out = KPoly.term(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def expand_g(self) -> "KPoly":
        """Substitute G = A - 1, returning a polynomial in A and K only."""
        out: dict[Monomial, int] = {}
        for (a, g, k), c in self.terms.items():
            for t in range(g + 1):
                mono = (a + t, 0, k)
                out[mono] = out.get(mono, 0) + c * comb(g, t) * (-1) ** (g - t)
        return KPoly(out)

    def _render(self, a_name: str, g_name: str, k_name: str) -> str:
        if not self.terms:
            return "0"
        parts = []
        for a, g, k in sorted(self.terms, key=lambda m: (-m[2], -m[0], -m[1])):
            c = self.terms[(a, g, k)]
            factors = []
            if a:
                factors.append(a_name + (f"^{a}" if a > 1 else ""))
            if g:
                factors.append(g_name + (f"^{g}" if g > 1 else ""))
            if k:
                factors.append(k_name + (f"^{k}" if k > 1 else ""))
            if abs(c) != 1 or not factors:
                factors.insert(0, str(abs(c)))
            parts.append(("- " if c < 0 else "+ ") + "*".join(factors))
        joined = " ".join(parts)
        return joined[2:] if joined.startswith("+ ") else "-" + joined[2:]

    def __str__(self):
        return self._render("A", "G", "K")

    def __repr__(self):
        return f"KPoly({self})"

    def q_display(self) -> str:
        """Human form with A -> q and G -> (q-1), e.g. q^3*K^3 - 2*q^4*K."""
        return self._render("q", "(q-1)", "K")

    def to_json(self) -> list:
        return [
            {"a": a, "g": g, "k": k, "c": self.terms[(a, g, k)]}
            for a, g, k in sorted(self.terms)
        ]

    @classmethod
    def from_json(cls, data) -> "KPoly":
        return cls({(d["a"], d["g"], d["k"]): d["c"] for d in data})


A = KPoly.term(1, a=1)
G = KPoly.term(1, g=1)
K = KPoly.term(1, k=1)
ONE = KPoly.term(1)


def kpoly_eval(p: KPoly, q: int, k1) -> CycloInt:
    """Evaluate at A = q, G = q - 1, K = k1 (a CycloInt or plain int)."""
    q = int(q)
    total = k1 * 0
    for (a, g, k), c in p.terms.items():
        total = total + (k1**k) * (c * q**a * (q - 1) ** g)
    return total


def partition_poly(lam) -> KPoly:
    """The polynomial P with K_n(a) = P(q, q-1, K_1(alpha)) for a with a
    single eigenvalue alpha != 0 of Jordan type lam.

    Recursion on the largest part: removing a box contributes A^{n-1} K,
    removing a domino contributes -A^{2n-2}, and a repeated largest part
    adds the (A^{k-1} - 1) A^{2n-2} correction term.  The all-ones
    (scalar) case flips the sign of the domino term.  Output involves A
    and K only; G never enters this recursion.
    """
    return _partition_poly(check_partition(lam))


def _resort(parts) -> Partition:
    return tuple(sorted(p for p in parts if p > 0))


@lru_cache(maxsize=None)
def _partition_poly(lam: Partition) -> KPoly:
    n = sum(lam)
    if n == 0:
        return ONE
    if n == 1:
        return K
    big = lam[-1]
    if big == 1:
        # scalar case [1^n]: the degenerate-orbit term comes in with +
        return A ** (n - 1) * K * _partition_poly(lam[:-1]) + A ** (
            2 * n - 2
        ) * (A ** (n - 1) - 1) * _partition_poly(lam[:-2])
    lam1 = _resort(lam[:-1] + (big - 1,))
    lam2 = _resort(lam[:-1] + (big - 2,))
    out = A ** (n - 1) * K * _partition_poly(lam1) - A ** (
        2 * n - 2
    ) * _partition_poly(lam2)
    mult = sum(1 for p in lam if p == big)
    if mult > 1:
        lam3 = _resort(lam[:-2] + (big - 1, big - 1))
        out = out - (A ** (mult - 1) - 1) * A ** (2 * n - 2) * (
            _partition_poly(lam2) - _partition_poly(lam3)
        )
    return out


def involution_closed_form(n: int) -> KPoly:
    """Sum over involutions w of A^{n(n-1)/2 + N(w)} G^{e(w)} K^{f(w)}.

    Closed form for the scalar case: equals partition_poly([1]*n).
    """
    out = KPoly.zero()
    base = n * (n - 1) // 2
    for w in involutions(n):
        out = out + KPoly.term(1, a=base + w.crossings, g=w.e, k=w.f)
    return out


def single_block_poly(n: int) -> KPoly:
    """A^{n(n-1)/2} k_n with k_0 = 1, k_1 = K, k_m = K k_{m-1} - A k_{m-2}.

    The Chebyshev-style recursion for a single Jordan block; must agree
    with partition_poly([n]).
    """
    if n < 0:
        raise RangeError("single block of negative size")
    prev, cur = ONE, K
    if n == 0:
        cur = ONE
    else:
        for _ in range(n - 1):
            prev, cur = cur, K * cur - A * prev
    return A ** (n * (n - 1) // 2) * cur


def shape_epsilons(shape) -> tuple[int, ...]:
    """Jordan superdiagonal indicators for block sizes in diagonal order.

    eps_t (1-based, t < n) is 0 exactly at block boundaries.  Any
    arrangement of the parts is accepted; rearrangements give different
    epsilon sequences and genuinely different cell polynomials.
    """
    parts = tuple(int(p) for p in shape)
    if not parts or any(p < 1 for p in parts):
        raise NonCanonicalPartition(f"block sizes {parts} must be positive")
    n = sum(parts)
    boundaries = set()
    acc = 0
    for p in parts:
        acc += p
        boundaries.add(acc)
    return tuple(0 if t in boundaries else 1 for t in range(1, n))


def transposition_cell_poly(shape, i: int, j: int) -> KPoly:
    """Cell polynomial of the transposition (i j), 1 <= i < j <= n.

    shape lists the Jordan block sizes in diagonal order.  The value is
    A^{n(n-1)/2} K^{n-2} times: G A if j = i+1 and eps_i = 0; -A if
    j = i+1 and eps_i = 1; G A^{j-i-d} if j > i+1 and eps_i = eps_{j-1} = 0
    where d counts nonzero eps_k with i < k < j-1; and 0 otherwise.
    """
    eps = shape_epsilons(shape)
    n = len(eps) + 1
    if not (isinstance(i, int) and isinstance(j, int) and 1 <= i < j <= n):
        raise RangeError(f"transposition ({i} {j}) out of range for n={n}")
    base = n * (n - 1) // 2
    if j == i + 1:
        if eps[i - 1] == 0:
            return KPoly.term(1, a=base + 1, g=1, k=n - 2)
        return KPoly.term(-1, a=base + 1, k=n - 2)
    if eps[i - 1] == 0 and eps[j - 2] == 0:
        d = sum(1 for t in range(i + 1, j - 1) if eps[t - 1] != 0)
        return KPoly.term(1, a=base + (j - i - d), g=1, k=n - 2)
    return KPoly.zero()


def full_block_cell_poly(n: int, w: Involution) -> KPoly:
    """Cell polynomial of involution w for a single Jordan block of size n.

    (-1)^r K^{n-2r} A^{n(n-1)/2 + r} when every 2-cycle of w is adjacent
    (swaps some i and i+1), zero otherwise; r is the number of 2-cycles.
    """
    if len(w.map) != n:
        raise RangeError(f"involution on {len(w.map)} points, expected {n}")
    if any(j != i + 1 for i, j in w.cycles()):
        return KPoly.zero()
    r = w.e
    return KPoly.term((-1) ** r, a=n * (n - 1) // 2 + r, k=n - 2 * r)


def identity_cell_poly(n: int) -> KPoly:
    """The identity (Borel) cell contributes A^{n(n-1)/2} K^n for every shape."""
    if n < 0:
        raise RangeError("negative dimension")
    return KPoly.term(1, a=n * (n - 1) // 2, k=n)


def scalar_cell_poly(n: int, w: Involution) -> KPoly:
    """Single cell term of the scalar closed form: A^{..+N(w)} G^e K^f."""
    if len(w.map) != n:
        raise RangeError(f"involution on {len(w.map)} points, expected {n}")
    return KPoly.term(1, a=n * (n - 1) // 2 + w.crossings, g=w.e, k=w.f)


@dataclass(frozen=True)
class CellPoly:
    """One entry of the cell tables: shape row, involution column."""

    shape: tuple[int, ...]
    eps: tuple[int, ...]
    w: Involution
    poly: KPoly


# Golden cell data for n = 2, 3, 4, keyed by shape in diagonal order with
# monomials as (coefficient, A-exp, G-exp, K-exp).  Missing involution
# labels mean the cell sum is zero.  Shapes are listed so that their
# epsilon sequences run (0..0), (1,0..0), (0,1,0..), ...; note that (1,2)
# has eps (0,1) (the size-1 block sits first on the diagonal).
_GOLDEN_CELLS: dict[int, list[tuple[tuple[int, ...], dict[str, tuple]]]] = {
    2: [
        ((1, 1), {"(12)": (1, 2, 1, 0), "id": (1, 1, 0, 2)}),
        ((2,), {"(12)": (-1, 2, 0, 0), "id": (1, 1, 0, 2)}),
    ],
    3: [
        (
            (1, 1, 1),
            {
                "(13)": (1, 5, 1, 1),
                "(12)": (1, 4, 1, 1),
                "(23)": (1, 4, 1, 1),
                "id": (1, 3, 0, 3),
            },
        ),
        (
            (2, 1),
            {"(12)": (-1, 4, 0, 1), "(23)": (1, 4, 1, 1), "id": (1, 3, 0, 3)},
        ),
        (
            (1, 2),
            {"(12)": (1, 4, 1, 1), "(23)": (-1, 4, 0, 1), "id": (1, 3, 0, 3)},
        ),
        ((3,), {"(12)": (-1, 4, 0, 1), "(23)": (-1, 4, 0, 1), "id": (1, 3, 0, 3)}),
    ],
    4: [
        (
            (1, 1, 1, 1),
            {
                "(14)(23)": (1, 10, 2, 0),
                "(13)(24)": (1, 9, 2, 0),
                "(12)(34)": (1, 8, 2, 0),
                "(14)": (1, 9, 1, 2),
                "(13)": (1, 8, 1, 2),
                "(24)": (1, 8, 1, 2),
                "(12)": (1, 7, 1, 2),
                "(23)": (1, 7, 1, 2),
                "(34)": (1, 7, 1, 2),
                "id": (1, 6, 0, 4),
            },
        ),
        (
            (2, 1, 1),
            {
                "(12)(34)": (-1, 8, 1, 0),
                "(24)": (1, 8, 1, 2),
                "(12)": (-1, 7, 0, 2),
                "(23)": (1, 7, 1, 2),
                "(34)": (1, 7, 1, 2),
                "id": (1, 6, 0, 4),
            },
        ),
        (
            (1, 2, 1),
            {
                "(14)(23)": (-1, 9, 1, 0),
                "(12)(34)": (1, 8, 2, 0),
                "(14)": (1, 8, 1, 2),
                "(12)": (1, 7, 1, 2),
                "(23)": (-1, 7, 0, 2),
                "(34)": (1, 7, 1, 2),
                "id": (1, 6, 0, 4),
            },
        ),
        (
            (1, 1, 2),
            {
                "(12)(34)": (-1, 8, 1, 0),
                "(13)": (1, 8, 1, 2),
                "(12)": (1, 7, 1, 2),
                "(23)": (1, 7, 1, 2),
                "(34)": (-1, 7, 0, 2),
                "id": (1, 6, 0, 4),
            },
        ),
        (
            (3, 1),
            {
                "(12)(34)": (-1, 8, 1, 0),
                "(12)": (-1, 7, 0, 2),
                "(23)": (-1, 7, 0, 2),
                "(34)": (1, 7, 1, 2),
                "id": (1, 6, 0, 4),
            },
        ),
        (
            (2, 2),
            {
                "(13)(24)": (1, 9, 1, 0),
                "(12)(34)": (1, 8, 0, 0),
                "(12)": (-1, 7, 0, 2),
                "(23)": (1, 7, 1, 2),
                "(34)": (-1, 7, 0, 2),
                "id": (1, 6, 0, 4),
            },
        ),
        (
            (1, 3),
            {
                "(12)(34)": (-1, 8, 1, 0),
                "(12)": (1, 7, 1, 2),
                "(23)": (-1, 7, 0, 2),
                "(34)": (-1, 7, 0, 2),
                "id": (1, 6, 0, 4),
            },
        ),
        (
            (4,),
            {
                "(12)(34)": (1, 8, 0, 0),
                "(12)": (-1, 7, 0, 2),
                "(23)": (-1, 7, 0, 2),
                "(34)": (-1, 7, 0, 2),
                "id": (1, 6, 0, 4),
            },
        ),
    ],
}

# column order of the tables: double transpositions, single transpositions
# by descending span, then the identity cell
_CELL_COLUMNS = {
    2: ["(12)", "id"],
    3: ["(13)", "(12)", "(23)", "id"],
    4: [
        "(14)(23)",
        "(13)(24)",
        "(12)(34)",
        "(14)",
        "(13)",
        "(24)",
        "(12)",
        "(23)",
        "(34)",
        "id",
    ],
}


@lru_cache(maxsize=None)
def _involutions_by_label(n: int) -> dict[str, Involution]:
    return {str(w): w for w in involutions(n)}


def n4_cell_table() -> list[CellPoly]:
    """All cell polynomials for n <= 4 as golden data.

    Rows cover every arrangement of every partition (the 2^{n-1} epsilon
    sequences); columns cover every involution of S_n.  Entries absent
    from the data are genuinely zero cells.
    """
    out = []
    for n in (2, 3, 4):
        labels = _involutions_by_label(n)
        for shape, row in _GOLDEN_CELLS[n]:
            unknown = set(row) - set(labels)
            if unknown:
                raise RangeError(f"bad involution labels {unknown} for n={n}")
            eps = shape_epsilons(shape)
            for label in _CELL_COLUMNS[n]:
                mono = row.get(label)
                poly = KPoly.term(*mono) if mono else KPoly.zero()
                out.append(CellPoly(shape=shape, eps=eps, w=labels[label], poly=poly))
    return out
