"""Matrices over F_q: arithmetic, spectral analysis, and GL_n enumeration."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .combinat import Partition, check_partition, gl_order
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    EmptyPartition,
    FieldMismatch,
    SingularMatrix,
)
from .ffield import SCAN_LIMIT, FieldCtx, FqElem, embed_field, make_field, poly_roots

DEFAULT_BUDGET = 1 << 36


class MatFq:
    """An n x n matrix over a fixed field context, immutable."""

    __slots__ = ("ctx", "n", "rows")

    def __init__(self, ctx: FieldCtx, rows):
        self.ctx = ctx
        rows = tuple(tuple(ctx.element(e) for e in row) for row in rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DimensionMismatch("matrix must be square")
        self.n = n
        self.rows = rows

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ctx: FieldCtx, n: int) -> "MatFq":
        return cls(ctx, [[0] * n for _ in range(n)])

    @classmethod
    def identity(cls, ctx: FieldCtx, n: int) -> "MatFq":
        return cls(ctx, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def scalar(cls, ctx: FieldCtx, n: int, alpha) -> "MatFq":
        a = ctx.element(alpha)
        return cls(ctx, [[a if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def elementary(cls, ctx: FieldCtx, n: int, i: int, j: int) -> "MatFq":
        """The matrix unit e_{ij}, 0-based."""
        return cls(
            ctx, [[1 if (r, c) == (i, j) else 0 for c in range(n)] for r in range(n)]
        )

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "MatFq"):
        if self.ctx != other.ctx:
            raise FieldMismatch("matrices over different fields")
        if self.n != other.n:
            raise DimensionMismatch(f"sizes {self.n} and {other.n}")

    def __add__(self, other):
        if not isinstance(other, MatFq):
            return NotImplemented
        self._check(other)
        return MatFq(
            self.ctx,
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ],
        )

    def __sub__(self, other):
        if not isinstance(other, MatFq):
            return NotImplemented
        self._check(other)
        return MatFq(
            self.ctx,
            [
                [a - b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ],
        )

    def __neg__(self):
        return MatFq(self.ctx, [[-a for a in row] for row in self.rows])

    def __mul__(self, other):
        if isinstance(other, MatFq):
            self._check(other)
            n = self.n
            cols = list(zip(*other.rows))
            return MatFq(
                self.ctx,
                [
                    [
                        sum((a * b for a, b in zip(row, col)), self.ctx.zero())
                        for col in cols
                    ]
                    for row in self.rows
                ],
            )
        if isinstance(other, (FqElem, int)):
            s = self.ctx.element(other)
            return MatFq(self.ctx, [[a * s for a in row] for row in self.rows])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (FqElem, int)):
            return self * other
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            return mat_inverse(self) ** (-e)
        result = MatFq.identity(self.ctx, self.n)
        base = self
        while e > 0:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, MatFq):
            return NotImplemented
        return self.ctx == other.ctx and self.rows == other.rows

    def __hash__(self):
        return hash((self.ctx, self.rows))

    def __bool__(self):
        return any(any(e for e in row) for row in self.rows)

    def trace(self) -> FqElem:
        return sum((self.rows[i][i] for i in range(self.n)), self.ctx.zero())

    def transpose(self) -> "MatFq":
        return MatFq(self.ctx, list(zip(*self.rows)))

    def _echelon(self):
        """Row-reduce a working copy; returns (rank, det, reduced rows)."""
        m = [list(row) for row in self.rows]
        n = self.n
        det = self.ctx.one()
        rank = 0
        for col in range(n):
            piv = None
            for r in range(rank, n):
                if m[r][col]:
                    piv = r
                    break
            if piv is None:
                det = self.ctx.zero()
                continue
            if piv != rank:
                m[piv], m[rank] = m[rank], m[piv]
                det = -det
            det = det * m[rank][col]
            inv = m[rank][col].inverse()
            m[rank] = [x * inv for x in m[rank]]
            for r in range(n):
                if r != rank and m[r][col]:
                    c = m[r][col]
                    m[r] = [x - c * y for x, y in zip(m[r], m[rank])]
            rank += 1
        if rank < n:
            det = self.ctx.zero()
        return rank, det, m

    def rank(self) -> int:
        return self._echelon()[0]

    def det(self) -> FqElem:
        return self._echelon()[1]

    def is_invertible(self) -> bool:
        return bool(self.det())

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        if self.ctx.f == 1:
            rows = [[e.coeffs[0] for e in row] for row in self.rows]
        else:
            rows = [[list(e.coeffs) for e in row] for row in self.rows]
        return {"field": self.ctx.to_json(), "n": self.n, "rows": rows}

    @classmethod
    def from_json(cls, obj: dict) -> "MatFq":
        ctx = FieldCtx.from_json(obj["field"])
        rows = obj["rows"]
        if len(rows) != obj["n"]:
            raise DimensionMismatch("row count does not match n")
        return cls(ctx, rows)

    def to_int_rows(self) -> list[list[int]]:
        """Entries as raw integers. Prime fields only (kernel interchange)."""
        if self.ctx.f != 1:
            raise DimensionMismatch("integer rows only defined over prime fields")
        return [[e.coeffs[0] for e in row] for row in self.rows]

    def __repr__(self):
        if self.ctx.f == 1:
            body = "; ".join(
                " ".join(str(e.coeffs[0]) for e in row) for row in self.rows
            )
        else:
            body = "; ".join(
                " ".join(str(list(e.coeffs)) for e in row) for row in self.rows
            )
        return f"MatFq({self.ctx!r}, [{body}])"


def mat_inverse(a: MatFq) -> MatFq:
    """Inverse by Gauss-Jordan on the augmented matrix."""
    n = a.n
    ctx = a.ctx
    m = [list(row) + [ctx.one() if i == j else ctx.zero() for j in range(n)]
         for i, row in enumerate(a.rows)]
    row = 0
    for col in range(n):
        piv = None
        for r in range(row, n):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            raise SingularMatrix("matrix is singular")
        m[piv], m[row] = m[row], m[piv]
        inv = m[row][col].inverse()
        m[row] = [x * inv for x in m[row]]
        for r in range(n):
            if r != row and m[r][col]:
                c = m[r][col]
                m[r] = [x - c * y for x, y in zip(m[r], m[row])]
        row += 1
    return MatFq(ctx, [r[n:] for r in m])


def companion_matrix(coeffs, ctx: FieldCtx) -> MatFq:
    """Companion matrix of a monic polynomial, coefficients constant first.

    Ones on the superdiagonal, negated coefficients along the bottom row.
    """
    cs = [ctx.element(c) for c in coeffs]
    while cs and not cs[-1]:
        cs.pop()
    if len(cs) < 2:
        raise DimensionMismatch("companion matrix needs degree >= 1")
    if cs[-1] != 1:
        raise DimensionMismatch("companion matrix needs a monic polynomial")
    n = len(cs) - 1
    rows = [[ctx.zero()] * n for _ in range(n)]
    for i in range(n - 1):
        rows[i][i + 1] = ctx.one()
    for j in range(n):
        rows[n - 1][j] = -cs[j]
    return MatFq(ctx, rows)


def block_diag(a: MatFq, b: MatFq) -> MatFq:
    if a.ctx != b.ctx:
        raise FieldMismatch("blocks over different fields")
    n = a.n + b.n
    z = a.ctx.zero()
    rows = []
    for i in range(a.n):
        rows.append(list(a.rows[i]) + [z] * b.n)
    for i in range(b.n):
        rows.append([z] * a.n + list(b.rows[i]))
    return MatFq(a.ctx, rows)


# ---------------------------------------------------------------------------
# Characteristic polynomial via Hessenberg reduction. Works for any q,
# including q <= n where interpolation would run out of sample points.


def char_poly(a: MatFq) -> list[FqElem]:
    ctx = a.ctx
    n = a.n
    h = [list(row) for row in a.rows]
    for k in range(n - 2):
        piv = None
        for r in range(k + 1, n):
            if h[r][k]:
                piv = r
                break
        if piv is None:
            continue
        if piv != k + 1:
            h[piv], h[k + 1] = h[k + 1], h[piv]
            for r in range(n):
                h[r][piv], h[r][k + 1] = h[r][k + 1], h[r][piv]
        x = h[k + 1][k]
        xinv = x.inverse()
        for r in range(k + 2, n):
            if h[r][k]:
                c = h[r][k] * xinv
                h[r] = [u - c * v for u, v in zip(h[r], h[k + 1])]
                for t in range(n):
                    h[t][k + 1] = h[t][k + 1] + c * h[t][r]
    # p_k(x) = det(x I_k - H_k) by expansion along the last column.
    zero, one = ctx.zero(), ctx.one()
    polys = [[one]]
    for k in range(1, n + 1):
        prev = polys[k - 1]
        # (x - h[k-1][k-1]) * p_{k-1}
        cur = [zero] + prev
        cur = [c - h[k - 1][k - 1] * p for c, p in zip(cur, prev + [zero])]
        prod = one
        for i in range(k - 2, -1, -1):
            prod = prod * h[i + 1][i]
            term = h[i][k - 1] * prod
            if term:
                pi = polys[i]
                cur = [c - term * p for c, p in zip(cur, pi + [zero] * (len(cur) - len(pi)))]
        polys.append(cur)
    return polys[n]


@dataclass(frozen=True)
class JordanData:
    """Split spectral data: Jordan partitions per F_q eigenvalue.

    `eigen` maps each eigenvalue found in F_q to its Jordan block partition
    (canonical, non-decreasing). `cofactor` is the monic part of the
    characteristic polynomial with no roots in F_q (constant-first FqElem
    list; [1] when the matrix splits completely).
    """

    eigen: tuple
    cofactor: tuple

    @property
    def split(self) -> bool:
        return len(self.cofactor) == 1


def jordan_data(a: MatFq) -> JordanData:
    ctx = a.ctx
    cp = char_poly(a)
    roots, cofactor = poly_roots(cp, ctx)
    eigen = []
    ident = MatFq.identity(ctx, a.n)
    for alpha, mult in roots:
        b = a - ident * alpha
        # ker dims of successive powers give the conjugate partition
        dims = []
        pw = ident
        for _ in range(mult):
            pw = pw * b
            dims.append(a.n - pw.rank())
        counts = [dims[0]] + [dims[k] - dims[k - 1] for k in range(1, len(dims))]
        parts = []
        for size in range(len(counts), 0, -1):
            here = counts[size - 1] - (counts[size] if size < len(counts) else 0)
            parts.extend([size] * here)
        parts.sort()
        assert sum(parts) == mult
        eigen.append((alpha, tuple(parts)))
    return JordanData(eigen=tuple(eigen), cofactor=tuple(cofactor))


def jordan_matrix(partition: Partition, alpha, ctx: FieldCtx) -> MatFq:
    """Upper triangular Jordan model: alpha on the diagonal, the nilpotent
    part encoded by the block boundary sequence of the canonical partition."""
    parts = check_partition(partition)
    if not parts:
        raise EmptyPartition("jordan_matrix of the empty partition")
    n = sum(parts)
    a = MatFq.scalar(ctx, n, alpha)
    rows = [list(r) for r in a.rows]
    boundaries = set()
    acc = 0
    for part in parts:
        acc += part
        boundaries.add(acc)
    for j in range(1, n):
        if j not in boundaries:
            rows[j - 1][j] = ctx.one()
    return MatFq(ctx, rows)


def nilpotent_from_epsilons(epsilons, alpha, ctx: FieldCtx) -> MatFq:
    """alpha*I plus the superdiagonal 0/1 pattern given by `epsilons`."""
    eps = tuple(int(bool(e)) for e in epsilons)
    n = len(eps) + 1
    a = MatFq.scalar(ctx, n, alpha)
    rows = [list(r) for r in a.rows]
    for j, e in enumerate(eps):
        if e:
            rows[j][j + 1] = ctx.one()
    return MatFq(ctx, rows)


class SpectralClass(enum.Enum):
    ZERO = "Zero"
    NILPOTENT = "Nilpotent"
    SCALAR = "Scalar"
    SPLIT_SINGLE_EIGENVALUE = "SplitSingleEigenvalue"
    SPLIT_GENERAL = "SplitGeneral"
    REGULAR_SPLIT_SEMISIMPLE = "RegularSplitSemisimple"
    IRREDUCIBLE_CHAR_POLY = "IrreducibleCharPoly"
    NONSPLIT_MIXED = "NonSplitMixed"
    SINGULAR = "Singular"


def nonsplit_factor_data(cofactor, ctx: FieldCtx, cap: int = SCAN_LIMIT):
    """Irreducible factor data of a polynomial with no F_q roots.

    Returns a list of (degree, multiplicity, root, extension_ctx), one per
    irreducible factor over F_q, found by scanning roots in F_{q^d} and
    grouping them into Frobenius orbits. Degrees are capped by the scan
    limit q^d <= cap; a factor beyond the cap raises BudgetExceeded.
    """
    cs = [ctx.element(c) for c in cofactor]
    while cs and not cs[-1]:
        cs.pop()
    deg = len(cs) - 1
    out = []
    remaining = deg
    d = 2
    while remaining > 0:
        if d > deg:
            raise AssertionError("factor search overran the polynomial degree")
        if ctx.q**d > cap:
            raise BudgetExceeded(
                f"factor of degree >= {d} needs a root scan over q^{d} = {ctx.q ** d}"
            )
        ext = make_field(ctx.p, ctx.f * d)
        emb = embed_field(ctx, ext)
        roots, _ = poly_roots([emb(c) for c in cs], ext)
        q = ctx.q
        fresh = [
            (r, m)
            for r, m in roots
            if all(r ** (q**e) != r for e in range(1, d))
        ]
        seen = set()
        for r, m in fresh:
            if r.index() in seen:
                continue
            orbit = []
            x = r
            for _ in range(d):
                orbit.append(x)
                seen.add(x.index())
                x = x**q
            rep = min(orbit, key=lambda e: e.index())
            out.append((d, m, rep, ext))
            remaining -= d * m
        d += 1
    return out


def spectral_class(a: MatFq) -> SpectralClass:
    """Mutually exclusive coarse classification driving formula dispatch."""
    if not a:
        return SpectralClass.ZERO
    jd = jordan_data(a)
    zero_eigen = any(not alpha for alpha, _ in jd.eigen)
    if jd.split and len(jd.eigen) == 1 and zero_eigen:
        return SpectralClass.NILPOTENT
    if zero_eigen:
        return SpectralClass.SINGULAR
    if jd.split:
        if len(jd.eigen) == 1:
            alpha, parts = jd.eigen[0]
            if parts == (1,) * a.n:
                return SpectralClass.SCALAR
            return SpectralClass.SPLIT_SINGLE_EIGENVALUE
        if all(parts == (1,) for _, parts in jd.eigen):
            return SpectralClass.REGULAR_SPLIT_SEMISIMPLE
        return SpectralClass.SPLIT_GENERAL
    if not jd.eigen and len(jd.cofactor) - 1 == a.n:
        factors = nonsplit_factor_data(jd.cofactor, a.ctx)
        if len(factors) == 1 and factors[0][1] == 1:
            return SpectralClass.IRREDUCIBLE_CHAR_POLY
    return SpectralClass.NONSPLIT_MIXED


# ---------------------------------------------------------------------------
# GL_n enumeration, row by row, each row outside the span of its
# predecessors. Deterministic lexicographic order by row index vectors.


def _row_index(ctx: FieldCtx, row) -> int:
    i = 0
    for e in row:
        i = i * ctx.q + e.index()
    return i


def _row_from_index(ctx: FieldCtx, n: int, idx: int):
    digits = []
    for _ in range(n):
        digits.append(idx % ctx.q)
        idx //= ctx.q
    return tuple(ctx.from_index(d) for d in reversed(digits))


def enumerate_gl(
    ctx: FieldCtx,
    n: int,
    budget: int = DEFAULT_BUDGET,
    first_row_range: tuple[int, int] | None = None,
):
    """Yield every element of GL_n(F_q) as MatFq, in lexicographic order.

    `first_row_range` restricts the first row's index (most significant
    entry first) to [lo, hi), which splits the stream into disjoint
    sub-streams for parallel or resumable consumption. The call fails fast
    with BudgetExceeded when the number of matrices to visit can exceed
    `budget`.
    """
    total = gl_order(n, ctx.q)
    if first_row_range is not None:
        lo, hi = first_row_range
        upper = max(hi - lo, 0) * ctx.q ** (n * (n - 1))
        total = min(total, upper)
    if total > budget:
        raise BudgetExceeded(f"{total} matrices exceed the budget of {budget}")

    q = ctx.q
    zero = ctx.zero()

    def reduce_against(basis, row):
        # returns reduced residue (list) or None if dependent
        v = list(row)
        for pivcol, brow in basis:
            if v[pivcol]:
                c = v[pivcol]
                v = [x - c * y for x, y in zip(v, brow)]
        for j in range(n):
            if v[j]:
                inv = v[j].inverse()
                return j, [x * inv for x in v]
        return None

    def rec(rows, basis):
        depth = len(rows)
        if depth == n:
            yield MatFq(ctx, rows)
            return
        if depth == 0 and first_row_range is not None:
            lo, hi = first_row_range
            idx_range = range(max(lo, 0), min(hi, q**n))
        else:
            idx_range = range(q**n)
        for idx in idx_range:
            row = _row_from_index(ctx, n, idx)
            red = reduce_against(basis, row)
            if red is None:
                continue
            yield from rec(rows + [row], basis + [red])

    yield from rec([], [])


def random_matrix(ctx: FieldCtx, n: int, rng) -> MatFq:
    return MatFq(
        ctx,
        [[ctx.from_index(rng.randrange(ctx.q)) for _ in range(n)] for _ in range(n)],
    )


def random_gl(ctx: FieldCtx, n: int, rng) -> MatFq:
    while True:
        a = random_matrix(ctx, n, rng)
        if a.is_invertible():
            return a
