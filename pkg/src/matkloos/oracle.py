"""Brute-force character sum oracles.

`kloosterman_oracle` sums psi(tr(a x + b x^(-1))) over all of GL_n(F_q);
`cell_oracle` restricts the sum to one Bruhat cell or one parabolic slice.
All results are exact cyclotomic integers assembled from trace histograms,
so they do not depend on enumeration order or backend. `k1_sum` is the
classical n = 1 sum, used as the ground-truth ingredient of every closed
form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import _kernels
from .combinat import gl_order
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    FieldMismatch,
    NotInvolution,
    RangeError,
)
from .ffield import SCAN_LIMIT, CycloInt, FieldCtx, FqElem
from .matfq import DEFAULT_BUDGET, MatFq, enumerate_gl, mat_inverse


@dataclass(frozen=True)
class CellSpec:
    """Which piece of GL_n to sum over.

    kind "full" is the whole group; "borel" is the Bruhat cell C_w = U_w w B
    of the permutation w (0-based one-line map); "parabolic" is the slice
    X_k = U_k w_(k n) P for 1 <= k <= n.
    """

    kind: str
    w: tuple[int, ...] | None = None
    k: int | None = None

    @classmethod
    def full_group(cls) -> "CellSpec":
        return cls(kind="full")

    @classmethod
    def borel(cls, w) -> "CellSpec":
        return cls(kind="borel", w=tuple(w))

    @classmethod
    def parabolic(cls, k: int) -> "CellSpec":
        return cls(kind="parabolic", k=k)


def _resolve(a: MatFq, b: MatFq | None, kernel: str | None):
    if b is None:
        b = MatFq.identity(a.ctx, a.n)
    else:
        if b.ctx != a.ctx:
            raise FieldMismatch("a and b over different fields")
        if b.n != a.n:
            raise DimensionMismatch(f"sizes {a.n} and {b.n}")
    backend = kernel or _kernels.default_backend()
    if a.ctx.f > 1:
        backend = "python"
    return b, backend


def _trace_pair(a: MatFq, x: MatFq, b: MatFq, xinv: MatFq) -> int:
    """Absolute trace of tr(a x + b x^(-1)) as a residue mod p."""
    ctx = a.ctx
    acc = ctx.zero()
    n = a.n
    for i in range(n):
        for j in range(n):
            acc = acc + a.rows[i][j] * x.rows[j][i] + b.rows[i][j] * xinv.rows[j][i]
    return acc.trace()


def kloosterman_oracle(
    a: MatFq,
    b: MatFq | None = None,
    budget: int = DEFAULT_BUDGET,
    kernel: str | None = None,
) -> CycloInt:
    """K_n(a, b) by summation over GL_n(F_q). Exact."""
    b, backend = _resolve(a, b, kernel)
    ctx, n, p = a.ctx, a.n, a.ctx.p
    if backend == "python":
        if gl_order(n, ctx.q) > budget:
            raise BudgetExceeded(f"|GL_{n}(F_{ctx.q})| exceeds budget {budget}")
        hist = [0] * p
        for x in enumerate_gl(ctx, n, budget=budget):
            hist[_trace_pair(a, x, b, mat_inverse(x))] += 1
        return CycloInt.from_exponent_counts(p, hist)
    if p ** (n * n) > budget:
        raise BudgetExceeded(f"odometer size {p}^{n * n} exceeds budget {budget}")
    hist = _kernels.full_group_hist(a.to_int_rows(), b.to_int_rows(), p, n, backend)
    return CycloInt.from_exponent_counts(p, [int(h) for h in hist])


_GEN_CACHE: dict = {}


def _prime_factors(m: int) -> list[int]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


def multiplicative_generator(ctx: FieldCtx) -> FqElem:
    """Smallest-index generator of F_q^*, cached per field."""
    key = (ctx.p, ctx.f, ctx.modulus)
    if key in _GEN_CACHE:
        g = _GEN_CACHE[key]
        return ctx.element(list(g))
    m = ctx.q - 1
    if m == 1:
        _GEN_CACHE[key] = (1,)
        return ctx.one()
    primes = _prime_factors(m)
    one = ctx.one()
    for i in range(2, ctx.q):
        g = ctx.from_index(i)
        if all(g ** (m // r) != one for r in primes):
            _GEN_CACHE[key] = g.coeffs
            return g
    raise AssertionError("no multiplicative generator found")


def k1_sum(alpha: FqElem, beta: FqElem | None = None) -> CycloInt:
    """K_1(alpha, beta) = sum over x in F_q^* of psi(alpha x + beta / x).

    beta defaults to 1. Walks the cyclic group once, maintaining alpha x
    and beta / x incrementally.
    """
    ctx = alpha.ctx
    if beta is None:
        beta = ctx.one()
    elif beta.ctx != ctx:
        raise FieldMismatch("alpha and beta in different fields")
    if ctx.q - 1 > SCAN_LIMIT:
        raise BudgetExceeded(f"K_1 walk over q - 1 = {ctx.q - 1} elements")
    p = ctx.p
    g = multiplicative_generator(ctx)
    ginv = g.inverse()
    hist = [0] * p
    u, v = alpha, beta
    for _ in range(ctx.q - 1):
        hist[(u + v).trace()] += 1
        u = u * g
        v = v * ginv
    return CycloInt.from_exponent_counts(p, hist)


# ---------------------------------------------------------------------------
# Cell enumeration. The naive generators below are the reference
# implementations; the compiled kernels mirror them entry for entry.


def _free_positions(w: tuple[int, ...]) -> list[tuple[int, int]]:
    n = len(w)
    winv = [0] * n
    for j, i in enumerate(w):
        winv[i] = j
    return [
        (i, j) for i in range(n) for j in range(i + 1, n) if winv[i] > winv[j]
    ]


def _perm_matrix(ctx: FieldCtx, w: tuple[int, ...]) -> MatFq:
    n = len(w)
    rows = [[0] * n for _ in range(n)]
    for j in range(n):
        rows[w[j]][j] = 1
    return MatFq(ctx, rows)


def borel_cell_elements(ctx: FieldCtx, n: int, w):
    """Every x in the Bruhat cell of w, once, as u * w * t."""
    w = tuple(w)
    if sorted(w) != list(range(n)):
        raise NotInvolution(f"{w} is not a permutation of 0..{n - 1}")
    free = _free_positions(w)
    wm = _perm_matrix(ctx, w)
    elems = list(ctx.iter_elements())
    nonzero = [e for e in elems if e]
    uppers = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for uvals in itertools.product(elems, repeat=len(free)):
        urows = [[ctx.one() if i == j else ctx.zero() for j in range(n)] for i in range(n)]
        for (i, j), val in zip(free, uvals):
            urows[i][j] = val
        u = MatFq(ctx, urows)
        uw = u * wm
        for diag in itertools.product(nonzero, repeat=n):
            for tvals in itertools.product(elems, repeat=len(uppers)):
                trows = [[ctx.zero()] * n for _ in range(n)]
                for i in range(n):
                    trows[i][i] = diag[i]
                for (i, j), val in zip(uppers, tvals):
                    trows[i][j] = val
                yield uw * MatFq(ctx, trows)


def parabolic_cell_elements(ctx: FieldCtx, n: int, k: int):
    """Every x in the k-th parabolic slice, once, as u * w_(k n) * g."""
    if not 1 <= k <= n:
        raise RangeError(f"parabolic index k = {k} outside 1..{n}")
    k0 = k - 1
    elems = list(ctx.iter_elements())
    nonzero = [e for e in elems if e]
    m = n - 1
    for uvals in itertools.product(elems, repeat=n - 1 - k0):
        for h in enumerate_gl(ctx, m) if m else [None]:
            for v in itertools.product(elems, repeat=m):
                for lam in nonzero:
                    grows = [[ctx.zero()] * n for _ in range(n)]
                    if h is not None:
                        for i in range(m):
                            for j in range(m):
                                grows[i][j] = h.rows[i][j]
                    for i in range(m):
                        grows[i][n - 1] = v[i]
                    grows[n - 1][n - 1] = lam
                    grows[k0], grows[n - 1] = grows[n - 1], grows[k0]
                    x = [row[:] for row in grows]
                    for d, c in enumerate(uvals):
                        if c:
                            r = k0 + 1 + d
                            x[k0] = [xe + c * ge for xe, ge in zip(x[k0], x[r])]
                    yield MatFq(ctx, x)


def _borel_cell_size(n: int, q: int, w) -> int:
    ell = len(_free_positions(tuple(w)))
    return q**ell * (q - 1) ** n * q ** (n * (n - 1) // 2)


def _parabolic_odometer_size(n: int, q: int, k: int) -> int:
    return q ** (n - k) * q ** ((n - 1) ** 2) * q ** (n - 1) * (q - 1)


def cell_oracle(
    a: MatFq,
    spec: CellSpec,
    b: MatFq | None = None,
    budget: int = DEFAULT_BUDGET,
    kernel: str | None = None,
) -> CycloInt:
    """Sum of psi(tr(a x + b x^(-1))) over one cell of GL_n(F_q)."""
    if spec.kind == "full":
        return kloosterman_oracle(a, b, budget=budget, kernel=kernel)
    b, backend = _resolve(a, b, kernel)
    ctx, n, p = a.ctx, a.n, a.ctx.p
    if spec.kind == "borel":
        w = tuple(spec.w)
        if len(w) != n or sorted(w) != list(range(n)):
            raise NotInvolution(f"{w} is not a permutation of 0..{n - 1}")
        if _borel_cell_size(n, ctx.q, w) > budget:
            raise BudgetExceeded("Bruhat cell exceeds budget")
        if backend == "python":
            hist = [0] * p
            for x in borel_cell_elements(ctx, n, w):
                hist[_trace_pair(a, x, b, mat_inverse(x))] += 1
            return CycloInt.from_exponent_counts(p, hist)
        free = _free_positions(w)
        ui = [i for i, _ in free]
        uj = [j for _, j in free]
        hist = _kernels.borel_cell_hist(
            a.to_int_rows(), b.to_int_rows(), list(w), ui, uj, p, n, backend
        )
        return CycloInt.from_exponent_counts(p, [int(h) for h in hist])
    if spec.kind == "parabolic":
        k = spec.k
        if k is None or not 1 <= k <= n:
            raise RangeError(f"parabolic index k = {k} outside 1..{n}")
        if _parabolic_odometer_size(n, ctx.q, k) > budget:
            raise BudgetExceeded("parabolic slice exceeds budget")
        if backend == "python":
            hist = [0] * p
            for x in parabolic_cell_elements(ctx, n, k):
                hist[_trace_pair(a, x, b, mat_inverse(x))] += 1
            return CycloInt.from_exponent_counts(p, hist)
        hist = _kernels.parabolic_cell_hist(
            a.to_int_rows(), b.to_int_rows(), k - 1, p, n, backend
        )
        return CycloInt.from_exponent_counts(p, [int(h) for h in hist])
    raise RangeError(f"unknown cell kind {spec.kind!r}")
