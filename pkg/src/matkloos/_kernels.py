"""Compiled histogram kernels for prime-field character sums.

Every oracle sum reduces to a histogram: count, for each residue r mod p,
how many group elements x have tr(a x + b x^(-1)) = r. The histogram is
assembled into an exact cyclotomic integer by the caller, so the kernels
deal in int64 only and the result is independent of enumeration order.

Two interchangeable backends live here. The numba path jit-compiles an
odometer loop over matrix entries; the numpy path decodes digit blocks in
batches and runs a vectorized Gauss-Jordan over the whole batch. Selection
happens in `oracle` via the MATKLOOS_KERNEL environment variable; both
backends are exercised against each other in the tests.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


def default_backend() -> str:
    env = os.environ.get("MATKLOOS_KERNEL", "").strip().lower()
    if env in ("numba", "numpy", "python"):
        if env == "numba" and not HAS_NUMBA:
            return "numpy"
        return env
    return "numba" if HAS_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# numba backend


@njit(cache=True)
def _inv_table(p):
    table = np.zeros(p, np.int64)
    for v in range(1, p):
        acc = 1
        for _ in range(p - 2):
            acc = (acc * v) % p
        table[v] = acc
    return table


@njit(cache=True)
def _gj_invert(aug, n, p, inv_table):
    """Gauss-Jordan on an (n, 2n) augmented block, in place. False if singular."""
    for col in range(n):
        piv = -1
        for r in range(col, n):
            if aug[r, col] % p != 0:
                piv = r
                break
        if piv < 0:
            return False
        if piv != col:
            for c in range(2 * n):
                tmp = aug[piv, c]
                aug[piv, c] = aug[col, c]
                aug[col, c] = tmp
        inv = inv_table[aug[col, col] % p]
        for c in range(2 * n):
            aug[col, c] = (aug[col, c] * inv) % p
        for r in range(n):
            if r != col:
                f = aug[r, col] % p
                if f:
                    for c in range(2 * n):
                        aug[r, c] = (aug[r, c] - f * aug[col, c]) % p
    return True


@njit(cache=True)
def _accumulate(hist, a, b, x, aug, n, p, inv_table):
    for i in range(n):
        for j in range(n):
            aug[i, j] = x[i, j]
            aug[i, n + j] = 1 if i == j else 0
    if not _gj_invert(aug, n, p, inv_table):
        return
    t = 0
    for i in range(n):
        for j in range(n):
            t += a[i, j] * x[j, i] + b[i, j] * aug[j, n + i]
    hist[t % p] += 1


@njit(cache=True)
def full_group_hist_nb(a, b, p, n):
    hist = np.zeros(p, np.int64)
    inv_table = _inv_table(p)
    x = np.zeros((n, n), np.int64)
    aug = np.zeros((n, 2 * n), np.int64)
    total = np.int64(1)
    for _ in range(n * n):
        total *= p
    for _ in range(total):
        _accumulate(hist, a, b, x, aug, n, p, inv_table)
        k = n * n - 1
        while k >= 0:
            i = k // n
            j = k % n
            x[i, j] += 1
            if x[i, j] < p:
                break
            x[i, j] = 0
            k -= 1
    return hist


@njit(cache=True)
def borel_cell_hist_nb(a, b, perm, ui, uj, p, n):
    """x = u w t over the Bruhat cell of the permutation `perm`.

    u runs over unipotents supported on the given free positions, t over
    invertible upper triangulars; w has matrix w[perm[j], j] = 1.
    """
    hist = np.zeros(p, np.int64)
    inv_table = _inv_table(p)
    nu = ui.shape[0]
    nt = n * (n - 1) // 2
    ti = np.zeros(nt, np.int64)
    tj = np.zeros(nt, np.int64)
    c = 0
    for i in range(n):
        for j in range(i + 1, n):
            ti[c] = i
            tj[c] = j
            c += 1
    ndig = nu + n + nt
    dig = np.zeros(ndig, np.int64)
    bases = np.zeros(ndig, np.int64)
    for i in range(nu):
        bases[i] = p
    for i in range(n):
        bases[nu + i] = p - 1
    for i in range(nt):
        bases[nu + n + i] = p
    total = np.int64(1)
    for i in range(ndig):
        total *= bases[i]
    u = np.zeros((n, n), np.int64)
    t = np.zeros((n, n), np.int64)
    uw = np.zeros((n, n), np.int64)
    x = np.zeros((n, n), np.int64)
    aug = np.zeros((n, 2 * n), np.int64)
    for _ in range(total):
        for i in range(n):
            for j in range(n):
                u[i, j] = 1 if i == j else 0
                t[i, j] = 0
        for d in range(nu):
            u[ui[d], uj[d]] = dig[d]
        for i in range(n):
            t[i, i] = dig[nu + i] + 1
        for d in range(nt):
            t[ti[d], tj[d]] = dig[nu + n + d]
        # uw = u * w is a column permutation of u
        for i in range(n):
            for j in range(n):
                uw[i, j] = u[i, perm[j]]
        for i in range(n):
            for j in range(n):
                s = 0
                for k in range(n):
                    s += uw[i, k] * t[k, j]
                x[i, j] = s % p
        _accumulate(hist, a, b, x, aug, n, p, inv_table)
        k = ndig - 1
        while k >= 0:
            dig[k] += 1
            if dig[k] < bases[k]:
                break
            dig[k] = 0
            k -= 1
    return hist


@njit(cache=True)
def parabolic_cell_hist_nb(a, b, k0, p, n):
    """x = u w g over the k-th parabolic slice (k0 = k - 1, 0-based).

    g has an arbitrary invertible (n-1) block, an arbitrary last column on
    top of it, and last row (0, ..., 0, lambda); w swaps rows k0 and n-1;
    u is unipotent supported on row k0 right of the diagonal. Singular
    blocks are filtered by the shared inversion step.
    """
    hist = np.zeros(p, np.int64)
    inv_table = _inv_table(p)
    m = n - 1
    nu = n - 1 - k0
    nh = m * m
    # digit layout: u coords | h entries | v entries | lambda
    ndig = nu + nh + m + 1
    dig = np.zeros(ndig, np.int64)
    bases = np.zeros(ndig, np.int64)
    for i in range(nu + nh + m):
        bases[i] = p
    bases[ndig - 1] = p - 1
    total = np.int64(1)
    for i in range(ndig):
        total *= bases[i]
    g = np.zeros((n, n), np.int64)
    x = np.zeros((n, n), np.int64)
    aug = np.zeros((n, 2 * n), np.int64)
    for _ in range(total):
        for i in range(m):
            for j in range(m):
                g[i, j] = dig[nu + i * m + j]
            g[i, n - 1] = dig[nu + nh + i]
        for j in range(m):
            g[n - 1, j] = 0
        g[n - 1, n - 1] = dig[ndig - 1] + 1
        # x = u * (w g): swap rows k0 and n-1 of g, then add u's row
        # combination into row k0.
        for i in range(n):
            src = i
            if i == k0:
                src = n - 1
            elif i == n - 1:
                src = k0
            for j in range(n):
                x[i, j] = g[src, j]
        for d in range(nu):
            r = k0 + 1 + d
            c = dig[d]
            if c:
                # row r of (w g): rows k0 and n-1 were swapped
                src = r
                if r == n - 1:
                    src = k0
                for j in range(n):
                    x[k0, j] = (x[k0, j] + c * g[src, j]) % p
        _accumulate(hist, a, b, x, aug, n, p, inv_table)
        k = ndig - 1
        while k >= 0:
            dig[k] += 1
            if dig[k] < bases[k]:
                break
            dig[k] = 0
            k -= 1
    return hist


# ---------------------------------------------------------------------------
# numpy backend. Batched mixed-radix decode plus a vectorized Gauss-Jordan.

_BATCH = 1 << 17


def _inv_table_np(p: int) -> np.ndarray:
    table = np.zeros(p, np.int64)
    for v in range(1, p):
        table[v] = pow(v, p - 2, p)
    return table


def batch_inverse_modp(mats: np.ndarray, p: int, inv_table=None):
    """Invert a (B, n, n) stack mod p. Returns (ok mask, inverses)."""
    if inv_table is None:
        inv_table = _inv_table_np(p)
    B, n, _ = mats.shape
    eye = np.broadcast_to(np.eye(n, dtype=np.int64), (B, n, n))
    aug = np.concatenate([mats % p, eye], axis=2).copy()
    ok = np.ones(B, dtype=bool)
    bidx = np.arange(B)
    for col in range(n):
        sub = aug[:, col:n, col] != 0
        ok &= sub.any(axis=1)
        piv = col + np.argmax(sub, axis=1)
        rc = aug[bidx, col].copy()
        aug[bidx, col] = aug[bidx, piv]
        aug[bidx, piv] = rc
        inv = inv_table[aug[bidx, col, col]]
        aug[:, col, :] = (aug[:, col, :] * inv[:, None]) % p
        factors = aug[:, :, col].copy()
        factors[:, col] = 0
        aug = (aug - factors[:, :, None] * aug[:, col : col + 1, :]) % p
    return ok, aug[:, :, n:]


def _hist_of_block(a, b, mats, p, inv_table, hist):
    ok, inv = batch_inverse_modp(mats, p, inv_table)
    if not ok.any():
        return
    tr = np.einsum("ij,bji->b", a, mats[ok]) + np.einsum("ij,bji->b", b, inv[ok])
    hist += np.bincount(tr % p, minlength=p)


def full_group_hist_np(a, b, p, n, batch=_BATCH):
    hist = np.zeros(p, np.int64)
    inv_table = _inv_table_np(p)
    total = p ** (n * n)
    weights = p ** np.arange(n * n - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, batch):
        idx = np.arange(start, min(start + batch, total), dtype=np.int64)
        mats = (idx[:, None] // weights[None, :]) % p
        mats = mats.reshape(-1, n, n)
        _hist_of_block(a, b, mats, p, inv_table, hist)
    return hist


def _mixed_radix_block(idx: np.ndarray, bases: np.ndarray) -> np.ndarray:
    weights = np.ones(len(bases), dtype=np.int64)
    for i in range(len(bases) - 2, -1, -1):
        weights[i] = weights[i + 1] * bases[i + 1]
    return (idx[:, None] // weights[None, :]) % bases[None, :]


def borel_cell_hist_np(a, b, perm, ui, uj, p, n, batch=_BATCH):
    hist = np.zeros(p, np.int64)
    inv_table = _inv_table_np(p)
    nu = len(ui)
    tpos = [(i, j) for i in range(n) for j in range(i + 1, n)]
    bases = np.array([p] * nu + [p - 1] * n + [p] * len(tpos), dtype=np.int64)
    total = int(np.prod(bases, dtype=np.int64))
    for start in range(0, total, batch):
        idx = np.arange(start, min(start + batch, total), dtype=np.int64)
        dig = _mixed_radix_block(idx, bases)
        B = len(idx)
        u = np.broadcast_to(np.eye(n, dtype=np.int64), (B, n, n)).copy()
        for d in range(nu):
            u[:, ui[d], uj[d]] = dig[:, d]
        t = np.zeros((B, n, n), np.int64)
        for i in range(n):
            t[:, i, i] = dig[:, nu + i] + 1
        for d, (i, j) in enumerate(tpos):
            t[:, i, j] = dig[:, nu + n + d]
        uw = u[:, :, perm]
        mats = np.matmul(uw, t) % p
        _hist_of_block(a, b, mats, p, inv_table, hist)
    return hist


def parabolic_cell_hist_np(a, b, k0, p, n, batch=_BATCH):
    hist = np.zeros(p, np.int64)
    inv_table = _inv_table_np(p)
    m = n - 1
    nu = n - 1 - k0
    bases = np.array([p] * (nu + m * m + m) + [p - 1], dtype=np.int64)
    total = int(np.prod(bases, dtype=np.int64))
    swap = list(range(n))
    swap[k0], swap[n - 1] = swap[n - 1], swap[k0]
    for start in range(0, total, batch):
        idx = np.arange(start, min(start + batch, total), dtype=np.int64)
        dig = _mixed_radix_block(idx, bases)
        B = len(idx)
        g = np.zeros((B, n, n), np.int64)
        g[:, :m, :m] = dig[:, nu : nu + m * m].reshape(B, m, m)
        g[:, :m, n - 1] = dig[:, nu + m * m : nu + m * m + m]
        g[:, n - 1, n - 1] = dig[:, -1] + 1
        wg = g[:, swap, :]
        x = wg.copy()
        for d in range(nu):
            r = k0 + 1 + d
            x[:, k0, :] = (x[:, k0, :] + dig[:, d, None] * wg[:, r, :]) % p
        _hist_of_block(a, b, x, p, inv_table, hist)
    return hist


# ---------------------------------------------------------------------------
# dispatch


def full_group_hist(a, b, p, n, backend=None):
    backend = backend or default_backend()
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    if backend == "numba" and HAS_NUMBA:
        return full_group_hist_nb(a, b, p, n)
    return full_group_hist_np(a, b, p, n)


def borel_cell_hist(a, b, perm, ui, uj, p, n, backend=None):
    backend = backend or default_backend()
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    perm = np.ascontiguousarray(perm, dtype=np.int64)
    ui_a = np.ascontiguousarray(ui, dtype=np.int64)
    uj_a = np.ascontiguousarray(uj, dtype=np.int64)
    if backend == "numba" and HAS_NUMBA:
        return borel_cell_hist_nb(a, b, perm, ui_a, uj_a, p, n)
    return borel_cell_hist_np(a, b, list(perm), list(ui), list(uj), p, n)


def parabolic_cell_hist(a, b, k0, p, n, backend=None):
    backend = backend or default_backend()
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    if backend == "numba" and HAS_NUMBA:
        return parabolic_cell_hist_nb(a, b, k0, p, n)
    return parabolic_cell_hist_np(a, b, k0, p, n)
