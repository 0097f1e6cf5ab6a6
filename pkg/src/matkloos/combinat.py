"""Partitions, involutions, and q-combinatorics used by the closed forms."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .errors import NonCanonicalPartition, NotInvolution, RangeError

Partition = tuple[int, ...]


def check_partition(parts) -> Partition:
    """Validate and return a canonical partition: positive, non-decreasing."""
    t = tuple(int(x) for x in parts)
    for a in t:
        if a < 1:
            raise NonCanonicalPartition(f"part {a} is not positive")
    if any(t[i] > t[i + 1] for i in range(len(t) - 1)):
        raise NonCanonicalPartition(f"parts {t} are not non-decreasing")
    return t


def partitions(n: int):
    """All partitions of n as non-decreasing tuples, in lexicographic order."""
    if n < 0:
        raise RangeError("partitions of a negative integer")

    def rec(rest, min_part):
        if rest == 0:
            yield ()
            return
        for part in range(min_part, rest + 1):
            for tail in rec(rest - part, part):
                yield (part,) + tail

    yield from rec(n, 1)


@dataclass(frozen=True)
class Involution:
    """A self-inverse permutation of {0, ..., n-1} with its cell statistics.

    e counts 2-cycles, f counts fixed points, and crossings is the statistic
    N(w) = #{(i, j) : i < j, w(j) < w(i) <= j} that controls the q-power of
    the corresponding Bruhat cell.
    """

    map: tuple[int, ...]
    e: int = field(init=False)
    f: int = field(init=False)
    crossings: int = field(init=False)

    def __post_init__(self):
        w = self.map
        n = len(w)
        if sorted(w) != list(range(n)):
            raise NotInvolution(f"{w} is not a permutation of 0..{n - 1}")
        if any(w[w[i]] != i for i in range(n)):
            raise NotInvolution(f"{w} does not square to the identity")
        object.__setattr__(self, "e", sum(1 for i in range(n) if w[i] > i))
        object.__setattr__(self, "f", sum(1 for i in range(n) if w[i] == i))
        object.__setattr__(self, "crossings", n_stat(w))

    def cycles(self) -> list[tuple[int, int]]:
        return [(i, self.map[i]) for i in range(len(self.map)) if self.map[i] > i]

    def __str__(self):
        cyc = self.cycles()
        if not cyc:
            return "id"
        return "".join(f"({i + 1}{j + 1})" for i, j in cyc)


def n_stat(w) -> int:
    """N(w) = #{(i, j) : i < j, w(j) < w(i) <= j}, indices 0-based."""
    w = tuple(w)
    n = len(w)
    if sorted(w) != list(range(n)):
        raise NotInvolution(f"{w} is not a permutation of 0..{n - 1}")
    return sum(
        1 for i in range(n) for j in range(i + 1, n) if w[j] < w[i] <= j
    )


def involutions(n: int):
    """All involutions of S_n, smallest unmatched point paired first."""
    if n < 0:
        raise RangeError("involutions of a negative-size set")

    def rec(remaining):
        if not remaining:
            yield {}
            return
        i = remaining[0]
        rest = remaining[1:]
        for m in rec(rest):
            yield {**m, i: i}
        for k, j in enumerate(rest):
            for m in rec(rest[:k] + rest[k + 1 :]):
                yield {**m, i: j, j: i}

    for m in rec(tuple(range(n))):
        yield Involution(tuple(m[i] for i in range(n)))


@lru_cache(maxsize=None)
def q_binomial(k: int, j: int) -> tuple[int, ...]:
    """Gaussian binomial [k choose j]_q as dense integer coefficients in q.

    Constant term first. Specializes to the ordinary binomial at q = 1.
    """
    if k < 0 or j < 0 or j > k:
        raise RangeError(f"q_binomial({k}, {j}) out of range")
    if j == 0 or j == k:
        return (1,)
    a = q_binomial(k - 1, j - 1)
    b = q_binomial(k - 1, j)
    out = [0] * max(len(a), len(b) + j)
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i + j] += c
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def poly_eval(coeffs, x: int) -> int:
    """Evaluate an integer coefficient list (constant first) at an integer."""
    acc = 0
    for c in reversed(tuple(coeffs)):
        acc = acc * x + c
    return acc


def gl_order(n: int, q: int) -> int:
    """|GL_n(F_q)| as an exact integer."""
    if n < 0 or q < 2:
        raise RangeError(f"gl_order({n}, {q}) out of range")
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out


def _q_int(m: int, q: int) -> int:
    return (q**m - 1) // (q - 1)


def _q_factorial(m: int, q: int) -> int:
    out = 1
    for i in range(1, m + 1):
        out *= _q_int(i, q)
    return out


def rank_count(k: int, l: int, j: int, q: int) -> int:
    """Number of k x l matrices over F_q of rank exactly j.

    Equals (q-1)^j q^binom(j,2) [k]_q! [l]_q! / ([k-j]_q! [l-j]_q! [j]_q!),
    an exact integer.
    """
    if k < 0 or l < 0:
        raise RangeError(f"rank_count with negative shape ({k}, {l})")
    if j < 0 or j > min(k, l):
        raise RangeError(f"rank {j} impossible for a {k} x {l} matrix")
    if q < 2:
        raise RangeError(f"rank_count needs q >= 2, got {q}")
    num = (q - 1) ** j * q ** (j * (j - 1) // 2) * _q_factorial(k, q) * _q_factorial(l, q)
    den = _q_factorial(k - j, q) * _q_factorial(l - j, q) * _q_factorial(j, q)
    assert num % den == 0
    return num // den
