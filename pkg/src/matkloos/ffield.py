"""Finite fields F_{p^f}, their additive characters, and exact cyclotomic values.

Field elements are coefficient vectors over F_p modulo a monic irreducible
polynomial, constant term first. Character values live in Z[zeta_p],
represented by integer coordinates on the basis 1, zeta, ..., zeta^{p-2}, so
every sum computed from them is exact. Floating point enters only through
`cyclo_abs`, the complex-embedding absolute value used for archimedean bounds.
"""

from __future__ import annotations

import math

from .errors import (
    BudgetExceeded,
    CompositeP,
    DegreeMismatch,
    FieldMismatch,
    PrimeMismatch,
    ReducibleModulus,
    ZeroPolynomial,
)

# Exhaustive scans over a field (root finding, generator search) refuse to run
# past this size; the exact engine is meant for desk-scale q only.
SCAN_LIMIT = 1 << 20

_ELEMENT_CACHE_LIMIT = 1 << 12


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# Polynomial helpers over F_p. Coefficient lists of ints, constant term first,
# normalized to have no trailing zeros (the zero polynomial is the empty list).


def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = a[:]
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        k = len(a) - 1 - dm
        c = (a[-1] * inv_lead) % p
        for i, mi in enumerate(m):
            a[k + i] = (a[k + i] - c * mi) % p
        _trim(a)
    return a


def _poly_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = a[:]
    q = [0] * max(len(a) - len(b) + 1, 0)
    inv_lead = pow(b[-1], p - 2, p)
    while a and len(a) >= len(b):
        k = len(a) - len(b)
        c = (a[-1] * inv_lead) % p
        q[k] = c
        for i, bi in enumerate(b):
            a[k + i] = (a[k + i] - c * bi) % p
        _trim(a)
    return _trim(q), a


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = a[:], b[:]
    while b:
        a, b = b, _poly_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [(c * inv) % p for c in a]
    return a


def _poly_powmod(base: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(base, m, p)
    while e > 0:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), m, p)
        base = _poly_mod(_poly_mul(base, base, p), m, p)
        e >>= 1
    return result


def _is_irreducible(m: list[int], p: int) -> bool:
    # Rabin's test: x^(p^f) = x mod m, and x^(p^(f/t)) - x is coprime to m
    # for every prime t dividing f.
    f = len(m) - 1
    if f < 1:
        return False
    x = [0, 1]
    if _poly_powmod(x, p**f, m, p) != _poly_mod(x, m, p):
        return False
    t = 2
    ff = f
    seen = set()
    while t * t <= ff:
        if ff % t == 0:
            seen.add(t)
            while ff % t == 0:
                ff //= t
        t += 1
    if ff > 1:
        seen.add(ff)
    for t in seen:
        g = _poly_sub(_poly_powmod(x, p ** (f // t), m, p), x, p)
        if len(_poly_gcd(g, m, p)) != 1:
            return False
    return True


def _poly_str(coeffs: tuple[int, ...]) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        elif i == 1:
            terms.append("x" if c == 1 else f"{c}*x")
        else:
            terms.append(f"x^{i}" if c == 1 else f"{c}*x^{i}")
    return " + ".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# Cyclotomic integers.


class CycloInt:
    """An element of Z[zeta_p], zeta_p a primitive p-th root of unity.

    Coordinates are integers on the basis zeta^0, ..., zeta^(p-2); the
    relation 1 + zeta + ... + zeta^(p-1) = 0 eliminates zeta^(p-1). The
    representation is unique, so equality is coordinate equality.
    """

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs):
        if not is_prime(p):
            raise CompositeP(f"p = {p} is not prime")
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != p - 1:
            raise DegreeMismatch(
                f"need {p - 1} coordinates for Z[zeta_{p}], got {len(coeffs)}"
            )
        self.p = p
        self.coeffs = coeffs

    @classmethod
    def from_int(cls, p: int, n: int) -> "CycloInt":
        return cls(p, (n,) + (0,) * (p - 2))

    @classmethod
    def zero(cls, p: int) -> "CycloInt":
        return cls.from_int(p, 0)

    @classmethod
    def one(cls, p: int) -> "CycloInt":
        return cls.from_int(p, 1)

    @classmethod
    def zeta(cls, p: int, k: int = 1) -> "CycloInt":
        """zeta_p^k, reduced to the basis."""
        k %= p
        if k == p - 1:
            return cls(p, (-1,) * (p - 1))
        coeffs = [0] * (p - 1)
        coeffs[k] = 1
        return cls(p, coeffs)

    @classmethod
    def from_exponent_counts(cls, p: int, counts) -> "CycloInt":
        """Sum of counts[k] copies of zeta^k for k = 0..p-1."""
        counts = list(counts)
        if len(counts) != p:
            raise DegreeMismatch(f"need {p} exponent counts, got {len(counts)}")
        top = counts[p - 1]
        return cls(p, tuple(int(counts[k] - top) for k in range(p - 1)))

    def _check(self, other: "CycloInt") -> None:
        if self.p != other.p:
            raise PrimeMismatch(f"mixing Z[zeta_{self.p}] and Z[zeta_{other.p}]")

    def _coerce(self, other):
        if isinstance(other, CycloInt):
            self._check(other)
            return other
        if isinstance(other, int):
            return CycloInt.from_int(self.p, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CycloInt(self.p, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CycloInt(self.p, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return CycloInt(self.p, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, int):
            return CycloInt(self.p, tuple(a * other for a in self.coeffs))
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        p = self.p
        counts = [0] * p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        counts[(i + j) % p] += a * b
        return CycloInt.from_exponent_counts(p, counts)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers leave Z[zeta_p]")
        result = CycloInt.one(self.p)
        base = self
        while e > 0:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            return self == CycloInt.from_int(self.p, other)
        if not isinstance(other, CycloInt):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_int(self) -> int:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not a rational integer")
        return self.coeffs[0]

    def to_complex(self) -> complex:
        w = 2.0 * math.pi / self.p
        re = sum(c * math.cos(w * k) for k, c in enumerate(self.coeffs))
        im = sum(c * math.sin(w * k) for k, c in enumerate(self.coeffs))
        return complex(re, im)

    def to_json(self) -> dict:
        return {"p": self.p, "coeffs": list(self.coeffs)}

    @classmethod
    def from_json(cls, obj: dict) -> "CycloInt":
        return cls(obj["p"], obj["coeffs"])

    def __repr__(self):
        if self.is_rational():
            return f"CycloInt({self.p}, {self.coeffs[0]})"
        return f"CycloInt({self.p}, {list(self.coeffs)})"


def cyclo_mul(x: CycloInt, y: CycloInt) -> CycloInt:
    """Exact product in Z[zeta_p]. Both factors must share the same p."""
    if not isinstance(x, CycloInt) or not isinstance(y, CycloInt):
        raise TypeError("cyclo_mul expects two CycloInt values")
    return x * y


def cyclo_abs(x: CycloInt) -> float:
    """Absolute value of the complex embedding zeta_p -> exp(2*pi*i/p)."""
    return abs(x.to_complex())


# ---------------------------------------------------------------------------
# Field contexts and elements.


class FieldCtx:
    """Arithmetic context for F_{p^f} = F_p[x] / (modulus).

    Build with `make_field`; direct construction skips no validation but is
    not the public entry point. Contexts compare by (p, f, modulus).
    """

    __slots__ = ("p", "f", "q", "modulus", "_tr_basis", "_elements")

    def __init__(self, p: int, f: int, modulus: tuple[int, ...]):
        self.p = p
        self.f = f
        self.q = p**f
        self.modulus = modulus
        self._elements = None
        # Absolute trace of each power basis element x^i, via Frobenius orbits.
        tr = []
        for i in range(f):
            e = [0] * f
            e[i] = 1
            acc = e[:]
            y = e[:]
            for _ in range(f - 1):
                y = _poly_powmod(y, p, list(modulus), p)
                y = y + [0] * (f - len(y))
                acc = [(a + b) % p for a, b in zip(acc, y)]
            assert not any(acc[1:]), "trace landed outside F_p"
            tr.append(acc[0])
        self._tr_basis = tuple(tr)

    def element(self, value) -> "FqElem":
        """Coerce an int (constant) or coefficient list into this field."""
        if isinstance(value, FqElem):
            if value.ctx != self:
                raise FieldMismatch("element belongs to a different field")
            return value
        if isinstance(value, int):
            coeffs = [value % self.p] + [0] * (self.f - 1)
        else:
            coeffs = [int(c) % self.p for c in value]
            if len(coeffs) > self.f:
                raise DegreeMismatch(
                    f"coefficient vector of length {len(coeffs)} in degree {self.f} field"
                )
            coeffs += [0] * (self.f - len(coeffs))
        return FqElem(self, tuple(coeffs))

    def zero(self) -> "FqElem":
        return self.element(0)

    def one(self) -> "FqElem":
        return self.element(1)

    def gen(self) -> "FqElem":
        """The class of x. Only meaningful for f > 1."""
        if self.f == 1:
            return self.zero()
        return self.element([0, 1])

    def from_index(self, i: int) -> "FqElem":
        """Element number i under base-p digit encoding, 0 <= i < q."""
        coeffs = []
        for _ in range(self.f):
            coeffs.append(i % self.p)
            i //= self.p
        return FqElem(self, tuple(coeffs))

    def iter_elements(self):
        for i in range(self.q):
            yield self.from_index(i)

    def elements(self) -> list:
        if self._elements is None:
            if self.q > _ELEMENT_CACHE_LIMIT:
                return list(self.iter_elements())
            self._elements = list(self.iter_elements())
        return self._elements

    def __eq__(self, other):
        if not isinstance(other, FieldCtx):
            return NotImplemented
        return (self.p, self.f, self.modulus) == (other.p, other.f, other.modulus)

    def __hash__(self):
        return hash((self.p, self.f, self.modulus))

    def to_json(self) -> dict:
        obj = {"p": self.p, "f": self.f}
        if self.f > 1:
            obj["modulus"] = list(self.modulus)
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "FieldCtx":
        return make_field(obj["p"], obj.get("f", 1), obj.get("modulus"))

    def __repr__(self):
        if self.f == 1:
            return f"FieldCtx(F_{self.p})"
        return f"FieldCtx(F_{self.p}^{self.f}, {_poly_str(self.modulus)})"


class FqElem:
    """An element of F_{p^f}, stored as a reduced coefficient tuple."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: tuple[int, ...]):
        self.ctx = ctx
        self.coeffs = coeffs

    def _coerce(self, other):
        if isinstance(other, FqElem):
            if other.ctx != self.ctx:
                raise FieldMismatch("elements of different fields")
            return other
        if isinstance(other, int):
            return self.ctx.element(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        p = self.ctx.p
        return FqElem(
            self.ctx, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs))
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        p = self.ctx.p
        return FqElem(
            self.ctx, tuple((a - b) % p for a, b in zip(self.coeffs, other.coeffs))
        )

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        p = self.ctx.p
        return FqElem(self.ctx, tuple((-a) % p for a in self.coeffs))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        ctx = self.ctx
        prod = _poly_mul(list(self.coeffs), list(other.coeffs), ctx.p)
        red = _poly_mod(prod, list(ctx.modulus), ctx.p)
        red += [0] * (ctx.f - len(red))
        return FqElem(ctx, tuple(red))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ctx.one()
        base = self
        while e > 0:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "FqElem":
        if not self:
            raise ZeroDivisionError("inverse of zero field element")
        ctx = self.ctx
        if ctx.f == 1:
            return FqElem(ctx, (pow(self.coeffs[0], ctx.p - 2, ctx.p),))
        # Extended Euclid in F_p[x] against the modulus.
        p = ctx.p
        r0, r1 = list(ctx.modulus), _trim(list(self.coeffs))
        s0, s1 = [], [1]
        while r1:
            q, r = _poly_divmod(r0, r1, p)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1, p), p)
        inv_r0 = pow(r0[0], p - 2, p)
        s0 = [(c * inv_r0) % p for c in s0]
        s0 = _poly_mod(s0, list(ctx.modulus), p)
        s0 += [0] * (ctx.f - len(s0))
        return FqElem(ctx, tuple(s0))

    def trace(self) -> int:
        """Absolute trace down to F_p, as an integer in [0, p)."""
        tr = self.ctx._tr_basis
        return sum(c * t for c, t in zip(self.coeffs, tr)) % self.ctx.p

    def index(self) -> int:
        i = 0
        for c in reversed(self.coeffs):
            i = i * self.ctx.p + c
        return i

    def __eq__(self, other):
        if isinstance(other, int):
            return self.coeffs == self.ctx.element(other).coeffs
        if not isinstance(other, FqElem):
            return NotImplemented
        return self.ctx == other.ctx and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ctx, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        if self.ctx.f == 1:
            return f"Fq({self.coeffs[0]} mod {self.ctx.p})"
        return f"Fq({list(self.coeffs)} in {self.ctx!r})"


def make_field(p: int, f: int = 1, modulus=None) -> FieldCtx:
    """Build F_{p^f}.

    With no modulus given, picks the monic irreducible of degree f whose
    coefficient vector (read from the top degree down) is lexicographically
    smallest, found by exhaustive search. A supplied modulus is validated:
    monic of degree exactly f after reduction mod p, and irreducible.
    """
    if not is_prime(p):
        raise CompositeP(f"p = {p} is not prime")
    if f < 1:
        raise DegreeMismatch("extension degree f must be at least 1")
    if modulus is not None:
        m = [int(c) % p for c in modulus]
        m = _trim(m)
        if len(m) - 1 != f:
            raise DegreeMismatch(
                f"modulus has degree {len(m) - 1}, field asks for {f}"
            )
        if m[-1] != 1:
            raise ReducibleModulus("modulus must be monic")
        if not _is_irreducible(m, p):
            raise ReducibleModulus(f"{_poly_str(tuple(m))} is reducible over F_{p}")
        return FieldCtx(p, f, tuple(m))
    if f == 1:
        return FieldCtx(p, 1, (0, 1))
    if p**f > SCAN_LIMIT:
        raise BudgetExceeded(f"default modulus search over {p}^{f} candidates")
    for k in range(p**f):
        coeffs = []
        kk = k
        for _ in range(f):
            coeffs.append(kk % p)
            kk //= p
        m = coeffs + [1]
        if _is_irreducible(m, p):
            return FieldCtx(p, f, tuple(m))
    raise ReducibleModulus("no irreducible polynomial found")  # unreachable


def fq_trace(x: FqElem) -> int:
    """Absolute trace Tr_{F_q/F_p}(x) as an integer in [0, p)."""
    return x.trace()


def psi_char(x, ctx: FieldCtx | None = None) -> CycloInt:
    """The additive character psi(x) = zeta_p^Tr(x)."""
    if isinstance(x, int):
        if ctx is None:
            raise ValueError("psi_char of an int needs a field context")
        x = ctx.element(x)
    elif ctx is not None and x.ctx != ctx:
        raise FieldMismatch("element does not belong to the given context")
    return CycloInt.zeta(x.ctx.p, x.trace())


def poly_roots(coeffs, ctx: FieldCtx | None = None):
    """All roots in F_q of a nonzero polynomial, with multiplicities.

    `coeffs` is constant-first, entries FqElem or int. Returns a pair
    (roots, cofactor): roots is a list of (root, multiplicity) sorted by
    element index, and cofactor is the monic-leading quotient left after
    dividing out every linear factor found. Exhaustive scan, so the field
    must be desk scale (q <= 2^20).
    """
    if ctx is None:
        for c in coeffs:
            if isinstance(c, FqElem):
                ctx = c.ctx
                break
        if ctx is None:
            raise ValueError("poly_roots needs a field context")
    cs = [ctx.element(c) for c in coeffs]
    while cs and not cs[-1]:
        cs.pop()
    if not cs:
        raise ZeroPolynomial("poly_roots of the zero polynomial")
    if ctx.q > SCAN_LIMIT:
        raise BudgetExceeded(f"root scan over q = {ctx.q} elements")
    roots = []
    for x in ctx.iter_elements():
        if len(cs) == 1:
            break
        acc = cs[-1]
        for c in reversed(cs[:-1]):
            acc = acc * x + c
        if acc:
            continue
        mult = 0
        while True:
            # synthetic division by (X - x)
            quot = []
            carry = ctx.zero()
            for c in reversed(cs):
                carry = c + carry * x
                quot.append(carry)
            rem = quot.pop()
            if rem:
                break
            cs = list(reversed(quot))
            mult += 1
            if len(cs) == 1:
                break
        roots.append((x, mult))
    return roots, cs


_EMBED_CACHE: dict = {}


def embed_field(src: FieldCtx, dst: FieldCtx):
    """A field embedding F_{p^f} -> F_{p^{fd}}, as a callable on elements.

    The image of the source generator is the root of the source modulus in
    `dst` with the smallest element index, so the embedding is deterministic.
    """
    if src.p != dst.p:
        raise PrimeMismatch("embedding between different characteristics")
    if dst.f % src.f != 0:
        raise DegreeMismatch(f"F_{src.p}^{src.f} does not embed in F_{dst.p}^{dst.f}")
    key = (src.p, src.f, src.modulus, dst.f, dst.modulus)
    if key in _EMBED_CACHE:
        beta_pows = _EMBED_CACHE[key]
    else:
        if src.f == 1:
            beta_pows = [dst.one()]
        else:
            mod_in_dst = [dst.element(c) for c in src.modulus]
            roots, _ = poly_roots(mod_in_dst, dst)
            beta = roots[0][0]
            beta_pows = [dst.one()]
            for _ in range(src.f - 1):
                beta_pows.append(beta_pows[-1] * beta)
        _EMBED_CACHE[key] = beta_pows

    def emb(x: FqElem) -> FqElem:
        if x.ctx != src:
            raise FieldMismatch("element is not in the source field")
        acc = dst.zero()
        for c, bp in zip(x.coeffs, beta_pows):
            if c:
                acc = acc + bp * c
        return acc

    return emb
