"""Arithmetic in small finite fields GF(p^e).

Elements are plain integers 0..q-1.  The base-p digits of an element are
its coefficients in the polynomial basis 1, g, g^2, ..., g^(e-1), where g is
the class of the indeterminate modulo a fixed irreducible polynomial.  So in
GF(4) = GF(2)[g]/(g^2+g+1) the element 2 is g and 3 is g+1.

Fields with q <= TABLE_CAP carry exp/log tables and full numpy
addition/multiplication tables (used by the vectorised paths elsewhere in the
package); fields with q <= LIST_CAP also keep the tables as nested lists for
fast scalar lookups.  Larger fields fall back to digit-vector arithmetic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

import numpy as np

TABLE_CAP = 1 << 12
LIST_CAP = 1 << 8
FIELD_CAP = 1 << 16

# Conway polynomials, coefficients low -> high, monic.
MODULUS_TABLE: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 4, 1),
}


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factor_prime_power(q: int) -> tuple[int, int]:
    """Split q = p^e, raising FieldError if q is not a prime power."""
    if q < 2:
        raise FieldError(f"field size must be a prime power >= 2, got {q}")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise FieldError(f"{q} is not a prime power")
    return p, e


# -- polynomials over GF(p), coefficient lists low -> high ------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], b: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    b = _trim([c % p for c in b])
    inv_lead = pow(b[-1], -1, p)
    while len(a) >= len(b):
        f = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - f * c) % p
        _trim(a)
    return a


def _is_irreducible_mod_p(f: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg(f)//2."""
    deg = len(f) - 1
    if deg < 1 or f[-1] % p == 0:
        return False
    for d in range(1, deg // 2 + 1):
        for low in range(p ** d):
            g = [(low // p ** i) % p for i in range(d)] + [1]
            if not _pmod(list(f), g, p):
                return False
    return True


def _search_irreducible(p: int, e: int) -> tuple[int, ...]:
    # first hit in the order of the integer sum a_i p^i over the low coefficients
    for idx in range(p ** e):
        f = tuple((idx // p ** i) % p for i in range(e)) + (1,)
        if _is_irreducible_mod_p(f, p):
            return f
    raise FieldError(f"no irreducible polynomial of degree {e} over GF({p})")


@dataclass(frozen=True, eq=False)
class FieldCtx:
    """The field GF(p^e).

    Build instances with :func:`field_new` (cached) rather than directly.
    """

    p: int
    e: int
    modulus: tuple[int, ...]
    q: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "q", self.p ** self.e)
        if not _is_irreducible_mod_p(self.modulus, self.p):
            raise FieldError(f"modulus {self.modulus} is reducible over GF({self.p})")
        object.__setattr__(self, "has_tables", self.q <= TABLE_CAP)
        object.__setattr__(self, "has_lists", self.q <= LIST_CAP)
        if self.has_tables:
            self._build_tables()

    def _build_tables(self):
        q, p, e = self.q, self.p, self.e
        idx = np.arange(q)
        dig = np.stack([(idx // p ** i) % p for i in range(e)], axis=1)
        weights = p ** np.arange(e)
        add = ((dig[:, None, :] + dig[None, :, :]) % p) @ weights
        neg = ((-dig) % p) @ weights
        # exp/log tables from a primitive element
        for g in range(1, q):
            exp = [1]
            while len(exp) < q - 1:
                nxt = self._mul_digits(exp[-1], g)
                if nxt == 1:
                    break
                exp.append(nxt)
            if len(exp) == q - 1:
                break
        log = [0] * q
        for k, a in enumerate(exp):
            log[a] = k
        exp_np = np.array(exp + exp, dtype=np.int64)
        log_np = np.array(log, dtype=np.int64)
        mul = exp_np[log_np[:, None] + log_np[None, :]]
        mul[0, :] = 0
        mul[:, 0] = 0
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp_np[(q - 1 - log_np[1:]) % (q - 1)]
        object.__setattr__(self, "exp_table", exp + exp)
        object.__setattr__(self, "log_table", log)
        object.__setattr__(self, "add_np", add.astype(np.int64))
        object.__setattr__(self, "mul_np", mul)
        object.__setattr__(self, "neg_np", neg.astype(np.int64))
        object.__setattr__(self, "inv_np", inv)
        if self.has_lists:
            object.__setattr__(self, "add_table", self.add_np.tolist())
            object.__setattr__(self, "mul_table", mul.tolist())
            object.__setattr__(self, "neg_table", self.neg_np.tolist())
            object.__setattr__(self, "inv_table", inv.tolist())
        object.__setattr__(self, "trace_table", [self._trace_slow(a) for a in range(q)])

    def __repr__(self):
        return f"GF({self.q})" if self.e == 1 else f"GF({self.p}^{self.e})"

    @property
    def elements(self) -> range:
        return range(self.q)

    # -- digit-level arithmetic (table-free) --------------------------------

    def digits(self, a: int) -> list[int]:
        return [(a // self.p ** i) % self.p for i in range(self.e)]

    def from_digits(self, ds: Iterable[int]) -> int:
        return sum((d % self.p) * self.p ** i for i, d in enumerate(ds))

    def _add_digits(self, a: int, b: int) -> int:
        return self.from_digits(x + y for x, y in zip(self.digits(a), self.digits(b)))

    def _neg_digits(self, a: int) -> int:
        return self.from_digits(-x for x in self.digits(a))

    def _mul_digits(self, a: int, b: int) -> int:
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        return self.from_digits(_pmod(prod, list(self.modulus), self.p))

    def _pow_slow(self, a: int, k: int) -> int:
        result, base = 1, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def _trace_slow(self, a: int) -> int:
        t, x = 0, a
        for _ in range(self.e):
            t = self.add(t, x)
            x = self._pow_slow(x, self.p)
        if t >= self.p:
            raise FieldError(f"trace of {a} left the prime subfield")
        return t

    # -- public arithmetic ---------------------------------------------------

    def _check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise FieldError(f"{a} is not an element of {self!r}")
        return a

    def add(self, a: int, b: int) -> int:
        if self.has_lists:
            return self.add_table[a][b]
        if self.has_tables:
            return int(self.add_np[a, b])
        return self._add_digits(a, b)

    def neg(self, a: int) -> int:
        if self.has_lists:
            return self.neg_table[a]
        if self.has_tables:
            return int(self.neg_np[a])
        return self._neg_digits(a)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.has_lists:
            return self.mul_table[a][b]
        if self.has_tables:
            if a == 0 or b == 0:
                return 0
            return self.exp_table[self.log_table[a] + self.log_table[b]]
        return self._mul_digits(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        if self.has_lists:
            return self.inv_table[a]
        if self.has_tables:
            return int(self.inv_np[a])
        return self._pow_slow(a, self.q - 2)

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            return self._pow_slow(self.inv(a), -k)
        return self._pow_slow(a, k)

    def trace(self, a: int) -> int:
        """Absolute trace a + a^p + ... + a^(p^(e-1)), returned as 0..p-1."""
        if self.has_tables:
            return self.trace_table[a]
        return self._trace_slow(a)

    def psi0(self, a: int) -> complex:
        """The canonical additive character exp(2 pi i trace(a) / p)."""
        return cmath.exp(2j * math.pi * self.trace(a) / self.p)

    def subfield_elements(self, e0: int) -> frozenset[int]:
        """Elements fixed by a -> a^(p^e0), i.e. the subfield GF(p^e0)."""
        if e0 < 1 or self.e % e0:
            raise FieldError(f"{e0} does not divide extension degree {self.e}")
        k = self.p ** e0
        return frozenset(a for a in range(self.q) if self._pow_slow(a, k) == a)

    def proper_subfield_degrees(self) -> list[int]:
        return [d for d in range(1, self.e) if self.e % d == 0]

    def __call__(self, value: int) -> Felt:
        return Felt(self, self._check(value))


@lru_cache(maxsize=None)
def field_new(p: int, e: int = 1) -> FieldCtx:
    """Return the (cached) field with p^e elements."""
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if e < 1:
        raise FieldError(f"extension degree must be >= 1, got {e}")
    if p ** e > FIELD_CAP:
        raise FieldError(f"GF({p}^{e}) exceeds the supported size {FIELD_CAP}")
    if e == 1:
        modulus: tuple[int, ...] = (0, 1)
    else:
        modulus = MODULUS_TABLE.get((p, e)) or _search_irreducible(p, e)
    return FieldCtx(p, e, modulus)


def field_of_size(q: int) -> FieldCtx:
    return field_new(*factor_prime_power(q))


@dataclass(frozen=True)
class Felt:
    """A field element bound to its field; supports the usual operators."""

    ctx: FieldCtx
    value: int

    def _other(self, other) -> int:
        if isinstance(other, Felt):
            if other.ctx is not self.ctx:
                raise FieldError(f"cannot combine elements of {self.ctx!r} and {other.ctx!r}")
            return other.value
        if isinstance(other, int):
            return self.ctx._check(other)
        return NotImplemented

    def __add__(self, other):
        return Felt(self.ctx, self.ctx.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Felt(self.ctx, self.ctx.sub(self.value, self._other(other)))

    def __mul__(self, other):
        return Felt(self.ctx, self.ctx.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __neg__(self):
        return Felt(self.ctx, self.ctx.neg(self.value))

    def __truediv__(self, other):
        return self * self.ctx.inv(self._other(other))

    def inv(self) -> Felt:
        return Felt(self.ctx, self.ctx.inv(self.value))

    def __pow__(self, k: int):
        return Felt(self.ctx, self.ctx.pow(self.value, k))

    def trace(self) -> int:
        return self.ctx.trace(self.value)

    def psi0(self) -> complex:
        return self.ctx.psi0(self.value)

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0
