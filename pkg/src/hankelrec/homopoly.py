"""Homogeneous polynomials in Y, Z over a finite field, and their dual sequences.

A polynomial of declared degree m is stored as its coefficient vector
(a_0, ..., a_m), a_i being the coefficient of Y^i Z^(m-i).  Setting Z = 1 turns
it into the univariate polynomial sum a_i T^i; the drop from m to the degree of
that polynomial is the power of Z dividing it.  All division and gcd work goes
through that dehomogenisation.

Sequences (x_0, ..., x_n) are linear functionals on degree-n polynomials via
<P, x> = sum a_i x_i, and multiplication by Q has the sliding dot product
x -> (sum_i a_i x_(i+j))_j as its adjoint.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterator, Sequence

from .gf import FieldCtx


@dataclass(frozen=True)
class HomoPoly:
    ctx: FieldCtx
    degree: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.degree < -1:
            raise ValueError(f"degree must be >= -1, got {self.degree}")
        if len(self.coeffs) != self.degree + 1:
            raise ValueError(
                f"degree {self.degree} needs {self.degree + 1} coefficients, got {len(self.coeffs)}"
            )
        for c in self.coeffs:
            if not 0 <= c < self.ctx.q:
                raise ValueError(f"coefficient {c} is not an element of {self.ctx!r}")

    @classmethod
    def of(cls, ctx: FieldCtx, coeffs: Sequence[int]) -> HomoPoly:
        return cls(ctx, len(coeffs) - 1, tuple(int(c) for c in coeffs))

    @classmethod
    def zero(cls, ctx: FieldCtx, degree: int) -> HomoPoly:
        return cls(ctx, degree, (0,) * (degree + 1))

    @classmethod
    def one(cls, ctx: FieldCtx) -> HomoPoly:
        return cls(ctx, 0, (1,))

    @classmethod
    def monomial(cls, ctx: FieldCtx, y: int, z: int) -> HomoPoly:
        """Y^y Z^z."""
        return cls(ctx, y + z, (0,) * y + (1,) + (0,) * z)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def udeg(self) -> int:
        """Degree after setting Z = 1 (-1 for the zero polynomial)."""
        return _udeg(self.coeffs)

    @property
    def z_power(self) -> int:
        if self.is_zero():
            raise ValueError("the zero polynomial has no Z-adic valuation")
        return self.degree - self.udeg

    def monic(self) -> HomoPoly:
        """Scale so that the highest-index nonzero coefficient is 1."""
        if self.is_zero():
            return self
        s = self.ctx.inv(self.coeffs[self.udeg])
        return HomoPoly(self.ctx, self.degree, tuple(self.ctx.mul(s, c) for c in self.coeffs))

    def scale(self, c: int) -> HomoPoly:
        return HomoPoly(self.ctx, self.degree, tuple(self.ctx.mul(c, a) for a in self.coeffs))

    def __add__(self, other: HomoPoly) -> HomoPoly:
        _same(self, other)
        if self.degree != other.degree:
            raise ValueError("cannot add polynomials of different degrees")
        add = self.ctx.add
        return HomoPoly(self.ctx, self.degree, tuple(add(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other: HomoPoly) -> HomoPoly:
        return poly_mul(self, other)

    def __str__(self):
        if self.degree == -1:
            return "0_{V-1}"
        terms = []
        for i in reversed(range(self.degree + 1)):
            a = self.coeffs[i]
            if not a:
                continue
            mono = "".join(
                v if k == 1 else f"{v}^{k}" for v, k in (("Y", i), ("Z", self.degree - i)) if k
            )
            if not mono:
                terms.append(str(a))
            else:
                terms.append(mono if a == 1 else f"{a}*{mono}")
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class SeqVec:
    """A sequence (x_0, ..., x_n); n = -1 is the empty sequence."""

    ctx: FieldCtx
    entries: tuple[int, ...]

    def __post_init__(self):
        for c in self.entries:
            if not 0 <= c < self.ctx.q:
                raise ValueError(f"entry {c} is not an element of {self.ctx!r}")

    @classmethod
    def of(cls, ctx: FieldCtx, entries: Sequence[int]) -> SeqVec:
        return cls(ctx, tuple(int(c) for c in entries))

    @property
    def n(self) -> int:
        return len(self.entries) - 1

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]


def _same(a, b):
    if a.ctx is not b.ctx:
        raise ValueError(f"mixed fields {a.ctx!r} and {b.ctx!r}")


# -- univariate helpers, coefficient lists low -> high ----------------------

def _udeg(c: Sequence[int]) -> int:
    for i in range(len(c) - 1, -1, -1):
        if c[i]:
            return i
    return -1


def _udivmod(ctx: FieldCtx, a: Sequence[int], b: Sequence[int]) -> tuple[list[int], list[int]]:
    db = _udeg(b)
    if db < 0:
        raise ZeroDivisionError("division by the zero polynomial")
    rem = list(a[: _udeg(a) + 1])
    quot = [0] * max(len(rem) - db, 0)
    inv_lead = ctx.inv(b[db])
    mul, sub = ctx.mul, ctx.sub
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k]
        if not c:
            continue
        f = mul(c, inv_lead)
        quot[k - db] = f
        for i in range(db + 1):
            if b[i]:
                rem[k - db + i] = sub(rem[k - db + i], mul(f, b[i]))
    return quot, rem[: _udeg(rem) + 1]


def _ugcd(ctx: FieldCtx, a: Sequence[int], b: Sequence[int]) -> list[int]:
    a, b = list(a[: _udeg(a) + 1]), list(b[: _udeg(b) + 1])
    while b:
        _, r = _udivmod(ctx, a, b)
        a, b = b, r
    inv_lead = ctx.inv(a[-1])
    return [ctx.mul(inv_lead, c) for c in a]


def _padded(c: Sequence[int], degree: int) -> tuple[int, ...]:
    c = tuple(c[: _udeg(c) + 1])
    return c + (0,) * (degree + 1 - len(c))


# -- operations -------------------------------------------------------------

def poly_mul(P: HomoPoly, Q: HomoPoly) -> HomoPoly:
    """Product in V_(m1+m2); coefficient r is sum_{i+j=r} a_i b_j."""
    _same(P, Q)
    ctx = P.ctx
    deg = P.degree + Q.degree
    if P.degree < 0 or Q.degree < 0:
        # V_{-1} is the zero space; its products stay zero
        return HomoPoly.zero(ctx, max(deg, -1))
    out = [0] * (deg + 1)
    add, mul = ctx.add, ctx.mul
    for i, a in enumerate(P.coeffs):
        if a:
            for j, b in enumerate(Q.coeffs):
                if b:
                    out[i + j] = add(out[i + j], mul(a, b))
    return HomoPoly(ctx, deg, tuple(out))


def pairing(P: HomoPoly, x: SeqVec) -> int:
    """<P, x> = sum a_i x_i."""
    _same(P, x)
    if P.degree != x.n:
        raise ValueError(f"cannot pair V_{P.degree} with W_{x.n}")
    ctx = P.ctx
    s = 0
    for a, b in zip(P.coeffs, x.entries):
        if a and b:
            s = ctx.add(s, ctx.mul(a, b))
    return s


def adjoint_apply(Q: HomoPoly, x: SeqVec) -> SeqVec:
    """Apply the adjoint of multiplication by Q: W_n -> W_(n-m).

    Entry j of the result is sum_{i=0}^m a_i x_(i+j), for 0 <= j <= n-m.
    """
    _same(Q, x)
    m, n = Q.degree, x.n
    if m < 0:
        raise ValueError("Q must have degree >= 0")
    if m > n + 1:
        raise ValueError(f"degree {m} recursion does not act on W_{n} (need m <= n+1)")
    ctx = Q.ctx
    add, mul = ctx.add, ctx.mul
    nz = [(i, a) for i, a in enumerate(Q.coeffs) if a]
    xs = x.entries
    out = []
    for j in range(n - m + 1):
        s = 0
        for i, a in nz:
            v = xs[i + j]
            if v:
                s = add(s, mul(a, v))
        out.append(s)
    return SeqVec(ctx, tuple(out))


def annihilates(Q: HomoPoly, x: SeqVec) -> bool:
    """True when x satisfies the recursion Q (adjoint image is zero)."""
    return not any(adjoint_apply(Q, x).entries)


def poly_divrem(P: HomoPoly, Q: HomoPoly) -> tuple[HomoPoly | None, bool]:
    """Return (P / Q, True) when Q divides P, else (None, False)."""
    _same(P, Q)
    if Q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    deg = P.degree - Q.degree
    if deg < 0:
        return None, False
    if P.is_zero():
        return HomoPoly.zero(P.ctx, deg), True
    if Q.z_power > P.z_power:
        return None, False
    quot, rem = _udivmod(P.ctx, P.coeffs, Q.coeffs)
    if rem:
        return None, False
    return HomoPoly(P.ctx, deg, _padded(quot, deg)), True


def divides(Q: HomoPoly, P: HomoPoly) -> bool:
    return poly_divrem(P, Q)[1]


def poly_gcd(Q1: HomoPoly, Q2: HomoPoly) -> HomoPoly:
    """Monic greatest common divisor."""
    _same(Q1, Q2)
    if Q1.is_zero() and Q2.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    if Q1.is_zero():
        return Q2.monic()
    if Q2.is_zero():
        return Q1.monic()
    g = _ugcd(Q1.ctx, Q1.coeffs, Q2.coeffs)
    deg = len(g) - 1 + min(Q1.z_power, Q2.z_power)
    return HomoPoly(Q1.ctx, deg, _padded(g, deg))


def poly_lcm(Q1: HomoPoly, Q2: HomoPoly) -> HomoPoly:
    if Q1.is_zero() or Q2.is_zero():
        raise ValueError("lcm needs nonzero arguments")
    quot, ok = poly_divrem(poly_mul(Q1, Q2), poly_gcd(Q1, Q2))
    assert ok
    return quot.monic()


def count_monic(q: int, d: int) -> int:
    """(q^(d+1) - 1) / (q - 1): number of scaling classes of nonzero V_d."""
    return (q ** (d + 1) - 1) // (q - 1) if d >= -1 else 0


def enumerate_monic(ctx: FieldCtx, d: int) -> Iterator[HomoPoly]:
    """One monic representative per nonzero scaling class of V_d."""
    for lead in range(d + 1):
        tail = (0,) * (d - lead)
        for low in itertools.product(range(ctx.q), repeat=lead):
            yield HomoPoly(ctx, d, low + (1,) + tail)


@lru_cache(maxsize=1 << 16)
def _omega_monic(P: HomoPoly, d: int) -> int:
    return sum(1 for Q in enumerate_monic(P.ctx, d) if divides(Q, P))


def omega_d(P: HomoPoly, d: int) -> int:
    """Number of degree-d divisors of P up to scaling."""
    if P.is_zero():
        return count_monic(P.ctx.q, d)
    if d < 0 or d > P.degree:
        return 0
    if d == 0 or d == P.degree:
        return 1
    return _omega_monic(P.monic(), d)


def factorize(P: HomoPoly) -> list[tuple[HomoPoly, int]]:
    """Monic irreducible factors with multiplicities, by trial division.

    Candidates are tried in increasing degree, so every candidate that still
    divides the cofactor is irreducible.
    """
    if P.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    rest = P.monic()
    factors: list[tuple[HomoPoly, int]] = []
    d = 1
    while rest.degree > 0:
        if 2 * d > rest.degree:
            factors.append((rest, 1))
            break
        for Q in enumerate_monic(P.ctx, d):
            e = 0
            while True:
                quot, ok = poly_divrem(rest, Q)
                if not ok:
                    break
                rest, e = quot.monic(), e + 1
            if e:
                factors.append((Q, e))
            if 2 * d > rest.degree:
                break
        d += 1
    return factors


def omega_total(P: HomoPoly, crosscheck: bool = True) -> int:
    """Total number of divisors of P up to scaling, prod(e_s + 1).

    With ``crosscheck`` the per-degree counts are also enumerated and summed.
    """
    if P.is_zero():
        raise ValueError("omega is defined for nonzero P only")
    total = math.prod(e + 1 for _, e in factorize(P))
    if crosscheck:
        by_degree = sum(omega_d(P, d) for d in range(P.degree + 1))
        if by_degree != total:
            raise RuntimeError(f"divisor count mismatch for {P}: {by_degree} != {total}")
    return total


def irreducible_count(q: int, f: int) -> int:
    """Number of monic irreducible homogeneous polynomials of degree f.

    Univariate monic irreducibles of degree f (Gauss's necklace count) plus Z
    itself when f = 1.
    """
    total = sum(_moebius(d) * q ** (f // d) for d in range(1, f + 1) if f % d == 0) // f
    return total + (1 if f == 1 else 0)


def _moebius(n: int) -> int:
    result, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            result = -result
        k += 1
    return -result if n > 1 else result


def max_omega(q: int, n: int) -> int:
    """max prod(e_s + 1) over nonzero P of degree n, by knapsack over irreducibles."""
    best = [0] * (n + 1)
    best[0] = 1
    for f in range(1, n + 1):
        for _ in range(min(irreducible_count(q, f), n // f)):
            new = best[:]
            for t in range(n + 1):
                for e in range(1, t // f + 1):
                    if best[t - e * f]:
                        new[t] = max(new[t], best[t - e * f] * (e + 1))
            best = new
    return best[n]


def product(polys: Sequence[HomoPoly], ctx: FieldCtx) -> HomoPoly:
    return reduce(poly_mul, polys, HomoPoly.one(ctx))


def parse_poly(ctx: FieldCtx, text: str) -> HomoPoly:
    """Parse "a0,a1,...,am" into the polynomial sum a_i Y^i Z^(m-i)."""
    text = text.strip()
    if not text:
        return HomoPoly.zero(ctx, -1)
    return HomoPoly.of(ctx, [int(t) for t in text.split(",")])
