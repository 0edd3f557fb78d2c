"""Discrete Fourier transform on W_n against V_n and the transform of the H_m indicator.

Points of W_n and V_n are addressed by index = sum c_i q^i over their
coordinates.  ``dft`` computes the full character sum, one coordinate at a
time; it is the route against which the closed form is checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .budget import check_budget
from .gf import FieldCtx
from .homopoly import HomoPoly, count_monic, enumerate_monic, omega_d
from .recurrence import in_Hm, seq_from_index

ROUND_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class ComplexFn:
    """A complex function on W_n (space="W") or V_n (space="V")."""

    ctx: FieldCtx
    n: int
    space: str
    values: np.ndarray

    def __post_init__(self):
        if self.space not in ("W", "V"):
            raise ValueError(f"space must be 'W' or 'V', got {self.space!r}")
        if self.values.shape != (self.ctx.q ** (self.n + 1),):
            raise ValueError("values must cover every point of the space")

    def __getitem__(self, index: int) -> complex:
        return complex(self.values[index])


def index_digits(q: int, n: int) -> np.ndarray:
    """Coordinates of every point, shape (q^(n+1), n+1)."""
    idx = np.arange(q ** (n + 1), dtype=np.int64)
    return np.stack([(idx // q ** i) % q for i in range(n + 1)], axis=1).reshape(-1, n + 1)


def poly_from_index(ctx: FieldCtx, n: int, index: int) -> HomoPoly:
    q = ctx.q
    return HomoPoly(ctx, n, tuple((index // q ** i) % q for i in range(n + 1)))


def poly_index(P: HomoPoly) -> int:
    q = P.ctx.q
    return sum(a * q ** i for i, a in enumerate(P.coeffs))


@lru_cache(maxsize=None)
def _trace_product_table(ctx: FieldCtx) -> np.ndarray:
    q = ctx.q
    return np.array([[ctx.trace(ctx.mul(a, x)) for x in range(q)] for a in range(q)], dtype=np.int64)


def _transform(F: ComplexFn, sign: int) -> np.ndarray:
    # the kernel psi0(<P, x>) factors over coordinates, so apply the q x q
    # character matrix along each axis in turn
    ctx, n = F.ctx, F.n
    q, p = ctx.q, ctx.p
    check_budget(q, n)
    T = _trace_product_table(ctx)
    K = np.exp(sign * 2j * math.pi * T / p)
    A = F.values.reshape((q,) * (n + 1))
    for axis in range(n + 1):
        A = np.moveaxis(np.tensordot(K, A, axes=([1], [axis])), 0, axis)
    return A.reshape(-1)


def dft(F: ComplexFn) -> ComplexFn:
    """F_hat(P) = sum_x F(x) psi0(<P, x>)."""
    if F.space != "W":
        raise ValueError("dft expects a function on W_n")
    return ComplexFn(F.ctx, F.n, "V", _transform(F, +1))


def inverse_dft(Fh: ComplexFn) -> ComplexFn:
    """F(x) = q^-(n+1) sum_P F_hat(P) psi0(-<P, x>)."""
    if Fh.space != "V":
        raise ValueError("inverse_dft expects a function on V_n")
    vals = _transform(Fh, -1) / Fh.ctx.q ** (Fh.n + 1)
    return ComplexFn(Fh.ctx, Fh.n, "W", vals)


def indicator(ctx: FieldCtx, n: int, members) -> ComplexFn:
    """Characteristic function on W_n of a set of point indices."""
    vals = np.zeros(ctx.q ** (n + 1), dtype=complex)
    vals[list(members)] = 1.0
    return ComplexFn(ctx, n, "W", vals)


def _check_range(n: int, m: int) -> None:
    if not 0 <= 2 * m <= n + 1:
        raise ValueError(f"need 0 <= 2m <= n+1, got m={m}, n={n}")


def hm_indicator(ctx: FieldCtx, n: int, m: int, budget: int | None = None) -> ComplexFn:
    _check_range(n, m)
    check_budget(ctx.q, n, budget)
    N = ctx.q ** (n + 1)
    vals = np.array([1.0 if in_Hm(seq_from_index(ctx, n, i), m) else 0.0 for i in range(N)], dtype=complex)
    return ComplexFn(ctx, n, "W", vals)


def chi_hat_brute(ctx: FieldCtx, n: int, m: int, budget: int | None = None) -> ComplexFn:
    """Transform of the H_m indicator, membership decided by Hankel rank."""
    return dft(hm_indicator(ctx, n, m, budget))


def chi_hat_closed(P: HomoPoly, m: int) -> int:
    """q^m (omega_m(P) - omega_(m-1)(P))."""
    _check_range(P.degree, m)
    return P.ctx.q ** m * (omega_d(P, m) - omega_d(P, m - 1))


@lru_cache(maxsize=64)
def chi_hat_closed_table(ctx: FieldCtx, n: int, m: int) -> np.ndarray:
    """chi_hat_closed at every point of V_n, in index order (int64)."""
    _check_range(n, m)
    check_budget(ctx.q, n)
    table = np.empty(ctx.q ** (n + 1), dtype=np.int64)
    for i in range(len(table)):
        table[i] = chi_hat_closed(poly_from_index(ctx, n, i), m)
    table.setflags(write=False)
    return table


def sup_chi_hat(ctx: FieldCtx, n: int, m: int) -> int:
    """max over nonzero P in V_n of |chi_hat|, scanning monic representatives.

    The value only depends on the scaling class of P.
    """
    _check_range(n, m)
    check_budget(count_monic(ctx.q, n), 0)
    return max((abs(chi_hat_closed(P, m)) for P in enumerate_monic(ctx, n)), default=0)


@dataclass(frozen=True)
class ChiHatEntry:
    index: int
    coeffs: tuple[int, ...]
    brute: complex
    closed: int
    omega_m: int
    omega_m1: int
    match: bool


@dataclass
class ChiHatReport:
    q: int
    n: int
    m: int
    entries: list[ChiHatEntry] = field(default_factory=list)

    @property
    def points(self) -> int:
        return len(self.entries)

    @property
    def mismatches(self) -> list[ChiHatEntry]:
        return [e for e in self.entries if not e.match]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_dict(self, with_entries: bool = True) -> dict:
        out = {
            "q": self.q,
            "n": self.n,
            "m": self.m,
            "points": self.points,
            "mismatches": len(self.mismatches),
            "ok": self.ok,
        }
        if with_entries:
            out["entries"] = [
                {
                    "index": e.index,
                    "coeffs": list(e.coeffs),
                    "brute_re": float(e.brute.real),
                    "brute_im": float(e.brute.imag),
                    "closed": e.closed,
                    "omega_m": e.omega_m,
                    "omega_m1": e.omega_m1,
                    "match": e.match,
                }
                for e in self.entries
            ]
        return out


def values_match(brute: complex, exact: int, tol: float = ROUND_TOL) -> bool:
    """Round to the nearest integer, then require exact agreement."""
    r = round(brute.real)
    return abs(brute - r) < tol and r == exact


def verify_thm1(ctx: FieldCtx, n: int, m: int, budget: int | None = None) -> ChiHatReport:
    """Compare the brute-force transform with the divisor-count formula at every P."""
    brute = chi_hat_brute(ctx, n, m, budget)
    report = ChiHatReport(ctx.q, n, m)
    for i in range(len(brute.values)):
        P = poly_from_index(ctx, n, i)
        om, om1 = omega_d(P, m), omega_d(P, m - 1)
        closed = ctx.q ** m * (om - om1)
        b = brute[i]
        report.entries.append(ChiHatEntry(i, P.coeffs, b, closed, om, om1, values_match(b, closed)))
    return report
