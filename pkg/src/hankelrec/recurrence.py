"""Hankel matrices of finite sequences and the recursions they satisfy."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .budget import check_budget
from .gf import FieldCtx
from .homopoly import (
    HomoPoly,
    SeqVec,
    annihilates,
    enumerate_monic,
    poly_gcd,
)


@dataclass(frozen=True)
class HankelMatrix:
    """The (m+1) x (n-m+1) matrix with (i, j) entry x_(i+j)."""

    x: SeqVec
    m: int

    def __post_init__(self):
        if not 0 <= self.m <= self.x.n + 1:
            raise ValueError(f"need 0 <= m <= n+1, got m={self.m}, n={self.x.n}")

    @property
    def rows(self) -> int:
        return self.m + 1

    @property
    def cols(self) -> int:
        return self.x.n - self.m + 1

    def entry(self, i: int, j: int) -> int:
        return self.x.entries[i + j]

    def as_lists(self) -> list[list[int]]:
        xs = self.x.entries
        return [list(xs[i : i + self.cols]) for i in range(self.rows)]

    def toeplitz(self) -> list[list[int]]:
        """Row-reversed copy: constant along NW-SE diagonals."""
        return self.as_lists()[::-1]


def hankel(x: SeqVec, m: int) -> HankelMatrix:
    return HankelMatrix(x, m)


def _rref(ctx: FieldCtx, rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; pivots chosen leftmost column, topmost row."""
    a = [r[:] for r in rows]
    add, mul, neg, inv = ctx.add, ctx.mul, ctx.neg, ctx.inv
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        s = inv(a[r][c])
        a[r] = [mul(s, v) for v in a[r]]
        prow = a[r]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = neg(a[i][c])
                a[i] = [add(v, mul(f, w)) if w else v for v, w in zip(a[i], prow)]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def matrix_rank(ctx: FieldCtx, rows: list[list[int]]) -> int:
    if not rows or not rows[0]:
        return 0
    # forward elimination only
    a = [r[:] for r in rows]
    add, mul, neg, inv = ctx.add, ctx.mul, ctx.neg, ctx.inv
    r = 0
    for c in range(len(a[0])):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        s = inv(a[r][c])
        prow = a[r]
        for i in range(r + 1, len(a)):
            if a[i][c]:
                f = neg(mul(a[i][c], s))
                a[i] = [add(v, mul(f, w)) if w else v for v, w in zip(a[i], prow)]
        r += 1
        if r == len(a):
            break
    return r


def rank(M: HankelMatrix) -> int:
    return matrix_rank(M.x.ctx, M.as_lists())


@dataclass(frozen=True)
class RecursionIdealSlice:
    """Basis of the degree-m recursions satisfied by x."""

    x: SeqVec
    m: int
    basis: tuple[HomoPoly, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis


def ideal_slice(x: SeqVec, m: int) -> RecursionIdealSlice:
    """Kernel of Q -> adjoint_apply(Q, x) on V_m, as an echelon basis."""
    n = x.n
    if not 0 <= m <= n + 1:
        raise ValueError(f"need 0 <= m <= n+1, got m={m}, n={n}")
    ctx = x.ctx
    xs = x.entries
    system = [[xs[i + j] for i in range(m + 1)] for j in range(n - m + 1)]
    red, pivots = _rref(ctx, system, m + 1)
    free = [c for c in range(m + 1) if c not in pivots]
    vecs = []
    for f in free:
        v = [0] * (m + 1)
        v[f] = 1
        for row, pc in zip(red, pivots):
            v[pc] = ctx.neg(row[f])
        vecs.append(v)
    basis, _ = _rref(ctx, vecs, m + 1) if vecs else ([], [])
    return RecursionIdealSlice(x, m, tuple(HomoPoly(ctx, m, tuple(v)) for v in basis))


def minimal_recursion(x: SeqVec) -> tuple[int, HomoPoly] | None:
    """Lowest-degree recursion (m0, monic Q0) with m0 <= (n+1)/2.

    Returns None when x satisfies no recursion of degree <= (n+1)/2; beyond that
    threshold the lowest-degree recursion need not be unique.
    """
    n = x.n
    if n < 0:
        raise ValueError("minimal_recursion needs n >= 0")
    for m in range((n + 1) // 2 + 1):
        sl = ideal_slice(x, m)
        if sl.dim:
            if sl.dim != 1:
                raise AssertionError(f"minimal recursion space has dimension {sl.dim}, expected 1")
            return m, sl.basis[0].monic()
    return None


def _check_hm_range(n: int, m: int) -> None:
    if not 0 <= 2 * m <= n + 1:
        raise ValueError(f"need 0 <= 2m <= n+1, got m={m}, n={n}")


def in_Hm(x: SeqVec, m: int, route: str = "rank") -> bool:
    """Whether x satisfies some recursion of degree m.

    ``route="rank"`` tests rank(hankel(x, m)) <= m; ``route="kernel"`` tests for
    a nonzero degree-m recursion directly.
    """
    _check_hm_range(x.n, m)
    if route == "rank":
        return rank(hankel(x, m)) <= m
    if route == "kernel":
        return not ideal_slice(x, m).is_zero()
    raise ValueError(f"unknown route {route!r}")


def seq_from_index(ctx: FieldCtx, n: int, index: int) -> SeqVec:
    q = ctx.q
    return SeqVec(ctx, tuple((index // q ** i) % q for i in range(n + 1)))


def seq_index(x: SeqVec) -> int:
    q = x.ctx.q
    return sum(v * q ** i for i, v in enumerate(x.entries))


def all_sequences(ctx: FieldCtx, n: int, budget: int | None = None) -> Iterator[SeqVec]:
    """Every point of W_n, in index order (index = sum x_i q^i)."""
    check_budget(ctx.q, n, budget)
    for t in itertools.product(range(ctx.q), repeat=n + 1):
        yield SeqVec(ctx, t[::-1])


def enumerate_Hm(ctx: FieldCtx, n: int, m: int, budget: int | None = None) -> Iterator[SeqVec]:
    _check_hm_range(n, m)
    for x in all_sequences(ctx, n, budget):
        if in_Hm(x, m):
            yield x


def chi_decomposition(x: SeqVec, m: int) -> int:
    """Signed count: degree-m recursion classes of x minus q times degree-(m-1) ones."""
    _check_hm_range(x.n, m)
    ctx = x.ctx
    total = sum(1 for Q in enumerate_monic(ctx, m) if annihilates(Q, x))
    if m > 0:
        total -= ctx.q * sum(1 for Q in enumerate_monic(ctx, m - 1) if annihilates(Q, x))
    return total


def rank_equals_minimal_degree_check(x: SeqVec, m: int) -> bool:
    _check_hm_range(x.n, m)
    if not in_Hm(x, m):
        raise ValueError("x is not in H_m")
    found = minimal_recursion(x)
    return found is not None and rank(hankel(x, m)) == found[0]


def kernel_set(Q: HomoPoly, n: int, budget: int | None = None) -> frozenset[int]:
    """Indices of all x in W_n with adjoint_apply(Q, x) = 0, by exhaustive scan."""
    out = set()
    for x in all_sequences(Q.ctx, n, budget):
        if annihilates(Q, x):
            out.add(seq_index(x))
    return frozenset(out)


def kernel_intersection_check(Q1: HomoPoly, Q2: HomoPoly, n: int) -> bool:
    """Exhaustively confirm ker Q1 & ker Q2 contains ker gcd, with equality
    exactly when n + 1 >= deg Q1 + deg Q2 - deg gcd."""
    if Q1.is_zero() or Q2.is_zero():
        raise ValueError("Q1 and Q2 must be nonzero")
    if n < max(Q1.degree, Q2.degree) - 1:
        raise ValueError(f"need n >= max(deg) - 1, got n={n}")
    g = poly_gcd(Q1, Q2)
    both = kernel_set(Q1, n) & kernel_set(Q2, n)
    kg = kernel_set(g, n)
    if not kg <= both:
        return False
    equal_expected = n + 1 >= Q1.degree + Q2.degree - g.degree
    return (both == kg) == equal_expected


# -- batched rank for sampling ---------------------------------------------

def batch_hankel_rank(ctx: FieldCtx, X: np.ndarray, m: int) -> np.ndarray:
    """Ranks of hankel(x, m) for every row x of X (shape samples x (n+1))."""
    X = np.asarray(X, dtype=np.int64)
    S, length = X.shape
    n = length - 1
    if not 0 <= m <= n + 1:
        raise ValueError(f"need 0 <= m <= n+1, got m={m}, n={n}")
    R, C = m + 1, n - m + 1
    if C == 0 or S == 0:
        return np.zeros(S, dtype=np.int64)
    idx = np.arange(R)[:, None] + np.arange(C)[None, :]
    M = X[:, idx]
    if ctx.q == 2:
        return _batch_rank_gf2(M)
    if not ctx.has_tables:
        return np.array([matrix_rank(ctx, M[s].tolist()) for s in range(S)], dtype=np.int64)
    return _batch_rank_tables(ctx, M)


def _batch_rank_gf2(M: np.ndarray) -> np.ndarray:
    S, R, C = M.shape
    W = (C + 63) // 64
    packed = np.zeros((S, R, W), dtype=np.uint64)
    for c in range(C):
        w, b = divmod(c, 64)
        packed[:, :, w] |= M[:, :, c].astype(np.uint64) << np.uint64(b)
    rank = np.zeros(S, dtype=np.int64)
    rows = np.arange(R)
    for c in range(C):
        w, b = divmod(c, 64)
        bits = ((packed[:, :, w] >> np.uint64(b)) & np.uint64(1)).astype(bool)
        eligible = bits & (rows[None, :] >= rank[:, None])
        has = eligible.any(axis=1)
        if not has.any():
            continue
        s = np.nonzero(has)[0]
        r = rank[s]
        p = eligible[s].argmax(axis=1)
        top = packed[s, r].copy()
        packed[s, r] = packed[s, p]
        packed[s, p] = top
        pivot = packed[s, r]
        swapped = ((packed[s, :, w] >> np.uint64(b)) & np.uint64(1)).astype(bool)
        below = swapped & (rows[None, :] > r[:, None])
        packed[s] ^= np.where(below[:, :, None], pivot[:, None, :], np.uint64(0))
        rank[s] += 1
    return rank


def _batch_rank_tables(ctx: FieldCtx, M: np.ndarray) -> np.ndarray:
    add, mul, neg, inv = ctx.add_np, ctx.mul_np, ctx.neg_np, ctx.inv_np
    M = M.copy()
    S, R, C = M.shape
    rank = np.zeros(S, dtype=np.int64)
    rows = np.arange(R)
    for c in range(C):
        eligible = (M[:, :, c] != 0) & (rows[None, :] >= rank[:, None])
        has = eligible.any(axis=1)
        if not has.any():
            continue
        s = np.nonzero(has)[0]
        r = rank[s]
        p = eligible[s].argmax(axis=1)
        top = M[s, r].copy()
        M[s, r] = M[s, p]
        M[s, p] = top
        pivot = mul[inv[M[s, r, c]][:, None], M[s, r]]
        M[s, r] = pivot
        sub = M[s]
        factor = np.where(rows[None, :] > r[:, None], neg[sub[:, :, c]], 0)
        M[s] = add[sub, mul[factor[:, :, None], pivot[:, None, :]]]
        rank[s] += 1
    return rank
