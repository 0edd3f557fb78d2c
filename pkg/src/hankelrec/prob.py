"""Singularity probabilities of Hankel matrices with independently drawn entries.

Pi_m(mu_0, ..., mu_n) is the probability that (x_0, ..., x_n), with x_i drawn
from mu_i independently, satisfies a degree-m recursion.  It is computed three
ways: exactly by enumeration (rational arithmetic), through the transform of
the H_m indicator, and by seeded Monte Carlo sampling for large m.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .budget import check_budget
from .fourier import chi_hat_closed_table, index_digits, sup_chi_hat
from .gf import FieldCtx, field_of_size
from .homopoly import SeqVec
from .recurrence import batch_hankel_rank, in_Hm

MC_CHUNK = 1000
AGREEMENT_TOL = 1e-9


def _fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        # go through repr so 0.35 means 35/100, not its binary expansion
        return Fraction(repr(v))
    return Fraction(v)


@dataclass(frozen=True)
class Distribution:
    """Probability masses on the field, indexed by element encoding."""

    ctx: FieldCtx
    masses: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.masses) != self.ctx.q:
            raise ValueError(f"need {self.ctx.q} masses, got {len(self.masses)}")
        if any(w < 0 for w in self.masses):
            raise ValueError("masses must be nonnegative")
        if sum(self.masses) != 1:
            raise ValueError(f"masses sum to {sum(self.masses)}, not 1")

    @classmethod
    def of(cls, ctx: FieldCtx, masses: Sequence) -> Distribution:
        return cls(ctx, tuple(_fraction(w) for w in masses))

    @classmethod
    def uniform(cls, ctx: FieldCtx) -> Distribution:
        return cls(ctx, (Fraction(1, ctx.q),) * ctx.q)

    @classmethod
    def point_mass(cls, ctx: FieldCtx, c: int = 0) -> Distribution:
        return cls(ctx, tuple(Fraction(int(a == c)) for a in range(ctx.q)))

    @classmethod
    def uniform_on(cls, ctx: FieldCtx, support) -> Distribution:
        support = set(support)
        w = Fraction(1, len(support))
        return cls(ctx, tuple(w if a in support else Fraction(0) for a in range(ctx.q)))

    @classmethod
    def two_point(cls, ctx: FieldCtx, p1) -> Distribution:
        """Mass 1-p1 on 0 and p1 on 1 (the GF(2) family)."""
        p1 = _fraction(p1)
        return cls.of(ctx, [1 - p1, p1] + [0] * (ctx.q - 2))

    @property
    def support(self) -> frozenset[int]:
        return frozenset(a for a, w in enumerate(self.masses) if w)

    def is_uniform(self) -> bool:
        return len(set(self.masses)) == 1

    def as_strings(self) -> list[str]:
        return [f"{w.numerator}/{w.denominator}" for w in self.masses]

    def __call__(self, a: int) -> Fraction:
        return self.masses[a]


def parse_distribution(ctx: FieldCtx, spec) -> Distribution:
    """Accept a list of "num/den" strings (or numbers)."""
    if not isinstance(spec, (list, tuple)):
        raise ValueError("a distribution is a JSON array of masses")
    return Distribution.of(ctx, [Fraction(s) if isinstance(s, str) else s for s in spec])


@dataclass(frozen=True)
class DistHat:
    values: tuple[complex, ...]
    l1: float


def mu_hat(mu: Distribution) -> DistHat:
    """mu_hat(a) = sum_x mu(x) psi0(a x).

    Masses are first pooled exactly by the trace class of a*x; a transform value
    is exactly zero iff those pooled masses are all equal, which keeps the
    uniform case free of rounding noise.
    """
    ctx = mu.ctx
    p = ctx.p
    roots = [complex(math.cos(2 * math.pi * c / p), math.sin(2 * math.pi * c / p)) for c in range(p)]
    vals = []
    for a in range(ctx.q):
        pooled = [Fraction(0)] * p
        for x, w in enumerate(mu.masses):
            if w:
                pooled[ctx.trace(ctx.mul(a, x))] += w
        if len(set(pooled)) == 1:
            vals.append(0j)
        elif a == 0:
            vals.append(complex(float(sum(pooled))))
        else:
            vals.append(sum(float(w) * roots[c] for c, w in enumerate(pooled) if w))
    return DistHat(tuple(vals), float(sum(abs(v) for v in vals)))


@dataclass(frozen=True)
class PiResult:
    value: Fraction | float
    method: str
    main_term: Fraction
    tail: complex | None = None
    bound: float | None = None

    @property
    def error(self) -> float:
        return float(self.value - self.main_term)

    def to_dict(self) -> dict:
        out: dict = {"method": self.method, "main_term": str(self.main_term)}
        if isinstance(self.value, Fraction):
            out.update(value_num=self.value.numerator, value_den=self.value.denominator)
        out["value"] = float(self.value)
        if self.tail is not None:
            out["tail_re"] = float(self.tail.real)
            out["tail_im"] = float(self.tail.imag)
        if self.bound is not None:
            out["bound"] = self.bound
        return out


def _setup(mus: Sequence[Distribution], m: int) -> tuple[FieldCtx, int]:
    if not mus:
        raise ValueError("need at least one distribution")
    ctx = mus[0].ctx
    if any(mu.ctx is not ctx for mu in mus):
        raise ValueError("distributions over different fields")
    n = len(mus) - 1
    if not 0 <= 2 * m <= n + 1:
        raise ValueError(f"need 0 <= 2m <= n+1, got m={m}, n={n}")
    return ctx, n


def main_term(q: int, n: int, m: int) -> Fraction:
    return Fraction(q) ** (2 * m - (n + 1))


def pi_direct(mus: Sequence[Distribution], m: int, budget: int | None = None) -> PiResult:
    """Exact rational sum of prod mu_i(x_i) over x in H_m."""
    ctx, n = _setup(mus, m)
    check_budget(ctx.q, n, budget)
    supports = [sorted(mu.support) for mu in mus]
    total = Fraction(0)
    for xs in itertools.product(*supports):
        if in_Hm(SeqVec(ctx, xs), m):
            total += math.prod((mu.masses[v] for mu, v in zip(mus, xs)), start=Fraction(1))
    return PiResult(total, "direct", main_term(ctx.q, n, m))


def pi_fourier(mus: Sequence[Distribution], m: int, budget: int | None = None) -> PiResult:
    """q^-(n+1) sum_P chi_hat(P) prod_i mu_hat_i(-a_i), chi_hat from divisor counts."""
    ctx, n = _setup(mus, m)
    check_budget(ctx.q, n, budget)
    q = ctx.q
    table = chi_hat_closed_table(ctx, n, m)
    D = index_digits(q, n)
    prod = np.ones(len(D), dtype=complex)
    for i, mu in enumerate(mus):
        hat = np.array(mu_hat(mu).values)
        prod *= hat[ctx.neg_np[D[:, i]]] if ctx.has_tables else hat[[ctx.neg(a) for a in D[:, i]]]
    terms = table * prod
    scale = float(q) ** -(n + 1)
    tail = complex(terms[1:].sum()) * scale
    mt = main_term(q, n, m)
    return PiResult(float(mt) + tail.real, "fourier", mt, tail=tail)


def error_bound(mus: Sequence[Distribution], m: int) -> float:
    """q^-(n+1) * sup_{P != 0} |chi_hat(P)| * (prod ||mu_hat_i||_1 - 1)."""
    ctx, n = _setup(mus, m)
    hats = [mu_hat(mu) for mu in mus]
    if all(mu.is_uniform() for mu in mus):
        return 0.0
    excess = math.prod(h.l1 for h in hats) - 1.0
    return float(ctx.q) ** -(n + 1) * sup_chi_hat(ctx, n, m) * excess


@dataclass(frozen=True)
class MCResult:
    estimate: float
    stderr: float
    hits: int
    samples: int
    m: int
    alpha: int
    seed: int

    @property
    def n(self) -> int:
        return 2 * self.m + self.alpha

    def to_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "stderr": self.stderr,
            "hits": self.hits,
            "samples": self.samples,
            "m": self.m,
            "alpha": self.alpha,
            "n": self.n,
            "seed": self.seed,
        }


def _mc_chunk(mu: Distribution, m: int, n: int, count: int, seed: int, chunk: int) -> int:
    rng = np.random.default_rng([seed, chunk])
    cdf = np.cumsum([float(w) for w in mu.masses])
    cdf[-1] = 1.0
    X = np.searchsorted(cdf, rng.random((count, n + 1)), side="right")
    ranks = batch_hankel_rank(mu.ctx, X, m)
    return int((ranks <= m).sum())


def pi_montecarlo(
    mu: Distribution, m: int, alpha: int, samples: int, seed: int, threads: int = 1
) -> MCResult:
    """Frequency of rank(hankel(x, m)) <= m for x of length 2m+alpha+1 drawn i.i.d. from mu.

    Samples are split into fixed chunks of MC_CHUNK, chunk k seeded from
    (seed, k), so the estimate does not depend on ``threads``.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if m < 0 or alpha < 0:
        raise ValueError("m and alpha must be >= 0")
    n = 2 * m + alpha
    sizes = [min(MC_CHUNK, samples - s) for s in range(0, samples, MC_CHUNK)]
    jobs = [(mu, m, n, size, seed, k) for k, size in enumerate(sizes)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            hits = sum(pool.map(lambda a: _mc_chunk(*a), jobs))
    else:
        hits = sum(_mc_chunk(*a) for a in jobs)
    est = hits / samples
    return MCResult(est, math.sqrt(est * (1 - est) / samples), hits, samples, m, alpha, seed)


@dataclass(frozen=True)
class ThresholdReport:
    l1: float
    threshold: float
    strict_threshold: bool
    support_size: int
    subfield_traps: tuple[tuple[int, int], ...] = field(default=())

    @property
    def conjecture_hypotheses(self) -> bool:
        return self.support_size >= 2 and not self.subfield_traps

    def to_dict(self) -> dict:
        return {
            "l1": self.l1,
            "threshold": self.threshold,
            "strict_threshold": self.strict_threshold,
            "support_size": self.support_size,
            "subfield_traps": [list(t) for t in self.subfield_traps],
            "conjecture_hypotheses": self.conjecture_hypotheses,
        }


def threshold_check(mu: Distribution, tol: float = 1e-12) -> ThresholdReport:
    """Compare ||mu_hat||_1 with q^(1/2) and look for a support inside c * k0.

    ``subfield_traps`` lists every (e0, c) with the support contained in c times
    the subfield GF(p^e0), over proper subfields and nonzero c.  Equality with
    the threshold (within ``tol``) counts as failing the strict hypothesis.
    """
    ctx = mu.ctx
    l1 = mu_hat(mu).l1
    thr = math.sqrt(ctx.q)
    supp = mu.support
    traps = []
    for e0 in ctx.proper_subfield_degrees():
        sub = ctx.subfield_elements(e0)
        for c in range(1, ctx.q):
            if supp <= {ctx.mul(c, s) for s in sub}:
                traps.append((e0, c))
    return ThresholdReport(l1, thr, l1 < thr - tol, len(supp), tuple(traps))


SWEEP_COLUMNS = (
    "q",
    "mu",
    "m",
    "alpha",
    "n",
    "samples",
    "seed",
    "estimate",
    "stderr",
    "target",
    "l1",
    "threshold",
    "strict_threshold",
    "conjecture_hypotheses",
)


def conjecture_sweep(config: dict, threads: int = 1) -> list[dict]:
    """Monte Carlo estimates over a grid of distributions and m values.

    ``config`` keys: q, m (list), alpha, samples, seed, and either mu (list of
    mass lists) or p (list of GF(2)-style weights on the element 1).  Rows carry
    the threshold annotations; nothing is asserted about the estimates.
    """
    try:
        q = int(config["q"])
        ms = [int(v) for v in config.get("m", [])]
        alpha = int(config.get("alpha", 0))
        samples = int(config.get("samples", 1000))
        seed = int(config.get("seed", 0))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"invalid sweep config: {exc}") from exc
    ctx = field_of_size(q)
    mus = [parse_distribution(ctx, spec) for spec in config.get("mu", [])]
    mus += [Distribution.two_point(ctx, p) for p in config.get("p", [])]
    if any(m < 0 for m in ms) or alpha < 0 or samples < 1:
        raise ValueError("invalid sweep grid: m, alpha must be >= 0 and samples >= 1")
    rows = []
    target = float(Fraction(1, q ** (alpha + 1)))
    for mu in mus:
        th = threshold_check(mu)
        for m in ms:
            res = pi_montecarlo(mu, m, alpha, samples, seed, threads)
            rows.append(
                {
                    "q": q,
                    "mu": mu.as_strings(),
                    "m": m,
                    "alpha": alpha,
                    "n": res.n,
                    "samples": samples,
                    "seed": seed,
                    "estimate": res.estimate,
                    "stderr": res.stderr,
                    "target": target,
                    "l1": th.l1,
                    "threshold": th.threshold,
                    "strict_threshold": th.strict_threshold,
                    "conjecture_hypotheses": th.conjecture_hypotheses,
                }
            )
    return rows
