import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hankelrec.budget import BudgetExceeded
from hankelrec.gf import field_new
from hankelrec.prob import (
    AGREEMENT_TOL,
    Distribution,
    SWEEP_COLUMNS,
    conjecture_sweep,
    error_bound,
    main_term,
    mu_hat,
    parse_distribution,
    pi_direct,
    pi_fourier,
    pi_montecarlo,
    threshold_check,
)

from oracles import character_sum, pi_brute

F2 = field_new(2)
F3 = field_new(3)
F4 = field_new(2, 2)
F9 = field_new(3, 2)
F16 = field_new(2, 4)


def D(ctx, *masses):
    return Distribution.of(ctx, masses)


class TestDistribution:
    def test_float_masses_are_decimal(self):
        assert D(F2, 0.65, 0.35).masses == (Fraction(13, 20), Fraction(7, 20))

    def test_validation(self):
        with pytest.raises(ValueError):
            D(F2, Fraction(1, 2), Fraction(1, 3))
        with pytest.raises(ValueError):
            D(F2, Fraction(3, 2), Fraction(-1, 2))
        with pytest.raises(ValueError):
            D(F3, Fraction(1, 2), Fraction(1, 2))

    def test_constructors(self):
        assert Distribution.uniform(F3).is_uniform()
        assert Distribution.point_mass(F4, 2).support == {2}
        assert Distribution.uniform_on(F4, {0, 1}).masses == (Fraction(1, 2),) * 2 + (0, 0)
        assert Distribution.two_point(F2, "1/4").masses == (Fraction(3, 4), Fraction(1, 4))

    def test_parse(self):
        mu = parse_distribution(F3, ["1/2", "1/4", "1/4"])
        assert mu.as_strings() == ["1/2", "1/4", "1/4"]
        with pytest.raises(ValueError):
            parse_distribution(F3, "1/3")


class TestMuHat:
    def test_examples(self):
        assert mu_hat(Distribution.uniform(F2)).values == (1, 0)
        assert mu_hat(Distribution.point_mass(F3)).values == (1, 1, 1)
        assert mu_hat(D(F2, 0.9, 0.1)).l1 == pytest.approx(1.8)

    def test_uniform_is_exactly_delta(self):
        for ctx in (F3, F4, F9, field_new(5)):
            assert mu_hat(Distribution.uniform(ctx)).values == (1,) + (0,) * (ctx.q - 1)

    @pytest.mark.parametrize("ctx", [F2, F3, F4, field_new(5)], ids=repr)
    def test_matches_character_sum(self, ctx):
        masses = [Fraction(k + 1, ctx.q * (ctx.q + 1) // 2) for k in range(ctx.q)]
        hat = mu_hat(Distribution.of(ctx, masses)).values
        for a in range(ctx.q):
            assert hat[a] == pytest.approx(character_sum(ctx, a, masses))

    @pytest.mark.parametrize("ctx", [F2, F3, F4], ids=repr)
    def test_l1_is_one_exactly_for_uniform(self, ctx):
        # over every distribution with masses in multiples of 1/4
        grid = [Fraction(k, 4) for k in range(5)]
        for masses in itertools.product(grid, repeat=ctx.q):
            if sum(masses) != 1:
                continue
            mu = Distribution.of(ctx, masses)
            l1 = mu_hat(mu).l1
            assert l1 >= 1 - 1e-12
            assert (abs(l1 - 1) < 1e-12) == mu.is_uniform()


class TestExactProbability:
    def test_frozen_values(self):
        mu = D(F2, Fraction(3, 4), Fraction(1, 4))
        assert pi_direct([mu] * 5, 2).value == Fraction(89, 128)
        assert pi_direct([Distribution.uniform(F2)] * 6, 2).value == Fraction(1, 4)

    def test_frozen_values_match_oracle(self):
        masses = (Fraction(3, 4), Fraction(1, 4))
        assert pi_brute(F2, [masses] * 5, 2) == Fraction(89, 128)

    @pytest.mark.parametrize("ctx,n,m", [(F2, 4, 2), (F2, 5, 2), (F3, 3, 1), (F4, 2, 1)], ids=str)
    def test_direct_matches_brute(self, ctx, n, m):
        masses = [Fraction(k + 1, ctx.q * (ctx.q + 1) // 2) for k in range(ctx.q)]
        mus = [Distribution.of(ctx, masses[i % 2:] + masses[: i % 2]) for i in range(n + 1)]
        expect = pi_brute(ctx, [mu.masses for mu in mus], m)
        assert pi_direct(mus, m).value == expect
        assert abs(pi_fourier(mus, m).value - float(expect)) < AGREEMENT_TOL

    @pytest.mark.parametrize("ctx,n,m", [(F2, 6, 2), (F3, 4, 2), (F4, 3, 1)], ids=str)
    def test_uniform_gives_main_term(self, ctx, n, m):
        mus = [Distribution.uniform(ctx)] * (n + 1)
        assert pi_direct(mus, m).value == main_term(ctx.q, n, m) == Fraction(ctx.q) ** (2 * m - n - 1)
        res = pi_fourier(mus, m)
        assert res.tail == 0
        assert error_bound(mus, m) == 0

    def test_full_space(self):
        mus = [D(F3, Fraction(1, 2), Fraction(1, 3), Fraction(1, 6))] * 4
        assert pi_direct(mus, 2).value == 1
        assert pi_fourier(mus, 2).value == pytest.approx(1)

    def test_point_mass_at_zero(self):
        assert pi_direct([Distribution.point_mass(F3)] * 5, 1).value == 1

    def test_mixed_fields_rejected(self):
        with pytest.raises(ValueError):
            pi_direct([Distribution.uniform(F2), Distribution.uniform(F3)], 0)
        with pytest.raises(ValueError):
            pi_direct([Distribution.uniform(F2)] * 3, 2)
        with pytest.raises(ValueError):
            pi_direct([], 0)

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            pi_direct([Distribution.uniform(F2)] * 12, 2, budget=100)


class TestBound:
    @pytest.mark.parametrize("ctx,n,m", [(F2, 4, 2), (F2, 6, 3), (F3, 4, 2), (F4, 2, 1)], ids=str)
    def test_error_within_bound(self, ctx, n, m):
        grid = [Fraction(k, 4) for k in range(5)]
        dists = [Distribution.of(ctx, w) for w in itertools.product(grid, repeat=ctx.q) if sum(w) == 1]
        for i, mu in enumerate(dists[:: max(1, len(dists) // 6)]):
            nu = dists[(3 * i + 1) % len(dists)]
            mus = [mu if j % 2 else nu for j in range(n + 1)]
            res = pi_direct(mus, m)
            assert abs(res.error) <= error_bound(mus, m) + 1e-9


class TestSubfield:
    @pytest.mark.parametrize(
        "ctx,e0,m", [(F4, 1, 1), (F4, 1, 2), (F9, 1, 1), (F16, 2, 1)], ids=["4/2", "4/2m2", "9/3", "16/4"]
    )
    def test_uniform_on_subfield(self, ctx, e0, m):
        sub = ctx.subfield_elements(e0)
        n = 2 * m
        mus = [Distribution.uniform_on(ctx, sub)] * (n + 1)
        assert pi_direct(mus, m).value == Fraction(1, len(sub))

    def test_gf4_fourier_route(self):
        mus = [Distribution.uniform_on(F4, {0, 1})] * 3
        assert pi_fourier(mus, 1).value == pytest.approx(0.5)
        assert error_bound(mus, 1) == pytest.approx(0.4375)

    def test_threshold_flags_the_trap(self):
        rep = threshold_check(Distribution.uniform_on(F4, {0, 1}))
        assert rep.l1 == pytest.approx(2.0)
        assert not rep.strict_threshold  # equality with sqrt(4)
        assert rep.subfield_traps == ((1, 1),)
        assert not rep.conjecture_hypotheses

    def test_scaled_subfield_trap(self):
        rep = threshold_check(Distribution.uniform_on(F4, {0, 2}))
        assert rep.subfield_traps == ((1, 2),)


class TestThreshold:
    def test_examples(self):
        rep = threshold_check(D(F2, 0.9, 0.1))
        assert rep.l1 == pytest.approx(1.8) and rep.threshold == pytest.approx(math.sqrt(2))
        assert not rep.strict_threshold
        assert rep.conjecture_hypotheses
        near = threshold_check(D(F2, 0.65, 0.35))
        assert near.strict_threshold

    def test_point_mass_fails_support(self):
        rep = threshold_check(Distribution.point_mass(F3, 1))
        assert rep.support_size == 1 and not rep.conjecture_hypotheses

    def test_prime_field_has_no_traps(self):
        assert threshold_check(D(F3, Fraction(1, 2), Fraction(1, 2), 0)).subfield_traps == ()


class TestMonteCarlo:
    def test_reproducible(self):
        mu = D(F2, 0.65, 0.35)
        a = pi_montecarlo(mu, 10, 0, 2500, seed=1)
        b = pi_montecarlo(mu, 10, 0, 2500, seed=1)
        assert a == b
        assert pi_montecarlo(mu, 10, 0, 2500, seed=2) != a

    def test_thread_count_does_not_matter(self):
        mu = D(F3, Fraction(1, 2), Fraction(1, 4), Fraction(1, 4))
        one = pi_montecarlo(mu, 6, 1, 3500, seed=4, threads=1)
        four = pi_montecarlo(mu, 6, 1, 3500, seed=4, threads=4)
        assert one == four

    def test_point_mass(self):
        res = pi_montecarlo(Distribution.point_mass(F2), 20, 0, 500, seed=0)
        assert res.estimate == 1.0 and res.stderr == 0.0

    def test_frozen_estimate(self):
        res = pi_montecarlo(D(F2, 0.65, 0.35), 63, 0, 10_000, seed=12345)
        assert res.estimate == pytest.approx(0.5073)
        assert res.n == 126

    def test_agrees_with_exact(self):
        mu = D(F2, Fraction(3, 4), Fraction(1, 4))
        res = pi_montecarlo(mu, 2, 0, 20_000, seed=8)
        assert abs(res.estimate - 89 / 128) < 4 * res.stderr

    def test_arguments(self):
        with pytest.raises(ValueError):
            pi_montecarlo(Distribution.uniform(F2), 2, 0, 0, seed=0)
        with pytest.raises(ValueError):
            pi_montecarlo(Distribution.uniform(F2), -1, 0, 10, seed=0)


class TestSweep:
    def test_rows(self):
        rows = conjecture_sweep({"q": 2, "m": [3, 5], "alpha": 0, "samples": 400, "seed": 3, "p": [0.35, "1/2"]})
        assert len(rows) == 4
        assert all(tuple(r) == SWEEP_COLUMNS for r in rows)
        assert rows[0]["mu"] == ["13/20", "7/20"] and rows[0]["target"] == 0.5
        assert rows[2]["l1"] == pytest.approx(1.0)

    def test_explicit_masses(self):
        rows = conjecture_sweep({"q": 3, "m": [2], "alpha": 1, "samples": 100, "mu": [["1/3", "1/3", "1/3"]]})
        assert rows[0]["n"] == 5 and rows[0]["target"] == pytest.approx(1 / 9)

    def test_empty_grid(self):
        assert conjecture_sweep({"q": 2, "m": [], "p": [0.3]}) == []
        assert conjecture_sweep({"q": 2, "m": [4]}) == []

    @pytest.mark.parametrize(
        "config",
        [{}, {"q": 6, "m": [2], "p": [0.5]}, {"q": 2, "m": [-1], "p": [0.5]}, {"q": 2, "m": ["x"]},
         {"q": 2, "m": [2], "samples": 0, "p": [0.5]}, {"q": 2, "m": [2], "p": [1.5]}],
    )
    def test_invalid(self, config):
        with pytest.raises(ValueError):
            conjecture_sweep(config)


@given(st.lists(st.integers(0, 6), min_size=2, max_size=2).filter(lambda w: sum(w) > 0), st.integers(1, 2))
@settings(max_examples=40, deadline=None)
def test_two_routes_agree_gf2(w, m):
    mu = D(F2, Fraction(w[0], sum(w)), Fraction(w[1], sum(w)))
    mus = [mu] * (2 * m + 1)
    exact = pi_direct(mus, m)
    approx = pi_fourier(mus, m)
    assert abs(float(exact.value) - approx.value) < AGREEMENT_TOL
    assert abs(exact.error) <= error_bound(mus, m) + 1e-9
