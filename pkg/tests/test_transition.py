"""Transition operator: exact powers, max-path products, Neumann series."""

from fractions import Fraction
from itertools import product as iproduct

import pytest

from nacap.errors import ConvergenceNotCertifiedError
from nacap.field import INF, LCElement, precision
from nacap.graphs import (
    ConstantRule,
    ExplicitListRule,
    HalfPowerRule,
    MonomialRule,
    make_path,
)
from nacap.transition import (
    TransitionContext,
    full_decay_certificate,
    min_mean_cycle_valuation,
    neumann_inverse_check,
    neumann_partial,
    nonvanishing_certificate,
    pi_element,
    pn_element,
    pn_restricted,
    restricted_decay_certificate,
    row_sum,
    transition_powers,
)

ONE = LCElement.one()
EPS = LCElement.eps()
HALF = LCElement.rational(Fraction(1, 2))


def unit_ctx():
    return TransitionContext(make_path(ConstantRule(1)))


def two_flat_then_growing():
    # b(0,1) = b(1,2) = 1, b(k,k+1) = eps^(1-k) for k >= 2.
    rule = ExplicitListRule(("1", "1"), tail=MonomialRule(slope=-1, offset=1))
    return TransitionContext(make_path(rule))


def half_power_ctx():
    return TransitionContext(make_path(HalfPowerRule()))


def growing_ctx():
    return TransitionContext(make_path(MonomialRule(slope=-1)))


def min_return_valuation(n, top):
    """Brute-force oracle for the least total down-step valuation of a
    length-2n return path confined to {0..top} with weights eps^(1/2^k):
    minimize sum d_j/2^j over crossing profiles d_j >= 1 for j <= h."""
    best = None
    for h in range(1, top + 1):
        if h > n:
            break
        # d_1..d_h >= 1 summing to n; distribute the excess greedily over
        # all profiles via enumeration (small n only).
        def rec(j, left):
            if j == h:
                return [Fraction(left, 2**h)]
            out = []
            for d in range(1, left - (h - j) + 1):
                for rest in rec(j + 1, left - d):
                    out.append(Fraction(d, 2**j) + rest)
            return out

        for total in rec(1, n):
            if best is None or total < best:
                best = total
    return best


class TestPowers:
    def test_identity(self):
        ctx = unit_ctx()
        assert pn_element(ctx, 3, 3, 0) == ONE
        assert pn_element(ctx, 3, 4, 0) == LCElement.zero()

    def test_one_half_return_probability(self):
        # Flat start: P^2(0,0) = P(0,1) * P(1,0) = 1 * 1/2.
        assert pn_element(two_flat_then_growing(), 0, 0, 2) == HALF
        assert pn_element(unit_ctx(), 0, 0, 2) == HALF

    def test_row_stochastic(self):
        for ctx in (unit_ctx(), two_flat_then_growing(), half_power_ctx()):
            for x in range(4):
                assert row_sum(ctx, x).indistinguishable(ONE)

    def test_odd_returns_vanish(self):
        powers = transition_powers(unit_ctx(), 0, 0, 7)
        for n in (1, 3, 5, 7):
            assert powers[n] == LCElement.zero()


class TestMaxPath:
    def test_zeroth_power(self):
        ctx = unit_ctx()
        assert pi_element(ctx, 2, 2, 0).value == ONE
        assert pi_element(ctx, 2, 3, 0).path is None

    def test_max_below_sum(self):
        ctx = two_flat_then_growing()
        for x, y, n in iproduct((0, 1, 2), (0, 1, 2), (1, 2, 3, 4)):
            pi = pi_element(ctx, x, y, n).value
            pn = pn_element(ctx, x, y, n)
            diff = pn - pi
            assert not diff.terms or diff.terms[0][1] > 0

    def test_half_power_small_restriction(self):
        # L = {0,1}: P_L^2(0,0) = p(0,1) p(1,0) = eps^(1/2)/(1 + eps^(1/2)).
        ctx = half_power_ctx()
        value = pn_restricted(ctx, (0, 1), 0, 0, 2)
        oracle = LCElement.eps(Fraction(1, 2)) * (ONE + LCElement.eps(Fraction(1, 2))).inv()
        assert value.indistinguishable(oracle)

    def test_half_power_unrestricted_valuations(self):
        # Pi^(2n)(0,0) has valuation sum_{j<=n} 2^-j = 1 - 2^-n: the max path
        # goes straight up and straight back.
        ctx = half_power_ctx()
        with precision(window=2, max_terms=16):
            for n in (1, 2, 3, 5):
                result = pi_element(ctx, 0, 0, 2 * n)
                assert result.value.valuation == 1 - Fraction(1, 2**n)
                assert result.value.compare(LCElement.eps(2)) > 0
                assert max(result.path) == n

    def test_restricted_valuations_match_profile_oracle(self):
        ctx = half_power_ctx()
        L = tuple(range(5))
        with precision(window=2, max_terms=16):
            for n in (1, 2, 3, 4, 5, 6):
                value = pn_restricted(ctx, L, 0, 0, 2 * n)
                assert value.valuation == min_return_valuation(n, top=4)


class TestRestriction:
    def test_monotone_and_saturating(self):
        ctx = two_flat_then_growing()
        x, y, n = 0, 2, 4
        small = pn_restricted(ctx, range(3), x, y, n)
        larger = pn_restricted(ctx, range(4), x, y, n)
        full = pn_element(ctx, x, y, n)
        for lo, hi in ((small, larger), (larger, full)):
            diff = hi - lo
            assert not diff.terms or diff.terms[0][1] > 0
        saturated = pn_restricted(ctx, range(n + 2), x, y, n)
        assert saturated.indistinguishable(full)

    def test_singleton_restriction(self):
        ctx = unit_ctx()
        assert pn_restricted(ctx, (0,), 0, 0, 3) == LCElement.zero()
        assert pn_restricted(ctx, (0,), 0, 0, 0) == ONE


class TestDecayCertificates:
    def test_min_mean_cycle_values(self):
        assert min_mean_cycle_valuation(unit_ctx(), range(4)) == 0
        assert min_mean_cycle_valuation(half_power_ctx(), range(5)) == Fraction(1, 32)
        assert min_mean_cycle_valuation(unit_ctx(), (0,)) == INF

    def test_restricted_certificate(self):
        assert restricted_decay_certificate(half_power_ctx(), range(5)) is not None
        assert restricted_decay_certificate(unit_ctx(), range(5)) is None

    def test_full_certificate_on_growing_weights(self):
        assert full_decay_certificate(growing_ctx()) is not None
        assert full_decay_certificate(unit_ctx()) is None
        assert full_decay_certificate(TransitionContext(make_path(MonomialRule()))) is None

    def test_nonvanishing_bound(self):
        cert = nonvanishing_certificate(two_flat_then_growing(), 0)
        assert cert is not None
        assert cert.power == 2 and cert.bound == Fraction(1, 2)

    def test_unit_path_power_bound(self):
        cert = nonvanishing_certificate(unit_ctx(), 0)
        assert cert is not None and cert.bound >= Fraction(1, 4)


class TestNeumann:
    def test_telescoping_identity(self):
        # sum_{n<=N} P^n - sum_{n<=N} P^{n+1} = I - P^{N+1}, elementwise.
        ctx = growing_ctx()
        N = 6
        for x, y in ((0, 0), (0, 1), (1, 1)):
            powers = transition_powers(ctx, x, y, N + 1)
            lhs = ctx.field.zero()
            for n in range(N + 1):
                lhs = lhs + powers[n] - powers[n + 1]
            identity = ONE if x == y else LCElement.zero()
            assert lhs.indistinguishable(identity - powers[N + 1])

    def test_growing_weights_partial_sums_approach_green_value(self):
        # m = b: G(0,0) = m(0)/cap(0) = 1/(1-eps); tail valuations grow.
        ctx = growing_ctx()
        target = (ONE - EPS).inv()
        with precision(window=12):
            report = neumann_partial(ctx, 0, 0, 10)
            diff = report.partial_sum - target
        assert diff.valuation >= 3
        assert report.trend["convergent"] is True

    def test_unit_path_reports_nonconvergence(self):
        report = neumann_partial(unit_ctx(), 0, 0, 8)
        assert report.trend["convergent"] is False
        assert report.certificate.to_json()["type"] == "nonvanishing_rational_bound"

    def test_inverse_check_on_decaying_restriction(self):
        ctx = half_power_ctx()
        with precision(window=3, max_terms=24):
            report = neumann_inverse_check(ctx, range(3), {0: ONE}, target_valuation=1)
        assert report.ok

    def test_inverse_check_refused_without_certificate(self):
        with pytest.raises(ConvergenceNotCertifiedError):
            neumann_inverse_check(unit_ctx(), range(4), {0: ONE})

    def test_singleton_inverse(self):
        # K = {a} with m = b: Delta_K^{-1} 1_a (a) = 1 and the series is P^0.
        ctx = unit_ctx()
        report = neumann_inverse_check(ctx, (0,), {0: ONE}, target_valuation=1)
        assert report.ok and report.N_used == 1


class TestConsistencyWithCapacity:
    def test_full_decay_cooccurs_with_positive_capacity(self):
        from nacap.capacity import POSITIVE, classify_spherical

        ctx = growing_ctx()
        assert full_decay_certificate(ctx) is not None
        assert classify_spherical(ctx.graph).kind == POSITIVE

    def test_restricted_decay_cooccurs_with_not_null(self):
        from nacap.capacity import NULL, classify_spherical

        ctx = half_power_ctx()
        for top in (2, 3, 5):
            assert restricted_decay_certificate(ctx, range(top)) is not None
        assert classify_spherical(ctx.graph).kind != NULL

    def test_decay_rate_is_pair_independent(self):
        # The restricted certificate covers every pair: valuations grow for
        # each of them at the certified rate.
        ctx = half_power_ctx()
        L = range(4)
        with precision(window=2, max_terms=16):
            for x, y in ((0, 0), (1, 1), (0, 1)):
                powers = transition_powers(ctx, x, y, 16, restrict=L)
                vals = [p.valuation for p in powers if p.terms]
                assert vals[-1] > vals[0]
                assert all(a <= b for a, b in zip(vals, vals[1:]))
