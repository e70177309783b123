"""Capacity sequences, classification certificates, Nash-Williams, bridge."""

from fractions import Fraction

import pytest

from nacap.errors import PreconditionError
from nacap.field import INF, LCElement, precision
from nacap.graphs import (
    ConstantRule,
    ExplicitListRule,
    FactorialMonomialRule,
    HalfPowerRule,
    MonomialRule,
    PeriodicRule,
    PowerSize,
    SphericalProfile,
    make_explicit,
    make_path,
    make_spherical,
)
from nacap.capacity import (
    DIVERGENT,
    INCONCLUSIVE,
    NULL,
    POSITIVE,
    capacity_sequence,
    classify_generic,
    classify_spherical,
    monotone_compare,
    nash_williams,
    path_series_capacity,
    real_sweep,
)

ONE = LCElement.one()
EPS = LCElement.eps()


def decaying_path():
    return make_path(MonomialRule())  # b(k, k+1) = eps^k


def growing_path():
    return make_path(MonomialRule(slope=-1))  # b(k, k+1) = eps^-k


def unit_path():
    return make_path(ConstantRule(1))


def geometric_sum(n):
    total = LCElement.zero()
    for k in range(n):
        total = total + LCElement.eps(k)
    return total


class TestCapacitySequence:
    def test_decaying_weights_closed_form(self):
        # cap_n(0) = eps^(n-1) * (sum_{k<n} eps^k)^(-1); valuation n-1.
        seq = capacity_sequence(decaying_path(), 0, 8)
        for n, cap in enumerate(seq.values, start=1):
            expected = LCElement.eps(n - 1) * geometric_sum(n).inv()
            assert cap.indistinguishable(expected)
            assert cap.valuation == n - 1

    def test_unit_path_harmonic(self):
        seq = capacity_sequence(unit_path(), 0, 10)
        for n, cap in enumerate(seq.values, start=1):
            assert cap == LCElement.rational(Fraction(1, n))

    def test_growing_weights_converges(self):
        seq = capacity_sequence(growing_path(), 0, 8)
        for n, cap in enumerate(seq.values, start=1):
            assert cap.indistinguishable(geometric_sum(n).inv())
        # Differences shrink: valuations increase.
        assert list(seq.difference_valuations) == sorted(seq.difference_valuations)

    def test_series_law_oracle_agrees_with_elimination(self):
        for graph in (decaying_path(), growing_path(), unit_path()):
            for n in (1, 2, 4, 6):
                cap = capacity_sequence(graph, 0, n).values[-1]
                assert cap.indistinguishable(path_series_capacity(graph, 0, n))


class TestClassifySpherical:
    def test_decaying_is_null(self):
        verdict = classify_spherical(decaying_path())
        assert verdict.kind == NULL
        assert verdict.certificate.trend_kind == "to_zero"

    def test_growing_is_positive_with_exact_limit(self):
        verdict = classify_spherical(growing_path())
        assert verdict.kind == POSITIVE
        assert verdict.limit.indistinguishable(ONE - EPS)
        assert verdict.limit.terms == (ONE - EPS).terms

    def test_constant_is_divergent(self):
        verdict = classify_spherical(unit_path())
        assert verdict.kind == DIVERGENT
        assert verdict.certificate.lower == ONE
        assert verdict.certificate.upper == ONE

    def test_half_power_is_divergent_bounded_between_eps_and_one(self):
        verdict = classify_spherical(make_path(HalfPowerRule()))
        assert verdict.kind == DIVERGENT
        assert verdict.certificate.lower == EPS
        assert verdict.certificate.upper == ONE

    def test_factorial_weights_null(self):
        verdict = classify_spherical(make_path(FactorialMonomialRule()))
        assert verdict.kind == NULL

    def test_inverted_factorial_weights_positive(self):
        verdict = classify_spherical(make_path(FactorialMonomialRule(invert=True)))
        assert verdict.kind == POSITIVE

    def test_limit_matches_capacity_sequence(self):
        # cap_n approaches the formula limit: the difference has valuation n,
        # and once that leaves the window the two become indistinguishable.
        verdict = classify_spherical(growing_path())
        seq = capacity_sequence(growing_path(), 0, 12)
        for n, cap in enumerate(seq.values, start=1):
            assert (cap - verdict.limit).valuation == n
        far = capacity_sequence(growing_path(), 0, 34).values[-1]
        assert far.indistinguishable(verdict.limit)

    def test_spherical_graph_profile(self):
        profile = SphericalProfile(MonomialRule(slope=-1), PowerSize(2))
        verdict = classify_spherical(make_spherical(profile))
        assert verdict.kind == POSITIVE
        # limit = (sum_k 1/(2^k eps^-k))^(-1) = (sum (eps/2)^k)^(-1) = 1 - eps/2
        assert verdict.limit.indistinguishable(ONE - LCElement.monomial(Fraction(1, 2), 1))

    def test_unrecognized_profile_inconclusive(self):
        graph = make_path(lambda k: ONE + LCElement.monomial(k, 1))
        verdict = classify_spherical(graph, horizon=6)
        assert verdict.kind == INCONCLUSIVE


class TestNashWilliams:
    def test_decaying_path_certificate(self):
        cert = nash_williams(decaying_path(), 0, 10)
        assert cert is not None
        assert cert.provable
        assert list(cert.valuations) == sorted(set(cert.valuations))
        assert cert.valuations[0] == 0 and cert.valuations[-1] == 9

    def test_unit_path_no_certificate(self):
        assert nash_williams(unit_path(), 0, 10) is None

    def test_half_power_no_certificate(self):
        assert nash_williams(make_path(HalfPowerRule()), 0, 10) is None

    def test_certificate_at_other_roots(self):
        for root in (0, 1, 3):
            cert = nash_williams(decaying_path(), root, 10)
            assert cert is not None and cert.provable


class TestClassifyGeneric:
    def test_decaying_null(self):
        assert classify_generic(decaying_path(), 0, 10).kind == NULL

    def test_half_power_divergent(self):
        assert classify_generic(make_path(HalfPowerRule()), 0, 10).kind == DIVERGENT

    def test_rational_explicit_graph_bounded_below(self):
        g = make_explicit(
            4,
            [(0, 1, ONE), (1, 2, LCElement.rational(Fraction(1, 3))), (2, 3, ONE)],
        )
        verdict = classify_generic(g, 0, 3)
        assert verdict.kind == INCONCLUSIVE
        assert verdict.certificate.to_json()["type"] == "bounded_below"
        assert verdict.certificate.bound == LCElement.rational(Fraction(1, 3))

    def test_unknown_rule_horizon_evidence(self):
        graph = make_path(lambda k: ONE + LCElement.monomial(k + 1, 1))
        verdict = classify_generic(graph, 0, 6)
        assert verdict.kind == INCONCLUSIVE
        assert verdict.certificate.to_json()["type"] == "horizon_evidence"


class TestMonotoneCompare:
    def test_doubling_weights(self):
        base = unit_path()
        doubled = make_path(ConstantRule(2))
        orderings = monotone_compare(base, doubled, 0, 5)
        assert all(o <= 0 for o in orderings)
        # cap'_n = 2 cap_n exactly (bilinearity of the energy).
        for n in range(1, 6):
            cap = capacity_sequence(base, 0, n).values[-1]
            cap2 = capacity_sequence(doubled, 0, n).values[-1]
            assert cap2.indistinguishable(cap * LCElement.rational(2))

    def test_equal_graphs(self):
        assert monotone_compare(unit_path(), unit_path(), 0, 4) == [0, 0, 0, 0]

    def test_eps_scaling_lower_bound(self):
        # b = eps * 1_{b' != 0} with b' unit: cap_n >= eps * cap'_n.
        scaled = make_path(ConstantRule(1).__class__(constant=1))
        eps_path = make_path(PeriodicRule(("1*e^(1)",)))
        orderings = monotone_compare(eps_path, scaled, 0, 5)
        assert all(o <= 0 for o in orderings)
        for n in range(1, 6):
            cap_eps = capacity_sequence(eps_path, 0, n).values[-1]
            cap_unit = capacity_sequence(scaled, 0, n).values[-1]
            assert cap_eps.indistinguishable(cap_unit * EPS)

    def test_precondition_violation(self):
        with pytest.raises(PreconditionError):
            monotone_compare(unit_path(), make_path(PeriodicRule(("1*e^(1)",))), 0, 4)


class TestRealSweep:
    def test_factorial_weights_partial_sums(self):
        # b_r(k, k+1) = k! r^k: cap_{N,r}(0) = (sum_{k<N} r^-k / k!)^{-1}.
        from nacap.graphs import RationalFunctionField

        graph = make_path(FactorialMonomialRule(), field=RationalFunctionField)
        table = real_sweep(graph, 0, 3, [Fraction(1, 2)], 25)
        expected = 1 / sum(Fraction(2**k, __import__("math").factorial(k)) for k in range(25))
        assert table.rows[0].capacity == expected
        assert abs(float(table.rows[0].capacity) - float(2.718281828459045**-2)) < 1e-6

    def test_inverted_factorial_capacity_shrinks(self):
        from nacap.graphs import RationalFunctionField

        graph = make_path(
            FactorialMonomialRule(invert=True), field=RationalFunctionField
        )
        caps = [
            real_sweep(graph, 0, 0, [Fraction(1, 2)], N).rows[0].capacity
            for N in (4, 8, 12, 15)
        ]
        assert caps == sorted(caps, reverse=True)
        assert float(caps[-1]) < 1e-6

    def test_nonpositive_weight_rejected(self):
        from nacap.errors import NonpositiveWeightError
        from nacap.graphs import RationalFunctionField
        from nacap.graphs import ExplicitListRule

        graph = make_path(
            ExplicitListRule(("1 - 2*e^(1)",), tail=MonomialRule()),
            field=RationalFunctionField,
        )
        with pytest.raises(NonpositiveWeightError):
            real_sweep(graph, 0, 0, [Fraction(3, 4)], 2)
