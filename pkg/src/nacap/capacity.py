"""Capacity sequences, capacity-type classification and the real bridge.

The capacity type of an infinite graph (null / positive / divergent) is a
limit statement in the order topology, so at a finite horizon it is only
decidable through a certificate: an exact closed form for recognized
weakly-spherically-symmetric profiles, a Nash-Williams subsequence whose
continuation a rule certifies, or a positive lower bound on all edge
weights.  Without one of those the verdict is inconclusive and carries the
observed valuation trend as evidence, never a guess.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional, Tuple

from . import scalars
from .dirichlet import effective_capacity, solve_dp
from .errors import PrecisionExhaustedError, PreconditionError
from .exact import Q
from .field import INF, LCElement, active_precision, guarantee_str
from .graphs import (
    ConstantSize,
    SphericalProfile,
    Trend,
    WeightedGraph,
    make_spherical,
)

NULL = "null"
POSITIVE = "positive"
DIVERGENT = "divergent"
INCONCLUSIVE = "inconclusive"


# ---------------------------------------------------------------------------
# Sequences and trend evidence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CapacitySequence:
    """cap_n(a) for n = 1..N along the ball exhaustion, with the valuations
    of consecutive differences (INF when a difference vanishes within its
    guarantee).  Monotonicity cap_{n+1} <= cap_n is asserted on creation."""

    root: int
    values: Tuple
    difference_valuations: Tuple
    saturated: bool = False  # the exhaustion filled a finite graph


def capacity_sequence(graph, a, N) -> CapacitySequence:
    values = []
    previous_ball = None
    saturated = False
    for n in range(1, N + 1):
        ball = graph.ball(a, n)
        if previous_ball is not None and len(ball) == len(previous_ball):
            saturated = True
            break
        previous_ball = ball
        values.append(effective_capacity(graph, ball, a))
    diffs = []
    for small, large in zip(values[1:], values):
        step = large - small
        if scalars.certainly_positive(-step):
            raise AssertionError("capacity failed to decrease along the exhaustion")
        diffs.append(scalars.valuation_of(step))
    return CapacitySequence(a, tuple(values), tuple(diffs), saturated)


def increasing_suffix_length(valuations) -> int:
    """Length of the strictly increasing suffix of a valuation sequence; the
    computational proxy for convergence evidence (a sequence converges iff
    consecutive differences tend to zero, i.e. their valuations grow)."""
    if not valuations:
        return 0
    count = 1
    for earlier, later in zip(reversed(valuations[:-1]), reversed(valuations[1:])):
        if later > earlier:
            count += 1
        else:
            break
    return count


def convergence_evidence(valuations, threshold=None) -> dict:
    """Finite-horizon evidence that a sequence of difference valuations
    grows without bound: a strictly increasing suffix reaching the end of
    the computed range, optionally past a requested threshold."""
    suffix = increasing_suffix_length(valuations)
    exceeded = bool(valuations) and (
        threshold is None or any(v == INF or v >= threshold for v in valuations)
    )
    return {
        "suffix_length": suffix,
        "strictly_increasing_tail": suffix >= min(3, len(valuations)) and suffix > 1,
        "threshold_exceeded": exceeded,
    }


# ---------------------------------------------------------------------------
# Verdicts and certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SphericalFormulaCertificate:
    """Exact classification through the closed capacity formula for weakly
    spherically symmetric graphs; independently re-checkable from the rule."""

    rule: dict
    trend_kind: str
    lower: object = None
    upper: object = None
    terms_summed: int = 0

    def to_json(self):
        out = {"type": "spherical_formula", "rule": self.rule, "trend": self.trend_kind}
        if self.lower is not None:
            out["lower_bound"] = str(self.lower)
        if self.upper is not None:
            out["upper_bound"] = str(self.upper)
        if self.terms_summed:
            out["terms_summed"] = self.terms_summed
        return out


@dataclass(frozen=True)
class NashWilliamsCertificate:
    """Subsequence of ball radii whose boundary weights (or maximal boundary
    edges) have strictly increasing valuations.  `provable` marks rule-backed
    trends that continue beyond the horizon; only those certify null
    capacity."""

    condition: str  # "boundary_weights" or "max_boundary_edge"
    radii: Tuple[int, ...]
    valuations: Tuple
    provable: bool

    def to_json(self):
        return {
            "type": "nash_williams",
            "condition": self.condition,
            "radii": list(self.radii),
            "valuations": [str(v) for v in self.valuations],
            "provable": self.provable,
        }


@dataclass(frozen=True)
class BoundedBelowCertificate:
    """All edge weights are at least `bound` (a positive element), which
    rules out null capacity by the monotonicity law."""

    bound: object
    scope: str  # "rule" or "materialized"

    def to_json(self):
        return {"type": "bounded_below", "bound": str(self.bound), "scope": self.scope}


@dataclass(frozen=True)
class HorizonEvidenceCertificate:
    """No sound certificate applies: the observed capacity differences and
    their valuation trend, for the caller to judge."""

    difference_valuations: Tuple
    evidence: dict

    def to_json(self):
        return {
            "type": "horizon_evidence",
            "difference_valuations": [guarantee_str(v) for v in self.difference_valuations],
            "evidence": self.evidence,
        }


@dataclass(frozen=True)
class CapacityVerdict:
    """Capacity type of the graph (a vertex-independent property), with the
    machine-checkable certificate that justified it.  Positive verdicts carry
    the exact limit within its guarantee."""

    kind: str
    root: Optional[int] = None
    limit: object = None
    certificate: object = None

    def to_json(self):
        out = {"kind": self.kind}
        if self.root is not None:
            out["root"] = self.root
        if self.limit is not None:
            out["limit"] = {
                "value": str(self.limit),
                "guarantee": guarantee_str(scalars.guarantee_of(self.limit)),
            }
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out


# ---------------------------------------------------------------------------
# Weakly spherically symmetric classification
# ---------------------------------------------------------------------------


def _profile_of(source) -> tuple:
    """(b_plus rule, sphere sizes, field, graph-or-None) from a profile or a
    rule-backed path/spherical graph."""
    if isinstance(source, SphericalProfile):
        from .graphs import LeviCivitaField

        return source.b_plus, source.sphere_sizes, LeviCivitaField, None
    if isinstance(source, WeightedGraph):
        rule = source.weight_rule
        sizes = source.sphere_sizes
        if rule is None or sizes is None:
            return None, None, source.field, source
        return rule, sizes, source.field, source
    raise TypeError("expected a SphericalProfile or a WeightedGraph")


def spherical_capacity_limit(rule, sizes, field, max_terms=10_000):
    """Exact limit (sum over k of 1/b(boundary B_{k+1}))^{-1} for a profile
    whose outward weights tend to infinity.  The summation stops once term
    valuations leave the window; the omitted tail is recorded in the
    guarantee exponent."""
    cfg = active_precision()
    total = field.zero()
    anchor = None
    k = 0
    while k < max_terms:
        # b(boundary of B_{k+1}) = #S_k * b_plus(k)
        boundary = rule.value(k, field) * field.from_rational(sizes.value(k))
        term = boundary.inv()
        lam = term.valuation
        if anchor is None:
            anchor = lam
        if lam >= anchor + cfg.window:
            total = total.with_guarantee(lam)
            return total.inv(), k
        total = total + term
        k += 1
    raise PrecisionExhaustedError(
        "spherical capacity series did not leave the window within "
        f"{max_terms} terms"
    )


def classify_spherical(source, horizon: int = 32) -> CapacityVerdict:
    """Exact capacity type of a weakly spherically symmetric graph via the
    trend of its outward sphere weights:

      - some subsequence of b_plus tends to 0      -> null
      - b_plus tends to infinity                   -> positive, with limit
      - b_plus bounded below, and bounded above
        infinitely often                           -> divergent

    Unrecognized profiles yield an inconclusive verdict with horizon
    evidence.
    """
    rule, sizes, field, graph = _profile_of(source)
    if rule is None:
        return _horizon_verdict(graph, 0, horizon, None)
    trend = rule.trend(field)
    rule_json = rule.to_json()
    if trend.kind == Trend.TO_ZERO:
        certificate = SphericalFormulaCertificate(rule_json, trend.kind)
        return CapacityVerdict(NULL, root=0, certificate=certificate)
    if trend.kind == Trend.TO_INFINITY:
        limit, terms = spherical_capacity_limit(rule, sizes, field)
        certificate = SphericalFormulaCertificate(rule_json, trend.kind, terms_summed=terms)
        return CapacityVerdict(POSITIVE, root=0, limit=limit, certificate=certificate)
    if trend.kind == Trend.TWO_SIDED:
        certificate = SphericalFormulaCertificate(
            rule_json, trend.kind, lower=trend.lower, upper=trend.upper
        )
        return CapacityVerdict(DIVERGENT, root=0, certificate=certificate)
    if graph is None:
        graph = make_spherical(SphericalProfile(rule, sizes), field=field)
    return _horizon_verdict(graph, 0, horizon, None)


# ---------------------------------------------------------------------------
# Nash-Williams test
# ---------------------------------------------------------------------------


def _record_subsequence(valuations):
    """Indices achieving strictly increasing record valuations."""
    records = []
    best = None
    for i, v in enumerate(valuations):
        if v == INF:
            continue
        if best is None or v > best:
            best = v
            records.append(i)
    return records


def nash_williams(graph, a, N) -> Optional[NashWilliamsCertificate]:
    """Search for a subsequence of ball radii along which the boundary
    weights (equivalently, the maximal boundary edges) tend to zero.

    A certificate whose trend is backed by a recognized weight rule is sound
    beyond the horizon (`provable`); raw finite evidence is reported with
    provable=False and never upgraded to a verdict by the classifier.
    Absence of a certificate is a valid outcome (returns None)."""
    boundary_vals = []
    max_edge_vals = []
    for n in range(1, N + 1):
        ball = set(graph.ball(a, n))
        boundary_vals.append(scalars.valuation_of(graph.boundary_weight(ball)))
        best = None
        for x in sorted(ball):
            for y, w in graph.neighbors(x).items():
                if y not in ball:
                    if best is None or scalars.certainly_positive(w - best):
                        best = w
        max_edge_vals.append(scalars.valuation_of(best) if best is not None else INF)

    rule = graph.weight_rule
    rule_backed = rule is not None and rule.trend(graph.field).kind == Trend.TO_ZERO

    for condition, vals in (
        ("boundary_weights", boundary_vals),
        ("max_boundary_edge", max_edge_vals),
    ):
        records = _record_subsequence(vals)
        if len(records) >= min(3, N) and len(records) > 1 and records[-1] >= N - 2:
            return NashWilliamsCertificate(
                condition=condition,
                radii=tuple(i + 1 for i in records),
                valuations=tuple(vals[i] for i in records),
                provable=rule_backed,
            )
    return None


# ---------------------------------------------------------------------------
# Generic classification
# ---------------------------------------------------------------------------


def _edge_lower_bound(graph, a, N):
    """Certified positive lower bound on edge weights, when one is knowable:
    from a two-sided rule trend on generated graphs, or the materialized
    minimum on finite graphs."""
    rule = graph.weight_rule
    if rule is not None:
        trend = rule.trend(graph.field)
        if trend.kind == Trend.TWO_SIDED and graph.sphere_sizes == ConstantSize(1):
            # On a path the rule values are exactly the edge weights.
            return trend.lower, "rule"
    if graph.is_finite:
        best = None
        for x in range(graph.vertex_count):
            for y, w in graph.neighbors(x).items():
                if best is None or scalars.certainly_positive(best - w):
                    best = w
        if best is not None and scalars.certainly_positive(best):
            return best, "materialized"
    return None, None


def _horizon_verdict(graph, a, N, threshold) -> CapacityVerdict:
    sequence = capacity_sequence(graph, a, N)
    evidence = convergence_evidence(sequence.difference_valuations, threshold)
    certificate = HorizonEvidenceCertificate(sequence.difference_valuations, evidence)
    return CapacityVerdict(INCONCLUSIVE, root=a, certificate=certificate)


def classify_generic(graph, a, N, valuation_threshold=None) -> CapacityVerdict:
    """Certificate-based classification at root a and horizon N.

    Order of soundness: recognized spherical profile (exact), provable
    Nash-Williams subsequence (null), certified edge lower bound (rules out
    null; reported as inconclusive with a bounded-below certificate), else
    horizon evidence only.  The verdict is a property of the graph, not of
    the root."""
    rule, sizes, fieldname, _ = _profile_of(graph)
    if rule is not None and rule.trend(graph.field).kind != Trend.UNKNOWN:
        return classify_spherical(graph, horizon=N)

    certificate = nash_williams(graph, a, N)
    if certificate is not None and certificate.provable:
        return CapacityVerdict(NULL, root=a, certificate=certificate)

    bound, scope = _edge_lower_bound(graph, a, N)
    if bound is not None:
        return CapacityVerdict(
            INCONCLUSIVE,
            root=a,
            certificate=BoundedBelowCertificate(bound, scope),
        )
    return _horizon_verdict(graph, a, N, valuation_threshold)


# ---------------------------------------------------------------------------
# Monotonicity law
# ---------------------------------------------------------------------------


def monotone_compare(graph, graph_prime, a, N):
    """Check cap_n(a) <= cap'_n(a) for n <= N given b <= b' edgewise.

    Returns the list of certified orderings (-1, 0 after identification
    within guarantee).  Raises PreconditionError if the edgewise domination
    fails, AssertionError if the monotonicity law itself is violated."""
    ball = graph.ball(a, N)
    for x in ball:
        nbrs = graph.neighbors(x)
        nbrs_prime = graph_prime.neighbors(x)
        if set(nbrs) != set(nbrs_prime):
            raise PreconditionError(
                f"graphs differ in structure at vertex {x}; monotone comparison "
                "needs a common vertex/edge set"
            )
        for y, w in nbrs.items():
            if scalars.certainly_positive(w - nbrs_prime[y]):
                raise PreconditionError(
                    f"edge ({x},{y}) violates b <= b' precondition"
                )
    orderings = []
    for n in range(1, N + 1):
        cap = effective_capacity(graph, graph.ball(a, n), a)
        cap_prime = effective_capacity(graph_prime, graph_prime.ball(a, n), a)
        diff = cap - cap_prime
        if scalars.certainly_positive(diff):
            raise AssertionError(f"monotonicity law violated at radius {n}")
        orderings.append(-1 if scalars.certainly_positive(-diff) else 0)
    return orderings


# ---------------------------------------------------------------------------
# Real-field bridge
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RealSweepRow:
    r: object
    capacity: object  # exact rational cap_{B_N, r}(a)
    scaled: object  # r^(-power) * capacity

    def to_json(self):
        return {
            "r": str(self.r),
            "capacity": str(self.capacity),
            "capacity_float": float(self.capacity),
            "scaled": str(self.scaled),
            "scaled_float": float(self.scaled),
        }


@dataclass(frozen=True)
class RealSweepTable:
    root: int
    radius: int
    power: int
    rows: Tuple[RealSweepRow, ...]

    def to_json(self):
        return {
            "root": self.root,
            "radius": self.radius,
            "power": self.power,
            "rows": [row.to_json() for row in self.rows],
        }


def real_sweep(graph, a, n_power, r_values, N) -> RealSweepTable:
    """Classical (real) finite-horizon capacities of a rational-function
    graph at rational parameter values: exact elimination over the rationals
    at each r, reported alongside r^(-n_power) * capacity.

    For graphs with null capacity over the series field, the scaled column
    tends to zero as r -> 0+."""
    rows = []
    for r in r_values:
        r = Q(r)
        if r <= 0:
            raise PreconditionError(f"sweep parameter r = {r} must be positive")
        real_graph = graph.evaluated_at(r)
        cap = effective_capacity(real_graph, real_graph.ball(a, N), a)
        rows.append(RealSweepRow(r, cap, cap / r**n_power))
    return RealSweepTable(a, N, n_power, tuple(rows))


def path_series_capacity(graph, a, n):
    """Independent series-law oracle for capacities on path graphs rooted at
    0: cap_n(0) = (sum_{k<n} 1/b(k, k+1))^{-1}."""
    if graph.kind != "path" or a != 0:
        raise PreconditionError("series law oracle applies to path graphs rooted at 0")
    total = graph.field.zero()
    for k in range(n):
        total = total + scalars.invert(graph.weight(k, k + 1))
    return scalars.invert(total)
