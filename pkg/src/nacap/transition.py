"""Transition operator P = I - Laplacian under the degree measure m = b.

Matrix powers P^n(x, y) are exact sums over length-n paths, computed by
repeated sparse application of the operator; Pi^n(x, y) is the maximal
single-path product, which controls P^n up to an infinitely large factor.
Convergence of P^n to zero is never inferred from raw finite evidence: a
restricted operator is certified through the exact minimum mean cycle of
edge valuations (sound and complete on a finite restriction), the full
operator through a recognized weight rule, and non-decay through a rational
lower bound on a return probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

from . import scalars
from .dirichlet import dirichlet_inverse_apply
from .errors import ConvergenceNotCertifiedError, PreconditionError
from .exact import Q
from .field import INF
from .graphs import FactorialMonomialRule, MonomialRule, Trend

__all__ = [
    "TransitionContext",
    "pn_element",
    "pi_element",
    "pn_restricted",
    "transition_powers",
    "neumann_partial",
    "neumann_inverse_check",
    "nonvanishing_certificate",
    "min_mean_cycle_valuation",
    "full_decay_certificate",
    "restricted_decay_certificate",
]


class TransitionContext:
    """A graph with its measure forced to m(x) = b(x), making I - Laplacian
    row-stochastic: p(x, y) = b(x, y)/b(x)."""

    def __init__(self, graph):
        self.graph = graph.with_degree_measure()
        self._rows: dict = {}

    @property
    def field(self):
        return self.graph.field

    def probs_from(self, x) -> dict:
        if x not in self._rows:
            inv_degree = scalars.invert(self.graph.degree_weight(x))
            self._rows[x] = {
                y: w * inv_degree for y, w in self.graph.neighbors(x).items()
            }
        return self._rows[x]

    def prob(self, x, y):
        return self.probs_from(x).get(y, self.field.zero())


def _apply(ctx: TransitionContext, f: dict, restrict) -> dict:
    """One application of P (or its restriction) to a sparse vector."""
    zero = ctx.field.zero()
    targets = set()
    for w in f:
        for z in ctx.graph.neighbors(w):
            if restrict is None or z in restrict:
                targets.add(z)
    out = {}
    for z in sorted(targets):
        acc = zero
        for w, p in ctx.probs_from(z).items():
            fw = f.get(w)
            if fw is not None:
                acc = acc + p * fw
        out[z] = acc
    return out


def transition_powers(ctx: TransitionContext, x, y, N, restrict=None) -> list:
    """[P^n(x, y) for n = 0..N], restricted to paths inside `restrict` when
    given.  Exact dynamic programming, never dense matrix powers."""
    if restrict is not None:
        restrict = set(restrict)
        if x not in restrict or y not in restrict:
            raise PreconditionError("x and y must lie in the restriction set")
    zero = ctx.field.zero()
    one = ctx.field.one()
    f = {y: one}
    out = [one if x == y else zero]
    for _ in range(N):
        f = _apply(ctx, f, restrict)
        out.append(f.get(x, zero))
    return out


def pn_element(ctx: TransitionContext, x, y, n):
    """P^n(x, y): the sum over all length-n paths from x to y of the product
    of transition probabilities."""
    return transition_powers(ctx, x, y, n)[n]


def pn_restricted(ctx: TransitionContext, K, x, y, n):
    """P_K^n(x, y): as pn_element but with every path confined to K;
    monotone in K and equal to P^n once K absorbs the relevant balls."""
    return transition_powers(ctx, x, y, n, restrict=K)[n]


@dataclass(frozen=True)
class MaxPathResult:
    value: object
    path: Optional[Tuple[int, ...]]  # witness path from x to y, or None if unreachable


def pi_element(ctx: TransitionContext, x, y, n, restrict=None) -> MaxPathResult:
    """Pi^n(x, y): the maximal product of transition probabilities over
    length-n paths from x to y, with a witness path.

    Candidates whose difference vanishes within the certified precision are
    ties and resolved to the first-found path under ascending neighbor
    order; this never changes the value below its guarantee."""
    if restrict is not None:
        restrict = set(restrict)
        if x not in restrict or y not in restrict:
            raise PreconditionError("x and y must lie in the restriction set")
    if n == 0:
        one = ctx.field.one()
        return MaxPathResult(one, (x,)) if x == y else MaxPathResult(ctx.field.zero(), None)
    # Prune states that cannot reach x in the remaining steps (full-graph
    # distances lower-bound restricted distances, so pruning is safe).
    dist_to_x = ctx.graph.distances_from(x, n)
    current = {y: (ctx.field.one(), (y,))}
    for step in range(1, n + 1):
        remaining = n - step
        nxt = {}
        targets = set()
        for w in current:
            for z in ctx.graph.neighbors(w):
                if restrict is not None and z not in restrict:
                    continue
                if dist_to_x.get(z, n + 1) > remaining:
                    continue
                targets.add(z)
        for z in sorted(targets):
            best = None
            for w, p in ctx.probs_from(z).items():
                entry = current.get(w)
                if entry is None:
                    continue
                candidate = p * entry[0]
                if best is None or scalars.certainly_positive(candidate - best[0]):
                    best = (candidate, (z,) + entry[1])
            if best is not None:
                nxt[z] = best
        current = nxt
        if not current:
            break
    hit = current.get(x)
    if hit is None:
        return MaxPathResult(ctx.field.zero(), None)
    return MaxPathResult(hit[0], hit[1])


# ---------------------------------------------------------------------------
# Decay and non-decay certificates
# ---------------------------------------------------------------------------


def min_mean_cycle_valuation(ctx: TransitionContext, K):
    """Exact minimum mean of edge valuations over the cycles of the
    restriction to K (Karp's recurrence over the rationals).

    The valuation of P_K^n grows like n times this quantity, so a positive
    value certifies P_K^n -> 0 and a zero value certifies non-decay.
    Returns +inf when the restriction has no cycle (singleton K)."""
    nodes = sorted(set(K))
    index = {v: i for i, v in enumerate(nodes)}
    m = len(nodes)
    edges = []
    for u in nodes:
        for v, p in ctx.probs_from(u).items():
            if v in index:
                edges.append((index[u], index[v], scalars.valuation_of(p)))
    if not edges:
        return INF
    table = [[None] * m for _ in range(m + 1)]
    table[0][0] = Q(0)
    for k in range(1, m + 1):
        previous = table[k - 1]
        row = table[k]
        for u, v, w in edges:
            du = previous[u]
            if du is None:
                continue
            candidate = du + w
            if row[v] is None or candidate < row[v]:
                row[v] = candidate
    best = None
    last = table[m]
    for v in range(m):
        if last[v] is None:
            continue
        worst = None
        for k in range(m):
            dk = table[k][v]
            if dk is None:
                continue
            mean = (last[v] - dk) / (m - k)
            if worst is None or mean > worst:
                worst = mean
        if worst is not None and (best is None or worst < best):
            best = worst
    return best if best is not None else INF


@dataclass(frozen=True)
class DecayCertificate:
    """Certifies P^n(x, y) -> 0.  `rate` is a positive per-step lower bound
    on the growth of valuations; `scope` says whether it covers a finite
    restriction (complete criterion) or the full graph (rule-backed)."""

    scope: str  # "restricted" or "full"
    rate: object
    argument: str

    def to_json(self):
        return {
            "type": "decay",
            "scope": self.scope,
            "rate": str(self.rate),
            "argument": self.argument,
        }


@dataclass(frozen=True)
class NonvanishingCertificate:
    """P^k(x0, x0) >= c for a positive rational c, hence P^{kn}(x0, x0)
    >= c^n stays above every infinitesimal and P^n does not tend to zero
    (for any pair of vertices)."""

    vertex: int
    power: int
    bound: object

    def to_json(self):
        return {
            "type": "nonvanishing_rational_bound",
            "vertex": self.vertex,
            "power": self.power,
            "bound": str(self.bound),
        }


def restricted_decay_certificate(ctx: TransitionContext, K) -> Optional[DecayCertificate]:
    rate = min_mean_cycle_valuation(ctx, K)
    if rate == INF or rate > 0:
        return DecayCertificate("restricted", rate, "min_mean_cycle")
    return None


def full_decay_certificate(ctx: TransitionContext) -> Optional[DecayCertificate]:
    """Rule-backed decay on the full graph: on a path whose weights grow at
    a fixed valuation slope, every inward step costs that slope, so return
    probabilities decay without bound."""
    graph = ctx.graph
    rule = graph.weight_rule
    if graph.kind != "path" or rule is None:
        return None
    if isinstance(rule, MonomialRule) and rule.slope < 0:
        slope = -rule.slope
    elif isinstance(rule, FactorialMonomialRule):
        effective = -rule.slope if rule.invert else rule.slope
        if effective >= 0:
            return None
        slope = -effective
    else:
        return None
    return DecayCertificate("full", slope / 2, "uniform_inward_step_valuation")


def nonvanishing_certificate(
    ctx: TransitionContext, x0, max_power=8, restrict=None
) -> Optional[NonvanishingCertificate]:
    """Search k in 2..max_power for a return probability with valuation 0;
    its standard part (halved when that is needed for certification) is the
    rational lower bound."""
    powers = transition_powers(ctx, x0, x0, max_power, restrict=restrict)
    for k in range(2, max_power + 1):
        element = powers[k]
        if scalars.valuation_of(element) != 0:
            continue
        c = element.standard_part() if hasattr(element, "standard_part") else element
        diff = element - ctx.field.from_rational(c)
        certified = scalars.indistinguishable(diff, ctx.field.zero()) and scalars.guarantee_of(
            diff
        ) == INF
        if not certified and not scalars.certainly_positive(diff):
            # element sits below its standard part in higher order; half the
            # bound is then certified strictly below the element.
            c = c / 2
        return NonvanishingCertificate(x0, k, c)
    return None


# ---------------------------------------------------------------------------
# Neumann series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NeumannReport:
    """Partial sum of P^n(x, y) with the valuation trend of its terms and
    whichever decay or non-decay certificate applies."""

    x: int
    y: int
    N: int
    partial_sum: object
    term_valuations: Tuple
    trend: dict
    certificate: object = None

    def to_json(self):
        from .field import guarantee_str

        out = {
            "x": self.x,
            "y": self.y,
            "N": self.N,
            "partial_sum": {
                "value": str(self.partial_sum),
                "guarantee": guarantee_str(scalars.guarantee_of(self.partial_sum)),
            },
            "term_valuations": [guarantee_str(v) for v in self.term_valuations],
            "trend": self.trend,
        }
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out


def neumann_partial(ctx: TransitionContext, x, y, N, restrict=None) -> NeumannReport:
    """sum_{n<=N} P^n(x, y) together with term valuations and a trend
    verdict.  The series is reported convergent only when a sound decay
    certificate exists; otherwise the trend is evidence, not a claim."""
    from .capacity import convergence_evidence

    powers = transition_powers(ctx, x, y, N, restrict=restrict)
    total = ctx.field.zero()
    for element in powers:
        total = total + element
    valuations = tuple(scalars.valuation_of(p) for p in powers)
    nonzero = [v for v in valuations if v != INF]
    trend = convergence_evidence(nonzero)
    if restrict is not None:
        certificate = restricted_decay_certificate(ctx, restrict)
    else:
        certificate = full_decay_certificate(ctx)
    if certificate is None:
        bound = nonvanishing_certificate(ctx, x, restrict=restrict)
        certificate = bound
        trend = dict(trend, convergent=False if bound is not None else None)
    else:
        trend = dict(trend, convergent=True)
    return NeumannReport(x, y, N, total, valuations, trend, certificate)


@dataclass(frozen=True)
class InverseCheckReport:
    ok: bool
    N_used: int
    rate: object
    difference_valuations: dict

    def to_json(self):
        from .field import guarantee_str

        return {
            "ok": self.ok,
            "N_used": self.N_used,
            "rate": str(self.rate),
            "difference_valuations": {
                str(v): guarantee_str(val) for v, val in self.difference_valuations.items()
            },
        }


def neumann_inverse_check(
    ctx: TransitionContext, K, phi: dict, target_valuation=2, max_N=400
) -> InverseCheckReport:
    """Verify sum_n P_K^n phi = (Dirichlet Laplacian on K)^{-1} phi.

    Refuses (ConvergenceNotCertifiedError) unless the restriction carries a
    decay certificate; then runs the series until every vertex difference
    either vanishes within its guarantee or has valuation >= the target."""
    K = sorted(set(K))
    certificate = restricted_decay_certificate(ctx, K)
    if certificate is None:
        raise ConvergenceNotCertifiedError(
            "restricted transition powers carry no decay certificate "
            "(a cycle of valuation zero exists); the Neumann series may not converge"
        )
    inverse = dirichlet_inverse_apply(ctx.graph, K, phi)
    zero = ctx.field.zero()
    members = set(K)
    f = {v: phi[v] for v in K if v in phi}
    total = dict(f)
    n = 0
    while n < max_N:
        n += 1
        f = _apply(ctx, f, members)
        for v, value in f.items():
            total[v] = total.get(v, zero) + value
        diffs = {v: total.get(v, zero) - inverse[v] for v in K}
        if all(
            (not d.terms) or scalars.valuation_of(d) >= target_valuation
            for d in diffs.values()
        ):
            return InverseCheckReport(
                True,
                n,
                certificate.rate,
                {v: scalars.valuation_of(d) for v, d in diffs.items()},
            )
    diffs = {v: total.get(v, zero) - inverse[v] for v in K}
    return InverseCheckReport(
        False, n, certificate.rate, {v: scalars.valuation_of(d) for v, d in diffs.items()}
    )


def row_sum(ctx: TransitionContext, x):
    """sum_y p(x, y); equals 1 within the certified precision."""
    total = ctx.field.zero()
    for p in ctx.probs_from(x).values():
        total = total + p
    return total
