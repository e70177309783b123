"""Weighted graphs over an ordered field scalar type.

A graph is a symmetric positive edge-weight map b on an at most countable
vertex set together with a positive vertex measure m.  Infinite graphs are
represented by a finite materialized horizon plus a generating rule; every
operation either completes within the horizon or grows it through the rule,
so nothing is silently truncated.  Vertices are integers; generators assign
them in breadth-first layers, which also fixes the deterministic enumeration
order used everywhere else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Optional, Tuple

from .exact import Q
from .errors import (
    HorizonExhaustedError,
    IncompatibleProfileError,
    NonpositiveWeightError,
    SpecFileError,
)
from .field import LCElement, parse_element
from .ratfunc import RFElement
from . import scalars


# ---------------------------------------------------------------------------
# Scalar field adapters
# ---------------------------------------------------------------------------


class LeviCivitaField:
    name = "levi-civita"

    @staticmethod
    def monomial(coefficient, exponent):
        return LCElement.monomial(coefficient, exponent)

    @staticmethod
    def from_rational(value):
        return LCElement.rational(value)

    @staticmethod
    def from_literal(text):
        return parse_element(text)

    zero = staticmethod(LCElement.zero)
    one = staticmethod(LCElement.one)


class RationalFunctionField:
    name = "rational-function"

    @staticmethod
    def monomial(coefficient, exponent):
        exponent = Q(exponent)
        if exponent.denominator != 1:
            raise SpecFileError(
                f"rational-function weights need integer exponents, got {exponent}"
            )
        return RFElement.monomial(coefficient, int(exponent))

    @staticmethod
    def from_rational(value):
        return RFElement.constant(value)

    @staticmethod
    def from_literal(text):
        series = parse_element(text)
        element = RFElement.constant(0)
        for exponent, coefficient in series.terms:
            if exponent.denominator != 1:
                raise SpecFileError(
                    f"rational-function literal has non-integer exponent {exponent}"
                )
            element = element + RFElement.monomial(coefficient, int(exponent))
        return element

    @staticmethod
    def zero():
        return RFElement.constant(0)

    @staticmethod
    def one():
        return RFElement.constant(1)


class RationalField:
    """Plain rationals; the scalar type of real-evaluated graphs."""

    name = "rational"

    @staticmethod
    def monomial(coefficient, exponent):
        if Q(exponent) != 0:
            raise SpecFileError("rational weights cannot carry eps powers")
        return Q(coefficient)

    @staticmethod
    def from_rational(value):
        return Q(value)

    @staticmethod
    def from_literal(text):
        return Q(text)

    @staticmethod
    def zero():
        return Q(0)

    @staticmethod
    def one():
        return Q(1)


FIELDS = {
    LeviCivitaField.name: LeviCivitaField,
    RationalFunctionField.name: RationalFunctionField,
    RationalField.name: RationalField,
}


# ---------------------------------------------------------------------------
# Weight rules.  A rule produces the weight of edge (k, k+1) on a path, or
# the outward sphere weight b_plus(k) on a layered graph.  Rules also carry
# the symbolic trend of their values, which is what makes exact capacity
# classification possible.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Trend:
    """Symbolic behaviour of a positive sequence in the field order.

    kind:
      to_zero      -- the values converge to 0 (valuations grow unboundedly)
      to_infinity  -- the values converge to infinity
      two_sided    -- lower <= value(n) for all n, value(n) <= upper for
                      infinitely many n
      unknown      -- no symbolic information
    """

    kind: str
    lower: object = None
    upper: object = None

    TO_ZERO = "to_zero"
    TO_INFINITY = "to_infinity"
    TWO_SIDED = "two_sided"
    UNKNOWN = "unknown"


def _fr(value):
    return Q(value)


@dataclass(frozen=True)
class MonomialRule:
    """value(k) = coeff * eps^(slope*k + offset)."""

    slope: Fraction = Q(1)
    offset: Fraction = Q(0)
    coeff: Fraction = Q(1)

    def __post_init__(self):
        object.__setattr__(self, "slope", _fr(self.slope))
        object.__setattr__(self, "offset", _fr(self.offset))
        object.__setattr__(self, "coeff", _fr(self.coeff))

    def value(self, k: int, field):
        return field.monomial(self.coeff, self.slope * k + self.offset)

    def trend(self, field) -> Trend:
        if self.slope > 0:
            return Trend(Trend.TO_ZERO)
        if self.slope < 0:
            return Trend(Trend.TO_INFINITY)
        constant = self.value(0, field)
        return Trend(Trend.TWO_SIDED, lower=constant, upper=constant)

    def to_json(self):
        return {
            "rule": "eps_pow_k",
            "slope": str(self.slope),
            "offset": str(self.offset),
            "coeff": str(self.coeff),
        }


@dataclass(frozen=True)
class ConstantRule:
    """value(k) = constant."""

    constant: Fraction = Q(1)

    def __post_init__(self):
        object.__setattr__(self, "constant", _fr(self.constant))

    def value(self, k: int, field):
        return field.from_rational(self.constant)

    def trend(self, field) -> Trend:
        bound = self.value(0, field)
        return Trend(Trend.TWO_SIDED, lower=bound, upper=bound)

    def to_json(self):
        return {"rule": "const", "value": str(self.constant)}


@dataclass(frozen=True)
class FactorialMonomialRule:
    """value(k) = k! * eps^(slope*k + offset); with invert=True the
    reciprocal 1/(k! * eps^(slope*k + offset))."""

    slope: Fraction = Q(1)
    offset: Fraction = Q(0)
    invert: bool = False

    def __post_init__(self):
        object.__setattr__(self, "slope", _fr(self.slope))
        object.__setattr__(self, "offset", _fr(self.offset))

    def value(self, k: int, field):
        coefficient = Q(math.factorial(k))
        exponent = self.slope * k + self.offset
        if self.invert:
            coefficient = 1 / coefficient
            exponent = -exponent
        return field.monomial(coefficient, exponent)

    def trend(self, field) -> Trend:
        slope = -self.slope if self.invert else self.slope
        if slope > 0:
            return Trend(Trend.TO_ZERO)
        if slope < 0:
            return Trend(Trend.TO_INFINITY)
        # Constant valuation: rational coefficients never cross an eps power.
        exponent = -self.offset if self.invert else self.offset
        return Trend(
            Trend.TWO_SIDED,
            lower=field.monomial(1, exponent + (1 if self.invert else 0)),
            upper=field.monomial(1, exponent - (0 if self.invert else 1)),
        )

    def to_json(self):
        return {
            "rule": "factorial_eps",
            "slope": str(self.slope),
            "offset": str(self.offset),
            "invert": self.invert,
        }


@dataclass(frozen=True)
class HalfPowerRule:
    """value(k) = eps^(1/2^k): infinitesimal at every level, with valuations
    decreasing to 0, so bounded between eps and 1."""

    def value(self, k: int, field):
        return field.monomial(1, Q(1, 2**k))

    def trend(self, field) -> Trend:
        return Trend(Trend.TWO_SIDED, lower=field.monomial(1, 1), upper=field.one())

    def to_json(self):
        return {"rule": "eps_pow_half_pow_k"}


@dataclass(frozen=True)
class PeriodicRule:
    """value(k) = literals[k mod len(literals)]."""

    literals: Tuple[str, ...]

    def value(self, k: int, field):
        return field.from_literal(self.literals[k % len(self.literals)])

    def trend(self, field) -> Trend:
        values = [field.from_literal(text) for text in self.literals]
        lower = upper = values[0]
        for v in values[1:]:
            if scalars.compare(v, lower) < 0:
                lower = v
            if scalars.compare(v, upper) > 0:
                upper = v
        return Trend(Trend.TWO_SIDED, lower=lower, upper=upper)

    def to_json(self):
        return {"rule": "periodic", "values": list(self.literals)}


@dataclass(frozen=True)
class ExplicitListRule:
    """Finite list of literal weights, optionally extended by a tail rule
    evaluated at the original index."""

    literals: Tuple[str, ...]
    tail: object = None

    def value(self, k: int, field):
        if k < len(self.literals):
            return field.from_literal(self.literals[k])
        if self.tail is not None:
            return self.tail.value(k, field)
        raise HorizonExhaustedError(
            f"weight list has {len(self.literals)} entries and no tail rule "
            f"(requested index {k})"
        )

    @property
    def edge_count(self) -> Optional[int]:
        return None if self.tail is not None else len(self.literals)

    def trend(self, field) -> Trend:
        return self.tail.trend(field) if self.tail is not None else Trend(Trend.UNKNOWN)

    def to_json(self):
        out = {"rule": "custom_list", "values": list(self.literals)}
        if self.tail is not None:
            out["tail"] = self.tail.to_json()
        return out


@dataclass(frozen=True)
class CallableRule:
    """Ad-hoc rule from a plain function; no symbolic trend."""

    fn: Callable[[int], object]

    def value(self, k: int, field):
        return self.fn(k)

    def trend(self, field) -> Trend:
        return Trend(Trend.UNKNOWN)

    def to_json(self):
        return {"rule": "callable"}


def rule_edge_count(rule) -> Optional[int]:
    return getattr(rule, "edge_count", None)


# -- sphere size rules -------------------------------------------------------


@dataclass(frozen=True)
class ConstantSize:
    size: int = 1

    def value(self, k: int) -> int:
        return self.size

    def to_json(self):
        return {"rule": "const", "value": self.size}


@dataclass(frozen=True)
class PowerSize:
    base: int = 2

    def value(self, k: int) -> int:
        return self.base**k

    def to_json(self):
        return {"rule": "pow", "base": self.base}


@dataclass(frozen=True)
class ListSize:
    sizes: Tuple[int, ...]

    def value(self, k: int) -> int:
        if k < len(self.sizes):
            return self.sizes[k]
        raise HorizonExhaustedError(f"sphere size list exhausted at level {k}")

    def to_json(self):
        return {"rule": "list", "values": list(self.sizes)}


@dataclass(frozen=True)
class SphericalProfile:
    """Layered-graph profile: outward sphere weight per level, sphere sizes,
    and optionally the inward sphere weight (validated against the
    compatibility identity #S_k b_plus(k) = #S_{k+1} b_minus(k+1))."""

    b_plus: object
    sphere_sizes: object = dc_field(default_factory=ConstantSize)
    b_minus: object = None


# -- measures -----------------------------------------------------------------


@dataclass(frozen=True)
class ConstantMeasure:
    constant: Fraction = Q(1)

    def value(self, v: int, field):
        return field.from_rational(self.constant)

    def to_json(self):
        return {"rule": "const", "value": str(self.constant)}


@dataclass(frozen=True)
class ListMeasure:
    literals: Tuple[str, ...]
    default: str = "1"

    def value(self, v: int, field):
        text = self.literals[v] if v < len(self.literals) else self.default
        return field.from_literal(text)

    def to_json(self):
        return {"rule": "list", "values": list(self.literals), "default": self.default}


class DegreeMeasure:
    """m(x) = b(x); resolved by the graph, which knows the degrees."""

    def to_json(self):
        return {"rule": "degree"}


# ---------------------------------------------------------------------------
# Structures: how vertices and edges are generated
# ---------------------------------------------------------------------------


class _PathStructure:
    """V = {0, 1, 2, ...} with edges (k, k+1) weighted by a rule."""

    kind = "path"

    def __init__(self, rule, field):
        self.rule = rule
        self.field = field
        self._weights: dict = {}
        self.edge_count = rule_edge_count(rule)

    def _edge_weight(self, k: int):
        if k not in self._weights:
            w = self.rule.value(k, self.field)
            if not scalars.certainly_nonzero(w) or scalars.sign_of(w) <= 0:
                raise NonpositiveWeightError(f"edge ({k},{k + 1}) has nonpositive weight")
            self._weights[k] = w
        return self._weights[k]

    def vertex_exists(self, v: int) -> bool:
        if v < 0:
            return False
        return self.edge_count is None or v <= self.edge_count

    def neighbors_of(self, v: int):
        if not self.vertex_exists(v):
            raise HorizonExhaustedError(f"path vertex {v} outside the graph")
        out = []
        if v > 0:
            out.append((v - 1, self._edge_weight(v - 1)))
        if self.edge_count is None or v < self.edge_count:
            out.append((v + 1, self._edge_weight(v)))
        return out

    @property
    def vertex_count(self) -> Optional[int]:
        return None if self.edge_count is None else self.edge_count + 1

    def weight_rule(self):
        return self.rule

    def evaluated_at(self, r0: Fraction):
        return _PathStructure(_EvaluatedRule(self.rule, self.field, r0), RationalField)


class _EvaluatedRule:
    """A rational-function rule evaluated at a rational point r0 > 0."""

    def __init__(self, base, rf_field, r0):
        self.base = base
        self.rf_field = rf_field
        self.r0 = Q(r0)

    def value(self, k: int, field):
        w = self.base.value(k, self.rf_field).eval_at(self.r0)
        if w <= 0:
            raise NonpositiveWeightError(
                f"weight at index {k} evaluates to {w} <= 0 at r = {self.r0}"
            )
        return w

    def trend(self, field) -> Trend:
        return Trend(Trend.UNKNOWN)

    def to_json(self):
        return {"rule": "evaluated", "r": str(self.r0), "base": self.base.to_json()}


class _SphericalStructure:
    """Layered realization of a weakly spherically symmetric profile:
    consecutive spheres are joined completely with a uniform edge weight, so
    b_plus and b_minus depend on the level only."""

    kind = "spherical"

    def __init__(self, profile: SphericalProfile, field):
        self.profile = profile
        self.field = field
        self._starts = [0, 1]  # vertex index where each level starts
        self._level_weights: dict = {}
        if profile.sphere_sizes.value(0) != 1:
            raise IncompatibleProfileError("sphere 0 must contain exactly the root")

    def _size(self, level: int) -> int:
        size = self.profile.sphere_sizes.value(level)
        if size < 1:
            raise IncompatibleProfileError(f"sphere {level} has nonpositive size")
        return size

    def _ensure_level(self, level: int):
        while len(self._starts) <= level + 1:
            k = len(self._starts) - 1
            self._starts.append(self._starts[-1] + self._size(k))

    def _level_of(self, v: int) -> int:
        level = 0
        self._ensure_level(1)
        while True:
            self._ensure_level(level + 1)
            if v < self._starts[level + 1]:
                return level
            level += 1

    def _edge_weight(self, level: int):
        """Uniform weight of one edge between sphere `level` and `level+1`."""
        if level not in self._level_weights:
            b_plus = self.profile.b_plus.value(level, self.field)
            if scalars.sign_of(b_plus) <= 0:
                raise NonpositiveWeightError(f"b_plus({level}) is nonpositive")
            w = b_plus / self.field.from_rational(self._size(level + 1))
            if self.profile.b_minus is not None:
                implied = w * self.field.from_rational(self._size(level))
                stated = self.profile.b_minus.value(level + 1, self.field)
                if not scalars.indistinguishable(implied, stated):
                    raise IncompatibleProfileError(
                        f"#S_{level} * b_plus({level}) != "
                        f"#S_{level + 1} * b_minus({level + 1})"
                    )
            self._level_weights[level] = w
        return self._level_weights[level]

    def vertex_exists(self, v: int) -> bool:
        return v >= 0

    def neighbors_of(self, v: int):
        level = self._level_of(v)
        out = []
        if level > 0:
            w = self._edge_weight(level - 1)
            out.extend(
                (u, w) for u in range(self._starts[level - 1], self._starts[level])
            )
        w = self._edge_weight(level)
        self._ensure_level(level + 2)
        out.extend((u, w) for u in range(self._starts[level + 1], self._starts[level + 2]))
        return out

    @property
    def vertex_count(self) -> Optional[int]:
        return None

    def weight_rule(self):
        return self.profile.b_plus

    def sphere_sizes(self):
        return self.profile.sphere_sizes


class _ExplicitStructure:
    kind = "explicit"

    def __init__(self, n: int, edges, field):
        self.n = n
        adjacency = {v: {} for v in range(n)}
        for x, y, w in edges:
            if not (0 <= x < n and 0 <= y < n):
                raise SpecFileError(f"edge ({x},{y}) outside vertex range 0..{n - 1}")
            if x == y:
                raise SpecFileError(f"loop edge at vertex {x} not allowed")
            if scalars.sign_of(w) <= 0:
                raise NonpositiveWeightError(f"edge ({x},{y}) has nonpositive weight")
            adjacency[x][y] = w
            adjacency[y][x] = w
        self.adjacency = {v: dict(sorted(nbrs.items())) for v, nbrs in adjacency.items()}

    def vertex_exists(self, v: int) -> bool:
        return 0 <= v < self.n

    def neighbors_of(self, v: int):
        if not self.vertex_exists(v):
            raise HorizonExhaustedError(f"vertex {v} outside explicit graph")
        return list(self.adjacency[v].items())

    @property
    def vertex_count(self) -> Optional[int]:
        return self.n

    def weight_rule(self):
        return None


# ---------------------------------------------------------------------------
# The graph itself
# ---------------------------------------------------------------------------


class WeightedGraph:
    """Immutable-by-contract weighted graph.  Internally the materialized
    horizon grows monotonically (append-only caches), which is invisible to
    callers; all public methods are pure."""

    def __init__(self, structure, field, measure=None, label=""):
        self._structure = structure
        self.field = field
        self.measure_rule = measure if measure is not None else ConstantMeasure()
        self.label = label
        self._neighbors: dict = {}
        self._degree: dict = {}

    # -- basic access ------------------------------------------------------

    @property
    def kind(self) -> str:
        return self._structure.kind

    @property
    def vertex_count(self) -> Optional[int]:
        """Number of vertices for finite graphs, None for generator-backed."""
        return self._structure.vertex_count

    @property
    def is_finite(self) -> bool:
        return self.vertex_count is not None

    def neighbors(self, v: int) -> dict:
        if v not in self._neighbors:
            pairs = sorted(self._structure.neighbors_of(v))
            self._neighbors[v] = dict(pairs)
        return self._neighbors[v]

    def weight(self, x: int, y: int):
        return self.neighbors(x).get(y, self.field.zero())

    def degree_weight(self, v: int):
        """b(v), the sum of incident edge weights."""
        if v not in self._degree:
            total = self.field.zero()
            for w in self.neighbors(v).values():
                total = total + w
            self._degree[v] = total
        return self._degree[v]

    def measure(self, v: int):
        if isinstance(self.measure_rule, DegreeMeasure):
            return self.degree_weight(v)
        return self.measure_rule.value(v, self.field)

    # -- balls and boundaries -------------------------------------------------

    def ball(self, a: int, n: int) -> tuple:
        """Vertices at combinatorial distance < n from a, in breadth-first
        order (the canonical enumeration order used by the solvers)."""
        if n < 1:
            raise ValueError("ball radius must be at least 1")
        if not self._structure.vertex_exists(a):
            raise HorizonExhaustedError(f"root vertex {a} outside the graph")
        distances = self.distances_from(a, n - 1)
        return tuple(distances.keys())

    def distances_from(self, a: int, radius: int) -> dict:
        """BFS distance map for all vertices within the given radius."""
        dist = {a: 0}
        frontier = [a]
        d = 0
        while frontier and d < radius:
            d += 1
            new_frontier = []
            for x in frontier:
                for y in self.neighbors(x):
                    if y not in dist:
                        dist[y] = d
                        new_frontier.append(y)
            frontier = new_frontier
        return dist

    def boundary_weight(self, vertices):
        """b(boundary W) = sum of b(x, y) over x in W, y outside W."""
        inside = set(vertices)
        total = self.field.zero()
        for x in sorted(inside):
            for y, w in self.neighbors(x).items():
                if y not in inside:
                    total = total + w
        return total

    def is_connected_subset(self, vertices) -> bool:
        vertices = set(vertices)
        if not vertices:
            return False
        start = next(iter(sorted(vertices)))
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in self.neighbors(x):
                if y in vertices and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen == vertices

    # -- metadata for classification -----------------------------------------------

    @property
    def weight_rule(self):
        return self._structure.weight_rule()

    @property
    def sphere_sizes(self):
        if self.kind == "spherical":
            return self._structure.sphere_sizes()
        if self.kind == "path":
            return ConstantSize(1)
        return None

    # -- derived graphs ---------------------------------------------------------

    def with_degree_measure(self) -> "WeightedGraph":
        return WeightedGraph(self._structure, self.field, DegreeMeasure(), self.label)

    def with_measure(self, measure) -> "WeightedGraph":
        return WeightedGraph(self._structure, self.field, measure, self.label)

    def evaluated_at(self, r0) -> "WeightedGraph":
        """For a rational-function graph: the real-weighted graph obtained by
        substituting r = r0 (exact rational arithmetic)."""
        if self.field is not RationalFunctionField:
            raise SpecFileError("evaluated_at applies to rational-function graphs")
        if self.kind != "path":
            raise SpecFileError("real evaluation is implemented for path graphs")
        structure = self._structure.evaluated_at(Q(r0))
        return WeightedGraph(structure, RationalField, ConstantMeasure(), self.label)


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------


def _as_rule(rule):
    if callable(rule) and not hasattr(rule, "value"):
        return CallableRule(rule)
    return rule


def make_path(weight_rule, measure=None, field=LeviCivitaField, label="") -> WeightedGraph:
    """Path graph on {0, 1, 2, ...} with b(k, k+1) given by the rule and
    measure 1 unless stated otherwise."""
    return WeightedGraph(_PathStructure(_as_rule(weight_rule), field), field, measure, label)


def make_spherical(profile: SphericalProfile, measure=None, field=LeviCivitaField, label="") -> WeightedGraph:
    """Layered graph realizing a weakly spherically symmetric profile."""
    return WeightedGraph(_SphericalStructure(profile, field), field, measure, label)


def make_explicit(n: int, edges, measure=None, field=LeviCivitaField, label="") -> WeightedGraph:
    """Finite graph from an explicit edge list [(x, y, weight), ...]."""
    graph = WeightedGraph(_ExplicitStructure(n, edges, field), field, measure, label)
    if not graph.is_connected_subset(range(n)):
        from .errors import DisconnectedSetError

        raise DisconnectedSetError("explicit graph is not connected")
    return graph
