"""Truncated Levi-Civita field arithmetic with certified precision.

Elements are finite formal series ``sum a_i * e^(q_i)`` with rational
coefficients ``a_i`` and strictly increasing rational exponents ``q_i``,
ordered lexicographically by the leading coefficient (``x > 0`` iff the
coefficient at the least exponent is positive).  ``e`` is a fixed positive
infinitesimal.

Every element carries a *guarantee exponent*: all behaviour at exponents
strictly below it is exact, everything at or above it is unknown.  Exact
elements have an infinite guarantee.  Arithmetic truncates results to a
window of configurable width above the valuation and to a maximum term
count; any truncation lowers the guarantee instead of silently pretending
exactness.  Sign and ordering queries that cannot be certified raise
IndeterminateComparisonError rather than guessing.

All values are immutable and all operations are pure functions of their
operands and the active PrecisionConfig, so they are safe to share across
threads.
"""

from __future__ import annotations

import contextvars
import enum
import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Tuple, Union

from .exact import Q, RATIONAL_TYPES
from .errors import (
    FieldParseError,
    IndeterminateComparisonError,
    TermOverflowError,
)

INF = math.inf

Exponent = Fraction
Coefficient = Fraction  # documented type; internally gmpy2 mpq when available
Guarantee = Union[Fraction, float]  # a Fraction, or math.inf for "exact"


@dataclass(frozen=True)
class PrecisionConfig:
    """Truncation policy for series arithmetic.

    window: width W of the kept exponent range [valuation, valuation + W).
    max_terms: maximum stored terms per element.
    geometric_series_depth: number of geometric-series terms used by
        inversion before the remainder is absorbed into the guarantee.
    """

    window: Fraction = Fraction(32)
    max_terms: int = 256
    geometric_series_depth: int = 64

    def __post_init__(self):
        object.__setattr__(self, "window", Q(self.window))
        if self.window <= 0:
            raise ValueError("window must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be at least 1")
        if self.geometric_series_depth < 1:
            raise ValueError("geometric_series_depth must be at least 1")

    def doubled(self) -> "PrecisionConfig":
        """A twice-as-precise configuration, used to retry indeterminate
        comparisons."""
        return PrecisionConfig(
            window=self.window * 2,
            max_terms=self.max_terms * 2,
            geometric_series_depth=self.geometric_series_depth * 2,
        )


_ACTIVE: contextvars.ContextVar[PrecisionConfig] = contextvars.ContextVar(
    "nacap_precision", default=PrecisionConfig()
)


def active_precision() -> PrecisionConfig:
    return _ACTIVE.get()


@contextmanager
def precision(config: PrecisionConfig | None = None, **overrides):
    """Run a block under a given precision configuration.

    Either pass a full PrecisionConfig or keyword overrides of the active
    one, e.g. ``with precision(window=8):``.
    """
    base = config if config is not None else active_precision()
    if overrides:
        fields = {
            "window": base.window,
            "max_terms": base.max_terms,
            "geometric_series_depth": base.geometric_series_depth,
        }
        fields.update(overrides)
        base = PrecisionConfig(**fields)
    token = _ACTIVE.set(base)
    try:
        yield base
    finally:
        _ACTIVE.reset(token)


class Classification(enum.Enum):
    ZERO = "zero"
    INFINITESIMAL = "infinitesimal"
    FINITE = "finite_nonzero_standard_part"
    INFINITELY_LARGE = "infinitely_large"


def _finalize(terms, guarantee, cfg: PrecisionConfig) -> "LCElement":
    """Apply guarantee, window and term-count truncation to a sorted list of
    (exponent, coefficient) pairs with nonzero coefficients."""
    if terms and guarantee != INF:
        terms = [t for t in terms if t[0] < guarantee]
    if terms:
        cut = terms[0][0] + cfg.window
        if terms[-1][0] >= cut:
            terms = [t for t in terms if t[0] < cut]
            guarantee = min(guarantee, cut)
        if len(terms) > cfg.max_terms:
            guarantee = min(guarantee, terms[cfg.max_terms][0])
            terms = terms[: cfg.max_terms]
    return LCElement(tuple(terms), guarantee)


@dataclass(frozen=True)
class LCElement:
    """A truncated Levi-Civita series with a precision certificate.

    terms: ((exponent, coefficient), ...) with strictly increasing exponents
        and nonzero coefficients, every exponent below ``guarantee``.
    guarantee: exponent below which the element is exact (math.inf if the
        element is exact everywhere).  An empty term list with an infinite
        guarantee is the exact zero; with a finite guarantee it is a
        "zero-like" element whose sign cannot be certified.

    Equality (`==`) is structural.  Order comparisons (<, <=, >, >=) follow
    the field order and raise IndeterminateComparisonError when the
    difference vanishes within a finite guarantee.
    """

    terms: Tuple[Tuple[Exponent, Coefficient], ...] = ()
    guarantee: Guarantee = INF

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero() -> "LCElement":
        return _ZERO

    @staticmethod
    def one() -> "LCElement":
        return _ONE

    @staticmethod
    def rational(value) -> "LCElement":
        value = Q(value)
        if value == 0:
            return _ZERO
        return LCElement(((Q(0), value),), INF)

    @staticmethod
    def monomial(coefficient, exponent) -> "LCElement":
        coefficient = Q(coefficient)
        if coefficient == 0:
            return _ZERO
        return LCElement(((Q(exponent), coefficient),), INF)

    @staticmethod
    def eps(exponent=1, coefficient=1) -> "LCElement":
        return LCElement.monomial(coefficient, exponent)

    @staticmethod
    def from_terms(pairs: Iterable[tuple], guarantee: Guarantee = INF) -> "LCElement":
        """Build an element from (exponent, coefficient) pairs.

        Pairs are sorted and coefficients at equal exponents are summed;
        more terms than the configured maximum is an error here (unlike in
        arithmetic, which truncates and degrades the guarantee)."""
        acc: dict = {}
        for exponent, coefficient in pairs:
            exponent = Q(exponent)
            coefficient = Q(coefficient)
            acc[exponent] = acc.get(exponent, Q(0)) + coefficient
        terms = sorted((e, c) for e, c in acc.items() if c != 0)
        if guarantee != INF:
            guarantee = Q(guarantee)
            terms = [t for t in terms if t[0] < guarantee]
        cfg = active_precision()
        if len(terms) > cfg.max_terms:
            raise TermOverflowError(
                f"element with {len(terms)} terms exceeds max_terms={cfg.max_terms}"
            )
        return LCElement(tuple(terms), guarantee)

    # -- basic queries -----------------------------------------------------

    @property
    def valuation(self) -> Guarantee:
        """Least exponent with a nonzero stored coefficient; +inf when no
        term is stored (exact zero, or zero within the guarantee)."""
        return self.terms[0][0] if self.terms else INF

    @property
    def is_exact(self) -> bool:
        return self.guarantee == INF

    @property
    def is_exact_zero(self) -> bool:
        return not self.terms and self.guarantee == INF

    @property
    def is_zero_like(self) -> bool:
        """True when no term is stored: the element is zero within its
        guarantee (exactly zero iff the guarantee is infinite)."""
        return not self.terms

    def __bool__(self) -> bool:
        # True iff certainly nonzero.
        return bool(self.terms)

    @property
    def leading_coefficient(self) -> Coefficient:
        if not self.terms:
            raise IndeterminateComparisonError("zero-like element has no leading term")
        return self.terms[0][1]

    def standard_part(self) -> Fraction:
        """Coefficient at exponent 0 (the real shadow of a finite element)."""
        for exponent, coefficient in self.terms:
            if exponent == 0:
                return coefficient
            if exponent > 0:
                break
        return Q(0)

    def classify(self) -> Classification:
        if not self.terms:
            if self.guarantee == INF:
                return Classification.ZERO
            raise IndeterminateComparisonError(
                "cannot classify an element that vanishes within a finite guarantee"
            )
        lam = self.terms[0][0]
        if lam > 0:
            return Classification.INFINITESIMAL
        if lam < 0:
            return Classification.INFINITELY_LARGE
        return Classification.FINITE

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, LCElement):
            return other
        if isinstance(other, RATIONAL_TYPES):
            return LCElement.rational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        cfg = active_precision()
        acc = dict(self.terms)
        for exponent, coefficient in other.terms:
            value = acc.get(exponent, Q(0)) + coefficient
            if value == 0:
                acc.pop(exponent, None)
            else:
                acc[exponent] = value
        guarantee = min(self.guarantee, other.guarantee)
        return _finalize(sorted(acc.items()), guarantee, cfg)

    __radd__ = __add__

    def __neg__(self):
        return LCElement(tuple((e, -c) for e, c in self.terms), self.guarantee)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        cfg = active_precision()
        guarantee = min(
            self.guarantee + other.valuation,
            other.guarantee + self.valuation,
            self.guarantee + other.guarantee,
        )
        acc: dict = {}
        for ex, cx in self.terms:
            for ey, cy in other.terms:
                exponent = ex + ey
                value = acc.get(exponent, Q(0)) + cx * cy
                if value == 0:
                    acc.pop(exponent, None)
                else:
                    acc[exponent] = value
        return _finalize(sorted(acc.items()), guarantee, cfg)

    __rmul__ = __mul__

    def _scaled(self, coefficient: Fraction, shift: Fraction) -> "LCElement":
        # Exact multiplication by a monomial; no re-truncation needed.
        guarantee = self.guarantee if self.guarantee == INF else self.guarantee + shift
        return LCElement(
            tuple((e + shift, c * coefficient) for e, c in self.terms), guarantee
        )

    def inv(self) -> "LCElement":
        """Multiplicative inverse via leading-term factorization
        x = a0*e^(q0)*(1+h) and a truncated geometric series in h."""
        if not self.terms:
            if self.guarantee == INF:
                raise ZeroDivisionError("inverse of zero")
            raise IndeterminateComparisonError(
                "cannot invert an element that vanishes within its guarantee"
            )
        cfg = active_precision()
        q0, a0 = self.terms[0]
        gh = INF if self.guarantee == INF else self.guarantee - q0
        h = _finalize([(e - q0, c / a0) for e, c in self.terms[1:]], gh, cfg)
        one = _ONE
        series = one + (-h)
        if h.terms:
            lam = h.terms[0][0]
            steps = min(
                cfg.geometric_series_depth - 1,
                int(math.ceil(cfg.window / lam)) + 1,
            )
            neg_h = -h
            for _ in range(steps - 1):
                series = one + neg_h * series
            remainder = (steps + 1) * lam
            if remainder < series.guarantee:
                series = _finalize(list(series.terms), remainder, cfg)
        return _finalize(
            [(e - q0, c / a0) for e, c in series.terms],
            series.guarantee if series.guarantee == INF else series.guarantee - q0,
            cfg,
        )

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inv()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inv() ** (-n)
        result = _ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- order --------------------------------------------------------------

    def compare(self, other) -> int:
        """Certified three-way comparison: -1, 0 or +1.

        0 is returned only for an exactly-zero difference; a difference that
        vanishes within a finite guarantee raises."""
        other = self._coerce(other)
        if other is NotImplemented:
            raise TypeError(f"cannot compare LCElement with {type(other)!r}")
        diff = self - other
        if diff.terms:
            return 1 if diff.terms[0][1] > 0 else -1
        if diff.guarantee == INF:
            return 0
        raise IndeterminateComparisonError(
            "difference vanishes within finite guarantee "
            f"(guarantee exponent {diff.guarantee}); rerun with a larger window"
        )

    def sign(self) -> int:
        if self.terms:
            return 1 if self.terms[0][1] > 0 else -1
        if self.guarantee == INF:
            return 0
        raise IndeterminateComparisonError(
            "sign of an element that vanishes within a finite guarantee"
        )

    def indistinguishable(self, other) -> bool:
        """True when the difference carries no certified term, i.e. the two
        elements agree everywhere below the combined guarantee."""
        other = self._coerce(other)
        if other is NotImplemented:
            raise TypeError(f"cannot compare LCElement with {type(other)!r}")
        return not (self - other).terms

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def abs(self) -> "LCElement":
        return -self if self.sign() < 0 else self

    def with_guarantee(self, guarantee) -> "LCElement":
        """Lower the guarantee (never raises it); terms at or above the new
        guarantee are dropped.  Used when a caller knows an omitted tail."""
        g = min(self.guarantee, guarantee)
        return LCElement(tuple(t for t in self.terms if t[0] < g), g)

    # -- formatting -----------------------------------------------------------

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        g = "inf" if self.guarantee == INF else str(self.guarantee)
        return f"LCElement({format_element(self)!r}, guarantee={g})"


_ZERO = LCElement((), INF)
_ONE = LCElement(((Q(0), Q(1)),), INF)


# ---------------------------------------------------------------------------
# Literal grammar
#
#   element  := term (("+" | "-") term)*
#   term     := rational | rational "*" eps | eps
#   eps      := "e" "^" "(" rational ")"
#   rational := ["-"] digits ["/" digits]
#
# Canonical output: ascending exponents, no zero coefficients, explicit "*",
# the exponent-zero term printed as a bare rational.
# ---------------------------------------------------------------------------


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str | None:
        self._skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else None

    def expect(self, char: str):
        self._skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != char:
            raise FieldParseError(f"expected {char!r}", self.pos)
        self.pos += 1

    def digits(self) -> int:
        self._skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise FieldParseError("expected digits", start)
        return int(self.text[start : self.pos])

    def rational(self) -> Fraction:
        self._skip_ws()
        sign = 1
        if self.peek() == "-":
            self.expect("-")
            sign = -1
        numerator = self.digits()
        if self.peek() == "/":
            self.expect("/")
            denominator = self.digits()
            if denominator == 0:
                raise FieldParseError("zero denominator", self.pos - 1)
            return Q(sign * numerator, denominator)
        return Q(sign * numerator)


def parse_element(text: str) -> LCElement:
    """Parse a field-element literal; exact result (infinite guarantee)."""
    tok = _Tokenizer(text)
    seen: dict = {}

    def read_term(sign: int):
        char = tok.peek()
        if char is None:
            raise FieldParseError("expected a term", tok.pos)
        if char == "e":
            coefficient = Q(sign)
            exponent = _read_eps(tok)
        else:
            coefficient = sign * tok.rational()
            if tok.peek() == "*":
                tok.expect("*")
                exponent = _read_eps(tok)
            else:
                exponent = Q(0)
        position = tok.pos
        if exponent in seen:
            raise FieldParseError(f"duplicate exponent {exponent}", position)
        seen[exponent] = coefficient

    read_term(1)
    while True:
        char = tok.peek()
        if char is None:
            break
        if char == "+":
            tok.expect("+")
            read_term(1)
        elif char == "-":
            tok.expect("-")
            read_term(-1)
        else:
            raise FieldParseError(f"unexpected character {char!r}", tok.pos)
    terms = sorted((e, c) for e, c in seen.items() if c != 0)
    return LCElement(tuple(terms), INF)


def _read_eps(tok: _Tokenizer) -> Fraction:
    tok.expect("e")
    tok.expect("^")
    tok.expect("(")
    exponent = tok.rational()
    tok.expect(")")
    return exponent


def format_element(x: LCElement) -> str:
    """Canonical literal: ascending exponents, explicit '*', bare rational
    for the exponent-zero term."""
    if not x.terms:
        return "0"
    parts = []
    for i, (exponent, coefficient) in enumerate(x.terms):
        if i == 0:
            sign = "-" if coefficient < 0 else ""
        else:
            sign = " - " if coefficient < 0 else " + "
        magnitude = -coefficient if coefficient < 0 else coefficient
        if exponent == 0:
            parts.append(f"{sign}{magnitude}")
        else:
            parts.append(f"{sign}{magnitude}*e^({exponent})")
    return "".join(parts)


def guarantee_str(guarantee: Guarantee) -> str:
    return "inf" if guarantee == INF or guarantee == INF else str(guarantee)
