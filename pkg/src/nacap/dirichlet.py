"""Exact Dirichlet problems on finite connected vertex sets.

Solves the potential-normalized problem (harmonic on K minus the root,
value 1 at the root, 0 outside K) and the charge-normalized variant
(Laplacian equal to the root indicator on K), both by exact Gaussian
elimination over the graph's scalar field.  The effective capacity of the
root is the charge of the solution; by the discrete Green formula it
coincides with the solution's energy and is independent of the vertex
measure.

Variable ordering is the breadth-first enumeration of K from the root, so
results are bit-for-bit reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from . import scalars
from .errors import (
    DisconnectedSetError,
    PreconditionError,
    PrecisionExhaustedError,
)

__all__ = [
    "DirichletSolution",
    "solve_dp",
    "solve_renormalized",
    "effective_capacity",
    "energy",
    "laplacian_apply",
    "green_matrix",
    "dirichlet_inverse_apply",
]


@dataclass(frozen=True)
class DirichletSolution:
    """Solution of a Dirichlet problem on a finite set K.

    values maps vertices of K to field elements (implicitly zero outside K);
    normalization is "potential" (value 1 at the root) or "charge"
    (Laplacian 1 at the root).  capacity is the effective capacity of the
    root within K and equals the solution's energy in the potential case.
    """

    vertices: tuple
    root: int
    values: Mapping
    normalization: str
    energy: object
    capacity: object

    def value(self, graph, x):
        return self.values.get(x, graph.field.zero())


def _bfs_order(graph, K, a):
    members = set(K)
    if a not in members:
        raise ValueError(f"root {a} not in K")
    order = [a]
    seen = {a}
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        for y in graph.neighbors(x):
            if y in members and y not in seen:
                seen.add(y)
                order.append(y)
    if seen != members:
        raise DisconnectedSetError("K is not connected")
    return order


def _solve_system(rows, rhs, zero):
    """Exact Gaussian elimination with pivoting by certified nonzero.

    rows is a list of sparse dicts (column -> coefficient); the matrix is
    positive definite in the field order, so at sufficient precision a
    certified-nonzero pivot exists in every column."""
    m = len(rows)
    for col in range(m):
        pivot_row = None
        saw_zero_like = False
        for r in range(col, m):
            entry = rows[r].get(col)
            if entry is None:
                continue
            if scalars.certainly_nonzero(entry):
                pivot_row = r
                break
            saw_zero_like = saw_zero_like or scalars.is_zero_like(entry)
        if pivot_row is None:
            if saw_zero_like:
                raise PrecisionExhaustedError(
                    f"no certified pivot in column {col}; rerun with a larger window"
                )
            raise DisconnectedSetError("singular Dirichlet system")
        if pivot_row != col:
            rows[col], rows[pivot_row] = rows[pivot_row], rows[col]
            rhs[col], rhs[pivot_row] = rhs[pivot_row], rhs[col]
        pivot = rows[col][col]
        pivot_inv = scalars.invert(pivot)
        for r in range(col + 1, m):
            entry = rows[r].get(col)
            if entry is None:
                continue
            if not scalars.certainly_nonzero(entry) and not scalars.is_zero_like(entry):
                rows[r].pop(col, None)  # exact zero, nothing to eliminate
                continue
            # Zero-like entries are eliminated too: the multiplication and
            # subtraction propagate their finite guarantees instead of
            # pretending the entry is an exact zero.
            factor = entry * pivot_inv
            row_col = rows[col]
            target = rows[r]
            for c, value in row_col.items():
                if c == col:
                    # Below-diagonal positions are never read again.
                    target.pop(col, None)
                    continue
                updated = target.get(c, zero) - factor * value
                if scalars.certainly_nonzero(updated) or scalars.is_zero_like(updated):
                    target[c] = updated
                else:
                    target.pop(c, None)
            rhs[r] = rhs[r] - factor * rhs[col]
    solution = [zero] * m
    for col in range(m - 1, -1, -1):
        acc = rhs[col]
        for c, value in rows[col].items():
            if c > col:
                acc = acc - value * solution[c]
        solution[col] = acc * scalars.invert(rows[col][col])
    return solution


def solve_dp(graph, K, a) -> DirichletSolution:
    """Unique solution of the potential-normalized Dirichlet problem on the
    finite connected set K with root a.

    The solution satisfies 0 < v <= 1 on K (verified), and its energy equals
    the effective capacity of a within K."""
    order = _bfs_order(graph, K, a)
    zero = graph.field.zero()
    one = graph.field.one()
    members = set(order)
    interior = order[1:]
    index = {v: i for i, v in enumerate(interior)}

    values = {a: one}
    if interior:
        rows = []
        rhs = []
        for x in interior:
            row = {index[x]: graph.degree_weight(x)}
            b = zero
            for y, w in graph.neighbors(x).items():
                if y == a:
                    b = b + w
                elif y in members:
                    row[index[y]] = -w
            rows.append(row)
            rhs.append(b)
        solution = _solve_system(rows, rhs, zero)
        for x in interior:
            values[x] = solution[index[x]]
        for x in interior:
            v = values[x]
            # 0 < v <= 1 on K: strict positivity must be certified; the upper
            # bound is violated only by a certified positive excess (v equal
            # to 1 within its guarantee is fine).
            if not scalars.certainly_positive(v):
                if scalars.is_zero_like(v):
                    raise PrecisionExhaustedError(
                        f"solution value at vertex {x} not certified positive"
                    )
                raise AssertionError(f"maximum principle violated at vertex {x}")
            if scalars.certainly_positive(v - one):
                raise AssertionError(f"maximum principle violated at vertex {x}")

    capacity = graph.degree_weight(a)
    for y, w in graph.neighbors(a).items():
        if y in members:
            capacity = capacity - values[y] * w
    return DirichletSolution(
        vertices=tuple(order),
        root=a,
        values=values,
        normalization="potential",
        energy=capacity,
        capacity=capacity,
    )


def solve_renormalized(graph, K, a) -> DirichletSolution:
    """Charge-normalized solution: Laplacian equal to the indicator of a on
    K, zero outside.  Related to the potential solution v by
    v_charge = v / (Delta v(a)) and capacity = m(a) / v_charge(a)."""
    base = solve_dp(graph, K, a)
    capacity = base.capacity
    if not scalars.certainly_nonzero(capacity):
        if scalars.is_zero_like(capacity):
            raise PrecisionExhaustedError(
                "capacity not certified nonzero; cannot renormalize"
            )
        # Exact zero: K exhausts a finite graph, constants are harmonic and
        # the charge-normalized problem has no solution.
        raise PreconditionError(
            "the boundary of K is empty; the charge-normalized problem is singular"
        )
    scale = graph.measure(a) * scalars.invert(capacity)
    values = {x: v * scale for x, v in base.values.items()}
    return DirichletSolution(
        vertices=base.vertices,
        root=a,
        values=values,
        normalization="charge",
        energy=base.energy * scale * scale,
        capacity=capacity,
    )


def effective_capacity(graph, K, a):
    """cap_K(a): the charge of the potential-normalized solution at a.
    Independent of the measure and monotone decreasing in K."""
    return solve_dp(graph, K, a).capacity


def _as_function(f):
    return f if callable(f) else (lambda x, mapping=f: mapping.get(x, None))


def energy(graph, phi: Mapping):
    """Quadratic form Q(phi) = 1/2 sum (phi(x)-phi(y))^2 b(x,y) for a
    finitely supported phi given as a vertex -> value mapping."""
    zero = graph.field.zero()
    total = zero
    seen = set()
    for x, vx in phi.items():
        for y, w in graph.neighbors(x).items():
            pair = (x, y) if x < y else (y, x)
            if pair in seen:
                continue
            seen.add(pair)
            diff = vx - phi.get(y, zero)
            total = total + diff * diff * w
    return total


def pairing(graph, f: Mapping, g: Mapping):
    """Dual pairing <f, g> = sum f(x) g(x) m(x) over the support of f."""
    total = graph.field.zero()
    for x, fx in f.items():
        gx = g.get(x)
        if gx is not None:
            total = total + fx * gx * graph.measure(x)
    return total


def laplacian_apply(graph, f, x):
    """Delta f(x) = (1/m(x)) sum (f(x) - f(y)) b(x, y); f may be a mapping
    (zero off its keys) or a callable defined on the needed vertices."""
    zero = graph.field.zero()
    if callable(f):
        fetch = f
    else:
        fetch = lambda v: f.get(v, zero)  # noqa: E731
    fx = fetch(x)
    total = zero
    for y, w in graph.neighbors(x).items():
        total = total + (fx - fetch(y)) * w
    return total * scalars.invert(graph.measure(x))


def green_matrix(graph, K, y) -> Mapping:
    """Column x -> G_K(x, y) of the inverse Dirichlet Laplacian on K, i.e.
    the charge-normalized solution rooted at y."""
    return solve_renormalized(graph, K, y).values


def dirichlet_inverse_apply(graph, K, phi: Mapping) -> Mapping:
    """Solve Delta_K u = phi on K (u zero outside K) for an arbitrary
    right-hand side supported in K."""
    order = _bfs_order(graph, K, next(iter(K)))
    zero = graph.field.zero()
    members = set(order)
    index = {v: i for i, v in enumerate(order)}
    rows = []
    rhs = []
    for x in order:
        row = {index[x]: graph.degree_weight(x)}
        for y, w in graph.neighbors(x).items():
            if y in members:
                row[index[y]] = -w
        rows.append(row)
        rhs.append(graph.measure(x) * phi.get(x, zero))
    solution = _solve_system(rows, rhs, zero)
    return {x: solution[index[x]] for x in order}
