"""Dimension of the dynamical Lie algebra spanned by a template's generators.

Operators are handled as Hermitian Pauli sums ``G`` standing for ``iG``; the
bracket of ``iA`` and ``iB`` is ``i (i[A, B])`` so ``i[A, B]`` is again a real
combination of Pauli strings. Linear independence is tracked by reduced row
echelon elimination over the Pauli-string basis.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .pauli import PauliSum, commutator

PIVOT_TOL = 1e-10


def circuit_generators(template) -> list[PauliSum]:
    """Sum of the gate generators bound to each slot, in slot order."""
    gens = [PauliSum.zero(template.n) for _ in range(template.n_l)]
    for g in template.layer.gates:
        gens[g.slot] = gens[g.slot] + g.generator
    return gens


def lie_bracket(a: PauliSum, b: PauliSum) -> PauliSum:
    """``i[a, b]``: Hermitian whenever ``a`` and ``b`` are."""
    return commutator(a, b) * 1j


class OperatorBasis:
    """Linearly independent real vectors over Pauli strings, kept fully reduced."""

    def __init__(self, tol: float = PIVOT_TOL):
        self.tol = tol
        self.rows: dict[tuple[int, int], dict[tuple[int, int], float]] = {}

    def __len__(self) -> int:
        return len(self.rows)

    @staticmethod
    def _vector(op: PauliSum) -> dict[tuple[int, int], float]:
        vec = {}
        for k, c in op.items():
            if abs(c.imag) > 1e-9 * max(1.0, abs(c.real)):
                raise ValueError("operator is not Hermitian; basis works over real coefficients")
            vec[k] = c.real
        return vec

    def residual(self, op: PauliSum) -> dict[tuple[int, int], float]:
        vec = self._vector(op)
        if not vec:
            return {}
        scale = max(abs(v) for v in vec.values())
        vec = {k: v / scale for k, v in vec.items()}
        for key in [k for k in vec if k in self.rows]:
            c = vec.get(key, 0.0)
            if c == 0.0:
                continue
            for k, v in self.rows[key].items():
                vec[k] = vec.get(k, 0.0) - c * v
        return {k: v for k, v in vec.items() if abs(v) > self.tol}

    def add(self, op: PauliSum) -> bool:
        """Add ``op`` if it is independent of the current span."""
        res = self.residual(op)
        if not res:
            return False
        pivot = max(res, key=lambda k: (abs(res[k]), k))
        p = res[pivot]
        row = {k: v / p for k, v in res.items()}
        row[pivot] = 1.0
        for other in self.rows.values():
            c = other.get(pivot)
            if c:
                for k, v in row.items():
                    nv = other.get(k, 0.0) - c * v
                    if abs(nv) > self.tol * 1e-2:
                        other[k] = nv
                    else:
                        other.pop(k, None)
                other.pop(pivot, None)
        self.rows[pivot] = row
        return True

    def contains(self, op: PauliSum) -> bool:
        return not self.residual(op)


@dataclass
class ClosureResult:
    dim: int
    basis: list[PauliSum]
    truncated: bool


def lie_closure(gens: list[PauliSum], dim_cap: int | None = None, tol: float = PIVOT_TOL) -> ClosureResult:
    """Span of ``gens`` and all nested brackets with ``gens``.

    Breadth first: each newly added element is bracketed with every original
    generator, which suffices because the algebra is spanned by right-nested
    brackets of generators.
    """
    if not gens:
        return ClosureResult(0, [], False)
    n = gens[0].n
    if any(g.n != n for g in gens):
        raise ValueError("generators act on different qubit counts")
    cap = 4**n - 1 if dim_cap is None else min(dim_cap, 4**n - 1)
    basis = OperatorBasis(tol)
    elems: list[PauliSum] = []
    queue: deque[PauliSum] = deque()
    for g in gens:
        if basis.add(g):
            elems.append(g)
            queue.append(g)
            if len(elems) >= cap:
                return ClosureResult(len(elems), elems, True)
    while queue:
        x = queue.popleft()
        for g in gens:
            c = lie_bracket(x, g)
            if c.is_zero():
                continue
            if basis.add(c):
                scale = max(abs(v) for _, v in c.items())
                c = c * (1.0 / scale)
                elems.append(c)
                queue.append(c)
                if len(elems) >= cap:
                    return ClosureResult(len(elems), elems, True)
    return ClosureResult(len(elems), elems, False)


def dla_dimension(template, dim_cap: int | None = None) -> ClosureResult:
    return lie_closure(circuit_generators(template), dim_cap)
