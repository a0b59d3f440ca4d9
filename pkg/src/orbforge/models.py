"""Hamiltonians and interaction graphs for the benchmark families.

Grid sites are indexed row-major: site ``(r, c)`` is qubit ``r * cols + c``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .pauli import PauliString, PauliSum

FAMILIES = ("tfim", "maxcut", "heisenberg")


def _edge(i: int, j: int) -> tuple[int, int]:
    if i == j:
        raise ValueError(f"self-loop on vertex {i}")
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for i, j in self.edges:
            e = _edge(i, j)
            if e != (i, j):
                raise ValueError(f"edge {(i, j)} must be stored as (min, max)")
            if not 0 <= i < self.n or not 0 <= j < self.n:
                raise ValueError(f"edge {(i, j)} outside {self.n} vertices")
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        return cls(n, tuple(sorted({_edge(int(i), int(j)) for i, j in edges})))

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_dict(cls, doc) -> "Graph":
        return cls.from_edges(int(doc["n"]), [tuple(e) for e in doc["edges"]])

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class LatticeSpec:
    kind: str
    rows: int = 1
    cols: int = 1

    def __post_init__(self):
        if self.kind not in ("chain-open", "chain-periodic", "grid"):
            raise ValueError(f"unknown lattice kind {self.kind!r}")
        if self.rows < 1 or self.cols < 1 or self.n < 2:
            raise ValueError("lattice needs at least two sites")

    @property
    def n(self) -> int:
        return self.rows * self.cols

    def edges(self) -> list[tuple[int, int]]:
        if self.kind == "grid":
            return grid_edges(self.rows, self.cols)
        return chain_edges(self.n, periodic=self.kind == "chain-periodic")


def chain_edges(n: int, periodic: bool = False) -> list[tuple[int, int]]:
    edges = [(i, i + 1) for i in range(n - 1)]
    if periodic and n > 2:
        edges.append((0, n - 1))
    return sorted(edges)


def grid_edges(rows: int, cols: int) -> list[tuple[int, int]]:
    edges = []
    for r in range(rows):
        for c in range(cols):
            s = r * cols + c
            if c + 1 < cols:
                edges.append((s, s + 1))
            if r + 1 < rows:
                edges.append((s, s + cols))
    return sorted(edges)


def grid_diagonals(rows: int, cols: int) -> list[tuple[int, int]]:
    edges = []
    for r in range(rows - 1):
        for c in range(cols - 1):
            s = r * cols + c
            edges.append((s, s + cols + 1))
            edges.append(_edge(s + 1, s + cols))
    return sorted(edges)


def _zz(n, i, j):
    return PauliString.from_ops(n, {i: "Z", j: "Z"})


def _ising(n: int, edges, h_x: float, zz_coeff: float) -> PauliSum:
    terms = [(zz_coeff, _zz(n, i, j)) for i, j in edges]
    if h_x:
        terms += [(-h_x, PauliString.from_ops(n, {i: "X"})) for i in range(n)]
    return PauliSum.from_terms(n, terms)


def tfim_1d(n: int, h_x: float = 1.0, periodic: bool = False) -> PauliSum:
    """``-sum ZZ - h_x sum X`` on an open chain or a ring."""
    if n < 2:
        raise ValueError("TFIM chain needs n >= 2")
    if h_x < 0:
        raise ValueError("h_x must be non-negative")
    return _ising(n, chain_edges(n, periodic), h_x, -1.0)


def tfim_2d(rows: int, cols: int, h_x: float = 1.0) -> PauliSum:
    if rows < 2 or cols < 2:
        raise ValueError("TFIM grid needs rows, cols >= 2")
    if h_x < 0:
        raise ValueError("h_x must be non-negative")
    return _ising(rows * cols, grid_edges(rows, cols), h_x, -1.0)


def random_regular_graph(n: int, d: int, seed=None, max_attempts: int = 10_000) -> Graph:
    """Sample a simple d-regular graph with the pairing (configuration) model.

    A pairing with a loop or a repeated edge is thrown away and redrawn.
    """
    if d < 0 or d >= n:
        raise ValueError(f"need 0 <= d < n, got d={d}, n={n}")
    if (n * d) % 2:
        raise ValueError(f"n*d must be even, got n={n}, d={d}")
    rng = np.random.default_rng(seed)
    points = np.repeat(np.arange(n), d)
    for _ in range(max_attempts):
        perm = rng.permutation(points)
        pairs = perm.reshape(-1, 2)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        edges = {_edge(int(a), int(b)) for a, b in pairs}
        if len(edges) == len(pairs):
            return Graph.from_edges(n, edges)
    raise RuntimeError(f"no simple {d}-regular graph on {n} vertices after {max_attempts} pairings")


def maxcut_hamiltonian(g: Graph) -> PauliSum:
    return PauliSum.from_terms(g.n, [(1.0, _zz(g.n, i, j)) for i, j in g.edges])


def heisenberg_term(n: int, i: int, j: int) -> PauliSum:
    """``S_ij = X_i X_j + Y_i Y_j + Z_i Z_j``."""
    return PauliSum.from_terms(
        n, [(1.0, PauliString.from_ops(n, {i: p, j: p})) for p in "XYZ"]
    )


def j1j2_grid(rows: int, cols: int, j1: float = 1.0, j2: float = 0.5) -> PauliSum:
    if rows < 2 or cols < 2:
        raise ValueError("J1-J2 grid needs rows, cols >= 2")
    n = rows * cols
    terms = []
    for coupling, edges in ((j1, grid_edges(rows, cols)), (j2, grid_diagonals(rows, cols))):
        if coupling == 0:
            continue
        for i, j in edges:
            terms += [(coupling, PauliString.from_ops(n, {i: p, j: p})) for p in "XYZ"]
    return PauliSum.from_terms(n, terms)


@dataclass(frozen=True)
class Model:
    """A benchmark instance: the Hamiltonian plus what the ansatz builders need.

    ``gate_edges`` are the qubit pairs that carry two-qubit gates; for the
    J1-J2 model these are only the nearest-neighbour bonds.
    """

    family: str
    hamiltonian: PauliSum
    gate_edges: tuple[tuple[int, int], ...]
    initial_state: str
    name: str = ""
    rows: int | None = None
    cols: int | None = None
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")

    @property
    def n(self) -> int:
        return self.hamiltonian.n


def tfim_chain_model(n: int, h_x: float = 1.0, periodic: bool = False) -> Model:
    kind = "ring" if periodic else "chain"
    return Model("tfim", tfim_1d(n, h_x, periodic), tuple(chain_edges(n, periodic)), "plus",
                 name=f"tfim-{kind}-{n}", params={"h_x": h_x})


def tfim_grid_model(rows: int, cols: int, h_x: float = 1.0) -> Model:
    return Model("tfim", tfim_2d(rows, cols, h_x), tuple(grid_edges(rows, cols)), "plus",
                 name=f"tfim-grid-{rows}x{cols}", rows=rows, cols=cols, params={"h_x": h_x})


def maxcut_model(g: Graph, name: str = "") -> Model:
    return Model("maxcut", maxcut_hamiltonian(g), g.edges, "plus",
                 name=name or f"maxcut-{g.n}", params={"graph": g.to_dict()})


def j1j2_model(rows: int, cols: int, j1: float = 1.0, j2: float = 0.5) -> Model:
    return Model("heisenberg", j1j2_grid(rows, cols, j1, j2), tuple(grid_edges(rows, cols)),
                 "row-singlets", name=f"j1j2-{rows}x{cols}", rows=rows, cols=cols,
                 params={"j1": j1, "j2": j2})
