"""Qubit-permutation symmetries of a Pauli-sum Hamiltonian.

The Hamiltonian is reduced to a vertex- and edge-coloured graph whose colour
preserving automorphisms are exactly the permutations ``pi`` with
``pi H pi^-1 == H``. Automorphisms are found by colour refinement plus
individualisation and backtracking, building a stabiliser chain along the
leftmost search path so that the group order is the product of the basic
orbit lengths.
"""
from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .pauli import PauliSum

COLOR_TOL = 1e-9
ORDER_CAP = 10**6
GENERATOR_CAP = 64

Perm = tuple[int, ...]


def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def compose(p: Perm, q: Perm) -> Perm:
    """``p o q``: apply ``q`` first."""
    return tuple(p[i] for i in q)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def is_permutation(p: Sequence[int]) -> bool:
    return sorted(p) == list(range(len(p)))


# -- coloured interaction graph ---------------------------------------------
def _quantize(c: complex) -> tuple[int, int]:
    return (round(c.real / COLOR_TOL), round(c.imag / COLOR_TOL))


@dataclass(frozen=True)
class ColoredGraph:
    """Vertex colours plus colours on ordered pairs.

    ``arc_color[(u, v)]`` encodes the two-body terms on ``{u, v}`` read with
    ``u`` first; it is present for both orientations of every interacting pair.
    """

    n: int
    vertex_color: tuple[int, ...]
    arc_color: dict = field(hash=False)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u, v in self.arc_color if u < v)

    def edge_color(self, i: int, j: int) -> int:
        return self.arc_color[(min(i, j), max(i, j))]

    def neighbors(self) -> list[list[tuple[int, int]]]:
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for (u, v), c in self.arc_color.items():
            adj[u].append((v, c))
        return adj

    def is_automorphism(self, p: Sequence[int]) -> bool:
        if any(self.vertex_color[p[v]] != self.vertex_color[v] for v in range(self.n)):
            return False
        for (u, v), c in self.arc_color.items():
            if self.arc_color.get((p[u], p[v])) != c:
                return False
        return True


def _relabel(keys: Sequence) -> list[int]:
    table = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [table[k] for k in keys]


def interaction_graph(h: PauliSum) -> ColoredGraph:
    """Colour qubits by their one-body terms and pairs by their two-body terms."""
    local: dict[int, list] = defaultdict(list)
    pair: dict[tuple[int, int], list] = defaultdict(list)
    for term in h.terms:
        p = term.string
        supp = p.support
        q = _quantize(term.coeff)
        if len(supp) == 1:
            local[supp[0]].append((p.letter(supp[0]), q))
        elif len(supp) == 2:
            i, j = supp
            pair[(i, j)].append((p.letter(i), p.letter(j), q))
        elif len(supp) > 2:
            raise ValueError(f"{len(supp)}-local term {p.label} not supported")
    vkeys = [tuple(sorted(local.get(v, ()))) for v in range(h.n)]
    arcs = {}
    for (i, j), items in pair.items():
        arcs[(i, j)] = tuple(sorted(items))
        arcs[(j, i)] = tuple(sorted((b, a, q) for a, b, q in items))
    akeys = list(arcs)
    labels = _relabel([arcs[k] for k in akeys])
    return ColoredGraph(h.n, tuple(_relabel(vkeys)), dict(zip(akeys, labels)))


# -- refinement and search -----------------------------------------------------
class _Refiner:
    def __init__(self, g: ColoredGraph):
        self.g = g
        self.adj = g.neighbors()

    def refine(self, colors: list[int]) -> tuple[list[int], tuple]:
        """Equitable refinement; returns the colouring and a trace.

        Two colourings can only be related by an automorphism if their traces
        agree, and then equal labels denote corresponding cells.
        """
        trace = []
        ncls = len(set(colors))
        while True:
            sigs = [
                (colors[v], tuple(sorted((c, colors[u]) for u, c in self.adj[v])))
                for v in range(self.g.n)
            ]
            new = _relabel(sigs)
            sizes = defaultdict(int)
            for c in new:
                sizes[c] += 1
            trace.append((tuple(sorted(set(sigs))), tuple(sorted(sizes.items()))))
            k = len(set(new))
            colors = new
            if k == ncls:
                break
            ncls = k
        return colors, tuple(trace)

    def individualize(self, colors: list[int], v: int) -> list[int]:
        out = [2 * c + 1 for c in colors]
        out[v] = 2 * colors[v]
        return out


def _cells(colors: list[int]) -> dict[int, list[int]]:
    cells: dict[int, list[int]] = defaultdict(list)
    for v, c in enumerate(colors):
        cells[c].append(v)
    return cells


def _target_cell(colors: list[int]) -> list[int] | None:
    """First smallest non-singleton cell (by label), or None if discrete."""
    best = None
    for c, members in sorted(_cells(colors).items()):
        if len(members) > 1 and (best is None or len(members) < len(best)):
            best = members
    return best


@dataclass
class PermutationGroup:
    """A permutation group given by generators and its order.

    ``elements`` is filled in only when ``order <= ORDER_CAP``.
    """

    n: int
    generators: list[Perm]
    order: int
    elements: list[Perm] | None = None
    base: list[int] = field(default_factory=list)

    def __post_init__(self):
        if self.elements is None and self.order <= ORDER_CAP:
            self.elements = enumerate_group(self.n, self.generators)
            if len(self.elements) != self.order:
                raise RuntimeError(f"group closure has {len(self.elements)} elements, expected {self.order}")

    @classmethod
    def trivial(cls, n: int) -> "PermutationGroup":
        return cls(n, [], 1)

    @classmethod
    def from_generators(cls, n: int, gens: Iterable[Sequence[int]]) -> "PermutationGroup":
        gens = [tuple(g) for g in gens if tuple(g) != identity_perm(n)]
        elems = enumerate_group(n, gens)
        return cls(n, gens, len(elems), elems)

    def __contains__(self, p) -> bool:
        if self.elements is None:
            raise ValueError("membership needs the element list")
        return tuple(p) in set(self.elements)


def enumerate_group(n: int, gens: Sequence[Perm], cap: int = ORDER_CAP) -> list[Perm]:
    ident = identity_perm(n)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = compose(g, p)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
                    if len(seen) > cap:
                        raise ValueError(f"group exceeds {cap} elements")
        frontier = nxt
    return sorted(seen)


def _orbit(point: int, gens: Sequence[Perm]) -> set[int]:
    orb = {point}
    stack = [point]
    while stack:
        v = stack.pop()
        for g in gens:
            w = g[v]
            if w not in orb:
                orb.add(w)
                stack.append(w)
    return orb


def automorphisms(g: ColoredGraph | PauliSum, max_generators: int = GENERATOR_CAP) -> PermutationGroup:
    """All colour-preserving automorphisms of ``g`` (or of a Hamiltonian's graph)."""
    if isinstance(g, PauliSum):
        g = interaction_graph(g)
    n = g.n
    ref = _Refiner(g)

    # leftmost path: it fixes the base points and their refined colourings
    path = []  # (colors, trace, cell) per level
    colors, trace = ref.refine(list(g.vertex_color))
    base: list[int] = []
    while True:
        cell = _target_cell(colors)
        path.append((colors, trace, cell))
        if cell is None:
            break
        v = cell[0]
        base.append(v)
        colors, trace = ref.refine(ref.individualize(colors, v))
    left_leaf = path[-1][0]

    def leaf_map(right: list[int]) -> Perm:
        pos = {c: v for v, c in enumerate(right)}
        return tuple(pos[c] for c in left_leaf)

    def search(level: int, right: list[int]) -> Perm | None:
        """Find an automorphism mapping the left path below ``level`` into ``right``."""
        _, _, cell = path[level]
        if cell is None:
            p = leaf_map(right)
            return p if g.is_automorphism(p) else None
        lcol = path[level][0][cell[0]]
        v_next_colors, v_next_trace, _ = path[level + 1]
        for w in (u for u, c in enumerate(right) if c == lcol):
            rc, rt = ref.refine(ref.individualize(right, w))
            if rt != v_next_trace:
                continue
            found = search(level + 1, rc)
            if found is not None:
                return found
        return None

    gens: list[Perm] = []
    order = 1
    for level in reversed(range(len(base))):
        colors_l, _, cell = path[level]
        b = base[level]
        orbit = _orbit(b, gens)
        for w in cell:
            if w in orbit:
                continue
            rc, rt = ref.refine(ref.individualize(colors_l, w))
            found = None
            if rt == path[level + 1][1]:
                found = search(level + 1, rc)
            if found is not None:
                gens.append(found)
                if len(gens) > max_generators:
                    raise RuntimeError(f"more than {max_generators} generators")
                orbit = _orbit(b, gens)
        order *= len(orbit)
    return PermutationGroup(n, gens, order, base=base)


def brute_force_automorphisms(h: PauliSum) -> list[Perm]:
    """Every permutation with ``pi H pi^-1 == H``; only for small ``n``."""
    if h.n > 9:
        raise ValueError("brute force limited to 9 qubits")
    return [p for p in itertools.permutations(range(h.n)) if h.permute(p).allclose(h, COLOR_TOL)]


# -- orbits ---------------------------------------------------------------------
class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra

    def groups(self) -> list[list]:
        out = defaultdict(list)
        for x in self.parent:
            out[self.find(x)].append(x)
        return sorted(sorted(v) for v in out.values())


@dataclass(frozen=True)
class OrbitPartition:
    orbits: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.orbits)

    def orbit_of(self, q: int) -> int:
        for k, orb in enumerate(self.orbits):
            if q in orb:
                return k
        raise KeyError(q)


@dataclass(frozen=True)
class EdgeOrbitPartition:
    edge_orbits: tuple[tuple[tuple[int, int], ...], ...]

    def __len__(self) -> int:
        return len(self.edge_orbits)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return sorted(e for orb in self.edge_orbits for e in orb)

    def orbit_of(self, e: tuple[int, int]) -> int:
        e = (min(e), max(e))
        for k, orb in enumerate(self.edge_orbits):
            if e in orb:
                return k
        raise KeyError(e)


def _group_gens(group) -> list[Perm]:
    return list(group.generators) if isinstance(group, PermutationGroup) else [tuple(p) for p in group]


def qubit_orbits(group: PermutationGroup, n: int | None = None) -> OrbitPartition:
    n = group.n if n is None else n
    uf = _UnionFind(range(n))
    for p in _group_gens(group):
        for i in range(n):
            uf.union(i, p[i])
    return OrbitPartition(tuple(tuple(o) for o in uf.groups()))


def _edge_image(p: Perm, e: tuple[int, int]) -> tuple[int, int]:
    a, b = p[e[0]], p[e[1]]
    return (a, b) if a < b else (b, a)


def edge_orbits(group: PermutationGroup, edges: Iterable[tuple[int, int]]) -> EdgeOrbitPartition:
    """Partition ``edges`` under the induced action ``(i, j) -> (pi(i), pi(j))``.

    ``edges`` must be closed under the group (true for the pairs of any
    two-body term family of ``H``).
    """
    edges = sorted({(min(e), max(e)) for e in edges})
    n = group.n
    for i, j in edges:
        if not (0 <= i < n and 0 <= j < n) or i == j:
            raise ValueError(f"edge {(i, j)} outside {n} vertices")
    eset = set(edges)
    uf = _UnionFind(edges)
    for p in _group_gens(group):
        for e in edges:
            img = _edge_image(p, e)
            if img not in eset:
                raise ValueError(f"edge set not closed: {e} maps to {img}")
            uf.union(e, img)
    return EdgeOrbitPartition(tuple(tuple(o) for o in uf.groups()))


# -- acting on states -------------------------------------------------------------
def permute_state(psi: np.ndarray, perm: Sequence[int]) -> np.ndarray:
    """Move qubit ``i`` to position ``perm[i]``."""
    n = len(perm)
    if psi.shape != (1 << n,):
        raise ValueError(f"state of shape {psi.shape} does not match a {n}-qubit permutation")
    # tensor axis a holds qubit n-1-a
    inv = inverse(tuple(perm))
    axes = [n - 1 - inv[n - 1 - a] for a in range(n)]
    return np.transpose(psi.reshape((2,) * n), axes).reshape(-1)


@dataclass
class EquivarianceReport:
    passed: bool
    max_deviation: float
    tol: float
    per_generator: list[float]


def check_equivariance(template, group: PermutationGroup, trials: int = 20, seed=None,
                       layers: int = 2, tol: float = 1e-10) -> EquivarianceReport:
    """Test ``pi U(theta) pi^-1 |phi> == U(theta) |phi>`` on random states and angles."""
    from .simulator import compile_circuit, run_compiled

    if template.n != group.n:
        raise ValueError("template and group act on different qubit counts")
    rng = np.random.default_rng(seed)
    cc = compile_circuit(template, layers)
    dim = 1 << template.n
    gens = _group_gens(group)
    devs = [0.0] * len(gens)
    for _ in range(trials):
        theta = rng.uniform(-np.pi, np.pi, cc.n_params)
        phi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        phi /= np.linalg.norm(phi)
        ref = run_compiled(cc, theta, phi)
        for k, p in enumerate(gens):
            moved = permute_state(run_compiled(cc, theta, permute_state(phi, inverse(p))), p)
            devs[k] = max(devs[k], float(np.linalg.norm(moved - ref)))
    worst = max(devs, default=0.0)
    return EquivarianceReport(worst < tol, worst, tol, devs)


@dataclass
class InvarianceReport:
    invariant: bool
    residuals: list[float]
    phases: list[float]


def check_state_invariance(psi: np.ndarray, group: PermutationGroup, tol: float = 1e-10) -> InvarianceReport:
    """Per generator, ``min_phi ||pi psi - e^{i phi} psi||`` and the minimising phase."""
    residuals, phases = [], []
    norm2 = float(np.vdot(psi, psi).real)
    for p in _group_gens(group):
        ov = np.vdot(psi, permute_state(psi, p))
        residuals.append(math.sqrt(max(0.0, 2 * norm2 - 2 * abs(ov))))
        phases.append(float(np.angle(ov)) if abs(ov) > 0 else 0.0)
    ok = all(r < tol for r in residuals) and all(abs(ph) < tol for ph in phases)
    return InvarianceReport(ok, residuals, phases)


def is_hamiltonian_symmetry(h: PauliSum, perm: Sequence[int], tol: float = COLOR_TOL) -> bool:
    return h.permute(perm).allclose(h, tol)
