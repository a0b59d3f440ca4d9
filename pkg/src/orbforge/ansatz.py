"""Layered circuit templates: HVA/QAOA, ORB and Free.

All three constructions for a model share one gate list and one sublayer
schedule; they differ only in which gates share a parameter slot.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .models import Model, heisenberg_term
from .pauli import PauliSum
from .symmetry import (
    EdgeOrbitPartition,
    OrbitPartition,
    PermutationGroup,
    automorphisms,
    edge_orbits as compute_edge_orbits,
    qubit_orbits,
)

KINDS = ("hva", "orb", "free")
# two-qubit gate types whose generators on overlapping pairs do not commute
NONCOMMUTING_TYPES = {"exchange"}


@dataclass(frozen=True)
class GateSpec:
    kind: str  # "x", "zz" or "exchange"
    qubits: tuple[int, ...]
    generator: PauliSum
    slot: int = -1

    @property
    def support(self) -> tuple[int, ...]:
        return self.qubits

    def with_slot(self, slot: int) -> "GateSpec":
        return GateSpec(self.kind, self.qubits, self.generator, slot)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "qubits": list(self.qubits), "slot": self.slot,
                "generator": self.generator.to_dict()}

    @classmethod
    def from_dict(cls, d) -> "GateSpec":
        return cls(d["kind"], tuple(d["qubits"]), PauliSum.from_dict(d["generator"]), int(d["slot"]))


def make_gate(kind: str, qubits: Sequence[int], n: int) -> GateSpec:
    qubits = tuple(qubits)
    if kind == "x":
        gen = PauliSum.from_ops(n, {qubits[0]: "X"})
    elif kind == "zz":
        gen = PauliSum.from_ops(n, {qubits[0]: "Z", qubits[1]: "Z"})
    elif kind == "exchange":
        gen = heisenberg_term(n, *qubits)
    else:
        raise ValueError(f"unknown gate kind {kind!r}")
    return GateSpec(kind, qubits, gen)


@dataclass(frozen=True)
class LayerTemplate:
    sublayers: tuple[tuple[GateSpec, ...], ...]

    def __post_init__(self):
        for sub in self.sublayers:
            used: set[int] = set()
            for g in sub:
                if used & set(g.qubits):
                    raise ValueError(f"overlapping supports inside a sublayer at {g.qubits}")
                used |= set(g.qubits)

    @property
    def gates(self) -> list[GateSpec]:
        return [g for sub in self.sublayers for g in sub]


@dataclass(frozen=True)
class CircuitTemplate:
    """One layer of gates with a slot per gate; repeated ``L`` times at run time."""

    n: int
    layer: LayerTemplate
    n_l: int
    initial_state: str = "plus"
    kind: str = ""
    family: str = ""
    rows: int | None = None
    cols: int | None = None

    def __post_init__(self):
        slots = {g.slot for g in self.layer.gates}
        if slots != set(range(self.n_l)):
            raise ValueError(f"slots {sorted(slots)} are not exactly 0..{self.n_l - 1}")

    @property
    def binding(self) -> list[int]:
        """Slot of every gate, in layer order."""
        return [g.slot for g in self.layer.gates]

    def n_params(self, layers: int) -> int:
        return self.n_l * layers

    def n_gates(self, layers: int = 1) -> int:
        return len(self.layer.gates) * layers

    def slot_classes(self) -> list[list[GateSpec]]:
        out: list[list[GateSpec]] = [[] for _ in range(self.n_l)]
        for g in self.layer.gates:
            out[g.slot].append(g)
        return out

    def to_dict(self) -> dict:
        return {
            "n": self.n, "n_l": self.n_l, "kind": self.kind, "family": self.family,
            "initial_state": self.initial_state, "rows": self.rows, "cols": self.cols,
            "sublayers": [[g.to_dict() for g in sub] for sub in self.layer.sublayers],
            "binding": self.binding,
        }

    @classmethod
    def from_dict(cls, d) -> "CircuitTemplate":
        layer = LayerTemplate(tuple(tuple(GateSpec.from_dict(g) for g in sub) for sub in d["sublayers"]))
        return cls(int(d["n"]), layer, int(d["n_l"]), d.get("initial_state", "plus"), d.get("kind", ""),
                   d.get("family", ""), d.get("rows"), d.get("cols"))

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_json(cls, text: str) -> "CircuitTemplate":
        return cls.from_dict(json.loads(text))


# -- scheduling ------------------------------------------------------------------
def schedule_sublayers(gates: Iterable[GateSpec]) -> LayerTemplate:
    """Greedy first-fit colouring of gates into disjoint-support sublayers."""
    subs: list[list[GateSpec]] = []
    used: list[set[int]] = []
    for g in gates:
        q = set(g.qubits)
        for sub, u in zip(subs, used):
            if not u & q:
                sub.append(g)
                u |= q
                break
        else:
            subs.append([g])
            used.append(set(q))
    return LayerTemplate(tuple(tuple(s) for s in subs))


def _matchings(edges: Sequence[tuple[int, int]]) -> list[list[tuple[int, int]]]:
    """Greedy split of sorted ``edges`` into classes of pairwise disjoint edges."""
    classes: list[list[tuple[int, int]]] = []
    used: list[set[int]] = []
    for e in sorted(edges):
        for cls, u in zip(classes, used):
            if not u & set(e):
                cls.append(e)
                u |= set(e)
                break
        else:
            classes.append([e])
            used.append(set(e))
    return classes


def split_noncommuting_orbits(edge_orbits: EdgeOrbitPartition, gate_type: str) -> list[list[tuple[int, int]]]:
    """Parameter classes for two-qubit gates.

    Commuting gate types keep one class per edge-orbit. Otherwise an orbit
    whose edges overlap is split into classes of mutually disjoint edges.
    """
    out = []
    for orb in edge_orbits.edge_orbits:
        if gate_type in NONCOMMUTING_TYPES:
            out.extend(_matchings(orb))
        else:
            out.append(sorted(orb))
    return out


# -- shared skeleton --------------------------------------------------------------
@dataclass(frozen=True)
class Symmetry:
    group: PermutationGroup
    orbits: OrbitPartition
    edge_orbits: EdgeOrbitPartition

    @classmethod
    def of(cls, model: Model) -> "Symmetry":
        group = automorphisms(model.hamiltonian)
        return cls(group, qubit_orbits(group), compute_edge_orbits(group, model.gate_edges))


def _pair_kind(model: Model) -> str:
    return "exchange" if model.family == "heisenberg" else "zz"


def _has_single_qubit_layer(model: Model) -> bool:
    return model.family in ("tfim", "maxcut")


def _two_qubit_sublayers(model: Model, sym: Symmetry) -> list[tuple[GateSpec, ...]]:
    n = model.n
    kind = _pair_kind(model)
    if kind not in NONCOMMUTING_TYPES:
        gates = [make_gate(kind, e, n) for e in sorted(model.gate_edges)]
        return list(schedule_sublayers(gates).sublayers)
    # Orbits kept whole and split parts go to separate sublayers, so that the
    # group maps sublayers onto sublayers.
    whole, split = [], []
    for orb in sym.edge_orbits.edge_orbits:
        parts = _matchings(orb)
        (whole if len(parts) == 1 else split).extend(orb)
    subs = []
    for edges in (whole, split):
        gates = [make_gate(kind, e, n) for e in sorted(edges)]
        subs += list(schedule_sublayers(gates).sublayers)
    return sorted(subs, key=lambda sub: min(g.qubits for g in sub))


def _skeleton(model: Model, sym: Symmetry) -> list[tuple[GateSpec, ...]]:
    subs = _two_qubit_sublayers(model, sym)
    if _has_single_qubit_layer(model):
        subs.append(tuple(make_gate("x", (q,), model.n) for q in range(model.n)))
    return subs


def _assign(model: Model, subs, key, kind: str) -> CircuitTemplate:
    """Bind gates to slots numbered by first appearance of ``key(gate)``."""
    table: dict = {}
    bound = []
    for sub in subs:
        row = []
        for g in sub:
            k = key(g)
            if k not in table:
                table[k] = len(table)
            row.append(g.with_slot(table[k]))
        bound.append(tuple(row))
    return CircuitTemplate(model.n, LayerTemplate(tuple(bound)), len(table), model.initial_state,
                           kind, model.family, model.rows, model.cols)


def _check_partitions(model: Model, sym: Symmetry) -> None:
    covered = sorted(q for orb in sym.orbits.orbits for q in orb)
    if covered != list(range(model.n)):
        raise ValueError("qubit orbits do not partition the model's qubits")
    if sym.edge_orbits.edges != sorted(model.gate_edges):
        raise ValueError("edge orbits do not partition the model's gate edges")


def build_hva(model: Model, sym: Symmetry | None = None) -> CircuitTemplate:
    """One slot per single-qubit sublayer type; one per two-qubit family.

    For commuting two-qubit gates (TFIM, QAOA) all pair gates share a slot;
    for exchange gates each sublayer gets its own slot.
    """
    sym = sym or Symmetry.of(model)
    subs = _skeleton(model, sym)
    if _pair_kind(model) in NONCOMMUTING_TYPES:
        index = {g: k for k, sub in enumerate(subs) for g in sub}
        return _assign(model, subs, lambda g: ("sub", index[g]), "hva")
    return _assign(model, subs, lambda g: g.kind, "hva")


def build_orb(model: Model, sym: Symmetry | None = None) -> CircuitTemplate:
    """One slot per qubit orbit and per (possibly split) edge-orbit class."""
    sym = sym or Symmetry.of(model)
    _check_partitions(model, sym)
    subs = _skeleton(model, sym)
    edge_class = {}
    for k, cls in enumerate(split_noncommuting_orbits(sym.edge_orbits, _pair_kind(model))):
        for e in cls:
            edge_class[e] = k

    def key(g: GateSpec):
        if len(g.qubits) == 1:
            return ("q", sym.orbits.orbit_of(g.qubits[0]))
        return ("e", edge_class[g.qubits])

    return _assign(model, subs, key, "orb")


def build_free(model: Model, sym: Symmetry | None = None) -> CircuitTemplate:
    sym = sym or Symmetry.of(model)
    subs = _skeleton(model, sym)
    return _assign(model, subs, lambda g: (g.kind, g.qubits), "free")


BUILDERS = {"hva": build_hva, "orb": build_orb, "free": build_free}


def build(kind: str, model: Model, sym: Symmetry | None = None) -> CircuitTemplate:
    try:
        return BUILDERS[kind](model, sym)
    except KeyError:
        raise ValueError(f"unknown ansatz kind {kind!r}; expected one of {KINDS}") from None


def orb_parameter_count(sym: Symmetry, gate_type: str, single_qubit: bool = True) -> int:
    """``|O| + |O^e|`` plus one per extra class from splitting."""
    n_pairs = len(split_noncommuting_orbits(sym.edge_orbits, gate_type))
    return (len(sym.orbits) if single_qubit else 0) + n_pairs


def sublayers_permuted_by(template: CircuitTemplate, group: PermutationGroup) -> bool:
    """True if every generator maps each sublayer's gate set onto some sublayer's."""
    sets = [frozenset(g.qubits if len(g.qubits) == 1 else tuple(sorted(g.qubits)) for g in sub)
            for sub in template.layer.sublayers]
    lookup = set(sets)
    for p in group.generators:
        for s in sets:
            img = frozenset((p[q[0]],) if len(q) == 1 else tuple(sorted((p[q[0]], p[q[1]]))) for q in s)
            if img not in lookup:
                return False
    return True
