"""Orbit-based symmetry-equivariant circuit ansatze for variational ground-state search."""
from .ansatz import CircuitTemplate, Symmetry, build, build_free, build_hva, build_orb
from .models import Graph, Model, j1j2_model, maxcut_model, random_regular_graph, tfim_chain_model, tfim_grid_model
from .optimizer import ground_energy, minimize, multistart_vqe
from .pauli import PauliString, PauliSum, commutator
from .symmetry import PermutationGroup, automorphisms, check_equivariance, edge_orbits, qubit_orbits

__version__ = "0.1.0"

__all__ = [
    "CircuitTemplate", "Symmetry", "build", "build_free", "build_hva", "build_orb",
    "Graph", "Model", "j1j2_model", "maxcut_model", "random_regular_graph", "tfim_chain_model", "tfim_grid_model",
    "ground_energy", "minimize", "multistart_vqe",
    "PauliString", "PauliSum", "commutator",
    "PermutationGroup", "automorphisms", "check_equivariance", "edge_orbits", "qubit_orbits",
]
