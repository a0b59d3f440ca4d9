"""Small hand-checkable cases across modules."""
import itertools

import numpy as np
import pytest

from orbforge.ansatz import Symmetry, build, make_gate, schedule_sublayers
from orbforge.dla import circuit_generators
from orbforge.models import (
    Graph,
    chain_edges,
    j1j2_grid,
    maxcut_hamiltonian,
    random_regular_graph,
    tfim_1d,
    tfim_2d,
    tfim_chain_model,
    j1j2_model,
)
from orbforge.optimizer import ground_energy
from orbforge.pauli import PauliString, PauliSum, commutator, commutes, pauli_mul, permute_pauli, to_dense
from orbforge.simulator import Objective, apply_pauli_rotation, energy, init_state, run
from orbforge.symmetry import (
    automorphisms,
    brute_force_automorphisms,
    check_state_invariance,
    interaction_graph,
    permute_state,
    qubit_orbits,
)

P = PauliString.from_label


def test_pauli_products():
    assert pauli_mul(P("X"), P("X")) == (1, P("I"))
    assert pauli_mul(P("X"), P("Z")) == (-1j, P("Y"))
    assert pauli_mul(P("XI"), P("ZZ")) == (-1j, P("YZ"))


def test_commutation_examples():
    assert commutes(P("ZZI"), P("IZZ"))
    assert not commutes(P("X"), P("Z"))
    assert commutes(P("XX"), P("YY"))


def test_commutator_examples():
    zz12 = PauliSum.from_string(P("ZZI"))
    zz23 = PauliSum.from_string(P("IZZ"))
    assert commutator(zz12, zz23).is_zero()
    c = commutator(PauliSum.from_string(P("XI")), PauliSum.from_string(P("ZZ")))
    assert c.allclose(PauliSum.from_string(P("YZ"), -2j))
    a = tfim_1d(3, 0.3) + PauliSum.from_string(P("XYZ"), 0.2)
    assert commutator(a, a).is_zero()


def test_permutation_examples():
    assert permute_pauli(P("ZZ"), (1, 0)) == P("ZZ")
    assert permute_pauli(P("XI"), (1, 0)) == P("IX")
    # cycle 0 -> 1 -> 2 -> 0 sends Y_0 Z_2 to Y_1 Z_0
    assert permute_pauli(P("YIZ"), (1, 2, 0)) == P("ZYI")


def test_dense_examples():
    np.testing.assert_allclose(to_dense(P("I")), np.eye(2))
    assert ground_energy(tfim_1d(2, 1.0), method="dense") == pytest.approx(-np.sqrt(5))


def test_hamiltonian_examples():
    h = tfim_1d(5, 1.0)
    assert len(h) == 9 and all(t.coeff == -1 for t in h.terms)
    assert ground_energy(tfim_1d(3, 0.0, periodic=True)) == pytest.approx(-3)
    assert sum(t.string.weight == 2 for t in tfim_2d(2, 2).terms) == 4
    assert sum(t.string.weight == 2 for t in tfim_2d(3, 4).terms) == 17
    h = tfim_2d(2, 7)
    assert h.n == 14 and sum(t.string.weight == 2 for t in h.terms) == 19


@pytest.mark.parametrize("seed", range(5))
def test_four_vertex_cubic_graph_is_k4(seed):
    assert random_regular_graph(4, 3, seed).edges == tuple(itertools.combinations(range(4), 2))


@pytest.mark.parametrize("seed", range(10))
def test_six_vertex_cubic_graphs(seed):
    """Only K_{3,3} (order 72) and the prism (order 12) are cubic on six vertices."""
    g = random_regular_graph(6, 3, seed)
    order = len(brute_force_automorphisms(maxcut_hamiltonian(g)))
    assert order in (72, 12)


def test_maxcut_examples():
    assert ground_energy(maxcut_hamiltonian(Graph.from_edges(2, [(0, 1)]))) == pytest.approx(-1)
    assert ground_energy(maxcut_hamiltonian(Graph.from_edges(6, chain_edges(6, periodic=True)))) == pytest.approx(-6)


def test_j1j2_examples():
    assert len(j1j2_grid(3, 4, 1, 0.5)) == 87
    assert ground_energy(j1j2_grid(2, 2, 1, 0)) == pytest.approx(-8)
    assert len(j1j2_grid(2, 3, 1, 0)) == 3 * 7


def test_interaction_graph_colours():
    g = interaction_graph(tfim_1d(4))
    assert len(set(g.vertex_color)) == 1 and len(set(g.arc_color.values())) == 1
    g = interaction_graph(j1j2_grid(2, 2, 1, 0.5))
    assert len(set(g.arc_color.values())) == 2
    h = sum((PauliSum.from_ops(3, {q: "X"}, f) for q, f in enumerate((1, 2, 1))), PauliSum.zero(3))
    c = interaction_graph(h).vertex_color
    assert c[0] == c[2] != c[1]


@pytest.mark.parametrize("n", [3, 4, 7, 12])
def test_open_chain_group_is_reflection(n):
    g = automorphisms(tfim_1d(n))
    assert g.order == 2
    assert g.generators == [tuple(n - 1 - i for i in range(n))]


def test_small_group_examples():
    assert automorphisms(maxcut_hamiltonian(Graph.from_edges(4, itertools.combinations(range(4), 2)))).order == 24
    assert automorphisms(tfim_1d(6, 1.0, periodic=True)).order == 12
    trivial = automorphisms(PauliSum.from_ops(3, {0: "X"}, 1) + PauliSum.from_ops(3, {1: "X"}, 2)
                            + PauliSum.from_ops(3, {2: "X"}, 3))
    assert qubit_orbits(trivial).orbits == ((0,), (1,), (2,))


def test_open_chain_orbits_n5():
    sym = Symmetry.of(tfim_chain_model(5))
    assert sym.orbits.orbits == ((0, 4), (1, 3), (2,))


def test_state_permutation_examples():
    psi = np.zeros(4, dtype=complex)
    psi[0b10] = 1  # qubit 1 set
    out = permute_state(psi, (1, 0))
    assert out[0b01] == 1
    np.testing.assert_allclose(permute_state(psi, (0, 1)), psi)
    plus = init_state("plus", 4)
    np.testing.assert_allclose(permute_state(plus, (2, 0, 3, 1)), plus)


def test_state_invariance_examples():
    m = j1j2_model(3, 4)
    g = automorphisms(m.hamiltonian)
    assert check_state_invariance(init_state("row-singlets", 12, 3, 4), g).invariant
    assert check_state_invariance(init_state("plus", 12), g).invariant
    psi = np.zeros(1 << 12, dtype=complex)
    psi[1] = 1
    assert not check_state_invariance(psi, g).invariant


def test_initial_state_examples():
    np.testing.assert_allclose(init_state("row-singlets", 2, 1, 2), np.array([0, 1, -1, 0]) / np.sqrt(2))
    psi = init_state("row-singlets", 12, 3, 4)
    total = PauliSum.zero(12)
    for q in range(12):
        total = total + PauliSum.from_ops(12, {q: "Z"})
    assert energy(psi, total) == pytest.approx(0, abs=1e-12)


def test_rotation_examples():
    psi = np.zeros(4, dtype=complex)
    psi[0] = 1
    np.testing.assert_allclose(apply_pauli_rotation(psi, P("XI"), 0.0), psi)
    out = apply_pauli_rotation(psi, P("XI"), np.pi / 2)
    np.testing.assert_allclose(out, [0, -1j, 0, 0], atol=1e-15)


def test_run_examples():
    m = tfim_chain_model(4)
    t = build("orb", m)
    psi0 = init_state("plus", 4)
    np.testing.assert_allclose(run(t, 0, []), psi0)
    np.testing.assert_allclose(run(t, 3, np.zeros(t.n_params(3))), psi0)


def test_ring_hva_and_orb_states_agree():
    m = tfim_chain_model(6, periodic=True)
    theta = np.random.default_rng(0).normal(size=6)
    np.testing.assert_allclose(run(build("orb", m), 3, theta), run(build("hva", m), 3, theta))


def test_energy_examples():
    assert energy(init_state("plus", 5), tfim_1d(5, 0.7)) == pytest.approx(-3.5)
    h = maxcut_hamiltonian(Graph.from_edges(4, itertools.combinations(range(4), 2)))
    assert energy(init_state("zeros", 4), h) == pytest.approx(6)


def test_x_slots_stationary_from_plus_state():
    m = tfim_chain_model(5)
    t = build("orb", m)
    _, g = Objective(t, 2, m.hamiltonian)(np.zeros(t.n_params(2)))
    x_slots = {gate.slot for gate in t.layer.gates if gate.kind == "x"}
    for l in range(2):
        for s in x_slots:
            assert g[l * t.n_l + s] == pytest.approx(0, abs=1e-14)


def test_shared_slot_gradient_is_sum_of_decorrelated():
    m = tfim_chain_model(4)
    t = build("hva", m)
    free = build("free", m)
    rng = np.random.default_rng(2)
    theta = rng.normal(size=t.n_params(2))
    # expand the shared angles onto the per-gate template
    expand = np.concatenate([[theta[l * t.n_l + g.slot] for g in t.layer.gates] for l in range(2)])
    _, g_shared = Objective(t, 2, m.hamiltonian)(theta)
    _, g_free = Objective(free, 2, m.hamiltonian)(expand)
    summed = np.zeros_like(g_shared)
    for l in range(2):
        for k, gate in enumerate(t.layer.gates):
            summed[l * t.n_l + gate.slot] += g_free[l * free.n_l + free.layer.gates[k].slot]
    np.testing.assert_allclose(g_shared, summed, atol=1e-12)


def test_scheduling_examples():
    chain = schedule_sublayers([make_gate("zz", e, 5) for e in chain_edges(5)])
    assert [[g.qubits for g in s] for s in chain.sublayers] == [[(0, 1), (2, 3)], [(1, 2), (3, 4)]]
    disjoint = schedule_sublayers([make_gate("zz", e, 6) for e in [(0, 1), (2, 3), (4, 5)]])
    assert len(disjoint.sublayers) == 1


def test_generator_examples():
    m = tfim_chain_model(4)
    hva = circuit_generators(build("hva", m))
    assert len(hva) == 2
    assert hva[0].allclose(sum((PauliSum.from_ops(4, {i: "Z", j: "Z"}) for i, j in chain_edges(4)), PauliSum.zero(4)))
    assert len(circuit_generators(build("orb", m))) == 4
    assert len(circuit_generators(build("free", m))) == 7


def test_qaoa_and_hva_parameter_counts():
    assert build("hva", tfim_chain_model(9)).n_l == 2
    from orbforge.models import maxcut_model

    for s in range(3):
        g = random_regular_graph(10, 3, s)
        m = maxcut_model(g)
        assert build("hva", m).n_l == 2
        assert build("free", m).n_l == g.n + len(g.edges)
