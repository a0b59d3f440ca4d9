import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orbforge.ansatz import build
from orbforge.models import Graph, maxcut_hamiltonian, tfim_1d, tfim_chain_model, j1j2_grid
from orbforge.optimizer import ground_energy, initial_parameters, minimize, multistart_vqe, wolfe_line_search
from orbforge.pauli import PauliSum


def tfim_ring_exact(n, h):
    """Free-fermion ground energy of the periodic chain (even n): antiperiodic momenta."""
    k = (2 * np.arange(n) + 1) * np.pi / n
    return -np.sum(np.sqrt(1 + h * h - 2 * h * np.cos(k)))


def test_quadratic_bowl():
    r = minimize(lambda x: (x @ x, 2 * x), np.array([3.0, -1.0, 2.0]))
    assert r.converged
    assert np.max(np.abs(r.theta)) < 1e-8
    assert r.iterations <= 30


def test_rosenbrock():
    def f(x):
        a, b = x
        return (1 - a) ** 2 + 100 * (b - a * a) ** 2, np.array([-2 * (1 - a) - 400 * a * (b - a * a), 200 * (b - a * a)])

    r = minimize(f, np.array([-1.2, 1.0]))
    np.testing.assert_allclose(r.theta, [1, 1], atol=1e-6)


def test_one_qubit_cosine():
    r = minimize(lambda t: (-np.cos(t[0]), np.array([np.sin(t[0])])), np.array([1.0]))
    assert r.energy == pytest.approx(-1.0, abs=1e-12)
    assert np.cos(r.theta[0]) == pytest.approx(1.0)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=3, max_size=3), st.lists(st.floats(0.5, 10), min_size=3, max_size=3))
def test_energy_never_increases_on_convex_quadratics(x0, diag):
    d = np.array(diag)
    seen = []

    def f(x):
        v = 0.5 * float(x @ (d * x))
        seen.append(v)
        return v, d * x

    r = minimize(f, np.array(x0))
    assert r.energy <= seen[0] + 1e-15
    assert r.energy < 1e-12


def test_line_search_satisfies_strong_wolfe():
    f = lambda x: (float(np.sum(x ** 4)), 4 * x ** 3)
    x = np.array([1.0, -2.0])
    f0, g0 = f(x)
    d = -g0
    a, fa, ga = wolfe_line_search(f, x, f0, g0, d, 1.0)
    assert fa <= f0 + 1e-4 * a * (g0 @ d)
    assert abs(ga @ d) <= 0.9 * abs(g0 @ d)


def test_line_search_recovers_from_nonfinite_values():
    def f(x):
        if x[0] > 2:
            return np.inf, np.array([np.nan])
        return (x[0] - 1.5) ** 2, np.array([2 * (x[0] - 1.5)])

    x = np.array([0.0])
    f0, g0 = f(x)
    step = wolfe_line_search(f, x, f0, g0, np.array([10.0]), 1.0)
    assert step is not None and np.isfinite(step[1]) and step[1] < f0


def test_nonfinite_start_rejected():
    with pytest.raises(ValueError):
        minimize(lambda x: (0.0, x), np.array([np.nan]))


def test_ground_energy_single_z():
    assert ground_energy(PauliSum.from_ops(1, {0: "Z"})) == pytest.approx(-1.0)


def test_k4_maxcut_ground_energy():
    g = Graph.from_edges(4, itertools.combinations(range(4), 2))
    assert ground_energy(maxcut_hamiltonian(g)) == pytest.approx(-2.0, abs=1e-12)


@pytest.mark.parametrize("h", [0.5, 1.0, 1.7])
@pytest.mark.parametrize("n", [6, 8, 10])
def test_ring_ground_energy_matches_free_fermions(n, h):
    assert ground_energy(tfim_1d(n, h, periodic=True), method="lanczos") == pytest.approx(tfim_ring_exact(n, h), abs=1e-9)


@pytest.mark.parametrize("h", [tfim_1d(7, 0.9), j1j2_grid(2, 4), tfim_1d(10, 1.2)])
def test_lanczos_matches_dense(h):
    assert ground_energy(h, method="lanczos") == pytest.approx(ground_energy(h, method="dense"), abs=1e-8)


def test_tfim_orb_reaches_ground_energy():
    m = tfim_chain_model(4)
    e_gs = ground_energy(m.hamiltonian)
    r = multistart_vqe(build("orb", m), 4, m.hamiltonian, n_rep=5, seed=0)
    assert abs(r.energy - e_gs) < 1e-8
    assert r.energy >= e_gs - 1e-9


def test_multistart_is_deterministic_and_best_is_min():
    m = tfim_chain_model(5)
    t = build("hva", m)
    a = multistart_vqe(t, 2, m.hamiltonian, n_rep=4, seed=7)
    b = multistart_vqe(t, 2, m.hamiltonian, n_rep=4, seed=7)
    assert a.restart_energies == b.restart_energies
    assert a.energy == min(a.restart_energies)
    assert a.median_energy == np.median(a.restart_energies)


def test_single_restart_reduces_to_minimize():
    from orbforge.optimizer import restart_seeds
    from orbforge.simulator import Objective

    m = tfim_chain_model(4)
    t = build("orb", m)
    r = multistart_vqe(t, 2, m.hamiltonian, n_rep=1, seed=3)
    x0 = initial_parameters(np.random.default_rng(restart_seeds(3, 1)[0]), t.n_params(2))
    direct = minimize(Objective(t, 2, m.hamiltonian), x0)
    assert r.energy == direct.energy


def test_initial_parameter_distributions():
    rng = np.random.default_rng(0)
    u = initial_parameters(rng, 10_000, "uniform")
    assert u.min() >= -np.pi and u.max() <= np.pi
    s = initial_parameters(rng, 10_000, "small")
    assert abs(np.std(s) - 0.01) < 1e-3
    with pytest.raises(ValueError):
        initial_parameters(rng, 3, "gaussian")
