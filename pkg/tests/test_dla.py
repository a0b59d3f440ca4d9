import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orbforge.ansatz import build
from orbforge.dla import OperatorBasis, circuit_generators, dla_dimension, lie_bracket, lie_closure
from orbforge.models import heisenberg_term, tfim_chain_model
from orbforge.pauli import PauliString, PauliSum, to_dense


def dense_closure_dim(gens):
    """Oracle: Lie closure of dense anti-Hermitian matrices with SVD rank tests."""
    mats = [1j * to_dense(g) for g in gens]
    basis = []

    def independent(m):
        stack = np.array([b.ravel() for b in basis] + [m.ravel()])
        return np.linalg.matrix_rank(stack, tol=1e-8) > len(basis)

    queue = []
    for m in mats:
        if independent(m):
            basis.append(m)
            queue.append(m)
    while queue:
        a = queue.pop()
        for b in mats:
            c = a @ b - b @ a
            if np.linalg.norm(c) > 1e-10 and independent(c):
                c = c / np.linalg.norm(c)
                basis.append(c)
                queue.append(c)
    return len(basis)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_open_chain_dims(n):
    m = tfim_chain_model(n)
    dims = {k: dla_dimension(build(k, m)).dim for k in ("hva", "orb", "free")}
    assert dims["hva"] == dims["orb"] == n * n
    # Free generators span every quadratic Majorana term: so(2n)
    assert dims["free"] == n * (2 * n - 1)


@pytest.mark.parametrize("kind", ["hva", "orb", "free"])
def test_closure_matches_dense_oracle(kind):
    gens = circuit_generators(build(kind, tfim_chain_model(3)))
    assert lie_closure(gens).dim == dense_closure_dim(gens)


def test_heisenberg_pair_closure_matches_dense_oracle():
    gens = [heisenberg_term(3, 0, 1), heisenberg_term(3, 1, 2)]
    assert lie_closure(gens).dim == dense_closure_dim(gens)


def test_single_qubit_su2():
    gens = [PauliSum.from_ops(1, {0: "X"}), PauliSum.from_ops(1, {0: "Z"})]
    assert lie_closure(gens).dim == 3


def test_commuting_generators_are_abelian():
    gens = [PauliSum.from_ops(3, {0: "Z", 1: "Z"}), PauliSum.from_ops(3, {1: "Z", 2: "Z"})]
    assert lie_closure(gens).dim == 2


def test_dependent_generators_counted_once():
    a = PauliSum.from_ops(2, {0: "X"})
    b = PauliSum.from_ops(2, {1: "X"})
    assert lie_closure([a, b, a + b * 2.0]).dim == 2


@settings(max_examples=15, deadline=None)
@given(st.lists(st.floats(-2, 2).filter(lambda v: abs(v) > 0.1), min_size=4, max_size=4))
def test_dim_invariant_under_recombination(coeffs):
    gens = circuit_generators(build("orb", tfim_chain_model(4)))
    a, b, c, d = coeffs
    mixed = [gens[0] * a + gens[1] * b, gens[1] * c, gens[2] + gens[3] * d, gens[3], gens[0]]
    assert lie_closure(mixed).dim == lie_closure(gens).dim


def test_closure_basis_is_closed():
    res = lie_closure(circuit_generators(build("orb", tfim_chain_model(4))))
    span = OperatorBasis()
    for b in res.basis:
        assert span.add(b)
    for x in res.basis:
        for y in res.basis:
            assert span.contains(lie_bracket(x, y))


def test_truncation_flag():
    res = lie_closure(circuit_generators(build("free", tfim_chain_model(4))), dim_cap=10)
    assert res.truncated and res.dim == 10


def test_full_algebra_is_capped_by_pauli_count():
    gens = [PauliSum.from_string(PauliString.from_label(lab)) for lab in ("XI", "ZI", "IX", "IZ", "ZZ")]
    res = lie_closure(gens)
    assert res.dim == 15


def test_bracket_is_hermitian():
    a = PauliSum.from_ops(2, {0: "X", 1: "Y"})
    b = PauliSum.from_ops(2, {0: "Z"})
    assert lie_bracket(a, b).is_hermitian()


def test_nonhermitian_input_rejected():
    with pytest.raises(ValueError):
        lie_closure([PauliSum.from_ops(1, {0: "X"}) * 1j])
