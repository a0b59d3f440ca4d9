"""State-vector simulation of layered templates with adjoint gradients.

States are plain complex numpy arrays of length ``2**n``; bit ``q`` of the
amplitude index is qubit ``q``. Gates are ``exp(-i theta G)``. Each gate is
lowered to one of two primitive ops:

* a Pauli rotation ``exp(-i a theta P)`` (x-rotation, zz, or one leg of an
  exchange gate), or
* an exchange rotation ``exp(-i a theta S_ij)`` with ``S = XX + YY + ZZ``,
  evaluated through ``S = 2 SWAP - 1``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from numba import njit

from .pauli import PauliString, PauliSum, commutes

MAX_QUBITS = 24
OP_PAULI = 0
OP_EXCHANGE = 1


# -- kernels ---------------------------------------------------------------
@njit(cache=True, inline="always")
def _parity(v):
    v ^= v >> 32
    v ^= v >> 16
    v ^= v >> 8
    v ^= v >> 4
    v ^= v >> 2
    v ^= v >> 1
    return v & 1


@njit(cache=True, inline="always")
def _ipow(k):
    k &= 3
    if k == 0:
        return 1.0 + 0.0j
    if k == 1:
        return 0.0 + 1.0j
    if k == 2:
        return -1.0 + 0.0j
    return 0.0 - 1.0j


@njit(cache=True, inline="always")
def _insert_zero(k, p):
    low = k & ((1 << p) - 1)
    return ((k >> p) << (p + 1)) | low


@njit(cache=True)
def _lowbit_pos(x):
    p = 0
    while not (x >> p) & 1:
        p += 1
    return p


@njit(cache=True)
def _rot_pauli(psi, x, z, ny, angle):
    c = np.cos(angle)
    s = np.sin(angle)
    dim = psi.shape[0]
    if x == 0:
        em = c - 1j * s
        ep = c + 1j * s
        for a in range(dim):
            if _parity(a & z):
                psi[a] *= ep
            else:
                psi[a] *= em
        return
    ph = _ipow(ny)
    p = _lowbit_pos(x)
    for k in range(dim >> 1):
        a = _insert_zero(k, p)
        b = a ^ x
        pa = ph * (1 - 2 * _parity(b & z))
        pb = ph * (1 - 2 * _parity(a & z))
        va = psi[a]
        vb = psi[b]
        psi[a] = c * va - 1j * s * pa * vb
        psi[b] = c * vb - 1j * s * pb * va


@njit(cache=True)
def _inner_pauli(lam, psi, x, z, ny):
    # <lam| P |psi>
    acc = 0.0 + 0.0j
    dim = psi.shape[0]
    if x == 0:
        for a in range(dim):
            v = np.conj(lam[a]) * psi[a]
            if _parity(a & z):
                acc -= v
            else:
                acc += v
        return acc
    for a in range(dim):
        b = a ^ x
        v = np.conj(lam[a]) * psi[b]
        if _parity(b & z):
            acc -= v
        else:
            acc += v
    return acc * _ipow(ny)


@njit(cache=True)
def _add_pauli(out, psi, x, z, ny, coeff):
    # out += coeff * P psi
    dim = psi.shape[0]
    ph = coeff * _ipow(ny)
    for a in range(dim):
        b = a ^ x
        if _parity(b & z):
            out[a] -= ph * psi[b]
        else:
            out[a] += ph * psi[b]


@njit(cache=True)
def _rot_exchange(psi, i, j, angle):
    # exp(-i angle S_ij) = exp(i angle) (cos 2angle - i sin 2angle SWAP_ij)
    g = np.exp(1j * angle)
    c2 = g * np.cos(2 * angle)
    s2 = -1j * g * np.sin(2 * angle)
    same = np.exp(-1j * angle)
    bi = 1 << i
    bj = 1 << j
    m = bi | bj
    dim = psi.shape[0]
    for a in range(dim):
        t = a & m
        if t == 0 or t == m:
            psi[a] *= same
        elif t == bi:
            b = a ^ m
            va = psi[a]
            vb = psi[b]
            psi[a] = c2 * va + s2 * vb
            psi[b] = c2 * vb + s2 * va


@njit(cache=True)
def _inner_exchange(lam, psi, i, j):
    # <lam| S_ij |psi> with S = 2 SWAP - 1
    bi = 1 << i
    bj = 1 << j
    m = bi | bj
    acc = 0.0 + 0.0j
    for a in range(psi.shape[0]):
        t = a & m
        if t == 0 or t == m:
            acc += np.conj(lam[a]) * psi[a]
        else:
            acc += np.conj(lam[a]) * (2.0 * psi[a ^ m] - psi[a])
    return acc


@njit(cache=True)
def _apply_op(psi, kind, a, b, ny, angle):
    if kind == 0:
        _rot_pauli(psi, a, b, ny, angle)
    else:
        _rot_exchange(psi, a, b, angle)


@njit(cache=True)
def _forward(psi, kinds, aa, bb, nys, mults, slots, theta):
    for g in range(kinds.shape[0]):
        _apply_op(psi, kinds[g], aa[g], bb[g], nys[g], mults[g] * theta[slots[g]])


@njit(cache=True)
def _apply_h(out, psi, diag, hx, hz, hny, hc):
    for a in range(psi.shape[0]):
        out[a] = diag[a] * psi[a]
    for t in range(hx.shape[0]):
        _add_pauli(out, psi, hx[t], hz[t], hny[t], hc[t])


@njit(cache=True)
def _energy_grad(psi, kinds, aa, bb, nys, mults, slots, theta, diag, hx, hz, hny, hc, grad):
    """Forward sweep, then adjoint sweep accumulating into ``grad`` per slot.

    ``psi`` is overwritten. Returns the energy.
    """
    _forward(psi, kinds, aa, bb, nys, mults, slots, theta)
    lam = np.empty_like(psi)
    _apply_h(lam, psi, diag, hx, hz, hny, hc)
    energy = 0.0
    for a in range(psi.shape[0]):
        energy += (np.conj(psi[a]) * lam[a]).real
    for g in range(kinds.shape[0] - 1, -1, -1):
        k = kinds[g]
        m = mults[g]
        if k == 0:
            ov = _inner_pauli(lam, psi, aa[g], bb[g], nys[g])
        else:
            ov = _inner_exchange(lam, psi, aa[g], bb[g])
        # d/dtheta <psi|H|psi> = 2 Re <lam| -i m G |psi>
        grad[slots[g]] += 2.0 * m * ov.imag
        angle = -m * theta[slots[g]]
        _apply_op(psi, k, aa[g], bb[g], nys[g], angle)
        _apply_op(lam, k, aa[g], bb[g], nys[g], angle)
    return energy


@njit(cache=True)
def _sign_vector(n, z):
    out = np.empty(1 << n, dtype=np.float64)
    for a in range(out.shape[0]):
        out[a] = 1.0 - 2.0 * _parity(a & z)
    return out


# -- states ------------------------------------------------------------------
def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_QUBITS:
        raise ValueError(f"state vectors support 1..{MAX_QUBITS} qubits, got {n}")


def num_qubits(psi: np.ndarray) -> int:
    n = int(psi.shape[0]).bit_length() - 1
    if psi.ndim != 1 or 1 << n != psi.shape[0]:
        raise ValueError(f"state length {psi.shape} is not a power of two")
    return n


def singlet_pairs(rows: int, cols: int) -> list[tuple[int, int]]:
    if cols % 2:
        raise ValueError(f"row singlets need an even number of columns, got {cols}")
    return [(r * cols + c, r * cols + c + 1) for r in range(rows) for c in range(0, cols, 2)]


def init_state(kind: str, n: int | None = None, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Initial state ``zeros``, ``plus`` or ``row-singlets``.

    Row singlets put ``(|01> - |10>)/sqrt(2)`` on sites ``(c, c+1)``, ``c`` even,
    of every row; the amplitude with only the lower site set is ``+1/sqrt(2)``.
    """
    if kind == "row-singlets":
        if rows is None or cols is None:
            raise ValueError("row-singlets needs rows and cols")
        n = rows * cols if n is None else n
        if n != rows * cols:
            raise ValueError(f"n={n} does not match a {rows}x{cols} lattice")
    if n is None:
        raise ValueError("qubit count required")
    _check_n(n)
    dim = 1 << n
    if kind == "zeros":
        psi = np.zeros(dim, dtype=complex)
        psi[0] = 1.0
        return psi
    if kind == "plus":
        return np.full(dim, dim ** -0.5, dtype=complex)
    if kind == "row-singlets":
        # pairs are consecutive qubits in ascending order; kron puts later pairs on higher bits
        psi = np.ones(1, dtype=complex)
        singlet = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)
        for _ in singlet_pairs(rows, cols):
            psi = np.kron(singlet, psi)
        return psi
    raise ValueError(f"unknown initial state {kind!r}")


# -- single operations (numpy reference path) ------------------------------
def apply_pauli(psi: np.ndarray, p: PauliString) -> np.ndarray:
    """Return ``P psi`` without building a matrix."""
    n = num_qubits(psi)
    if p.n != n:
        raise ValueError(f"{p.n}-qubit Pauli on a {n}-qubit state")
    idx = np.arange(1 << n)
    src = idx ^ p.x
    sign = _sign_vector(n, p.z)[src]
    return (1j ** p.n_y) * sign * psi[src]


def apply_pauli_rotation(psi: np.ndarray, p: PauliString, theta: float) -> np.ndarray:
    """``exp(-i theta P) psi = cos(theta) psi - i sin(theta) P psi``."""
    if p.is_identity():
        warnings.warn("identity generator in a Pauli rotation; state left unchanged", stacklevel=2)
        return psi.copy()
    return np.cos(theta) * psi - 1j * np.sin(theta) * apply_pauli(psi, p)


def apply_exchange_rotation(psi: np.ndarray, i: int, j: int, theta: float) -> np.ndarray:
    out = np.array(psi, dtype=complex, copy=True)
    _rot_exchange(out, i, j, float(theta))
    return out


# -- Hamiltonians -------------------------------------------------------------
class CompiledHamiltonian:
    """A PauliSum split into a diagonal vector and off-diagonal Pauli terms."""

    def __init__(self, h: PauliSum):
        _check_n(h.n)
        self.n = h.n
        self.hamiltonian = h
        diag = np.zeros(1 << h.n, dtype=complex)
        off = []
        for (x, z), c in h.items():
            if x == 0:
                diag += c * _sign_vector(h.n, z)
            else:
                off.append((x, z, bin(x & z).count("1"), c))
        self.diag = diag
        self.hx = np.array([t[0] for t in off], dtype=np.int64)
        self.hz = np.array([t[1] for t in off], dtype=np.int64)
        self.hny = np.array([t[2] for t in off], dtype=np.int64)
        self.hc = np.array([t[3] for t in off], dtype=complex)

    def apply(self, psi: np.ndarray) -> np.ndarray:
        out = np.empty_like(psi, dtype=complex)
        _apply_h(out, np.ascontiguousarray(psi, dtype=complex), self.diag, self.hx, self.hz, self.hny, self.hc)
        return out

    def expectation(self, psi: np.ndarray) -> complex:
        return complex(np.vdot(psi, self.apply(psi)))


def _compiled_h(h) -> CompiledHamiltonian:
    return h if isinstance(h, CompiledHamiltonian) else CompiledHamiltonian(h)


def energy(psi: np.ndarray, h: PauliSum | CompiledHamiltonian, tol: float = 1e-10) -> float:
    """Exact ``<psi|H|psi>``; a non-negligible imaginary part is an error."""
    ch = _compiled_h(h)
    if ch.n != num_qubits(psi):
        raise ValueError(f"{ch.n}-qubit Hamiltonian on a {num_qubits(psi)}-qubit state")
    e = ch.expectation(psi)
    if abs(e.imag) > tol * max(1.0, abs(e.real)):
        raise ValueError(f"energy has imaginary part {e.imag:.3e}; Hamiltonian is not Hermitian")
    return e.real


# -- circuits ----------------------------------------------------------------
@dataclass
class CompiledCircuit:
    """Flat op list for ``layers`` repetitions of a template layer."""

    n: int
    n_params: int
    kinds: np.ndarray
    aa: np.ndarray
    bb: np.ndarray
    nys: np.ndarray
    mults: np.ndarray
    slots: np.ndarray
    initial: np.ndarray


def _lower_gate(gate, exchange_as_swap: bool):
    """Primitive ops ``(kind, a, b, ny, mult)`` for one gate."""
    if gate.kind == "exchange" and exchange_as_swap:
        i, j = gate.qubits
        return [(OP_EXCHANGE, i, j, 0, 1.0)]
    terms = gate.generator.terms
    for s in range(len(terms)):
        for t in range(s):
            if not commutes(terms[s].string, terms[t].string):
                raise ValueError(f"gate generator {gate.generator} has non-commuting terms")
    ops = []
    for term in terms:
        if abs(term.coeff.imag) > 1e-12:
            raise ValueError("gate generators must be Hermitian")
        p = term.string
        ops.append((OP_PAULI, p.x, p.z, p.n_y, term.coeff.real))
    return ops


def compile_circuit(template, layers: int, exchange_as_swap: bool = True, initial=None) -> CompiledCircuit:
    if layers < 0:
        raise ValueError("layers must be non-negative")
    layer_ops = []
    for sub in template.layer.sublayers:
        for gate in sub:
            for op in _lower_gate(gate, exchange_as_swap):
                layer_ops.append(op + (gate.slot,))
    rows = []
    for l in range(layers):
        off = l * template.n_l
        rows += [(k, a, b, ny, m, s + off) for k, a, b, ny, m, s in layer_ops]
    arr = lambda i, dt: np.array([r[i] for r in rows], dtype=dt)
    psi0 = template_initial_state(template) if initial is None else np.asarray(initial, dtype=complex)
    return CompiledCircuit(
        n=template.n,
        n_params=template.n_l * layers,
        kinds=arr(0, np.int64), aa=arr(1, np.int64), bb=arr(2, np.int64),
        nys=arr(3, np.int64), mults=arr(4, np.float64), slots=arr(5, np.int64),
        initial=psi0,
    )


def template_initial_state(template) -> np.ndarray:
    return init_state(template.initial_state, template.n, template.rows, template.cols)


def _theta(cc: CompiledCircuit, theta) -> np.ndarray:
    theta = np.ascontiguousarray(theta, dtype=np.float64).ravel()
    if theta.shape[0] != cc.n_params:
        raise ValueError(f"expected {cc.n_params} parameters, got {theta.shape[0]}")
    return theta


def run_compiled(cc: CompiledCircuit, theta, state=None) -> np.ndarray:
    theta = _theta(cc, theta)
    psi = np.array(cc.initial if state is None else state, dtype=complex, copy=True)
    if psi.shape[0] != 1 << cc.n:
        raise ValueError("state size does not match circuit")
    _forward(psi, cc.kinds, cc.aa, cc.bb, cc.nys, cc.mults, cc.slots, theta)
    return psi


def run(template, layers: int, theta, state=None) -> np.ndarray:
    """Apply ``layers`` layers of ``template`` to its initial state (or ``state``)."""
    return run_compiled(compile_circuit(template, layers), theta, state)


def energy_and_gradient_compiled(cc: CompiledCircuit, ch: CompiledHamiltonian, theta) -> tuple[float, np.ndarray]:
    theta = _theta(cc, theta)
    if ch.n != cc.n:
        raise ValueError("Hamiltonian and circuit act on different qubit counts")
    grad = np.zeros(cc.n_params)
    psi = cc.initial.copy()
    e = _energy_grad(psi, cc.kinds, cc.aa, cc.bb, cc.nys, cc.mults, cc.slots, theta,
                     ch.diag, ch.hx, ch.hz, ch.hny, ch.hc, grad)
    return float(e), grad


def gradient(template, layers: int, theta, h: PauliSum | CompiledHamiltonian) -> np.ndarray:
    """Adjoint gradient of ``E(theta)``; gates sharing a slot add up."""
    return energy_and_gradient_compiled(compile_circuit(template, layers), _compiled_h(h), theta)[1]


class Objective:
    """``theta -> (E, grad E)`` for a fixed template, depth and Hamiltonian."""

    def __init__(self, template, layers: int, h: PauliSum | CompiledHamiltonian):
        self.cc = compile_circuit(template, layers)
        self.ch = _compiled_h(h)
        self.n_params = self.cc.n_params
        self.calls = 0

    def __call__(self, theta) -> tuple[float, np.ndarray]:
        self.calls += 1
        return energy_and_gradient_compiled(self.cc, self.ch, theta)

    def energy(self, theta) -> float:
        return energy(run_compiled(self.cc, theta), self.ch)
