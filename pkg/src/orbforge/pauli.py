"""Pauli strings and weighted Pauli sums in the symplectic (x, z) representation.

Bit convention: qubit ``q`` is bit ``q`` of both masks and bit ``q`` of the
amplitude index, i.e. qubit 0 is the least significant bit. A string with
masks ``(x, z)`` denotes the operator ``i**|x & z| * X**x Z**z`` so that a set
x-bit and z-bit on the same qubit is exactly ``Y = iXZ``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

PRUNE_TOL = 1e-12
DENSE_CAP = 10

_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_PHASES = (1, 1j, -1, -1j)

_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _popcount(v: int) -> int:
    return bin(v).count("1")


@dataclass(frozen=True, order=True)
class PauliString:
    """A Pauli string on ``n`` qubits stored as two bit masks."""

    n: int
    x: int = 0
    z: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a Pauli string needs at least one qubit")
        full = (1 << self.n) - 1
        if self.x & ~full or self.z & ~full:
            raise ValueError(f"masks exceed {self.n} qubits")

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Build from a label whose k-th character acts on qubit k, e.g. ``"XIZ"``."""
        x = z = 0
        for q, ch in enumerate(label.upper()):
            try:
                bx, bz = _LETTER_BITS[ch]
            except KeyError:
                raise ValueError(f"unknown Pauli letter {ch!r}") from None
            x |= bx << q
            z |= bz << q
        return cls(len(label), x, z)

    @classmethod
    def from_ops(cls, n: int, ops: Mapping[int, str] | Iterable[tuple[int, str]]) -> "PauliString":
        """Build from ``{qubit: letter}``; qubits not mentioned get the identity."""
        items = ops.items() if isinstance(ops, Mapping) else ops
        x = z = 0
        for q, ch in items:
            if not 0 <= q < n:
                raise ValueError(f"qubit {q} outside range of {n} qubits")
            bx, bz = _LETTER_BITS[ch.upper()]
            if (x >> q) & 1 or (z >> q) & 1:
                raise ValueError(f"qubit {q} given twice")
            x |= bx << q
            z |= bz << q
        return cls(n, x, z)

    @property
    def label(self) -> str:
        return "".join(self.letter(q) for q in range(self.n))

    def letter(self, q: int) -> str:
        bx, bz = (self.x >> q) & 1, (self.z >> q) & 1
        return "IXZY"[bx | (bz << 1)]

    @property
    def support(self) -> tuple[int, ...]:
        m = self.x | self.z
        return tuple(q for q in range(self.n) if (m >> q) & 1)

    @property
    def weight(self) -> int:
        return _popcount(self.x | self.z)

    @property
    def n_y(self) -> int:
        return _popcount(self.x & self.z)

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def __repr__(self) -> str:
        return f"PauliString({self.label!r})"


def _check_same_n(a, b) -> None:
    if a.n != b.n:
        raise ValueError(f"qubit count mismatch: {a.n} vs {b.n}")


def pauli_mul(a: PauliString, b: PauliString) -> tuple[complex, PauliString]:
    """Return ``(phase, c)`` with ``a @ b == phase * c`` as operators.

    The phase is one of ``1, 1j, -1, -1j``.
    """
    _check_same_n(a, b)
    x = a.x ^ b.x
    z = a.z ^ b.z
    k = a.n_y + b.n_y - _popcount(x & z) + 2 * _popcount(a.z & b.x)
    return _PHASES[k % 4], PauliString(a.n, x, z)


def commutes(a: PauliString, b: PauliString) -> bool:
    """True iff the symplectic product of ``a`` and ``b`` is even."""
    _check_same_n(a, b)
    return (_popcount(a.x & b.z) + _popcount(a.z & b.x)) % 2 == 0


Permutation = Sequence[int]


def _permute_mask(mask: int, perm: Permutation) -> int:
    out = 0
    q = 0
    while mask:
        if mask & 1:
            out |= 1 << perm[q]
        mask >>= 1
        q += 1
    return out


def permute_pauli(p: PauliString, perm: Permutation) -> PauliString:
    """Relabel qubits so that the operator on qubit ``i`` moves to ``perm[i]``."""
    if len(perm) != p.n:
        raise ValueError(f"permutation of size {len(perm)} applied to {p.n} qubits")
    return PauliString(p.n, _permute_mask(p.x, perm), _permute_mask(p.z, perm))


@dataclass(frozen=True)
class PauliTerm:
    coeff: complex
    string: PauliString


class PauliSum:
    """An immutable linear combination of Pauli strings on ``n`` qubits.

    Terms are kept canonical: keyed by ``(x, z)`` masks, sorted by
    ``(z, x)`` and pruned of coefficients below ``PRUNE_TOL``.
    """

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Mapping[tuple[int, int], complex] | None = None, *, _raw=False):
        if n < 1:
            raise ValueError("a Pauli sum needs at least one qubit")
        self.n = n
        if _raw:
            self._terms = terms
            return
        full = (1 << n) - 1
        clean = {}
        for (x, z), c in (terms or {}).items():
            if x & ~full or z & ~full:
                raise ValueError(f"masks exceed {n} qubits")
            c = complex(c)
            if abs(c) > PRUNE_TOL:
                clean[(x, z)] = c
        self._terms = dict(sorted(clean.items(), key=lambda kv: (kv[0][1], kv[0][0])))

    # -- construction -----------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "PauliSum":
        return cls(n, {})

    @classmethod
    def from_string(cls, p: PauliString, coeff: complex = 1.0) -> "PauliSum":
        return cls(p.n, {(p.x, p.z): coeff})

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[tuple[complex, PauliString]]) -> "PauliSum":
        acc: dict[tuple[int, int], complex] = {}
        for c, p in terms:
            if p.n != n:
                raise ValueError(f"term on {p.n} qubits added to a sum on {n}")
            key = (p.x, p.z)
            acc[key] = acc.get(key, 0) + c
        return cls(n, acc)

    @classmethod
    def from_ops(cls, n: int, ops: Mapping[int, str], coeff: complex = 1.0) -> "PauliSum":
        return cls.from_string(PauliString.from_ops(n, ops), coeff)

    # -- access -----------------------------------------------------------
    @property
    def terms(self) -> list[PauliTerm]:
        return [PauliTerm(c, PauliString(self.n, x, z)) for (x, z), c in self._terms.items()]

    def items(self) -> Iterator[tuple[tuple[int, int], complex]]:
        return iter(self._terms.items())

    def coeff(self, p: PauliString) -> complex:
        return self._terms.get((p.x, p.z), 0j)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[PauliTerm]:
        return iter(self.terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return all(abs(c.imag) <= tol for c in self._terms.values())

    @property
    def support(self) -> tuple[int, ...]:
        m = 0
        for x, z in self._terms:
            m |= x | z
        return tuple(q for q in range(self.n) if (m >> q) & 1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self):
        return hash((self.n, tuple(self._terms.items())))

    def allclose(self, other: "PauliSum", atol: float = 1e-9) -> bool:
        _check_same_n(self, other)
        keys = set(self._terms) | set(other._terms)
        return all(abs(self._terms.get(k, 0) - other._terms.get(k, 0)) <= atol for k in keys)

    def __repr__(self) -> str:
        if not self._terms:
            return f"PauliSum(n={self.n}, 0)"
        body = " + ".join(f"({c:.6g})*{PauliString(self.n, x, z).label}" for (x, z), c in self._terms.items())
        return f"PauliSum(n={self.n}, {body})"

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: "PauliSum") -> "PauliSum":
        _check_same_n(self, other)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            acc[k] = acc.get(k, 0) + c
        return PauliSum(self.n, acc)

    def __neg__(self) -> "PauliSum":
        return PauliSum(self.n, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (-other)

    def __mul__(self, scalar: complex) -> "PauliSum":
        return PauliSum(self.n, {k: c * scalar for k, c in self._terms.items()})

    __rmul__ = __mul__

    def __matmul__(self, other: "PauliSum") -> "PauliSum":
        _check_same_n(self, other)
        acc: dict[tuple[int, int], complex] = {}
        for (ax, az), ca in self._terms.items():
            ay = _popcount(ax & az)
            for (bx, bz), cb in other._terms.items():
                x, z = ax ^ bx, az ^ bz
                k = ay + _popcount(bx & bz) - _popcount(x & z) + 2 * _popcount(az & bx)
                acc[(x, z)] = acc.get((x, z), 0) + _PHASES[k % 4] * ca * cb
        return PauliSum(self.n, acc)

    def permute(self, perm: Permutation) -> "PauliSum":
        if len(perm) != self.n:
            raise ValueError(f"permutation of size {len(perm)} applied to {self.n} qubits")
        return PauliSum(
            self.n,
            {(_permute_mask(x, perm), _permute_mask(z, perm)): c for (x, z), c in self._terms.items()},
        )

    # -- serialization ----------------------------------------------------
    def to_dict(self) -> dict:
        terms = []
        for (x, z), c in self._terms.items():
            p = PauliString(self.n, x, z)
            qubits = list(p.support)
            term = {"pauli": "".join(p.letter(q) for q in qubits), "qubits": qubits}
            if abs(c.imag) > PRUNE_TOL:
                term["coeff"] = [c.real, c.imag]
            else:
                term["coeff"] = c.real
            terms.append(term)
        return {"n": self.n, "terms": terms}

    @classmethod
    def from_dict(cls, doc: Mapping) -> "PauliSum":
        n = int(doc["n"])
        out = []
        for t in doc["terms"]:
            letters, qubits = t["pauli"], t["qubits"]
            if len(letters) != len(qubits):
                raise ValueError(f"pauli {letters!r} does not match qubits {qubits}")
            c = t["coeff"]
            c = complex(c[0], c[1]) if isinstance(c, (list, tuple)) else complex(c)
            out.append((c, PauliString.from_ops(n, zip(qubits, letters))))
        return cls.from_terms(n, out)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_json(cls, text: str) -> "PauliSum":
        return cls.from_dict(json.loads(text))


def commutator(a: PauliSum, b: PauliSum) -> PauliSum:
    """``[a, b] = ab - ba``, computed only over anticommuting term pairs."""
    _check_same_n(a, b)
    acc: dict[tuple[int, int], complex] = {}
    for (ax, az), ca in a.items():
        ay = _popcount(ax & az)
        for (bx, bz), cb in b.items():
            if (_popcount(ax & bz) + _popcount(az & bx)) % 2 == 0:
                continue
            x, z = ax ^ bx, az ^ bz
            k = ay + _popcount(bx & bz) - _popcount(x & z) + 2 * _popcount(az & bx)
            acc[(x, z)] = acc.get((x, z), 0) + 2 * _PHASES[k % 4] * ca * cb
    return PauliSum(a.n, acc)


def pauli_matrix(p: PauliString) -> np.ndarray:
    mat = np.ones((1, 1), dtype=complex)
    for q in reversed(range(p.n)):
        mat = np.kron(mat, _SINGLE[p.letter(q)])
    return mat


def to_dense(a: PauliSum | PauliString, cap: int = DENSE_CAP) -> np.ndarray:
    """Dense ``2**n x 2**n`` matrix; row/column index bit ``q`` is qubit ``q``."""
    if isinstance(a, PauliString):
        a = PauliSum.from_string(a)
    if a.n > cap:
        raise ValueError(f"refusing dense matrix for {a.n} qubits (cap {cap})")
    dim = 1 << a.n
    out = np.zeros((dim, dim), dtype=complex)
    for (x, z), c in a.items():
        out += c * pauli_matrix(PauliString(a.n, x, z))
    return out
