"""Dense state-vector arithmetic on a handful of qubits.

Basis labels are bit tuples ``(x1, ..., xm)`` and index amplitudes
lexicographically, with ``x1`` the most significant bit.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

ALGEBRA_TOL = 1e-12
ACCUMULATED_TOL = 1e-10


class DimensionError(ValueError):
    pass


class DomainError(ValueError):
    pass


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex)
    arr.flags.writeable = False
    return arr


def label_index(bits: Sequence[int]) -> int:
    idx = 0
    for b in bits:
        if b not in (0, 1):
            raise DomainError(f"basis label bits must be 0 or 1, got {b!r}")
        idx = (idx << 1) | int(b)
    return idx


def index_label(index: int, m: int) -> tuple[int, ...]:
    return tuple((index >> (m - 1 - k)) & 1 for k in range(m))


def label_str(bits: Sequence[int]) -> str:
    return "".join(str(b) for b in bits)


def parse_label(text: str) -> tuple[int, ...]:
    if not text or any(c not in "01" for c in text):
        raise DomainError(f"not a bitstring label: {text!r}")
    return tuple(int(c) for c in text)


def all_labels(m: int) -> list[tuple[int, ...]]:
    return [index_label(k, m) for k in range(2**m)]


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized vector of ``2**num_qubits`` complex amplitudes."""

    amplitudes: np.ndarray
    num_qubits: int = field(init=False)

    def __post_init__(self):
        amps = _frozen(np.ravel(self.amplitudes))
        n = amps.size
        m = n.bit_length() - 1
        if n < 2 or 2**m != n:
            raise DimensionError(f"amplitude count {n} is not a power of two >= 2")
        if not np.all(np.isfinite(amps)):
            raise DomainError("amplitudes must be finite")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > ACCUMULATED_TOL:
            raise DomainError(f"state is not normalized (norm^2 = {norm!r})")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "num_qubits", m)

    def __len__(self):
        return self.amplitudes.size

    def __getitem__(self, label):
        if isinstance(label, str):
            label = parse_label(label)
        if isinstance(label, tuple):
            if len(label) != self.num_qubits:
                raise DimensionError("label length does not match qubit count")
            return self.amplitudes[label_index(label)]
        return self.amplitudes[label]

    def allclose(self, other: "StateVector", atol: float = ALGEBRA_TOL) -> bool:
        return self.num_qubits == other.num_qubits and np.allclose(
            self.amplitudes, other.amplitudes, rtol=0, atol=atol
        )

    def __repr__(self):
        terms = []
        for k, a in enumerate(self.amplitudes):
            if abs(a) > ALGEBRA_TOL:
                terms.append(f"({a:.6g})|{label_str(index_label(k, self.num_qubits))}>")
        return "StateVector(" + " + ".join(terms) + ")"


@dataclass(frozen=True, eq=False)
class Unitary2:
    """A 2x2 unitary. ``params`` records (theta, alpha) when built from them."""

    matrix: np.ndarray
    params: tuple[float, float] | None = None

    def __post_init__(self):
        mat = _frozen(self.matrix)
        if mat.shape != (2, 2):
            raise DimensionError(f"expected a 2x2 matrix, got shape {mat.shape}")
        if not np.all(np.isfinite(mat)):
            raise DomainError("matrix entries must be finite")
        if not np.allclose(mat.conj().T @ mat, np.eye(2), rtol=0, atol=ALGEBRA_TOL):
            raise DomainError("matrix is not unitary")
        object.__setattr__(self, "matrix", mat)

    def allclose(self, other: "Unitary2", atol: float = ALGEBRA_TOL) -> bool:
        return np.allclose(self.matrix, other.matrix, rtol=0, atol=atol)

    def __repr__(self):
        if self.params is not None:
            return f"U(theta={self.params[0]:.6g}, alpha={self.params[1]:.6g})"
        return f"Unitary2({self.matrix.tolist()})"


class BasisKind(enum.Enum):
    COMPUTATIONAL = "computational"
    EWL_ENTANGLED = "ewl"


@dataclass(frozen=True, eq=False)
class Basis:
    """Orthonormal basis; row ``k`` of ``vectors`` is the vector for label index ``k``."""

    num_qubits: int
    vectors: np.ndarray
    kind: BasisKind

    def __post_init__(self):
        vecs = _frozen(self.vectors)
        dim = 2**self.num_qubits
        if vecs.shape != (dim, dim):
            raise DimensionError(f"basis needs {dim} vectors of length {dim}")
        object.__setattr__(self, "vectors", vecs)

    def vector(self, label) -> StateVector:
        if isinstance(label, str):
            label = parse_label(label)
        return StateVector(self.vectors[label_index(label)])

    def gram(self) -> np.ndarray:
        return self.vectors.conj() @ self.vectors.T


def basis_state(label, m: int) -> StateVector:
    if isinstance(label, str):
        label = parse_label(label)
    if len(label) != m:
        raise DimensionError(f"label {label_str(label)} has {len(label)} bits, expected {m}")
    amps = np.zeros(2**m, dtype=complex)
    amps[label_index(label)] = 1.0
    return StateVector(amps)


def u_theta_alpha(theta: float, alpha: float = 0.0, permissive: bool = False) -> Unitary2:
    """Two-parameter strategy operator ``U(theta, alpha)``.

    ``theta`` must lie in [0, pi] and ``alpha`` in [0, pi/2] unless
    ``permissive`` is set.
    """
    if not permissive:
        if not 0.0 - ALGEBRA_TOL <= theta <= math.pi + ALGEBRA_TOL:
            raise DomainError(f"theta={theta!r} outside [0, pi]")
        if not 0.0 - ALGEBRA_TOL <= alpha <= math.pi / 2 + ALGEBRA_TOL:
            raise DomainError(f"alpha={alpha!r} outside [0, pi/2]")
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    ea = complex(math.cos(alpha), math.sin(alpha))
    mat = np.array([[ea * c, 1j * s], [1j * s, ea.conjugate() * c]])
    return Unitary2(mat, params=(float(theta), float(alpha)))


_PAULI = {
    0: np.array([[1, 0], [0, 1]], dtype=complex),
    1: np.array([[0, 1], [1, 0]], dtype=complex),
}


def pauli(k: int) -> Unitary2:
    """sigma_0 (identity) or sigma_1 (bit flip)."""
    if k not in _PAULI:
        raise DomainError(f"pauli index must be 0 or 1, got {k!r}")
    return Unitary2(_PAULI[k])


def ewl_parameters(u: Unitary2, atol: float = 1e-9) -> tuple[float, float] | None:
    """Recover (theta, alpha) with ``u == U(theta, alpha)``, or None if ``u`` has another form."""
    if u.params is not None:
        return u.params
    m = u.matrix
    off = m[0, 1]
    if abs(off - m[1, 0]) > atol or abs(off.real) > atol or off.imag < -atol:
        return None
    s = max(off.imag, 0.0)
    c = abs(m[0, 0])
    theta = 2.0 * math.atan2(s, c)
    alpha = 0.0 if c < atol else math.atan2(m[0, 0].imag, m[0, 0].real)
    if alpha < -atol or alpha > math.pi / 2 + atol:
        return None
    alpha = min(max(alpha, 0.0), math.pi / 2)
    if not np.allclose(u_theta_alpha(theta, alpha).matrix, m, rtol=0, atol=atol):
        return None
    return theta, alpha


def apply_product_operator(ops: Sequence[Unitary2], psi: StateVector) -> StateVector:
    """Return ``(ops[0] (x) ... (x) ops[m-1]) |psi>``, acting qubit by qubit."""
    m = psi.num_qubits
    if len(ops) != m:
        raise DimensionError(f"{len(ops)} operators for a {m}-qubit state")
    t = psi.amplitudes.reshape((2,) * m)
    for j, op in enumerate(ops):
        t = np.moveaxis(np.tensordot(op.matrix, t, axes=([1], [j])), 0, j)
    return StateVector(t.reshape(-1))


def inner_product(bra: StateVector, ket: StateVector) -> complex:
    if bra.num_qubits != ket.num_qubits:
        raise DimensionError("inner product of states with different qubit counts")
    return complex(np.vdot(bra.amplitudes, ket.amplitudes))


def measurement_probabilities(psi: StateVector, basis: Basis) -> np.ndarray:
    """Probabilities ``|<b_k|psi>|^2`` in label order."""
    if psi.num_qubits != basis.num_qubits:
        raise DimensionError("state and basis have different qubit counts")
    amps = basis.vectors.conj() @ psi.amplitudes
    return np.abs(amps) ** 2


def computational_basis(m: int) -> Basis:
    if m < 1:
        raise DomainError("need at least one qubit")
    return Basis(m, np.eye(2**m, dtype=complex), BasisKind.COMPUTATIONAL)


def ewl_basis(m: int) -> Basis:
    """Entangled basis ``|psi_x> = (|x> + i|not x>)/sqrt(2)``."""
    if m < 1:
        raise DomainError("need at least one qubit")
    dim = 2**m
    full = dim - 1
    vecs = np.zeros((dim, dim), dtype=complex)
    for k in range(dim):
        vecs[k, k] = 1 / math.sqrt(2)
        vecs[k, k ^ full] = 1j / math.sqrt(2)
    return Basis(m, vecs, BasisKind.EWL_ENTANGLED)


def make_basis(kind: BasisKind, m: int) -> Basis:
    if kind is BasisKind.COMPUTATIONAL:
        return computational_basis(m)
    return ewl_basis(m)


def mw_initial_state(gamma: float, m: int) -> StateVector:
    """``cos(gamma/2)|0...0> + i sin(gamma/2)|1...1>`` for gamma in [0, pi]."""
    if not 0.0 - ALGEBRA_TOL <= gamma <= math.pi + ALGEBRA_TOL:
        raise DomainError(f"gamma={gamma!r} outside [0, pi]")
    if m < 1:
        raise DomainError("need at least one qubit")
    amps = np.zeros(2**m, dtype=complex)
    amps[0] += math.cos(gamma / 2)
    amps[-1] += 1j * math.sin(gamma / 2)
    return StateVector(amps)
