"""Dense qubit-state primitives: Pauli algebra, states, correlation functions.

Everything here works on dense ``2**N x 2**N`` arrays. The number of qubits
is capped by :data:`MAX_QUBITS` (default 8); raise it on the module if you
know what you are doing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence, Union

import numpy as np

MAX_QUBITS = 8

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = -1e-9
NORM_TOL = 1e-12

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
# x, y, z stacked; shape (3, 2, 2)
PAULI_XYZ = np.stack([_PAULI["x"], _PAULI["y"], _PAULI["z"]])


def pauli(axis: str) -> np.ndarray:
    """Return the Pauli matrix for ``axis`` in ``{"x", "y", "z"}``."""
    try:
        return _PAULI[axis.lower()].copy()
    except (KeyError, AttributeError):
        raise ValueError(f"unknown Pauli axis {axis!r}") from None


def _check_num_qubits(n: int) -> None:
    if n < 1:
        raise ValueError("need at least one qubit")
    if n > MAX_QUBITS:
        raise ValueError(f"{n} qubits exceeds the dense limit MAX_QUBITS={MAX_QUBITS}")


def _num_qubits_for_dim(dim: int) -> int:
    n = int(round(np.log2(dim)))
    if 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


@dataclass(frozen=True)
class PureState:
    """Normalized state vector of ``num_qubits`` qubits (big-endian ordering)."""

    amplitudes: np.ndarray
    num_qubits: int = field(init=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        n = _num_qubits_for_dim(amps.size)
        _check_num_qubits(n)
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        norm = np.vdot(amps, amps).real
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm^2 = {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "num_qubits", n)

    @classmethod
    def from_unnormalized(cls, vec) -> "PureState":
        vec = np.asarray(vec, dtype=complex).reshape(-1)
        return cls(vec / np.linalg.norm(vec))

    def density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))

    def tensor(self, other: "PureState") -> "PureState":
        return PureState(np.kron(self.amplitudes, other.amplitudes))


@dataclass(frozen=True)
class DensityMatrix:
    """Validated density operator: Hermitian, unit trace, positive semidefinite."""

    matrix: np.ndarray
    num_qubits: int = field(init=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        n = _num_qubits_for_dim(m.shape[0])
        _check_num_qubits(n)
        if not np.all(np.isfinite(m)):
            raise ValueError("density matrix entries must be finite")
        if np.abs(m - m.conj().T).max() > HERMITIAN_TOL:
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace is {tr!r}, expected 1")
        lam_min = np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min()
        if lam_min < PSD_TOL:
            raise ValueError(f"density matrix has negative eigenvalue {lam_min:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "num_qubits", n)

    def density(self) -> "DensityMatrix":
        return self

    def tensor(self, other: "DensityMatrix") -> "DensityMatrix":
        return DensityMatrix(np.kron(self.matrix, other.density().matrix))

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def rank(self, tol: float = 1e-9) -> int:
        return int(np.sum(np.linalg.eigvalsh(self.matrix) > tol))


State = Union[PureState, DensityMatrix]


def as_density(state) -> DensityMatrix:
    """Coerce a :class:`PureState`, :class:`DensityMatrix` or raw array."""
    if isinstance(state, (PureState, DensityMatrix)):
        return state.density()
    arr = np.asarray(state, dtype=complex)
    if arr.ndim == 1:
        return PureState(arr).density()
    return DensityMatrix(arr)


def bloch_vector(u, *, normalized: bool = True) -> np.ndarray:
    """Return ``u`` as a float array of shape (3,), checking unit norm by default."""
    u = np.asarray(u, dtype=float).reshape(-1)
    if u.shape != (3,):
        raise ValueError(f"Bloch vector must have 3 components, got {u.shape}")
    if normalized and abs(np.linalg.norm(u) - 1.0) > NORM_TOL:
        raise ValueError(f"measurement direction {u} is not a unit vector")
    return u


def sigma_u(u) -> np.ndarray:
    """Spin observable ``u . sigma`` along the unit direction ``u``."""
    u = bloch_vector(u)
    return np.tensordot(u, PAULI_XYZ, axes=1)


def kron_all(mats: Iterable[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, mats)


def correlation(state, dirs: Sequence) -> float:
    """Correlation ``<sigma_u1 x ... x sigma_uN>`` of ``state``.

    The tensor-product observable is materialized explicitly; use
    :func:`correlation_tensor` when many directions are needed.
    """
    rho = as_density(state)
    if len(dirs) != rho.num_qubits:
        raise ValueError(f"need {rho.num_qubits} directions, got {len(dirs)}")
    obs = kron_all(sigma_u(u) for u in dirs)
    return float(np.real(np.trace(rho.matrix @ obs)))


def correlation_tensor(state) -> np.ndarray:
    """Full-body correlation tensor ``T[i1..iN] = tr[rho sigma_i1 x ... x sigma_iN]``.

    Accepts a single state (result shape ``(3,)*N``) or a stacked array of
    density matrices of shape ``(B, 2**N, 2**N)`` (result ``(B,) + (3,)*N``).
    """
    if isinstance(state, np.ndarray) and state.ndim == 3:
        rho = state
        batched = True
    else:
        rho = as_density(state).matrix[None]
        batched = False
    n = _num_qubits_for_dim(rho.shape[-1])
    b = rho.shape[0]
    r = rho.reshape((b,) + (2,) * (2 * n))
    # tr[rho P] = sum_{ab} rho_{ab} P_{ba}; row index a_k, column index b_k
    row = list(range(1, n + 1))
    col = list(range(n + 1, 2 * n + 1))
    out_axes = list(range(2 * n + 1, 3 * n + 1))
    operands = [r, [0] + row + col]
    for k in range(n):
        operands += [PAULI_XYZ, [out_axes[k], col[k], row[k]]]
    t = np.einsum(*operands, [0] + out_axes, optimize=True).real
    return t if batched else t[0]


def apply_local_unitaries(state, unitaries: Sequence[np.ndarray]):
    """Apply ``U_1 x ... x U_N`` to a pure state or density matrix."""
    full = kron_all(unitaries)
    if isinstance(state, PureState):
        return PureState.from_unnormalized(full @ state.amplitudes)
    rho = as_density(state).matrix
    return DensityMatrix(full @ rho @ full.conj().T)


def partial_trace(state, keep: Sequence[int]) -> DensityMatrix:
    """Reduced state on the qubits listed in ``keep`` (in the given order)."""
    rho = as_density(state)
    n = rho.num_qubits
    keep = list(keep)
    drop = [q for q in range(n) if q not in keep]
    r = rho.matrix.reshape((2,) * (2 * n))
    perm = keep + drop + [n + q for q in keep] + [n + q for q in drop]
    r = r.transpose(perm)
    dk, dd = 2 ** len(keep), 2 ** len(drop)
    r = r.reshape(dk, dd, dk, dd)
    return DensityMatrix(np.einsum("ajbj->ab", r))


# ---------------------------------------------------------------- constructors


def basis_state(bits: str) -> PureState:
    vec = np.zeros(2 ** len(bits), dtype=complex)
    vec[int(bits, 2)] = 1.0
    return PureState(vec)


def ghz(n: int) -> PureState:
    """``(|0...0> + |1...1>)/sqrt(2)``."""
    _check_num_qubits(n)
    vec = np.zeros(2**n, dtype=complex)
    vec[0] = vec[-1] = 1 / np.sqrt(2)
    return PureState(vec)


def w(n: int) -> PureState:
    """Equal superposition of all single-excitation basis states."""
    _check_num_qubits(n)
    if n < 2:
        raise ValueError("W state needs at least two qubits")
    vec = np.zeros(2**n, dtype=complex)
    for k in range(n):
        vec[1 << k] = 1 / np.sqrt(n)
    return PureState(vec)


def bell(kind: str = "phi+") -> PureState:
    s = 1 / np.sqrt(2)
    vecs = {
        "phi+": [s, 0, 0, s],
        "phi-": [s, 0, 0, -s],
        "psi+": [0, s, s, 0],
        "psi-": [0, s, -s, 0],
    }
    if kind not in vecs:
        raise ValueError(f"unknown Bell state {kind!r}")
    return PureState(np.array(vecs[kind], dtype=complex))


def bell_diagonal_eigenvalues(c) -> np.ndarray:
    cx, cy, cz = c
    return np.array(
        [
            (1 - cx - cy - cz) / 4,
            (1 + cx + cy - cz) / 4,
            (1 + cx - cy + cz) / 4,
            (1 - cx + cy + cz) / 4,
        ]
    )


def bell_diagonal(cx: float, cy: float, cz: float) -> DensityMatrix:
    """``(1 + sum_j c_j sigma_j x sigma_j)/4``; rejects parameters outside the tetrahedron."""
    c = np.array([cx, cy, cz], dtype=float)
    if np.any(np.abs(c) > 1 + 1e-12):
        raise ValueError("Bell-diagonal coefficients must satisfy |c_j| <= 1")
    lam = bell_diagonal_eigenvalues(c)
    if lam.min() < -1e-12:
        raise ValueError(f"coefficients {c} give negative eigenvalue {lam.min():.3e}")
    m = np.eye(4, dtype=complex)
    for cj, p in zip(c, PAULI_XYZ):
        m = m + cj * np.kron(p, p)
    return DensityMatrix(m / 4)


def maximally_mixed(n: int) -> DensityMatrix:
    _check_num_qubits(n)
    return DensityMatrix(np.eye(2**n, dtype=complex) / 2**n)


def noisy_ghz(p: float, n: int) -> DensityMatrix:
    """``p 1/2**N + (1-p) |GHZ_N><GHZ_N|``."""
    if not 0 <= p <= 1:
        raise ValueError("noise weight p must lie in [0, 1]")
    g = ghz(n).density().matrix
    return DensityMatrix(p * np.eye(2**n) / 2**n + (1 - p) * g)


def werner(q: float) -> DensityMatrix:
    """``q |psi-><psi-| + (1-q) 1/4``, valid for -1/3 <= q <= 1."""
    if not -1 / 3 - 1e-12 <= q <= 1 + 1e-12:
        raise ValueError("Werner parameter must lie in [-1/3, 1]")
    s = bell("psi-").density().matrix
    return DensityMatrix(q * s + (1 - q) * np.eye(4) / 4)


def qubit_state(u) -> PureState:
    """Pure single-qubit state with Bloch vector ``u``."""
    u = bloch_vector(u)
    theta = np.arccos(np.clip(u[2], -1, 1))
    phi = np.arctan2(u[1], u[0])
    return PureState(np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)]))


def product_state(bloch_vectors: Sequence) -> PureState:
    """Tensor product of pure qubit states pointing along ``bloch_vectors``."""
    vec = kron_all(qubit_state(u).amplitudes for u in bloch_vectors)
    return PureState(vec)


def tensor(*states) -> State:
    """Tensor product; stays pure if every factor is pure."""
    if all(isinstance(s, PureState) for s in states):
        return PureState(kron_all(s.amplitudes for s in states))
    return DensityMatrix(kron_all(as_density(s).matrix for s in states))


def standard_state(kind: str, n: int | None = None, **params) -> State:
    """Look up a named state; a thin dispatcher used by the CLI."""
    kind = kind.lower()
    if kind == "ghz":
        return ghz(n)
    if kind == "w":
        return w(n)
    if kind == "bell":
        return bell(params.get("which", "phi+"))
    if kind == "bell_diagonal":
        return bell_diagonal(*params["c"])
    if kind == "noisy_ghz":
        return noisy_ghz(params["p"], n)
    if kind == "werner":
        return werner(params["q"])
    if kind == "product":
        return basis_state("0" * n)
    if kind == "mixed":
        return maximally_mixed(n)
    raise ValueError(f"unknown state kind {kind!r}")
