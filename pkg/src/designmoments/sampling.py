"""Seeded random states: Haar unitaries, SLOCC-class pure states via
standard forms, their mixtures, and Hilbert-Schmidt mixed states.

Every sampler takes a :class:`numpy.random.Generator`; use :func:`rng_stream`
to derive independent, reproducible streams from one seed.  Internally the
samplers draw whole batches of pure states at once.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .core import DensityMatrix, PureState, _check_num_qubits

PURE_CLASSES = ("separable", "bisep", "w_class", "generic")


def rng_stream(seed: int, *stream: int) -> np.random.Generator:
    """Generator for sub-stream ``stream`` of ``seed``; same arguments, same draws."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(stream)))


def haar_unitaries(d: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` independent Haar-random ``d x d`` unitaries, shape ``(count, d, d)``.

    QR decomposition of complex Ginibre matrices, with the phases of R's
    diagonal moved into Q so the distribution is exactly Haar.
    """
    if d < 2:
        raise ValueError("dimension must be at least 2")
    z = (rng.standard_normal((count, d, d)) + 1j * rng.standard_normal((count, d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    return q * (diag / np.abs(diag))[:, None, :]


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    return haar_unitaries(d, 1, rng)[0]


def haar_state_vectors(d: int, count: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal((count, d)) + 1j * rng.standard_normal((count, d))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def uniform_simplex(k: int, rng: np.random.Generator, count: int | None = None) -> np.ndarray:
    """Uniform point(s) on the probability simplex with ``k`` entries (normalized exponentials)."""
    e = rng.standard_exponential(k if count is None else (count, k))
    return e / e.sum(axis=-1, keepdims=True)


def w_standard_form_vector(x_full) -> np.ndarray:
    """Amplitudes ``sqrt(x_0)|0..0> + sum_i sqrt(x_i)|0..1_i..0>``; qubit 1 is the leftmost.

    ``x_full`` may be a single weight vector of length ``N+1`` or a stack.
    """
    x = np.asarray(x_full, dtype=float)
    single = x.ndim == 1
    x = np.atleast_2d(x)
    n = x.shape[1] - 1
    _check_num_qubits(n)
    if np.any(x < -1e-12) or np.any(np.abs(x.sum(axis=1) - 1) > 1e-12):
        raise ValueError("W standard-form weights must lie on the simplex")
    amp = np.sqrt(np.maximum(x, 0.0))
    vec = np.zeros((x.shape[0], 2**n), dtype=complex)
    vec[:, 0] = amp[:, 0]
    for i in range(1, n + 1):
        vec[:, 1 << (n - i)] = amp[:, i]
    return vec[0] if single else vec


def w_standard_form(x_full: Sequence[float]) -> PureState:
    return PureState.from_unnormalized(w_standard_form_vector(x_full))


def acin_vector(lambdas, phi) -> np.ndarray:
    lam = np.atleast_2d(np.asarray(lambdas, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    vec = np.zeros((lam.shape[0], 8), dtype=complex)
    vec[:, 0b000] = lam[:, 0]
    vec[:, 0b100] = lam[:, 1] * np.exp(1j * phi)
    vec[:, 0b101] = lam[:, 2]
    vec[:, 0b110] = lam[:, 3]
    vec[:, 0b111] = lam[:, 4]
    return vec


def acin_state(lambdas: Sequence[float], phi: float) -> PureState:
    """Three-qubit standard form
    ``l0|000> + l1 e^{i phi}|100> + l2|101> + l3|110> + l4|111>``."""
    lam = np.asarray(lambdas, dtype=float)
    if lam.shape != (5,) or np.any(lam < 0):
        raise ValueError("need five non-negative coefficients")
    if not 0 <= phi <= np.pi:
        raise ValueError("phase must lie in [0, pi]")
    if abs(np.sum(lam**2) - 1) > 1e-12:
        raise ValueError("coefficients must satisfy sum lambda_i^2 = 1")
    return PureState(acin_vector(lam, phi)[0])


def random_acin_parameters(
    rng: np.random.Generator, count: int = 1, w_class: bool = False
) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients uniform on the positive part of the unit sphere, phase uniform on [0, pi].

    With ``w_class`` the coefficient of ``|111>`` and the phase are zero.
    """
    k = 4 if w_class else 5
    lam = np.abs(rng.standard_normal((count, k)))
    lam /= np.linalg.norm(lam, axis=1, keepdims=True)
    if w_class:
        return np.hstack([lam, np.zeros((count, 1))]), np.zeros(count)
    return lam, rng.uniform(0, np.pi, size=count)


def apply_local_unitaries_batch(vecs: np.ndarray, unitaries: np.ndarray) -> np.ndarray:
    """Apply ``U_1^(a) x ... x U_N^(a)`` to each row ``a`` of ``vecs``.

    ``vecs`` has shape ``(B, 2**N)``, ``unitaries`` shape ``(B, N, 2, 2)``.
    """
    b, n = unitaries.shape[0], unitaries.shape[1]
    psi = vecs.reshape((b,) + (2,) * n)
    for k in range(n):
        psi = np.moveaxis(np.einsum("bij,bj...->bi...", unitaries[:, k], np.moveaxis(psi, k + 1, 1)), 1, k + 1)
    return psi.reshape(b, -1)


def _kron_rows(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a[:, :, None] * b[:, None, :]).reshape(a.shape[0], -1)


def _product_over_blocks(blocks, n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    order = [q for block in blocks for q in block]
    if sorted(order) != list(range(n)):
        raise ValueError(f"partition {blocks} does not cover qubits 0..{n - 1} exactly once")
    vec = np.ones((count, 1), dtype=complex)
    for block in blocks:
        vec = _kron_rows(vec, haar_state_vectors(2 ** len(block), count, rng))
    # tensor axes follow `order`; move them back to qubits 0..n-1
    psi = vec.reshape((count,) + (2,) * n)
    return np.moveaxis(psi, list(range(1, n + 1)), [q + 1 for q in order]).reshape(count, -1)


def sample_pure_vectors(
    kind: str, n: int, count: int, rng: np.random.Generator, *, partition=None, lu: bool = False
) -> np.ndarray:
    """Batch of ``count`` normalized class members, shape ``(count, 2**N)``."""
    _check_num_qubits(n)
    if kind == "separable":
        vecs = _product_over_blocks([[q] for q in range(n)], n, count, rng)
    elif kind == "bisep":
        if n < 2:
            raise ValueError("bi-separable states need N >= 2")
        blocks = partition if partition is not None else [[0], list(range(1, n))]
        if len(blocks) < 2:
            raise ValueError("a bi-separable partition needs at least two blocks")
        vecs = _product_over_blocks(blocks, n, count, rng)
    elif kind == "w_class":
        if n < 2:
            raise ValueError("W class needs N >= 2")
        vecs = w_standard_form_vector(uniform_simplex(n + 1, rng, count))
    elif kind == "generic":
        if n == 3:
            vecs = acin_vector(*random_acin_parameters(rng, count))
        else:
            vecs = haar_state_vectors(2**n, count, rng)
    else:
        raise ValueError(f"unsupported class {kind!r}; choose from {PURE_CLASSES}")
    if lu:
        us = haar_unitaries(2, count * n, rng).reshape(count, n, 2, 2)
        vecs = apply_local_unitaries_batch(vecs, us)
    return vecs / np.linalg.norm(vecs, axis=1, keepdims=True)


def sample_pure_class(
    kind: str,
    n: int,
    rng: np.random.Generator,
    *,
    partition: Sequence[Sequence[int]] | None = None,
    lu: bool = False,
) -> PureState:
    """Random pure state from an SLOCC class.

    ``separable``: product of Haar qubit states; ``bisep``: product of Haar
    states over ``partition`` (default ``[[0], [1..N-1]]``); ``w_class``: W
    standard form with weights uniform on the simplex; ``generic``: the
    three-qubit standard form for ``N = 3``, a Haar random state otherwise.
    ``lu`` applies independent Haar local unitaries afterwards, which leaves
    every moment unchanged.
    """
    return PureState(sample_pure_vectors(kind, n, 1, rng, partition=partition, lu=lu)[0])


def bipartitions(n: int) -> list[list[list[int]]]:
    """All ``2**(N-1) - 1`` splits of ``N`` qubits into two non-empty blocks."""
    out = []
    for mask in range(1, 2 ** (n - 1)):
        a = [q for q in range(n) if mask >> q & 1]
        b = [q for q in range(n) if not mask >> q & 1]
        out.append([a, b])
    return out


def _mixed_members(kind, n, terms, rng, partition, lu) -> np.ndarray:
    if kind != "bisep" or partition is not None:
        return sample_pure_vectors(kind, n, terms, rng, partition=partition, lu=lu)
    splits = bipartitions(n)
    which = rng.integers(len(splits), size=terms)
    vecs = np.empty((terms, 2**n), dtype=complex)
    for j, split in enumerate(splits):
        idx = np.flatnonzero(which == j)
        if idx.size:
            vecs[idx] = sample_pure_vectors(kind, n, idx.size, rng, partition=split, lu=lu)
    return vecs


def sample_mixed_matrix(
    kind: str,
    n: int,
    rng: np.random.Generator,
    *,
    terms: int | None = None,
    lu: bool = True,
    partition=None,
) -> np.ndarray:
    """Raw array behind :func:`sample_mixed_class` (skips validation)."""
    terms = 2**n if terms is None else terms
    if terms < 1:
        raise ValueError("need at least one term")
    weights = rng.dirichlet(np.ones(terms)) if terms > 1 else np.ones(1)
    vecs = _mixed_members(kind, n, terms, rng, partition, lu)
    return np.einsum("a,ai,aj->ij", weights, vecs, vecs.conj(), optimize=True)


def sample_mixed_class(
    kind: str,
    n: int,
    rng: np.random.Generator,
    *,
    terms: int | None = None,
    lu: bool = True,
    partition=None,
) -> DensityMatrix:
    """Convex mixture of ``terms`` (default ``2**N``) class members.

    Weights are Dirichlet(1, ..., 1); each member gets its own random local
    unitaries when ``lu`` is set, since mixing without them covers less of
    the mixed class.  Bi-separable members without a fixed ``partition``
    each use a uniformly chosen bipartition.
    """
    _check_num_qubits(n)
    return DensityMatrix(sample_mixed_matrix(kind, n, rng, terms=terms, lu=lu, partition=partition))


def random_density_hs(n: int, rng: np.random.Generator) -> DensityMatrix:
    """Hilbert-Schmidt random state: partial trace of a Haar state on ``2^N x 2^N``."""
    _check_num_qubits(n)
    d = 2**n
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho).real)


def random_pure_state(n: int, rng: np.random.Generator) -> PureState:
    _check_num_qubits(n)
    return PureState(haar_state_vectors(2**n, 1, rng)[0])
