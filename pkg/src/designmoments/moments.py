"""Moments R^(t) of randomly measured N-qubit correlation functions.

``R^(t)`` is the average of ``E(u_1, ..., u_N)^t`` over independent uniformly
random measurement directions.  It is evaluated

* exactly, as a finite sum over a spherical (or unitary) design of strength
  at least ``t`` (:func:`moment_design`, :func:`moment_unitary_design`);
* approximately, by Monte Carlo over random directions
  (:func:`moment_monte_carlo`);
* in closed form for Bell-diagonal, W-class and GHZ families.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from itertools import product
from typing import Any

import numpy as np

from .core import as_density, bell_diagonal_eigenvalues, correlation_tensor
from .designs import SphericalDesign, UnitaryDesign, antipodal_representatives

SIXTH_MOMENT_MAX_QUBITS = 4
MC_CHUNK = 8192


@dataclass(frozen=True)
class MomentRecord:
    order: int
    value: float
    method: str  # "design-sum", "monte-carlo" or "closed-form"
    detail: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.method not in ("design-sum", "monte-carlo", "closed-form"):
            raise ValueError(f"unknown method {self.method!r}")
        if not np.isfinite(self.value) or abs(self.value) > 1 + 1e-9:
            raise ValueError(f"moment value {self.value!r} outside [-1, 1]")
        if self.order % 2 == 0 and self.value < -1e-12:
            raise ValueError(f"even moment is negative: {self.value!r}")

    def to_dict(self) -> dict:
        return asdict(self)


# ------------------------------------------------------------------ design sums


def correlations_on_grid(tensor: np.ndarray, points: np.ndarray, batched: bool = False) -> np.ndarray:
    """``E`` for every tuple of directions drawn from ``points``.

    ``tensor`` has shape ``(3,)*N`` (or ``(B,) + (3,)*N`` when ``batched``);
    the result has shape ``(L,)*N`` (or ``(B,) + (L,)*N``).
    """
    pts = np.asarray(points, dtype=float)
    e = tensor
    n = tensor.ndim - (1 if batched else 0)
    axis = 1 if batched else 0
    for _ in range(n):
        # contracting the leading qubit axis appends the point axis at the end
        e = np.tensordot(e, pts, axes=([axis], [1]))
    return e


def _check_strength(t: int, strength: int, name: str) -> None:
    if t < 1:
        raise ValueError("moment order must be a positive integer")
    if strength < t:
        raise ValueError(f"design {name!r} has strength {strength} < t={t}")


def _sum_points(design: SphericalDesign, t: int) -> tuple[np.ndarray, bool]:
    if t % 2 == 0:
        reps = antipodal_representatives(design.points)
        if reps is not None:
            return reps, True
    return design.points, False


def design_moment_values(tensors: np.ndarray, t: int, design: SphericalDesign) -> np.ndarray:
    """Design-sum moments for a stack of correlation tensors ``(B,) + (3,)*N``."""
    _check_strength(t, design.strength, design.name)
    pts, _ = _sum_points(design, t)
    e = correlations_on_grid(tensors, pts, batched=True)
    return np.mean(e.reshape(e.shape[0], -1) ** t, axis=1)


def moment_design(
    state, t: int, design: SphericalDesign, *, allow_large: bool = False
) -> MomentRecord:
    """Exact ``R^(t)`` as the average of ``E^t`` over all design-point tuples.

    For even ``t`` and antipodal designs only one point per antipodal pair is
    used; each representative tuple stands for ``2**N`` sign-flipped tuples
    with identical ``E^t``, which leaves the normalized average unchanged.
    """
    rho = as_density(state)
    _check_strength(t, design.strength, design.name)
    n = rho.num_qubits
    if t >= 6 and n > SIXTH_MOMENT_MAX_QUBITS and not allow_large:
        raise ValueError(
            f"R^({t}) on {n} qubits needs {len(design)}^{n} terms; pass allow_large=True"
        )
    pts, halved = _sum_points(design, t)
    e = correlations_on_grid(correlation_tensor(rho), pts)
    value = float(np.mean(e**t))
    return MomentRecord(
        t,
        value,
        "design-sum",
        {"design": design.name, "points": len(pts), "antipodal_halving": halved},
    )


def moment_unitary_design(state, t: int, design: UnitaryDesign) -> MomentRecord:
    """``R^(t)`` as an average over all tuples of unitary-design elements
    acting on ``sigma_z`` (no direction deduplication)."""
    rho = as_density(state)
    _check_strength(t, design.strength, design.name)
    e = correlations_on_grid(correlation_tensor(rho), design.bloch_points())
    return MomentRecord(t, float(np.mean(e**t)), "design-sum", {"design": design.name, "unitary": True})


# ------------------------------------------------------------------ Monte Carlo


def random_directions(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    """Uniform unit vectors: ``z`` uniform on [-1, 1], azimuth uniform on [0, 2pi)."""
    z = rng.uniform(-1.0, 1.0, size=shape)
    phi = rng.uniform(0.0, 2 * np.pi, size=shape)
    s = np.sqrt(1.0 - z * z)
    return np.stack([s * np.cos(phi), s * np.sin(phi), z], axis=-1)


def _correlations_along(tensor: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    # dirs: (S, N, 3); contract qubit k of the tensor with dirs[:, k]
    e = np.tensordot(dirs[:, 0], tensor, axes=([1], [0]))
    for k in range(1, dirs.shape[1]):
        e = np.einsum("si...,si->s...", e, dirs[:, k])
    return e


def sample_correlations(state, samples: int, seed: int) -> np.ndarray:
    """``samples`` values of ``E`` at independent uniformly random directions.

    Draws are split into fixed-size chunks, each with its own child stream
    of ``SeedSequence(seed)``, so the output depends only on ``seed``.
    """
    rho = as_density(state)
    tensor = correlation_tensor(rho)
    n = rho.num_qubits
    out = np.empty(samples)
    for chunk, start in enumerate(range(0, samples, MC_CHUNK)):
        stop = min(start + MC_CHUNK, samples)
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(chunk,)))
        dirs = random_directions(rng, (stop - start, n))
        out[start:stop] = _correlations_along(tensor, dirs)
    return out


def moment_from_samples(values: np.ndarray, t: int, seed: int | None = None) -> MomentRecord:
    powered = np.asarray(values) ** t
    k = powered.size
    stderr = float(np.std(powered, ddof=1) / np.sqrt(k))
    return MomentRecord(
        t,
        float(np.mean(powered)),
        "monte-carlo",
        {"samples": int(k), "seed": seed, "standard_error": stderr},
    )


def moment_monte_carlo(state, t: int, samples: int, seed: int) -> MomentRecord:
    """Unbiased Monte-Carlo estimate of ``R^(t)`` with its standard error."""
    if samples < 100:
        raise ValueError("need at least 100 samples")
    return moment_from_samples(sample_correlations(state, samples, seed), t, seed)


# ------------------------------------------------------------------ closed forms


def product_state_moment(t: int, n: int) -> float:
    """``R^(t)`` of any pure product state: ``(1/(t+1))^N`` for even ``t``."""
    return 0.0 if t % 2 else (1.0 / (t + 1)) ** n


def bell_diagonal_moments(c) -> tuple[float, float]:
    """``(R2, R4)`` of the Bell-diagonal state with correlations ``c``.

    Both moments are even in every ``c_j``, so ``c`` is accepted whenever
    some choice of signs gives a state; ``(1, 1, 1)`` yields the Bell-state
    values of ``(1, 1, -1)``.
    """
    c = np.asarray(c, dtype=float)
    if c.shape != (3,) or np.any(np.abs(c) > 1 + 1e-12):
        raise ValueError("need three coefficients with |c_j| <= 1")
    signs = np.array(list(product((1, -1), repeat=3)))
    if max(bell_diagonal_eigenvalues(s * c).min() for s in signs) < -1e-12:
        raise ValueError(f"no sign pattern of {c} describes a state")
    r2 = float(np.sum(c**2) / 9)
    r4 = float(2 / 75 * np.sum(c**4) + 27 / 25 * r2**2)
    return r2, r4


def _check_w_params(x) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if np.any(x < -1e-12) or x.sum() > 1 + 1e-12:
        raise ValueError("W standard-form parameters must be >= 0 with sum <= 1")
    return x


def _elementary_symmetric(x: np.ndarray, k: int) -> float:
    e = np.zeros(k + 1)
    e[0] = 1.0
    for xi in x:
        e[1:] = e[1:] + xi * e[:-1]
    return float(e[k])


def w_standard_form_r2(x) -> float:
    """``R2`` of ``sqrt(x0)|0..0> + sum_i sqrt(x_i)|single excitation on i>``.

    ``x`` holds ``(x_1, ..., x_N)``; ``x_0 = 1 - sum(x)`` is implicit.
    """
    x = _check_w_params(x)
    n = x.size
    return (1 + 8 * _elementary_symmetric(x, 2)) / 3**n


def w_standard_form_r2_with_x0(x_full) -> float:
    """Same moment written with ``x_0`` kept explicit; ``x_full`` sums to one."""
    xf = np.asarray(x_full, dtype=float)
    if abs(xf.sum() - 1) > 1e-12 or np.any(xf < -1e-12):
        raise ValueError("x must lie on the probability simplex")
    x0, x = xf[0], xf[1:]
    n = x.size
    return (np.sum(xf**2) + 2 * x0 * x.sum() + 10 * _elementary_symmetric(x, 2)) / 3**n


def w_standard_form_r4(x) -> float:
    """``R4`` of the W standard-form state, from the rescaled polynomial ``5^N R4``."""
    x = _check_w_params(x)
    n = x.size
    e2 = _elementary_symmetric(x, 2)
    e3 = _elementary_symmetric(x, 3)
    e4 = _elementary_symmetric(x, 4)
    e2_sq = _elementary_symmetric(x**2, 2)
    total = x.sum()
    # sum_i x_i^2 * e2(x without x_i)
    mixed = float(np.sum(x**2 * (e2 - x * (total - x))))
    rescaled = (
        1
        + 16 / 3 * e2
        + 128 / 3 * e2_sq
        - 448 / 9 * e3
        + 64 * mixed
        + 1664 / 9 * e4
    )
    return rescaled / 5**n


def w_state_r2(n: int) -> float:
    return (5 - 4 / n) / 3**n


def w_state_r4(n: int) -> float:
    return (83 * n**3 + 216 * n**2 - 176 * n - 96) / (27 * n**3 * 5**n)


def w_state_moments(n: int) -> tuple[float, float]:
    """``(R2, R4)`` of ``|W_N>``."""
    if n < 2:
        raise ValueError("W state needs N >= 2")
    return w_state_r2(n), w_state_r4(n)


def ghz_moments(n: int, t: int = 2) -> float:
    """``R^(t)`` of ``|GHZ_N>`` for ``t`` in {2, 4}.

    With directions in spherical coordinates the GHZ correlation is
    ``[N even] prod cos(theta_k) + prod sin(theta_k) cos(sum phi_k)``; the
    sphere averages then factorize per qubit.
    """
    if n < 2:
        raise ValueError("GHZ state needs N >= 2")
    even = n % 2 == 0
    if t == 2:
        return (2 ** (n - 1) + (1 if even else 0)) / 3**n
    if t == 4:
        # <z^4> = 1/5, <z^2 s^2> = 2/15, <s^4> = 8/15; <cos^2> = 1/2, <cos^4> = 3/8
        value = 3 / 8 * (8 / 15) ** n
        if even:
            value += (1 / 5) ** n + 6 * 0.5 * (2 / 15) ** n
        return value
    raise ValueError("closed form available for t = 2 and t = 4 only")


def noisy_ghz_r2(p: float, n: int) -> float:
    return noisy_ghz_moment(p, n, 2)


def noisy_ghz_moment(p: float, n: int, t: int) -> float:
    """White noise rescales every correlation by ``1-p``, hence ``R^(t)`` by ``(1-p)^t``."""
    if not 0 <= p <= 1:
        raise ValueError("noise weight p must lie in [0, 1]")
    return ghz_moments(n, t) * (1 - p) ** t


def rescaled(value: float, t: int, n: int) -> float:
    """``(t+1)^N R^(t)``, which is 1 for pure product states."""
    return (t + 1) ** n * value

