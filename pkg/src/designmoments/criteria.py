"""Entanglement and W-class criteria on the moments R2 = R^(2), R4 = R^(4).

Every criterion returns a :class:`CriterionVerdict` whose ``margin`` is
positive exactly when the criterion is violated, i.e. when the state is
detected (entangled, outside the W class, ...).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, NamedTuple

import numpy as np

from .moments import noisy_ghz_moment, w_state_r2

# absorbs rounding for states sitting exactly on the separable boundary
BELL_DIAGONAL_SLACK = 1e-12


@dataclass(frozen=True)
class CriterionVerdict:
    criterion: str
    inputs: dict[str, Any]
    margin: float
    flags: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not np.isfinite(self.margin):
            raise ValueError(f"criterion {self.criterion!r} produced a non-finite margin")
        object.__setattr__(self, "margin", float(self.margin))

    @property
    def verdict(self) -> bool:
        return self.margin > 0

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "inputs": dict(self.inputs),
            "margin": self.margin,
            "verdict": self.verdict,
            "flags": dict(self.flags),
        }


# ------------------------------------------------------------------ two qubits


def bell_diagonal_alpha_beta(r2: float, r4: float) -> tuple[float, float]:
    """Map moments to ``alpha = sum c_j^2`` and ``beta = sum c_j^4``."""
    alpha = 9.0 * r2
    beta = 225.0 * r4 / 6.0 - alpha**2 / 2.0
    return alpha, beta


def _l1_sphere_candidates(alpha: float) -> list[float]:
    # KKT points of sum c^4 on {c >= 0, sum c = 1, sum c^2 = alpha}: the
    # nonzero entries take at most two distinct values.
    betas = []
    disc = 6 * alpha - 2
    if disc >= -1e-15:
        root = np.sqrt(max(disc, 0.0))
        for a in ((2 + root) / 6, (2 - root) / 6):
            b = 1 - 2 * a
            if a >= -1e-15 and b >= -1e-15:
                betas.append(2 * a**4 + b**4)
    disc = 2 * alpha - 1
    if disc >= -1e-15:
        root = np.sqrt(max(disc, 0.0))
        a, b = (1 + root) / 2, (1 - root) / 2
        betas.append(a**4 + b**4)
    return betas


def l1_sphere_beta_range(alpha: float) -> tuple[float, float]:
    """Range of ``sum c^4`` over ``|c|_1 = 1`` with ``sum c^2 = alpha``, ``1/3 <= alpha <= 1``."""
    if not 1 / 3 - 1e-12 <= alpha <= 1 + 1e-12:
        raise ValueError("|c|_1 = 1 requires 1/3 <= alpha <= 1")
    betas = _l1_sphere_candidates(min(max(alpha, 1 / 3), 1.0))
    return min(betas), max(betas)


def separable_beta_range(alpha: float) -> tuple[float, float] | None:
    """Range of ``beta`` over separable Bell-diagonal states (``|c|_1 <= 1``) at fixed ``alpha``.

    Returns ``None`` when ``alpha > 1`` (no separable state reaches it).
    """
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    if alpha > 1 + 1e-12:
        return None
    if alpha <= 1 / 3:
        # the whole sphere of radius sqrt(alpha) fits inside the octahedron
        return alpha**2 / 3, alpha**2
    lo, _ = l1_sphere_beta_range(alpha)
    return lo, alpha**2


def bell_diagonal_separability(r2: float, r4: float) -> CriterionVerdict:
    """Entanglement test for two qubits from ``(R2, R4)``.

    Flags the state when no separable Bell-diagonal state shares its
    moments. Since any two-qubit state can be mapped by LU and local
    dephasing to a Bell-diagonal state with the same moments, the test is a
    sufficient entanglement criterion for all two-qubit states.
    """
    alpha, beta = bell_diagonal_alpha_beta(r2, r4)
    rng = separable_beta_range(alpha)
    if rng is None:
        margin = alpha - 1.0
    else:
        margin = rng[0] - beta - BELL_DIAGONAL_SLACK
    return CriterionVerdict(
        "bell_diagonal_separability",
        {"R2": r2, "R4": r4},
        margin,
        {"alpha": alpha, "beta": beta, "detects": "entanglement"},
    )


# ------------------------------------------------------------------ three qubits


def bisep_conjecture_curve(r2):
    return (972 * np.square(r2) + 90 * np.asarray(r2) - 5) / 425


def three_qubit_bisep_conjecture(r2: float, r4: float) -> CriterionVerdict:
    """Conjectured boundary of mixed bi-separable three-qubit states.

    Positive margin (``R4`` below the parabola) is evidence of genuine
    three-qubit entanglement; the bound is numerically supported, not proven.
    """
    margin = float(bisep_conjecture_curve(r2)) - r4
    return CriterionVerdict(
        "three_qubit_bisep_conjecture",
        {"R2": r2, "R4": r4},
        margin,
        {"conjectured": True, "detects": "genuine multipartite entanglement", "N": 3},
    )


PURE_BISEP_R2_RANGE = (1 / 27, 1 / 9)


def pure_bisep_curve(r2):
    """``R4`` of every pure bi-separable three-qubit state with second moment ``r2``.

    For ``|phi>|Psi>`` with Schmidt angle ``s = sin(2 theta)`` of ``Psi`` one
    has ``R2 = (1 + 2 s^2)/27`` and ``R4 = (3 + 4 s^2 + 8 s^4)/375``; eliminating
    ``s`` gives ``R4 = (1458 R2^2 - 54 R2 + 3)/375``.
    """
    r2 = np.asarray(r2, dtype=float)
    return (1458 * r2**2 - 54 * r2 + 3) / 375


def pure_bisep_fourth_moment_bound(r2: float, r4: float) -> CriterionVerdict:
    """Lower bound on ``R4`` for pure bi-separable three-qubit states.

    Pure bi-separable states fill exactly the curve :func:`pure_bisep_curve`
    for ``1/27 <= R2 <= 1/9``, so the bound is ``R4 >= curve(R2)`` there.
    Above ``R2 = 1/9`` no pure bi-separable state exists (positive margin
    ``R2 - 1/9``); below ``1/27`` the input cannot come from a pure state
    and the criterion does not apply (margin ``R2 - 1/27 <= 0``).
    """
    lo, hi = PURE_BISEP_R2_RANGE
    flags = {"pure_state_criterion": True, "N": 3, "bound": "R4 >= (1458 R2^2 - 54 R2 + 3)/375"}
    if r2 > hi:
        margin = r2 - hi
        flags["region"] = "above pure bi-separable R2 range"
    elif r2 < lo:
        margin = r2 - lo
        flags["region"] = "below pure-state R2 range"
    else:
        margin = float(pure_bisep_curve(r2)) - r4
        flags["region"] = "curve"
    return CriterionVerdict("pure_bisep_fourth_moment_bound", {"R2": r2, "R4": r4}, margin, flags)


# ------------------------------------------------------------------ W class


def w_class_chi(n: int) -> float:
    """Largest ``R2`` on the mixed N-qubit W class, ``(5 - 4/N)/3^N``."""
    if n < 2:
        raise ValueError("need N >= 2")
    return w_state_r2(n)


def w_class_r2_bound(r2: float, n: int) -> CriterionVerdict:
    margin = r2 - w_class_chi(n)
    return CriterionVerdict("w_class_r2_bound", {"R2": r2, "N": n}, margin, {"detects": "outside Conv(W)"})


def linear_slope_intercept(n: int) -> tuple[float, float]:
    """Slope ``m`` and intercept ``b`` of the line through ``|W_N>`` and
    ``|0>|W_(N-1)>`` in rescaled moments ``(3^N R2, 5^N R4)``."""
    den = 27 * n**2 * (n - 1) ** 2
    m = (-54 * n**4 + 196 * n**3 - 114 * n**2 - 28 * n + 24) / den
    b = (353 * n**4 - 1146 * n**3 + 829 * n**2 + 156 * n - 216) / den
    return m, b


def w_class_linear_margin(r2, r4, n: int):
    m, b = linear_slope_intercept(n)
    return 5.0**n * np.asarray(r4) - m * 3.0**n * np.asarray(r2) - b


def w_class_linear(r2: float, r4: float, n: int) -> CriterionVerdict:
    """Linear W-class criterion ``5^N R4 - m 3^N R2 - b <= 0`` on Conv(W)."""
    if n < 3:
        raise ValueError("the linear criterion needs N >= 3")
    m, b = linear_slope_intercept(n)
    margin = float(w_class_linear_margin(r2, r4, n))
    return CriterionVerdict(
        "w_class_linear",
        {"R2": r2, "R4": r4, "N": n},
        margin,
        {"slope": m, "intercept": b, "detects": "outside Conv(W)", "units": "rescaled"},
    )


# ------------------------------------------------------------------ noisy GHZ


class Thresholds(NamedTuple):
    p_star: float
    p_star_linear: float
    p_tilde_star: float


def p_star_closed_form(n: int) -> float:
    """Largest white-noise weight at which the GHZ state still violates ``R2 <= chi``."""
    if n % 2:
        return float(1 - 2 ** (0.5 - n / 2) * np.sqrt(5 - 4 / n))
    return float(1 - np.sqrt(10 * n - 8) / np.sqrt((2**n + 2) * n))


def p_tilde_closed_form(n: int) -> float:
    """Noise threshold of the GHZ-class witness ``lambda 1 - |GHZ><GHZ|``."""
    if n == 3:
        return 2 / 7
    return 2 ** (n - 1) / (2**n - 1)


def ghz_witness_lambda(n: int) -> float:
    return 0.75 if n == 3 else 0.5


def bisect_decreasing(f, lo: float = 0.0, hi: float = 1.0, tol: float = 1e-9) -> float:
    """Root of a function positive at ``lo`` and non-positive at ``hi``."""
    if f(lo) <= 0:
        return lo
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def p_star_linear(n: int, tol: float = 1e-9) -> float:
    """Noise threshold of the linear criterion on ``rho_GHZ(p, N)``, by bisection."""
    return bisect_decreasing(
        lambda p: float(w_class_linear_margin(noisy_ghz_moment(p, n, 2), noisy_ghz_moment(p, n, 4), n)),
        tol=tol,
    )


def ghz_noise_thresholds(n: int) -> Thresholds:
    if n < 3:
        raise ValueError("thresholds are defined for N >= 3")
    return Thresholds(p_star_closed_form(n), p_star_linear(n), p_tilde_closed_form(n))


# ------------------------------------------------------------------ simplex maximization


def project_capped_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto ``{x >= 0, sum x <= 1}``."""
    clipped = np.maximum(v, 0.0)
    if clipped.sum() <= 1.0:
        return clipped
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, v.size + 1)
    rho = np.nonzero(u - css / idx > 0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def _r2_scaled(x: np.ndarray) -> float:
    s = x.sum()
    return 1 + 4 * (s * s - np.dot(x, x))


def simplex_max_r2(
    n: int,
    k: int = 0,
    *,
    starts: int = 8,
    step: float = 0.1,
    max_iter: int = 20000,
    seed: int = 0,
) -> tuple[np.ndarray, float]:
    """Maximize the W standard-form ``R2`` over ``x >= 0, sum x <= 1`` with
    the first ``k`` coordinates pinned to zero, by projected gradient ascent
    from several random starts.

    Returns the maximizer ``(x_1, ..., x_N)`` and the value of ``R2``.
    """
    if not 0 <= k <= n - 1:
        raise ValueError("need 0 <= k <= N - 1")
    free = n - k
    rng = np.random.default_rng(seed)
    best_x, best_f = None, -np.inf
    for _ in range(starts):
        x = 0.5 * rng.dirichlet(np.ones(free + 1))[:free]
        for _ in range(max_iter):
            grad = 8 * (x.sum() - x)
            nxt = project_capped_simplex(x + step * grad)
            if np.abs(nxt - x).max() < 1e-16:
                x = nxt
                break
            x = nxt
        f = _r2_scaled(x)
        if f > best_f:
            best_x, best_f = x, f
    full = np.concatenate([np.zeros(k), best_x])
    return full, best_f / 3**n


def simplex_boundary_value(n: int, k: int) -> float:
    """Closed-form maximum ``(5 - 4/(N-k))/3^N``."""
    return (5 - 4 / (n - k)) / 3**n
