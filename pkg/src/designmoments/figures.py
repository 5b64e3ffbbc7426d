"""Data behind the standard plots: correlation histograms, (R2, R4) scans of
state classes with labelled landmark states, boundary curves and noise
thresholds.  Only numbers are produced here; rendering is left to the user.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from . import core
from .core import correlation_tensor
from .criteria import (
    bisep_conjecture_curve,
    ghz_noise_thresholds,
    l1_sphere_beta_range,
    pure_bisep_curve,
    separable_beta_range,
)
from .designs import builtin_spherical
from .moments import (
    design_moment_values,
    ghz_moments,
    moment_from_samples,
    product_state_moment,
    sample_correlations,
    w_state_moments,
)
from .sampling import (
    random_density_hs,
    rng_stream,
    sample_mixed_matrix,
    sample_pure_vectors,
)

SCAN_CHUNK = 256

# ------------------------------------------------------------------ histogram

HISTOGRAM_STATES = ("product", "w_marginal", "werner", "bell", "mixed")


def histogram_state(name: str, q: float | None = None) -> core.DensityMatrix:
    """Two-qubit states of the histogram comparison; ``q`` is the Werner weight."""
    if name == "product":
        return core.basis_state("00").density()
    if name == "w_marginal":
        return core.partial_trace(core.w(3), [0, 1])
    if name == "werner":
        return core.werner(1 / np.sqrt(3) if q is None else q)
    if name == "bell":
        return core.bell().density()
    if name == "mixed":
        return core.maximally_mixed(2)
    raise ValueError(f"unknown histogram state {name!r}; choose from {HISTOGRAM_STATES}")


def histogram(state, samples: int, seed: int) -> dict:
    """Sampled correlations plus empirical ``R2``, ``R4`` with standard errors."""
    values = sample_correlations(state, samples, seed)
    return {
        "values": values,
        "R2": moment_from_samples(values, 2, seed),
        "R4": moment_from_samples(values, 4, seed),
    }


# ------------------------------------------------------------------ landmarks


@dataclass(frozen=True)
class Landmark:
    label: str
    description: str
    state: Callable[[], object]
    r2: float | None = None
    r4: float | None = None


def _bisep_mixture_d() -> core.DensityMatrix:
    s = 1 / np.sqrt(2)
    a = core.PureState(np.kron([1, 0], [s, 0, 0, s]))
    b = core.PureState(np.kron([0, 1], [0, s, s, 0]))
    return core.DensityMatrix(0.5 * (a.density().matrix + b.density().matrix))


def landmarks(n: int) -> list[Landmark]:
    """Labelled reference states of the (R2, R4) scans.

    Labels follow the three-qubit bi-separability plot for ``N = 3`` and the
    four-qubit class plot for ``N = 4``; other ``N`` get the generic set.
    """
    zero = core.basis_state("0")
    bell = core.bell()
    bell_r2, bell_r4 = 1 / 3, 1 / 5
    w_r2, w_r4 = w_state_moments(n) if n >= 2 else (None, None)
    common = [
        Landmark("A", "maximally mixed", lambda: core.maximally_mixed(n), 0.0, 0.0),
        Landmark("B", "pure product", lambda: core.basis_state("0" * n),
                 product_state_moment(2, n), product_state_moment(4, n)),
    ]
    if n == 3:
        w3 = w_state_moments(3)
        return common + [
            Landmark("C", "|phi>|Bell>", lambda: core.tensor(zero, bell), bell_r2 / 3, bell_r4 / 5),
            Landmark("D", "mixture of |0>|Phi+> and |1>|Psi+>", _bisep_mixture_d),
            Landmark("E", "|W_3>", lambda: core.w(3), *w3),
            Landmark("F", "|GHZ_3>", lambda: core.ghz(3), ghz_moments(3, 2), ghz_moments(3, 4)),
        ]
    if n == 4:
        w3 = w_state_moments(3)
        return common + [
            Landmark("C", "|phi>|phi'>|Bell>", lambda: core.tensor(zero, zero, bell),
                     bell_r2 / 9, bell_r4 / 25),
            Landmark("D", "|phi>|W_3>", lambda: core.tensor(zero, core.w(3)), w3[0] / 3, w3[1] / 5),
            Landmark("E", "|phi>|GHZ_3>", lambda: core.tensor(zero, core.ghz(3)),
                     ghz_moments(3, 2) / 3, ghz_moments(3, 4) / 5),
            Landmark("F", "|Bell>|Bell>", lambda: core.tensor(bell, bell), bell_r2**2, bell_r4**2),
            Landmark("G", "|W_4>", lambda: core.w(4), *w_state_moments(4)),
            Landmark("H", "|GHZ_4>", lambda: core.ghz(4), ghz_moments(4, 2), ghz_moments(4, 4)),
        ]
    out = list(common)
    if n >= 2:
        out.append(Landmark("W", f"|W_{n}>", lambda: core.w(n), w_r2, w_r4))
        out.append(Landmark("GHZ", f"|GHZ_{n}>", lambda: core.ghz(n), ghz_moments(n, 2), ghz_moments(n, 4)))
    return out


def design_moments_of(states) -> tuple[np.ndarray, np.ndarray]:
    """Design-sum ``(R2, R4)`` for a list of states or a stack of density matrices."""
    if isinstance(states, np.ndarray):
        tensors = correlation_tensor(states)
    else:
        tensors = np.array([correlation_tensor(s) for s in states])
    r2 = design_moment_values(tensors, 2, builtin_spherical("octahedron"))
    r4 = design_moment_values(tensors, 4, builtin_spherical("icosahedron"))
    return r2, r4


def landmark_rows(n: int) -> list[dict]:
    """Landmark moments; closed forms where known, design sums otherwise."""
    rows = []
    for lm in landmarks(n):
        if lm.r2 is None:
            r2, r4 = (float(v[0]) for v in design_moments_of([lm.state()]))
        else:
            r2, r4 = lm.r2, lm.r4
        rows.append({"label": lm.label, "description": lm.description, "R2": r2, "R4": r4})
    return rows


# ------------------------------------------------------------------ scans

SCAN_CLASSES = (
    "separable",
    "bisep",
    "w_class",
    "generic",
    "conv_separable",
    "conv_bisep",
    "conv_w_class",
    "conv_generic",
    "hs",
)


def _scan_chunk(kind: str, n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    if kind.startswith("conv_"):
        base = kind[len("conv_"):]
        return np.array([sample_mixed_matrix(base, n, rng) for _ in range(count)])
    if kind == "hs":
        return np.array([random_density_hs(n, rng).matrix for _ in range(count)])
    vecs = sample_pure_vectors(kind, n, count, rng)
    return np.einsum("bi,bj->bij", vecs, vecs.conj())


def scan_moments(kind: str, n: int, samples: int, seed: int) -> Iterator[tuple[float, float]]:
    """``(R2, R4)`` of ``samples`` random states of class ``kind``.

    States are drawn in fixed-size chunks, chunk ``j`` from stream ``(seed, j)``,
    and discarded after their moments are taken.
    """
    if kind not in SCAN_CLASSES:
        raise ValueError(f"unknown scan class {kind!r}; choose from {SCAN_CLASSES}")
    for j, start in enumerate(range(0, samples, SCAN_CHUNK)):
        count = min(SCAN_CHUNK, samples - start)
        mats = _scan_chunk(kind, n, count, rng_stream(seed, j))
        r2, r4 = design_moments_of(mats)
        yield from zip(r2.tolist(), r4.tolist())


# ------------------------------------------------------------------ boundaries


def bell_diagonal_upper(alpha: float) -> float:
    """Largest ``sum c^4`` over Bell-diagonal states with ``sum c^2 = alpha``."""
    return alpha**2 if alpha <= 1 else 1 + (alpha - 1) ** 2 / 2


def _r4_from_alpha_beta(alpha: float, beta: float) -> float:
    return (2 * beta + alpha**2) / 75


def bell_diagonal_boundary(points: int = 201) -> list[dict]:
    """Boundary curves of Bell-diagonal states and of their separable subset in the (R2, R4) plane."""
    rows = []

    def add(curve, alpha, beta):
        rows.append({"curve": curve, "R2": alpha / 9, "R4": _r4_from_alpha_beta(alpha, beta)})

    for alpha in np.linspace(0, 3, points):
        add("all_lower", alpha, alpha**2 / 3)
        add("all_upper", alpha, bell_diagonal_upper(alpha))
    for alpha in np.linspace(0, 1, points):
        lo, hi = separable_beta_range(alpha)
        add("separable_lower", alpha, lo)
        add("separable_upper", alpha, hi)
    for alpha in np.linspace(1 / 3, 1, points):
        lo, hi = l1_sphere_beta_range(alpha)
        add("l1_sphere_lower", alpha, lo)
        add("l1_sphere_upper", alpha, hi)
    rows.append({"curve": "marker:A", "R2": 0.0, "R4": 0.0})
    rows.append({"curve": "marker:B", "R2": 1 / 9, "R4": 1 / 25})
    rows.append({"curve": "marker:C", "R2": 1 / 3, "R4": 1 / 5})
    rows.append({"curve": "marker:all_separable_below", "R2": 1 / 27, "R4": float("nan")})
    return rows


def three_qubit_boundary(points: int = 201) -> list[dict]:
    """The conjectured bi-separable parabola and the pure bi-separable curve."""
    rows = []
    for r2 in np.linspace(0, 1 / 9, points):
        rows.append({"curve": "bisep_conjecture", "R2": float(r2), "R4": float(bisep_conjecture_curve(r2))})
    for r2 in np.linspace(1 / 27, 1 / 9, points):
        rows.append({"curve": "pure_bisep", "R2": float(r2), "R4": float(pure_bisep_curve(r2))})
    for lm in landmark_rows(3):
        rows.append({"curve": f"marker:{lm['label']}", "R2": lm["R2"], "R4": lm["R4"]})
    return rows


def threshold_rows(n_max: int) -> list[dict]:
    if n_max < 3:
        raise ValueError("N_max must be at least 3")
    rows = []
    for n in range(3, n_max + 1):
        th = ghz_noise_thresholds(n)
        rows.append({"N": n, "p_star": th.p_star, "p_star_linear": th.p_star_linear,
                     "p_tilde_star": th.p_tilde_star})
    return rows


def first_crossover(n_max: int = 20) -> int | None:
    """Smallest N with ``p* > p~*`` (the moment criterion beats the witness)."""
    for row in threshold_rows(n_max):
        if row["p_star"] > row["p_tilde_star"]:
            return row["N"]
    return None
