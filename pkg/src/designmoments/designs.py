"""Spherical and single-qubit unitary designs.

Built-in spherical designs: octahedron (t=3), icosahedron (t=5),
icosidodecahedron (t=5, extracted from the SL(2, F_5) unitary design) and a
24-point spherical 7-design obtained by deforming the snub cube.  Unitary
designs: the single-qubit Clifford group (t=3) and SL(2, F_5) (t=5).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from math import comb, prod
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .core import PAULI_XYZ, pauli

POINT_TOL = 1e-9
PHASE_TOL = 1e-9
CERT_TOL = 1e-9

BUILTIN_SPHERICAL = ("octahedron", "icosahedron", "icosidodecahedron", "snub7")


class CertificationError(ValueError):
    """A design does not reach its declared strength."""


@dataclass(frozen=True)
class SphericalDesign:
    name: str
    strength: int
    points: np.ndarray = field(repr=False)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float).reshape(-1, 3)
        if np.abs(np.linalg.norm(pts, axis=1) - 1).max() > 1e-12:
            raise ValueError(f"design {self.name!r} has non-unit points")
        if self.strength < 1:
            raise ValueError("design strength must be positive")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def antipodal(self) -> bool:
        return antipodal_representatives(self.points) is not None

    def residual(self, t: int | None = None) -> float:
        return verify_spherical(self.points, self.strength if t is None else t)

    def to_json(self) -> dict:
        return {
            "kind": "spherical",
            "name": self.name,
            "t": int(self.strength),
            "points": self.points.tolist(),
        }


@dataclass(frozen=True)
class UnitaryDesign:
    name: str
    strength: int
    unitaries: np.ndarray = field(repr=False)

    def __post_init__(self):
        us = np.array(self.unitaries, dtype=complex).reshape(-1, 2, 2)
        eye = np.eye(2)
        err = np.abs(np.einsum("kji,kjl->kil", us.conj(), us) - eye).max()
        if err > 1e-10:
            raise ValueError(f"design {self.name!r} contains non-unitary elements ({err:.2e})")
        if len(dedupe_phase(us)) != len(us):
            raise ValueError(f"design {self.name!r} has elements equal up to phase")
        us.setflags(write=False)
        object.__setattr__(self, "unitaries", us)

    def __len__(self) -> int:
        return len(self.unitaries)

    def frame_potential(self, t: int | None = None) -> float:
        return verify_unitary(self.unitaries, self.strength if t is None else t)

    def bloch_points(self) -> np.ndarray:
        """Bloch vectors of ``U sigma_z U^dagger`` for every element, with repetitions."""
        return bloch_of_rotated_z(self.unitaries)

    def to_json(self) -> dict:
        return {
            "kind": "unitary",
            "name": self.name,
            "t": int(self.strength),
            "unitaries": [
                [[float(z.real), float(z.imag)] for z in u.reshape(-1)] for u in self.unitaries
            ],
        }


# ------------------------------------------------------------------ certification


def _double_factorial(n: int) -> int:
    return prod(range(n, 0, -2)) if n > 0 else 1


def sphere_monomial_average(a: int, b: int, c: int) -> float:
    """Exact average of ``x^a y^b z^c`` over the unit sphere."""
    if a % 2 or b % 2 or c % 2:
        return 0.0
    num = _double_factorial(a - 1) * _double_factorial(b - 1) * _double_factorial(c - 1)
    return num / _double_factorial(a + b + c + 1)


def monomial_exponents(t: int) -> list[tuple[int, int, int]]:
    return [
        (a, b, d - a - b)
        for d in range(1, t + 1)
        for a in range(d + 1)
        for b in range(d + 1 - a)
    ]


def spherical_residuals(points, t: int) -> np.ndarray:
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    exps = monomial_exponents(t)
    if not exps:
        return np.zeros(0)
    x, y, z = pts.T
    avg = np.array([np.mean(x**a * y**b * z**c) for a, b, c in exps])
    exact = np.array([sphere_monomial_average(a, b, c) for a, b, c in exps])
    return avg - exact


def verify_spherical(points, t: int) -> float:
    """Largest deviation of the point average from the sphere average over
    all monomials ``x^a y^b z^c`` with ``a+b+c <= t``."""
    res = spherical_residuals(points, t)
    return float(np.abs(res).max()) if res.size else 0.0


def catalan(t: int) -> int:
    return comb(2 * t, t) // (t + 1)


def verify_unitary(unitaries, t: int) -> float:
    """Frame potential ``(1/K^2) sum_{j,k} |tr(U_j^dagger U_k)|^(2t)``.

    Equals the Haar value (the Catalan number ``C_t`` for U(2)) exactly when
    the set is a unitary t-design, and exceeds it otherwise.
    """
    us = np.asarray(unitaries, dtype=complex).reshape(-1, 2, 2)
    gram = np.einsum("jab,kab->jk", us.conj(), us)
    return float(np.mean(np.abs(gram) ** (2 * t)))


def strength_of(points, t_max: int = 12, tol: float = CERT_TOL) -> int:
    """Largest t <= t_max at which the point set passes certification."""
    best = 0
    for t in range(1, t_max + 1):
        if verify_spherical(points, t) < tol:
            best = t
        else:
            break
    return best


# ------------------------------------------------------------------ helpers


def dedupe_points(points, tol: float = POINT_TOL) -> np.ndarray:
    kept: list[np.ndarray] = []
    for p in np.asarray(points, dtype=float).reshape(-1, 3):
        if not any(np.linalg.norm(p - q) < tol for q in kept):
            kept.append(p)
    return np.array(kept)


def dedupe_phase(unitaries, tol: float = PHASE_TOL) -> np.ndarray:
    """Drop unitaries equal to an earlier one up to a global phase."""
    kept: list[np.ndarray] = []
    for u in np.asarray(unitaries, dtype=complex).reshape(-1, 2, 2):
        if not any(abs(abs(np.trace(v.conj().T @ u)) - 2) < tol for v in kept):
            kept.append(u)
    return np.array(kept)


def antipodal_representatives(points, tol: float = POINT_TOL) -> np.ndarray | None:
    """One point of every antipodal pair, or ``None`` if the set is not antipodal."""
    pts = np.asarray(points, dtype=float)
    dist = np.linalg.norm(pts[:, None, :] + pts[None, :, :], axis=-1)
    partner = np.argmin(dist, axis=1)
    if np.any(dist[np.arange(len(pts)), partner] > tol) or np.any(partner == np.arange(len(pts))):
        return None
    reps = [i for i in range(len(pts)) if i < partner[i]]
    return pts[reps]


def bloch_of_rotated_z(unitaries) -> np.ndarray:
    us = np.asarray(unitaries, dtype=complex).reshape(-1, 2, 2)
    rotated = us @ pauli("z") @ us.conj().transpose(0, 2, 1)
    # [u]_i = tr[sigma_u sigma_i] / 2
    return np.einsum("kab,iba->ki", rotated, PAULI_XYZ).real / 2


def close_group(
    generators: Sequence[np.ndarray],
    same: Callable[[np.ndarray, np.ndarray], bool],
    limit: int,
) -> list[np.ndarray]:
    """Breadth-first closure under right multiplication by the generators.

    Raises ``RuntimeError`` once more than ``limit`` distinct elements appear.
    """
    elements = [np.eye(2, dtype=complex)]
    frontier = list(elements)
    while frontier:
        fresh = []
        for a in frontier:
            for g in generators:
                m = a @ g
                if not any(same(m, e) for e in elements):
                    elements.append(m)
                    fresh.append(m)
                    if len(elements) > limit:
                        raise RuntimeError(
                            f"group closure exceeded {limit} elements; check the generators"
                        )
        frontier = fresh
    return elements


def _exact_same(a, b):
    return np.abs(a - b).max() < PHASE_TOL


def _same_up_to_phase(a, b):
    return abs(abs(np.trace(a.conj().T @ b)) - 2) < PHASE_TOL


# ------------------------------------------------------------------ unitary designs


@lru_cache(maxsize=None)
def clifford_1q() -> UnitaryDesign:
    """Single-qubit Clifford group modulo phases (24 elements), a unitary 3-design."""
    h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
    s = np.diag([np.exp(1j * np.pi / 4), np.exp(-1j * np.pi / 4)])
    group = close_group([h, s], _same_up_to_phase, limit=24)
    return UnitaryDesign("clifford", 3, np.array(group))


_OMEGA = np.exp(2j * np.pi / 15)


def _sl2f5_generators(last_exponent: int) -> list[np.ndarray]:
    w = _OMEGA
    return [
        np.array([[-1, 0], [0, -1]], dtype=complex),
        np.array(
            [
                [-(w**11) - w**14, w**6 + w**9],
                [-w - w**2 - w**4 - w**7 - w**8 - w**13, w**11 + w**14],
            ]
        ),
        np.array([[w**10, w**11 + w**14], [-(w**2) - w**8, -(w**10)]]),
        np.array([[0, w**5], [-(w**10), -(w**3) - w**last_exponent]]),
    ]


# With omega^17 in entry (2,2) of the fourth generator its trace is non-real,
# impossible for an element of a finite group, and the closure never ends.
# The partner omega^12 = omega^-3 gives trace -2cos(2pi/5) and closes at 120.
SL2F5_GENERATORS_OMEGA17 = _sl2f5_generators(17)
SL2F5_GENERATORS = _sl2f5_generators(12)
SL2F5_ORDER = 120


def sl2f5_group(generators: Sequence[np.ndarray] | None = None) -> list[np.ndarray]:
    """The 120 matrices S_k of SL(2, F_5) in the (non-unitary) generator basis."""
    gens = SL2F5_GENERATORS if generators is None else generators
    group = close_group(gens, _exact_same, limit=SL2F5_ORDER)
    if len(group) != SL2F5_ORDER:
        raise RuntimeError(f"closure produced {len(group)} elements, expected {SL2F5_ORDER}")
    return group


def _psd_sqrt(p: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(p)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


@lru_cache(maxsize=None)
def sl2f5_design() -> UnitaryDesign:
    """60-element unitary 5-design from SL(2, F_5).

    Each group element is made unitary by ``U_k = sqrt(P) S_k sqrt(P)^-1``
    with ``P = sum_k S_k^dagger S_k``; phase duplicates are then dropped.
    """
    group = sl2f5_group()
    p = sum(s.conj().T @ s for s in group)
    root = _psd_sqrt(p)
    inv_root = np.linalg.inv(root)
    unitaries = np.array([root @ s @ inv_root for s in group])
    return UnitaryDesign("sl2f5", 5, dedupe_phase(unitaries))


def unitary_design(name: str) -> UnitaryDesign:
    table = {"clifford": clifford_1q, "sl2f5": sl2f5_design}
    if name not in table:
        raise ValueError(f"unknown unitary design {name!r}")
    return table[name]()


# ------------------------------------------------------------------ spherical designs


def spherical_from_unitary(ud: UnitaryDesign) -> SphericalDesign:
    """Distinct Bloch directions of ``U sigma_z U^dagger`` over the design."""
    pts = dedupe_points(ud.bloch_points())
    pts = pts / np.linalg.norm(pts, axis=1, keepdims=True)
    return SphericalDesign(f"{ud.name}-bloch", ud.strength, pts)


def octahedral_rotations() -> np.ndarray:
    """The 24 proper rotations of the cube (signed permutation matrices, det +1)."""
    rots = []
    for perm in itertools.permutations(range(3)):
        for signs in itertools.product((1, -1), repeat=3):
            m = np.zeros((3, 3))
            m[range(3), perm] = signs
            if np.linalg.det(m) > 0:
                rots.append(m)
    return np.array(rots)


def _octahedral_orbit(v: np.ndarray) -> np.ndarray:
    v = v / np.linalg.norm(v)
    return octahedral_rotations() @ v


TRIBONACCI = (1 + np.cbrt(19 + 3 * np.sqrt(33)) + np.cbrt(19 - 3 * np.sqrt(33))) / 3


def regular_snub_cube() -> SphericalDesign:
    """Vertices of the regular snub cube; only a spherical 3-design."""
    pts = _octahedral_orbit(np.array([1.0, 1 / TRIBONACCI, TRIBONACCI]))
    return SphericalDesign("snub_cube", 3, pts)


def optimize_snub7(seed_point=None) -> np.ndarray:
    """Deform the snub cube into a 24-point spherical 7-design.

    The point set is kept as an orbit of the rotation group of the cube, so
    only the seed direction (two angles) is optimized; odd-degree monomials
    average to zero by symmetry and the degree-4 and degree-6 conditions
    fix the seed.
    """
    from scipy.optimize import least_squares

    if seed_point is None:
        seed_point = np.array([1.0, 1 / TRIBONACCI, TRIBONACCI])
    v = np.asarray(seed_point, dtype=float)
    v = v / np.linalg.norm(v)

    def direction(angles):
        th, ph = angles
        return np.array([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)])

    def residuals(angles):
        return spherical_residuals(_octahedral_orbit(direction(angles)), 7)

    x0 = [np.arccos(v[2]), np.arctan2(v[1], v[0])]
    fit = least_squares(residuals, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15)
    return _octahedral_orbit(direction(fit.x))


def _icosahedron_points() -> np.ndarray:
    phi = (1 + np.sqrt(5)) / 2
    base = []
    for s1 in (1, -1):
        for s2 in (1, -1):
            base.append((0.0, s1 * 1.0, s2 * phi))
    pts = []
    for x, y, z in base:
        pts += [(x, y, z), (y, z, x), (z, x, y)]
    pts = np.array(pts)
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def _octahedron_points() -> np.ndarray:
    return np.vstack([np.eye(3), -np.eye(3)])


@lru_cache(maxsize=None)
def builtin_spherical(name: str) -> SphericalDesign:
    """Built-in spherical design by name."""
    if name == "octahedron":
        return SphericalDesign("octahedron", 3, _octahedron_points())
    if name == "icosahedron":
        return SphericalDesign("icosahedron", 5, _icosahedron_points())
    if name == "icosidodecahedron":
        pts = spherical_from_unitary(sl2f5_design()).points
        return SphericalDesign("icosidodecahedron", 5, pts)
    if name == "snub7":
        ref = resources.files("designmoments").joinpath("data/snub7.json")
        with ref.open("r", encoding="utf-8") as fh:
            return design_from_json(json.load(fh))
    raise ValueError(f"unknown spherical design {name!r}; choose from {BUILTIN_SPHERICAL}")


def smallest_design(t: int) -> SphericalDesign:
    """Smallest built-in design certified at strength >= t."""
    for name in ("octahedron", "icosahedron", "snub7"):
        d = builtin_spherical(name)
        if d.strength >= t:
            return d
    raise ValueError(f"no built-in spherical design of strength {t}")


# ------------------------------------------------------------------ file I/O


def design_from_json(data: dict, *, tol: float = CERT_TOL) -> SphericalDesign | UnitaryDesign:
    """Build a design from its JSON form and re-certify it at the declared strength."""
    kind = data.get("kind")
    name = data.get("name", "unnamed")
    t = int(data["t"])
    if kind == "spherical":
        design = SphericalDesign(name, t, np.array(data["points"], dtype=float))
        res = design.residual()
        if res > tol:
            raise CertificationError(f"design {name!r} fails certification at t={t}: residual {res:.3e}")
        return design
    if kind == "unitary":
        raw = np.array(data["unitaries"], dtype=float)
        us = (raw[..., 0] + 1j * raw[..., 1]).reshape(-1, 2, 2)
        design = UnitaryDesign(name, t, us)
        gap = design.frame_potential() - catalan(t)
        if abs(gap) > tol:
            raise CertificationError(f"design {name!r} fails certification at t={t}: frame potential off by {gap:.3e}")
        return design
    raise ValueError(f"unknown design kind {kind!r}")


def load_design(path) -> SphericalDesign | UnitaryDesign:
    with open(path, "r", encoding="utf-8") as fh:
        return design_from_json(json.load(fh))


def save_design(design: SphericalDesign | UnitaryDesign, path) -> None:
    Path(path).write_text(json.dumps(design.to_json(), indent=1) + "\n", encoding="utf-8")


def resolve_spherical(spec: str) -> SphericalDesign:
    """A built-in name, a unitary-design name (converted to Bloch points) or a JSON file."""
    if spec in BUILTIN_SPHERICAL:
        return builtin_spherical(spec)
    if spec in ("clifford", "sl2f5"):
        return spherical_from_unitary(unitary_design(spec))
    design = load_design(spec)
    if isinstance(design, UnitaryDesign):
        return spherical_from_unitary(design)
    return design
