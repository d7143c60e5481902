"""Certification of packings: separation, containment, symmetry, identity."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple, Union

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.spatial import cKDTree

from . import geometry
from .builder import PackingConfiguration
from .chp import CIRCLE, Sigma, disk_count, solve_border
from .errors import ShellCountMismatch

PI_3 = math.pi / 3.0


def packing_radius(config: Union[PackingConfiguration, np.ndarray]) -> float:
    """Minimum pairwise center distance."""
    centers = config.centers if isinstance(config, PackingConfiguration) else np.asarray(config, dtype=float)
    n = len(centers)
    if n < 2:
        raise ValueError("need at least two centers")
    if n <= 200:
        diff = centers[:, None, :] - centers[None, :, :]
        dist = np.hypot(diff[..., 0], diff[..., 1])
        dist[np.arange(n), np.arange(n)] = np.inf
        return float(dist.min())
    tree = cKDTree(centers)
    dist, _ = tree.query(centers, k=2)
    return float(dist[:, 1].min())


def density(config: PackingConfiguration) -> float:
    """Disk area over container area; the container is offset by one radius."""
    r = 0.5 * config.diameter
    n = config.n_disks
    if config.spec is None:
        return n * r * r / (1.0 + r) ** 2
    sigma = config.spec.sigma
    h = math.cos(math.pi / sigma) + r
    return n * math.pi * r * r / (sigma * h * h * math.tan(math.pi / sigma))


def _containment_violation(config: PackingConfiguration) -> float:
    centers = config.centers
    if config.spec is None:
        return float(max(0.0, np.hypot(centers[:, 0], centers[:, 1]).max() - 1.0))
    sigma = config.spec.sigma
    angles = np.asarray(geometry.edge_normal_angles(sigma))
    proj = centers @ np.vstack([np.cos(angles), np.sin(angles)])
    return float(max(0.0, proj.max() - geometry.apothem(sigma, config.spec.delta)))


def _matching_residual(a: np.ndarray, b: np.ndarray, tol: float) -> Optional[float]:
    """Max nearest-match distance of the bijection a -> b, or None past tol.

    Greedy matching in sorted (radius, angle) order; falls back to an
    optimal assignment when any greedy match lands above tol/10.
    """
    if len(a) != len(b):
        return None
    order = np.lexsort((np.arctan2(a[:, 1], a[:, 0]), np.hypot(a[:, 0], a[:, 1])))
    tree = cKDTree(b)
    used = np.zeros(len(b), dtype=bool)
    worst = 0.0
    for i in order:
        dist, idx = tree.query(a[i], k=min(6, len(b)))
        dist, idx = np.atleast_1d(dist), np.atleast_1d(idx)
        picked = None
        for dd, jj in zip(dist, idx):
            if not used[jj]:
                picked = (float(dd), int(jj))
                break
        if picked is None or picked[0] > tol / 10.0:
            return _assignment_residual(a, b, tol)
        used[picked[1]] = True
        worst = max(worst, picked[0])
    return worst if worst <= tol else None


def _assignment_residual(a: np.ndarray, b: np.ndarray, tol: float) -> Optional[float]:
    diff = a[:, None, :] - b[None, :, :]
    cost = np.hypot(diff[..., 0], diff[..., 1])
    rows, cols = linear_sum_assignment(cost)
    worst = float(cost[rows, cols].max())
    return worst if worst <= tol else None


def symmetry_residual(config: PackingConfiguration, tol: float = 1e-6) -> float:
    """Max matching distance between the centers and their pi/3 rotation."""
    c, s = math.cos(PI_3), math.sin(PI_3)
    rot = config.centers @ np.array([[c, s], [-s, c]])
    res = _matching_residual(rot, config.centers, tol)
    return math.inf if res is None else res


def is_chp(config: PackingConfiguration, sigma: Sigma, k: int, tol: float = 1e-9) -> bool:
    """Whether ``config`` is the (sigma, k) packing structure within tol."""
    if config.n_disks != disk_count(k):
        raise ShellCountMismatch(f"{config.n_disks} disks cannot form {k} shells")
    border = solve_border(sigma, k)
    centers = config.centers

    if symmetry_residual(config, tol) > tol:
        return False

    expected = []
    for t in range(6):
        a = t * PI_3
        ca, sa = math.cos(a), math.sin(a)
        for p in border.chain[:-1]:
            expected.append((ca * p[0] - sa * p[1], sa * p[0] + ca * p[1]))
    tree = cKDTree(centers)
    dist, idx = tree.query(np.asarray(expected))
    if dist.max() > tol or len(set(idx.tolist())) != len(expected):
        return False

    radius = np.hypot(centers[:, 0], centers[:, 1])
    if radius.min() > tol:
        return False

    return abs(packing_radius(config) - border.d) <= tol * border.d


def equivalent(a: PackingConfiguration, b: PackingConfiguration, tol: float = 1e-9) -> bool:
    """Whether some polygon symmetry (rotation or reflection) maps a onto b."""
    if a.n_disks != b.n_disks or a.sigma != b.sigma:
        return False
    if a.sigma == CIRCLE:
        raise ValueError("equivalence over the circle's continuous symmetries is not supported")
    sigma = int(a.sigma)
    axis = geometry.vertex_angle(sigma)
    bc = np.asarray(b.centers, dtype=float)
    for mirrored in (False, True):
        base = a.centers.copy()
        if mirrored:
            c2, s2 = math.cos(2 * axis), math.sin(2 * axis)
            base = base @ np.array([[c2, s2], [s2, -c2]])
        for i in range(sigma):
            ang = 2.0 * math.pi * i / sigma
            c, s = math.cos(ang), math.sin(ang)
            cand = base @ np.array([[c, s], [-s, c]])
            if _matching_residual(cand, bc, tol) is not None:
                return True
    return False


def contact_count_histogram(config: PackingConfiguration, tol: float = 1e-9) -> Dict[int, int]:
    """Histogram mapping contacts-per-disk to the number of such disks."""
    d = config.diameter
    tree = cKDTree(config.centers)
    counts = np.zeros(config.n_disks, dtype=int)
    for i, j in tree.query_pairs(d * (1.0 + tol)):
        gap = float(np.hypot(*(config.centers[i] - config.centers[j])))
        if gap >= d * (1.0 - tol):
            counts[i] += 1
            counts[j] += 1
    hist: Dict[int, int] = {}
    for c in counts.tolist():
        hist[c] = hist.get(c, 0) + 1
    return dict(sorted(hist.items()))


@dataclass(frozen=True)
class ValidationReport:
    """Certification summary of one configuration."""

    min_distance: float
    worst_containment_violation: float
    density: float
    is_valid: bool
    symmetry_residual: float
    contact_count_histogram: Dict[int, int]

    def to_json_dict(self) -> Dict[str, object]:
        return {
            "min_distance": self.min_distance,
            "worst_containment_violation": self.worst_containment_violation,
            "density": self.density,
            "is_valid": self.is_valid,
            "symmetry_residual": self.symmetry_residual,
            "contact_count_histogram": {str(k): v for k, v in self.contact_count_histogram.items()},
        }


def validate_config(config: PackingConfiguration, tol: float = 1e-9) -> ValidationReport:
    """Assemble the full certification report for ``config``."""
    min_dist = packing_radius(config)
    violation = _containment_violation(config)
    valid = min_dist >= config.diameter * (1.0 - tol) and violation <= tol
    return ValidationReport(
        min_distance=min_dist,
        worst_containment_violation=violation,
        density=density(config),
        is_valid=valid,
        symmetry_residual=symmetry_residual(config, max(tol, 1e-6)),
        contact_count_histogram=contact_count_histogram(config, max(tol, 1e-9)),
    )
