"""Deterministic construction of a packing from (sigma, k, DNA).

The border ring and the corner disk of every inner shell follow directly
from the border chain and the DNA path.  The rest of each shell is
filled one disk at a time inside the fundamental sector, tangent to the
previous disk of the shell and to a disk of the shell outside it, then
replicated by the six exact rotations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import geometry
from .chp import CIRCLE, BorderSolution, Dna, Sigma, dna_from_letters, dna_from_values, canonicalize_dna, disk_count, solve_border
from .errors import AmbiguousStart, Coincident, ConstructionFailed, InconsistentDna, NoIntersection, NoPath
from .geometry import Point2, PolygonSpec

PI_3 = math.pi / 3.0
_S3 = math.sqrt(3.0) / 2.0
# exact unit rotations by multiples of 60 degrees, for bit-stable replication
_ROT6 = ((1.0, 0.0), (0.5, _S3), (-0.5, _S3), (-1.0, 0.0), (-0.5, -_S3), (0.5, -_S3))


@dataclass
class PackingConfiguration:
    """N disk centers plus the common disk diameter.

    ``spec`` is the center-domain polygon (delta = 0); None means the
    unit circle.  ``meta`` records provenance: construction mode, DNA,
    seeds, and similar.
    """

    spec: Optional[PolygonSpec]
    centers: np.ndarray
    diameter: float
    meta: Dict[str, object] = field(default_factory=dict)

    @property
    def sigma(self) -> Sigma:
        return CIRCLE if self.spec is None else self.spec.sigma

    @property
    def n_disks(self) -> int:
        return len(self.centers)


def circle_pair_intersection(c1: Point2, c2: Point2, d: float) -> Tuple[Point2, Point2]:
    """Both intersection points of the radius-d circles about c1 and c2.

    Ordered by signed side of the directed line c1 -> c2 (left first).
    A separation within 1e-12 beyond 2d is accepted as a tangency.
    """
    dx, dy = c2[0] - c1[0], c2[1] - c1[1]
    dist = math.hypot(dx, dy)
    if dist == 0.0:
        raise Coincident("circle centers coincide")
    if dist > 2.0 * d * (1.0 + 1e-12):
        raise NoIntersection(f"centers {dist:.17g} apart exceed 2d = {2 * d:.17g}")
    half = 0.5 * dist
    h = math.sqrt(max(0.0, d * d - half * half))
    mx, my = c1[0] + 0.5 * dx, c1[1] + 0.5 * dy
    ux, uy = dx / dist, dy / dist
    left = (mx - h * uy, my + h * ux)
    right = (mx + h * uy, my - h * ux)
    return left, right


def _rotate_exact(p: Point2, t: int) -> Point2:
    c, s = _ROT6[t % 6]
    return (c * p[0] - s * p[1], s * p[0] + c * p[1])


def _inside_domain(sigma: Sigma, spec: Optional[PolygonSpec], p: Point2, tol: float) -> bool:
    if sigma == CIRCLE:
        return math.hypot(p[0], p[1]) <= 1.0 + tol
    assert spec is not None
    return geometry.contains(spec, p, tol)


class _Workspace:
    """Placed disks with their shell indices, for partner and overlap scans."""

    def __init__(self, d: float):
        self.d = d
        self.points: List[Point2] = []
        self.shells: List[int] = []

    def add(self, p: Point2, shell: int) -> None:
        self.points.append(p)
        self.shells.append(shell)

    def add_with_rotations(self, p: Point2, shell: int) -> None:
        for t in range(6):
            self.add(_rotate_exact(p, t), shell)

    def too_close(self, p: Point2) -> bool:
        limit = self.d * (1.0 - 1e-9)
        for q in self.points:
            if math.hypot(p[0] - q[0], p[1] - q[1]) < limit:
                return True
        return False

    def partners(self, prev: Point2, shell: int) -> List[Point2]:
        """Disks of ``shell`` ahead of ``prev`` in polar angle, nearest first."""
        prev_angle = math.atan2(prev[1], prev[0])
        reach = 2.0 * self.d * (1.0 + 1e-9)
        found: List[Tuple[float, float, Point2]] = []
        for q, s in zip(self.points, self.shells):
            if s != shell:
                continue
            if math.atan2(q[1], q[0]) <= prev_angle - 1e-12:
                continue
            gap = math.hypot(prev[0] - q[0], prev[1] - q[1])
            if 0.0 < gap <= reach:
                found.append((gap, math.atan2(q[1], q[0]), q))
        found.sort(key=lambda item: (item[0], item[1]))
        return [q for _, _, q in found]


def build_chp(sigma: Sigma, k: int, dna: Union[Dna, str, None] = None) -> PackingConfiguration:
    """Construct the packing selected by ``dna`` (lowest-letter order when None).

    Raises ConstructionFailed when a shell cannot be completed or fails
    its closure check, which signals an unrealizable direction sequence.
    """
    border = solve_border(sigma, k)
    if dna is None:
        letters = "".join(
            chr(ord("a") + b) * n for b, n in enumerate(border.degeneracies)
        )
        dna = dna_from_letters(letters, border)
    elif isinstance(dna, str):
        dna = dna_from_letters(dna, border)
    else:
        dna = dna_from_values(dna.values, border)

    d = border.d
    spec = None if sigma == CIRCLE else PolygonSpec(int(sigma), 0.0)
    ws = _Workspace(d)

    # border shell: sector chain replicated by the six rotations
    sector_border = list(border.chain[:-1])
    for p in sector_border:
        ws.add_with_rotations(p, k)

    # DNA path from P1; its points seed every inner shell's corner
    seeds: List[Point2] = []
    x, y = border.chain[0]
    for v in dna.values:
        x += d * math.cos(v)
        y += d * math.sin(v)
        seeds.append((x, y))
    tail = math.hypot(*seeds[-1])
    if tail > 1e-9:
        raise ConstructionFailed(f"DNA path misses the center by {tail:.3e}")
    seeds[-1] = (0.0, 0.0)
    ws.add(seeds[-1], 0)
    for j, p in enumerate(seeds[:-1]):
        ws.add_with_rotations(p, k - 1 - j)

    chain_radius = [math.hypot(*p) for p in seeds[::-1]]  # index = shell, [0]=center
    chain_radius.append(math.hypot(*border.chain[0]))

    sector_rows: List[List[Point2]] = [sector_border]
    for m in range(k - 1, 0, -1):
        row = [seeds[k - 1 - m]]
        r_lo = chain_radius[m - 1] - 1e-9
        r_hi = chain_radius[m + 1] + 1e-9
        for i in range(2, m + 1):
            prev = row[-1]
            placed = None
            for partner in ws.partners(prev, m + 1):
                try:
                    branches = circle_pair_intersection(prev, partner, d)
                except (NoIntersection, Coincident):
                    continue
                ok = [
                    p
                    for p in branches
                    if _inside_domain(sigma, spec, p, 1e-9)
                    and r_lo <= math.hypot(p[0], p[1]) <= r_hi
                    and not ws.too_close(p)
                ]
                if not ok:
                    continue
                if len(ok) == 2 and math.hypot(*ok[0]) != math.hypot(*ok[1]):
                    ok.sort(key=lambda p: -math.hypot(p[0], p[1]))
                placed = ok[0]
                break
            if placed is None:
                raise ConstructionFailed(f"shell {m}, position {i}: no tangent placement")
            row.append(placed)
            ws.add_with_rotations(placed, m)
        closure = geometry.dist(_rotate_exact(row[0], 1), row[-1])
        if abs(closure - d) > 1e-9:
            raise ConstructionFailed(f"shell {m}: closure gap {closure - d:.3e}")
        sector_rows.append(row)

    centers: List[Point2] = []
    for row in sector_rows:
        for t in range(6):
            for p in row:
                centers.append(_rotate_exact(p, t))
    centers.append((0.0, 0.0))
    if len(centers) != disk_count(k):
        raise ConstructionFailed(f"assembled {len(centers)} disks, expected {disk_count(k)}")

    arr = np.asarray(centers, dtype=float)
    if _min_pairwise(arr) < d * (1.0 - 1e-9):
        raise ConstructionFailed("overlap in assembled configuration")
    return PackingConfiguration(
        spec=spec,
        centers=arr,
        diameter=d,
        meta={"mode": "deterministic", "sigma": sigma, "k": k, "dna": dna.letters},
    )


def _min_pairwise(centers: np.ndarray) -> float:
    n = len(centers)
    if n < 2:
        return math.inf
    if n <= 400:
        diff = centers[:, None, :] - centers[None, :, :]
        dist = np.hypot(diff[..., 0], diff[..., 1])
        dist[np.arange(n), np.arange(n)] = np.inf
        return float(dist.min())
    from scipy.spatial import cKDTree

    tree = cKDTree(centers)
    dist, _ = tree.query(centers, k=2)
    return float(dist[:, 1].min())


def _contact_pairs(centers: np.ndarray, d: float, tol: float) -> List[Tuple[int, int]]:
    from scipy.spatial import cKDTree

    tree = cKDTree(centers)
    pairs = []
    for i, j in sorted(tree.query_pairs(d * (1.0 + tol))):
        gap = float(np.hypot(*(centers[i] - centers[j])))
        if gap >= d * (1.0 - tol):
            pairs.append((i, j))
    return pairs


def extract_dna(config: PackingConfiguration, sigma: Sigma, k: int, tol: float = 1e-6) -> Dna:
    """Recover the canonical DNA of a packing by walking its contact graph.

    Follows every contact path of exactly k steps from the disk at P1 to
    the disk at the origin; all found paths must canonicalize to the same
    representative, which is returned.
    """
    border = solve_border(sigma, k)
    d = config.diameter
    centers = np.asarray(config.centers, dtype=float)
    p1 = np.array(geometry.fundamental_vertex(int(sigma)) if sigma != CIRCLE else (0.0, -1.0))
    dist_p1 = np.hypot(*(centers - p1).T)
    near = np.flatnonzero(dist_p1 <= max(tol, 1e-7))
    if len(near) != 1:
        raise AmbiguousStart(f"{len(near)} disks at P1 within tolerance")
    start = int(near[0])
    radius = np.hypot(centers[:, 0], centers[:, 1])
    finish = int(np.argmin(radius))
    if radius[finish] > max(tol, 1e-7):
        raise NoPath("no disk at the origin")

    adjacency: Dict[int, List[int]] = {}
    for i, j in _contact_pairs(centers, d, tol):
        adjacency.setdefault(i, []).append(j)
        adjacency.setdefault(j, []).append(i)

    value_paths: List[Tuple[float, ...]] = []

    def dfs(node: int, depth: int, values: List[float]) -> None:
        if depth == k:
            if node == finish:
                value_paths.append(tuple(values))
            return
        remaining = k - depth
        for nxt in adjacency.get(node, ()):
            if radius[nxt] > remaining * d * (1.0 + 10.0 * tol):
                continue
            dx, dy = centers[nxt] - centers[node]
            values.append(math.atan2(dy, dx))
            dfs(nxt, depth + 1, values)
            values.pop()

    dfs(start, 0, [])
    if not value_paths:
        raise NoPath(f"no {k}-step contact path from P1 to the center")

    block_tol = max(1e-9, 10.0 * tol)
    reps = set()
    canon: Optional[Dna] = None
    for values in value_paths:
        dna = _dna_from_noisy_values(values, border, block_tol)
        rep = canonicalize_dna(dna, border)
        reps.add(rep.letters)
        canon = rep
    if len(reps) != 1:
        raise InconsistentDna(f"contact paths disagree after canonicalization: {sorted(reps)}")
    assert canon is not None
    return canon


def _dna_from_noisy_values(values: Sequence[float], border: BorderSolution, tol: float) -> Dna:
    blocks = border.blocks()
    gap = min(
        [abs(blocks[i + 1] - blocks[i]) for i in range(len(blocks) - 1)],
        default=math.pi,
    )
    limit = min(0.45 * gap, max(tol, 1e-9)) if len(blocks) > 1 else max(tol, 1e-9)
    seq = []
    for v in values:
        best, best_err = None, limit
        for b, ref in enumerate(blocks):
            err = abs((v - ref + math.pi) % (2.0 * math.pi) - math.pi)
            if err <= best_err:
                best, best_err = b, err
        if best is None:
            raise NoPath(f"path direction {v:.6f} matches no building block")
        seq.append(best)
    letters = "".join(chr(ord("a") + b) for b in seq)
    return dna_from_letters(letters, border)
