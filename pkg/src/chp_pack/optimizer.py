"""Stochastic packing search with a hardening pair potential.

Disks repel through (lambda/r^2)^s; raising s along a ladder turns the
soft repulsion into an effectively hard-disk constraint.  Minimization
is projected gradient descent working on the log of the energy, which
has the same minimizers and stays finite at any s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from . import geometry
from .builder import PackingConfiguration, extract_dna
from .chp import CIRCLE, Sigma, disk_count, solve_border
from .errors import CoincidentPoints, NonFinite, PreconditionViolated
from .geometry import PolygonSpec
from .validation import is_chp, packing_radius

MIN_DIST_SQ = "min_dist_sq"

_M64 = (1 << 64) - 1


@dataclass(frozen=True)
class OptimizerParams:
    """Schedule and tolerances of the energy ladder."""

    s_initial: float = 10.0
    s_factor: float = 1.5
    s_final: float = 1e8
    lambda_rule: str = MIN_DIST_SQ
    inner_tol: float = 1e-12
    max_inner_iters: int = 5000
    perturb_amplitude: float = 0.01
    seed: int = 0

    def __post_init__(self) -> None:
        if not self.s_initial < self.s_final:
            raise ValueError("s_initial must be below s_final")
        if self.s_factor <= 1.0:
            raise ValueError("s_factor must exceed 1")
        if self.s_final > 1e9:
            raise ValueError("s_final capped at 1e9")
        if not 0.0 <= self.perturb_amplitude < 0.5:
            raise ValueError("perturb_amplitude must lie in [0, 0.5)")
        if self.lambda_rule != MIN_DIST_SQ:
            raise ValueError(f"unknown lambda rule {self.lambda_rule!r}")


@dataclass(frozen=True)
class PinSet:
    """Disk indices whose positions are frozen during minimization."""

    indices: FrozenSet[int] = frozenset()

    @classmethod
    def of(cls, ids: Sequence[int]) -> "PinSet":
        return cls(indices=frozenset(int(i) for i in ids))


def _rng(seed: int, salt: int) -> np.random.Generator:
    key = ((int(salt) & _M64) << 64) | (int(seed) & _M64)
    return np.random.Generator(np.random.Philox(key=key))


def _centers_of(config) -> np.ndarray:
    if isinstance(config, PackingConfiguration):
        return np.asarray(config.centers, dtype=float)
    return np.asarray(config, dtype=float)


def _log_terms(centers: np.ndarray, s: float, lam: float) -> np.ndarray:
    """Ordered-pair matrix of s*(log lam - log r^2), -inf on the diagonal."""
    diff = centers[:, None, :] - centers[None, :, :]
    r2 = diff[..., 0] ** 2 + diff[..., 1] ** 2
    n = len(centers)
    idx = np.arange(n)
    r2[idx, idx] = np.inf
    if np.any(r2 <= 0.0):
        raise CoincidentPoints("two centers coincide")
    return s * (math.log(lam) - np.log(r2)), r2, diff


def energy(config, s: float, lam: float) -> float:
    """Sum over pairs of (lambda/r^2)^s, accumulated in the log domain."""
    centers = _centers_of(config)
    if len(centers) < 2:
        return 0.0
    logterms, _, _ = _log_terms(centers, s, lam)
    flat = logterms[np.triu_indices(len(centers), k=1)]
    m = float(flat.max())
    lse = m + math.log(float(np.exp(flat - m).sum()))
    return math.exp(lse) if lse <= 709.0 else math.inf


def energy_gradient(config, s: float, lam: float, pins: Optional[PinSet] = None) -> np.ndarray:
    """Analytic gradient of ``energy`` per center; pinned rows are zeroed."""
    centers = _centers_of(config)
    logterms, r2, diff = _log_terms(centers, s, lam)
    terms = np.exp(np.clip(logterms, -745.0, 709.0))
    coef = -2.0 * s * terms / r2
    grad = np.einsum("ij,ijk->ik", coef, diff)
    if pins is not None:
        grad[list(pins.indices)] = 0.0
    return grad


def _objective(centers: np.ndarray, s: float, lam: float, free: np.ndarray, need_grad: bool):
    """log-energy and its gradient restricted to unpinned disks."""
    logterms, r2, diff = _log_terms(centers, s, lam)
    m = float(logterms.max())
    w = np.exp(logterms - m)
    total = 0.5 * float(w.sum())
    value = m + math.log(total)
    if not need_grad:
        return value, None
    coef = (-2.0 * s) * (w / total) / r2
    grad = np.einsum("ij,ijk->ik", coef, diff)
    grad[~free] = 0.0
    return value, grad


def _project_all(centers: np.ndarray, spec: Optional[PolygonSpec], free: np.ndarray) -> np.ndarray:
    out = centers
    if spec is None:
        radius = np.hypot(out[:, 0], out[:, 1])
        bad = free & (radius > 1.0)
        if np.any(bad):
            out = out.copy()
            out[bad] *= (1.0 / radius[bad])[:, None]
        return out
    angles = np.asarray(geometry.edge_normal_angles(spec.sigma))
    normals = np.vstack([np.cos(angles), np.sin(angles)])
    proj = out @ normals
    bad = free & (proj.max(axis=1) > geometry.apothem(spec.sigma, spec.delta))
    if np.any(bad):
        out = out.copy()
        for i in np.flatnonzero(bad):
            out[i] = geometry.project_into(spec, (out[i, 0], out[i, 1]))
    return out


def minimize(
    config: PackingConfiguration,
    s: float,
    lam: float,
    pins: Optional[PinSet] = None,
    params: Optional[OptimizerParams] = None,
) -> PackingConfiguration:
    """Projected gradient descent on the log energy at fixed (s, lambda)."""
    params = params or OptimizerParams()
    pins = pins or PinSet()
    x = _centers_of(config).copy()
    free = np.ones(len(x), dtype=bool)
    if pins.indices:
        bad = [i for i in pins.indices if not 0 <= i < len(x)]
        if bad:
            raise PreconditionViolated(f"pinned indices {bad} out of range")
        free[list(pins.indices)] = False

    spec = config.spec
    f, g = _objective(x, s, lam, free, True)
    if not math.isfinite(f):
        raise NonFinite(f"objective is {f} at the starting point")
    alpha = 0.05 * math.sqrt(lam) / max(float(np.abs(g).max()), 1e-300)
    prev_x: Optional[np.ndarray] = None
    prev_g: Optional[np.ndarray] = None

    for _ in range(params.max_inner_iters):
        gnorm = float(np.abs(g).max())
        if gnorm <= params.inner_tol * max(1.0, abs(f)):
            break
        if prev_x is not None:
            dx = (x - prev_x).ravel()
            dg = (g - prev_g).ravel()
            dgg = float(dg @ dg)
            step = float(dx @ dg) / dgg if dgg > 0.0 else 0.0
            if step > 0.0:
                alpha = min(max(step, 1e-18), 1e18)
        accepted = False
        a = alpha
        for _ in range(70):
            trial = _project_all(x - a * g, spec, free)
            move = trial - x
            move_norm2 = float((move * move).sum())
            if move_norm2 == 0.0:
                break
            f_trial, _ = _objective(trial, s, lam, free, False)
            if math.isnan(f_trial):
                raise NonFinite("objective became NaN during line search")
            if f_trial <= f - 1e-4 / max(a, 1e-300) * move_norm2:
                accepted = True
                break
            a *= 0.5
        if not accepted:
            break
        prev_x, prev_g = x, g
        x = trial
        f_new, g = _objective(x, s, lam, free, True)
        if abs(f - f_new) <= params.inner_tol * max(1.0, abs(f)):
            f = f_new
            break
        f = f_new
        alpha = a

    out = PackingConfiguration(
        spec=spec,
        centers=x,
        diameter=packing_radius(x) if len(x) > 1 else config.diameter,
        meta=dict(config.meta),
    )
    return out


def _rungs(params: OptimizerParams) -> List[float]:
    out = []
    s = params.s_initial
    while s < params.s_final:
        out.append(s)
        s *= params.s_factor
    out.append(params.s_final)
    return out


def ladder(
    config: PackingConfiguration,
    pins: Optional[PinSet] = None,
    params: Optional[OptimizerParams] = None,
    record: Optional[Callable[[int, float, PackingConfiguration], None]] = None,
) -> PackingConfiguration:
    """Run minimize along the whole s schedule, re-deriving lambda per rung."""
    params = params or OptimizerParams()
    current = config
    for rung, s in enumerate(_rungs(params)):
        lam = packing_radius(current.centers) ** 2
        current = minimize(current, s, lam, pins, params)
        if record is not None:
            record(rung, s, current)
    return current


def algorithm1(sigma: Sigma, n: int, params: Optional[OptimizerParams] = None) -> PackingConfiguration:
    """Energy-ladder packing from a random start; deterministic per seed."""
    if n < 2:
        raise PreconditionViolated("need at least two disks")
    params = params or OptimizerParams()
    rng = _rng(params.seed, 0xA1)
    spec = None if sigma == CIRCLE else PolygonSpec(int(sigma), 0.0)
    pts = np.empty((n, 2))
    for i in range(n):
        t = rng.uniform(0.0, 0.5 * math.pi)
        u = rng.uniform(0.0, 2.0 * math.pi)
        if spec is None:
            r = math.sin(t) ** 2
            pts[i] = (r * math.cos(u), r * math.sin(u))
        else:
            pts[i] = geometry.interior_point(t, u, spec.sigma)
    start = PackingConfiguration(
        spec=spec,
        centers=pts,
        diameter=packing_radius(pts),
        meta={"mode": "algorithm1", "sigma": sigma, "n": n, "seed": params.seed},
    )
    out = ladder(start, None, params)
    out.meta = dict(start.meta)
    return out


def seed_guided(sigma: Sigma, k: int, theta: float, scale: float) -> Tuple[PackingConfiguration, PinSet]:
    """Exact border and center disks plus a rotated hexagonal interior guess.

    The first 6k+1 disks are at their final positions and come pinned;
    the 3k(k-1) interior disks sit on a hexagonal lattice rotated by
    theta and shrunk by ``scale`` to stay strictly inside the domain.
    """
    border = solve_border(sigma, k)
    d = border.d
    spec = None if sigma == CIRCLE else PolygonSpec(int(sigma), 0.0)
    pts: List[Tuple[float, float]] = []
    for t in range(6):
        a = t * math.pi / 3.0
        ca, sa = math.cos(a), math.sin(a)
        for p in border.chain[:-1]:
            pts.append((ca * p[0] - sa * p[1], sa * p[0] + ca * p[1]))
    pts.append((0.0, 0.0))

    lattice: List[Tuple[float, float]] = []
    ct, st = math.cos(theta), math.sin(theta)
    for a in range(-(k + 2), k + 3):
        for b in range(-(k + 2), k + 3):
            x = d * (a + 0.5 * b)
            y = d * (math.sqrt(3.0) / 2.0) * b
            if math.hypot(x, y) < 0.5 * d:
                continue
            lattice.append((ct * x - st * y, st * x + ct * y))
    lattice.sort(key=lambda p: (math.hypot(p[0], p[1]), math.atan2(p[1], p[0])))
    interior = lattice[: 3 * k * (k - 1)]
    apothem = 1.0 if spec is None else geometry.apothem(spec.sigma, 0.0)
    r_max = max((math.hypot(*p) for p in interior), default=0.0)
    factor = scale * min(1.0, (apothem - 0.5 * d) / r_max) if r_max > 0.0 else scale
    pts.extend((factor * x, factor * y) for x, y in interior)

    arr = np.asarray(pts, dtype=float)
    config = PackingConfiguration(
        spec=spec,
        centers=arr,
        diameter=packing_radius(arr),
        meta={"mode": "seed_guided", "sigma": sigma, "k": k, "theta": theta, "scale": scale},
    )
    return config, PinSet.of(range(6 * k + 1))


def algorithm2(
    config: PackingConfiguration,
    params: Optional[OptimizerParams] = None,
    pins: Optional[PinSet] = None,
    trial: int = 0,
    record: Optional[Callable[[int, float, PackingConfiguration], None]] = None,
) -> PackingConfiguration:
    """One shake trial: perturb, re-run the ladder, keep only improvements."""
    params = params or OptimizerParams()
    pins = pins or PinSet()
    base = packing_radius(config.centers)
    x = _centers_of(config).copy()
    free = np.ones(len(x), dtype=bool)
    if pins.indices:
        free[list(pins.indices)] = False
    for i in np.flatnonzero(free):
        gen = _rng(params.seed, (trial << 32) | i)
        r = params.perturb_amplitude * base * math.sqrt(gen.uniform())
        ang = gen.uniform(0.0, 2.0 * math.pi)
        x[i, 0] += r * math.cos(ang)
        x[i, 1] += r * math.sin(ang)
    x = _project_all(x, config.spec, free)
    shaken = PackingConfiguration(spec=config.spec, centers=x, diameter=0.0, meta=dict(config.meta))
    out = ladder(shaken, pins, params, record)
    if packing_radius(out.centers) > base:
        out.meta = dict(config.meta)
        out.meta.update({"mode": "algorithm2", "trial": trial, "accepted": True, "seed": params.seed})
        result = out
    else:
        result = config
    assert packing_radius(result.centers) >= base
    return result


def refine(config: PackingConfiguration, max_iters: int = 2000) -> PackingConfiguration:
    """Polish at the final exponent; never returns a worse packing.

    Re-runs the last ladder rung in short bursts with a tightened
    stopping tolerance and keeps the iterate with the largest minimum
    pairwise distance.  A configuration whose tangency structure is
    already optimal therefore comes back unchanged.

    This is a deliberately simple greedy polish, not a dedicated
    high-precision refinement scheme: it trades the last digits for a
    hard no-regression guarantee.
    """
    chunk = 50
    params = OptimizerParams(inner_tol=1e-15, max_inner_iters=chunk)
    best = config
    best_d = packing_radius(config.centers)
    cur = config
    cur_d = best_d
    stability = math.inf
    done = 0
    while done < max_iters:
        lam = cur_d * cur_d
        nxt = minimize(cur, params.s_final, lam, None, params)
        done += chunk
        nxt_d = packing_radius(nxt.centers)
        stability = abs(nxt_d - cur_d) / cur_d
        moved = float(np.abs(nxt.centers - cur.centers).max())
        if nxt_d > best_d:
            best, best_d = nxt, nxt_d
        cur, cur_d = nxt, nxt_d
        if stability <= 1e-15 and moved <= 1e-15:
            break
        if nxt_d < best_d * (1.0 - 1e-6):
            break
    out = PackingConfiguration(
        spec=best.spec, centers=best.centers, diameter=best_d, meta=dict(config.meta)
    )
    out.meta["refine_drift"] = abs(best_d - packing_radius(config.centers)) / packing_radius(config.centers)
    out.meta["refine_stability"] = stability
    return out


def shell_rotation_search(
    config: PackingConfiguration,
    sigma: Sigma,
    k: int,
    trials: int,
    params: Optional[OptimizerParams] = None,
) -> List[PackingConfiguration]:
    """Rotate random shells, re-pack, and keep the inequivalent outcomes."""
    params = params or OptimizerParams()
    if not is_chp(config, sigma, k, 1e-6):
        raise PreconditionViolated("input configuration is not shell-structured")
    if k < 2:
        return []
    centers = _centers_of(config)
    shells = _shell_indices(centers, config.diameter)
    border = solve_border(sigma, k)
    pinned = [i for i, m in enumerate(shells) if m == k or m == 0]
    pins = PinSet.of(pinned)

    kept: List[PackingConfiguration] = []
    seen_dnas: set = set()
    for t in range(trials):
        gen = _rng(params.seed, (t << 32) | 0x5E11)
        m = 1 + int(gen.integers(k - 1))
        ang = gen.uniform(math.pi / 18.0, math.pi / 6.0)
        x = centers.copy()
        rows = [i for i, sh in enumerate(shells) if sh == m]
        ca, sa = math.cos(ang), math.sin(ang)
        rot = np.array([[ca, sa], [-sa, ca]])
        x[rows] = x[rows] @ rot
        cand = PackingConfiguration(spec=config.spec, centers=x, diameter=border.d, meta=dict(config.meta))
        out = algorithm2(cand, params, pins, trial=t)
        out = refine(out, max_iters=500)
        try:
            if not is_chp(out, sigma, k, 1e-6):
                continue
            dna = extract_dna(out, sigma, k, tol=1e-5)
        except Exception:
            continue
        if dna.letters in seen_dnas:
            continue
        seen_dnas.add(dna.letters)
        out.meta["dna"] = dna.letters
        out.meta["trial"] = t
        kept.append(out)
    return kept


def _shell_indices(centers: np.ndarray, d: float) -> np.ndarray:
    """Shell index per disk: contact-graph distance from the center disk."""
    from scipy.spatial import cKDTree

    tree = cKDTree(centers)
    n = len(centers)
    adj: List[List[int]] = [[] for _ in range(n)]
    for i, j in tree.query_pairs(d * (1.0 + 1e-4)):
        gap = float(np.hypot(*(centers[i] - centers[j])))
        if gap >= d * (1.0 - 1e-4):
            adj[i].append(j)
            adj[j].append(i)
    start = int(np.argmin(np.hypot(centers[:, 0], centers[:, 1])))
    depth = np.full(n, -1, dtype=int)
    depth[start] = 0
    queue = [start]
    while queue:
        node = queue.pop(0)
        for nxt in adj[node]:
            if depth[nxt] < 0:
                depth[nxt] = depth[node] + 1
                queue.append(nxt)
    return depth
