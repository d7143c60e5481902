"""Curved hexagonal packings: border chains, densities, and DNA counting.

A curved hexagonal packing (CHP) places N = 3k(k+1)+1 congruent disks in
a regular polygon with sigma = 6j sides (or in a circle) so that the
arrangement is invariant under rotations by pi/3 and carries 6k disks on
the boundary of the center domain.  Everything reduces to one 60 degree
sector: a chain of k equal chords of the boundary runs from the vertex
P1 to rotate(P1, pi/3), its chord directions are phi_1 <= ... <= phi_k,
and the order in which the distinct direction values are consumed on the
contact path from P1 to the center (the DNA string) selects one packing
out of a finite family that all share the same density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Sequence, Set, Tuple, Union

from . import geometry
from .errors import CapExceeded, InconsistentDna, NoSolution, NotMultipleOfSix, PreconditionViolated
from .geometry import Point2

CIRCLE = "circle"

TWO_PI = 2.0 * math.pi
PI_3 = math.pi / 3.0

# tolerance for grouping chord directions and detecting occupied vertices
GROUP_TOL = 1e-9

Sigma = Union[int, str]


def disk_count(k: int) -> int:
    """Number of disks in a k-shell packing, 3k(k+1)+1."""
    return 3 * k * (k + 1) + 1


@dataclass(frozen=True)
class BorderSolution:
    """The unique border chain of a (sigma, k) packing.

    ``phi`` holds the k chord directions in ascending order, ``d`` the
    common chord length (= disk diameter).  ``chain`` are the chain
    points P1..P_{k+1}; ``vertex_hits`` are the chord counts c at which
    the chain point sits on a polygon vertex and ``vertex_angles`` the
    rotations that carry those points to P1.
    """

    sigma: Sigma
    k: int
    phi: Tuple[float, ...]
    d: float
    n_V: int
    degeneracies: Tuple[int, ...]
    eta: int
    chain: Tuple[Point2, ...]
    vertex_hits: Tuple[int, ...]
    vertex_angles: Tuple[float, ...]

    def blocks(self) -> Tuple[float, ...]:
        """Distinct DNA letter values phi + pi/3, ascending."""
        out: List[float] = []
        pos = 0
        for n in self.degeneracies:
            out.append(self.phi[pos] + PI_3)
            pos += n
        return tuple(out)


def _require_sigma(sigma: Sigma) -> None:
    if sigma == CIRCLE:
        return
    if not isinstance(sigma, int) or sigma < 6 or sigma % 6 != 0:
        raise NotMultipleOfSix(f"sigma must be a positive multiple of 6 or {CIRCLE!r}, got {sigma!r}")


def _group_degeneracies(phi: Sequence[float]) -> Tuple[int, ...]:
    runs: List[int] = []
    for j, value in enumerate(phi):
        if j > 0 and value - phi[j - 1] <= GROUP_TOL:
            runs[-1] += 1
        else:
            runs.append(1)
    return tuple(runs)


def _chain_arcs(sigma: int, k: int, d: float) -> List[float]:
    """Arclength positions of the chain points for a trial chord length d.

    The boundary of the delta=0 polygon is parametrized by arclength
    starting at P1 and wrapping over vertices as needed; every chord is
    located by bisection on its endpoint arclength, using that the chord
    length grows monotonically with arc travel on this scale.
    """
    edge = 2.0 * math.sin(math.pi / sigma)
    u0 = geometry.vertex_angle(sigma)
    step = TWO_PI / sigma

    def point_at(s: float) -> Point2:
        i, t = divmod(s, edge)
        a = u0 + step * i
        b = a + step
        f = t / edge
        return (
            (1.0 - f) * math.cos(a) + f * math.cos(b),
            (1.0 - f) * math.sin(a) + f * math.sin(b),
        )

    arcs = [0.0]
    s = 0.0
    px, py = point_at(0.0)
    for _ in range(k):
        lo = s + d * (1.0 - 1e-12)
        hi = s + 2.0 * d

        def chord_excess(t: float) -> float:
            qx, qy = point_at(t)
            return math.hypot(qx - px, qy - py) - d

        grow = 0
        while chord_excess(hi) < 0.0:
            hi = s + (hi - s) * 1.5
            grow += 1
            if grow > 60:
                raise NoSolution(f"chord bracket failed for sigma={sigma}, k={k}")
        for _ in range(90):
            mid = 0.5 * (lo + hi)
            if chord_excess(mid) < 0.0:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-16 * max(1.0, hi):
                break
        s = 0.5 * (lo + hi)
        arcs.append(s)
        px, py = point_at(s)
    return arcs


def _solve_polygon_border(sigma: int, k: int) -> dict:
    edge = 2.0 * math.sin(math.pi / sigma)
    target = (sigma / 6.0) * edge
    u0 = geometry.vertex_angle(sigma)
    step = TWO_PI / sigma

    def point_at(s: float) -> Point2:
        i, t = divmod(s, edge)
        a = u0 + step * i
        b = a + step
        f = t / edge
        return (
            (1.0 - f) * math.cos(a) + f * math.cos(b),
            (1.0 - f) * math.sin(a) + f * math.sin(b),
        )

    def travel_excess(d: float) -> float:
        return _chain_arcs(sigma, k, d)[-1] - target

    # arclength >= chord length, so d = target/k overshoots (or matches on sigma=6)
    hi = target / k
    lo = 0.5 * hi
    guard = 0
    while travel_excess(lo) >= 0.0:
        lo *= 0.5
        guard += 1
        if guard > 200:
            raise NoSolution(f"no bracket for sigma={sigma}, k={k}")
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if travel_excess(mid) < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-17 * hi:
            break
    d = 0.5 * (lo + hi)

    arcs = _chain_arcs(sigma, k, d)
    chain = [point_at(s) for s in arcs]
    chain[0] = geometry.fundamental_vertex(sigma)
    # the march must consume exactly one sixth of the perimeter; for
    # side counts divisible by 6 that lands on the rotated start vertex
    endpoint = geometry.rotate(chain[0], PI_3) if sigma % 6 == 0 else point_at(target)
    residual = geometry.dist(chain[-1], endpoint)
    if residual > 1e-12:
        raise NoSolution(f"chain residual {residual:.3e} for sigma={sigma}, k={k}")
    chain[-1] = endpoint

    phi: List[float] = []
    for j in range(k):
        ax, ay = chain[j]
        bx, by = chain[j + 1]
        phi.append(math.atan2(by - ay, bx - ax))
    for j in range(k - 1):
        if phi[j + 1] < phi[j] - 1e-10:
            raise NoSolution(f"chord directions not ascending for sigma={sigma}, k={k}")

    hits: List[int] = []
    alphas: List[float] = []
    for c, s in enumerate(arcs[:-1]):
        m = round(s / edge)
        if abs(s - m * edge) <= GROUP_TOL:
            hits.append(c)
            alphas.append(m * step)
    return {
        "phi": tuple(phi),
        "d": d,
        "chain": tuple(chain),
        "hits": tuple(hits),
        "alphas": tuple(alphas),
    }


def _solve_circle_border(k: int) -> dict:
    d = 2.0 * math.sin(math.pi / (6.0 * k))
    start = 1.5 * math.pi
    step = math.pi / (3.0 * k)
    chain = tuple(
        (math.cos(start + j * step), math.sin(start + j * step)) for j in range(k + 1)
    )
    phi = tuple((2 * j - 1) * math.pi / (6.0 * k) for j in range(1, k + 1))
    hits = tuple(range(k))
    alphas = tuple(c * step for c in range(k))
    return {"phi": phi, "d": d, "chain": chain, "hits": hits, "alphas": alphas}


@lru_cache(maxsize=None)
def solve_border(sigma: Sigma, k: int) -> BorderSolution:
    """Solve for the k equal boundary chords from P1 to rotate(P1, pi/3).

    Args:
        sigma: polygon side count (multiple of 6) or CIRCLE.
        k: number of shells, at least 1.

    Returns:
        The BorderSolution with directions, diameter, vertex occupancy,
        degeneracies, and the reflection redundancy eta.
    """
    _require_sigma(sigma)
    if k < 1:
        raise NoSolution(f"k must be >= 1, got {k}")
    raw = _solve_circle_border(k) if sigma == CIRCLE else _solve_polygon_border(sigma, k)
    degs = _group_degeneracies(raw["phi"])
    if tuple(reversed(degs)) != degs:
        raise NoSolution(f"degeneracies {degs} not symmetric for sigma={sigma}, k={k}")
    blocks = []
    pos = 0
    for n in degs:
        blocks.append(raw["phi"][pos] + PI_3)
        pos += n
    base = _sorted_seq(degs)
    images = _rotation_images(k, degs, tuple(blocks), raw["hits"], raw["alphas"], base)
    eta = 1 if _reflect_seq(base, len(degs)) in images else 2
    return BorderSolution(
        sigma=sigma,
        k=k,
        phi=raw["phi"],
        d=raw["d"],
        n_V=len(raw["hits"]),
        degeneracies=degs,
        eta=eta,
        chain=raw["chain"],
        vertex_hits=raw["hits"],
        vertex_angles=raw["alphas"],
    )


# ---------------------------------------------------------------------------
# DNA strings


@dataclass(frozen=True)
class Dna:
    """An ordered sequence of chord directions xi_1..xi_k with its letters."""

    values: Tuple[float, ...]
    letters: str

    @property
    def k(self) -> int:
        return len(self.values)


def _letters_of(seq: Sequence[int]) -> str:
    return "".join(chr(ord("a") + b) for b in seq)


def _seq_of(letters: str) -> Tuple[int, ...]:
    return tuple(ord(c) - ord("a") for c in letters)


def _sorted_seq(counts: Sequence[int]) -> Tuple[int, ...]:
    out: List[int] = []
    for b, n in enumerate(counts):
        out.extend([b] * n)
    return tuple(out)


def dna_from_letters(letters: str, border: BorderSolution) -> Dna:
    """Resolve a letter string against the border's building blocks."""
    blocks = border.blocks()
    seq = _seq_of(letters)
    if len(seq) != border.k:
        raise InconsistentDna(f"expected {border.k} letters, got {len(seq)}")
    counts = [0] * len(blocks)
    for b in seq:
        if b < 0 or b >= len(blocks):
            raise InconsistentDna(f"letter {chr(b + ord('a'))!r} outside blocks a..{chr(ord('a') + len(blocks) - 1)}")
        counts[b] += 1
    if tuple(counts) != border.degeneracies:
        raise InconsistentDna(f"letter multiplicities {tuple(counts)} != {border.degeneracies}")
    return Dna(values=tuple(blocks[b] for b in seq), letters=letters)


def dna_from_values(values: Sequence[float], border: BorderSolution) -> Dna:
    """Resolve an angle sequence against the border's building blocks."""
    blocks = border.blocks()
    seq: List[int] = []
    for v in values:
        b = _nearest_block(v, blocks)
        if b is None:
            raise InconsistentDna(f"angle {v!r} matches no building block")
        seq.append(b)
    counts = [0] * len(blocks)
    for b in seq:
        counts[b] += 1
    if tuple(counts) != border.degeneracies:
        raise InconsistentDna(f"value multiset does not match degeneracies {border.degeneracies}")
    return Dna(values=tuple(blocks[b] for b in seq), letters=_letters_of(seq))


def _nearest_block(value: float, blocks: Sequence[float], tol: float = GROUP_TOL) -> Union[int, None]:
    best, best_err = None, tol
    for b, ref in enumerate(blocks):
        err = abs(_wrap_pi(value - ref))
        if err <= best_err:
            best, best_err = b, err
    return best


def _wrap_pi(a: float) -> float:
    return (a + math.pi) % TWO_PI - math.pi


def reflect_dna(dna: Dna, sigma: Sigma) -> Dna:
    """Mirror image of a DNA: xi -> pi - xi - 2*pi/sigma.

    The map reverses the order of the letter values, so the string maps
    to its letter-wise complement (a <-> highest letter in use).
    """
    _require_sigma(sigma)
    shift = 0.0 if sigma == CIRCLE else TWO_PI / sigma
    values = tuple(math.pi - v - shift for v in dna.values)
    ell = max(_seq_of(dna.letters)) + 1
    seq = tuple(ell - 1 - b for b in _seq_of(dna.letters))
    return Dna(values=values, letters=_letters_of(seq))


def _reflect_seq(seq: Sequence[int], ell: int) -> Tuple[int, ...]:
    return tuple(ell - 1 - b for b in seq)


def _trace_from_vertex(
    k: int,
    counts: Sequence[int],
    blocks: Sequence[float],
    seq: Sequence[int],
    c: int,
    alpha: float,
) -> Set[Tuple[int, ...]]:
    """Re-trace the path of ``seq`` starting from the occupied vertex c.

    Walks the shell interfaces of the packing encoded by ``seq``: at each
    interface the disk at position j of the current shell ring touches
    one (rarely two) disks of the next ring in, which fixes the chord
    direction contributed to the rotated DNA.  Returns every completed
    direction sequence, already mapped back through the rotation alpha.
    """
    results: Set[Tuple[int, ...]] = set()

    def walk(i: int, j: int, t: int, remaining: List[int], out: List[float]) -> None:
        if i == k:
            mapped: List[int] = []
            for v in out:
                b = _nearest_block(v - alpha, blocks)
                if b is None:
                    raise InconsistentDna(f"re-traced direction {v - alpha!r} matches no block")
                mapped.append(b)
            results.add(tuple(mapped))
            return
        m = k - i
        while j > m:
            j -= m
            t += 1
        b = seq[i]
        before = sum(remaining[:b])
        lo = 1 + before
        hi = before + remaining[b]
        remaining[b] -= 1
        if j <= hi:
            out.append(blocks[b] + t * PI_3)
            walk(i + 1, j, t, remaining, out)
            out.pop()
        if j - 1 >= lo:
            out.append(blocks[b] + PI_3 + t * PI_3)
            walk(i + 1, j - 1, t, remaining, out)
            out.pop()
        remaining[b] += 1

    walk(0, c + 1, 0, list(counts), [])
    if not results:
        raise InconsistentDna(f"no contact path from vertex {c}")
    return results


def _rotation_images(
    k: int,
    counts: Sequence[int],
    blocks: Sequence[float],
    hits: Sequence[int],
    alphas: Sequence[float],
    seq: Sequence[int],
) -> Set[Tuple[int, ...]]:
    images: Set[Tuple[int, ...]] = set()
    for c, alpha in zip(hits, alphas):
        images |= _trace_from_vertex(k, counts, blocks, seq, c, alpha)
    return images


def _orbit(border: BorderSolution, seq: Tuple[int, ...]) -> Set[Tuple[int, ...]]:
    counts = border.degeneracies
    blocks = border.blocks()
    hits = border.vertex_hits
    alphas = border.vertex_angles
    orbit = _rotation_images(border.k, counts, blocks, hits, alphas, seq)
    mirrored = _reflect_seq(seq, len(counts))
    orbit |= _rotation_images(border.k, counts, blocks, hits, alphas, mirrored)
    return orbit


def canonicalize_dna(dna: Union[Dna, str], border: BorderSolution) -> Dna:
    """Lexicographically smallest DNA over vertex rotations and reflection."""
    if isinstance(dna, str):
        dna = dna_from_letters(dna, border)
    else:
        dna = dna_from_values(dna.values, border)
    seq = _seq_of(dna.letters)
    best = min(_orbit(border, seq))
    return dna_from_letters(_letters_of(best), border)


def reflection_is_rotation(dna: Union[Dna, str], border: BorderSolution) -> bool:
    """True when the mirrored DNA already appears among the vertex rotations."""
    if isinstance(dna, str):
        dna = dna_from_letters(dna, border)
    seq = _seq_of(dna.letters)
    images = _rotation_images(
        border.k, border.degeneracies, border.blocks(), border.vertex_hits, border.vertex_angles, seq
    )
    return _reflect_seq(seq, len(border.degeneracies)) in images


def _multiset_permutations(counts: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    k = sum(counts)
    live = list(counts)
    seq: List[int] = []

    def rec() -> Iterator[Tuple[int, ...]]:
        if len(seq) == k:
            yield tuple(seq)
            return
        for b in range(len(live)):
            if live[b]:
                live[b] -= 1
                seq.append(b)
                yield from rec()
                seq.pop()
                live[b] += 1

    return rec()


def enumerate_dnas(sigma: Sigma, k: int, cap: int = 100000) -> List[Dna]:
    """All canonical DNA strings for (sigma, k), sorted lexicographically.

    Raises CapExceeded when the configuration count passes ``cap``.
    """
    border = solve_border(sigma, k)
    total = count_configurations(CountInput.from_border(border))
    if total > cap:
        raise CapExceeded(f"{total} configurations exceed cap {cap}")
    seen: Set[Tuple[int, ...]] = set()
    reps: List[str] = []
    for perm in _multiset_permutations(border.degeneracies):
        if perm in seen:
            continue
        orbit = _orbit(border, perm)
        # ascending iteration meets each class at its lexicographic minimum
        if perm != min(orbit):
            raise InconsistentDna(f"orbit of {_letters_of(perm)} has smaller member {_letters_of(min(orbit))}")
        seen |= orbit
        reps.append(_letters_of(perm))
    return [dna_from_letters(s, border) for s in reps]


# ---------------------------------------------------------------------------
# Counting


@dataclass(frozen=True)
class CountInput:
    """Inputs of the configuration-count formula."""

    k: int
    eta: int
    n_V: int
    degeneracies: Tuple[int, ...]

    @classmethod
    def from_border(cls, border: BorderSolution) -> "CountInput":
        return cls(k=border.k, eta=border.eta, n_V=border.n_V, degeneracies=border.degeneracies)


def count_configurations(inp: CountInput) -> int:
    """max(1, k! / (eta * n_V * prod(n_i!))) in exact arithmetic."""
    if sum(inp.degeneracies) != inp.k:
        raise PreconditionViolated(f"degeneracies {inp.degeneracies} do not sum to k={inp.k}")
    denom = inp.eta * inp.n_V
    for n in inp.degeneracies:
        denom *= math.factorial(n)
    value = Fraction(math.factorial(inp.k), denom)
    if value <= 1:
        return 1
    if value.denominator != 1:
        raise PreconditionViolated(f"count {value} is not an integer")
    return int(value)


# ---------------------------------------------------------------------------
# Densities


def chp_density(sigma: Sigma, k: int) -> float:
    """Packing fraction of the (sigma, k) packing, from the solved chain.

    Accepts any integer sigma >= 6 here: the one-sextant chord chain and
    the area ratio are well defined for every regular polygon, which is
    what large-sigma circle-limit comparisons need.  Side counts that
    are not multiples of 6 have no globally symmetric packing, so the
    combinatorial operations still reject them.
    """
    n = disk_count(k)
    if sigma == CIRCLE:
        s = math.sin(math.pi / (6.0 * k))
        return n * s * s / (1.0 + s) ** 2
    if isinstance(sigma, int) and sigma >= 6 and sigma % 6 != 0:
        if k < 1:
            raise NoSolution(f"k must be >= 1, got {k}")
        d = _solve_polygon_border(sigma, k)["d"]
    else:
        d = solve_border(sigma, k).d
    cot = 1.0 / math.tan(math.pi / sigma)
    cos = math.cos(math.pi / sigma)
    return n * math.pi * d * d * cot / (sigma * (d + 2.0 * cos) ** 2)


def chp_density_full_vertex(sigma: int, k: int) -> float:
    """Closed-form density when every vertex is occupied (6k/sigma integer)."""
    _require_sigma(sigma)
    if (6 * k) % sigma != 0:
        raise PreconditionViolated(f"6k/sigma = {6 * k}/{sigma} is not an integer")
    n = disk_count(k)
    cot = 1.0 / math.tan(math.pi / sigma)
    return math.pi * n * sigma * cot / (6.0 * k * cot + sigma) ** 2
