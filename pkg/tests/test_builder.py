import math

import numpy as np
import pytest

from chp_pack import (
    CIRCLE,
    InconsistentDna,
    build_chp,
    disk_count,
    enumerate_dnas,
    solve_border,
)
from chp_pack.builder import circle_pair_intersection, extract_dna
from chp_pack.errors import AmbiguousStart, Coincident, ConstructionFailed, NoIntersection
from chp_pack.geometry import fundamental_vertex


def reference_centers(sigma, k, dna):
    """Rebuild the packing from first principles, without the builder.

    The path from P1 consumes one DNA letter per inward step.  What is
    left after j steps, sorted ascending and shifted back by pi/3, is
    the chord direction multiset of the shell k-j chain.  Each chain
    starts at the corresponding path node; six rotated copies of every
    chain node except the last cover the shell.
    """
    border = solve_border(sigma, k)
    blocks = border.blocks()
    d = border.d
    seq = [ord(c) - 97 for c in dna.letters]

    path = [fundamental_vertex(sigma) if sigma != CIRCLE else (0.0, -1.0)]
    for b in seq:
        x, y = path[-1]
        path.append((x + d * math.cos(blocks[b]), y + d * math.sin(blocks[b])))

    pts = []
    for j in range(k):
        remaining = sorted(seq[j:])
        row = [path[j]]
        for b in remaining:
            x, y = row[-1]
            ang = blocks[b] - math.pi / 3.0
            row.append((x + d * math.cos(ang), y + d * math.sin(ang)))
        for t in range(6):
            c, s = math.cos(t * math.pi / 3), math.sin(t * math.pi / 3)
            for x, y in row[:-1]:
                pts.append((c * x - s * y, s * x + c * y))
    pts.append((0.0, 0.0))
    return np.array(pts)


def multiset_distance(a, b):
    """Greatest nearest-neighbor gap after greedy matching of two clouds."""
    from scipy.spatial import cKDTree

    assert len(a) == len(b)
    dist, idx = cKDTree(b).query(a)
    # a permutation match requires each target used exactly once
    if len(set(idx)) != len(b):
        return math.inf
    return float(dist.max())


@pytest.mark.parametrize("sigma,k", [(12, 1), (12, 2), (12, 3), (12, 4), (12, 5), (18, 2), (18, 3), (18, 4)])
def test_builder_matches_reference(sigma, k):
    for dna in enumerate_dnas(sigma, k):
        config = build_chp(sigma, k, dna)
        want = reference_centers(sigma, k, dna)
        assert multiset_distance(config.centers, want) < 1e-9


def test_builder_circle():
    for k in (1, 2, 3):
        for dna in enumerate_dnas(CIRCLE, k):
            config = build_chp(CIRCLE, k, dna)
            want = reference_centers(CIRCLE, k, dna)
            assert multiset_distance(config.centers, want) < 1e-9


def test_build_shapes_and_meta():
    config = build_chp(12, 3, "abc")
    assert config.n_disks == disk_count(3)
    assert config.centers.shape == (37, 2)
    assert config.diameter == pytest.approx(solve_border(12, 3).d, abs=1e-14)
    assert config.meta["mode"] == "deterministic"
    assert config.meta["dna"] == "abc"
    assert config.meta["k"] == 3
    # one disk at the origin
    radii = np.hypot(config.centers[:, 0], config.centers[:, 1])
    assert radii.min() == 0.0


def test_default_dna_is_lowest():
    a = build_chp(12, 4)
    b = build_chp(12, 4, "aabb")
    assert np.array_equal(a.centers, b.centers)


def test_build_is_deterministic():
    a = build_chp(18, 4, "abcd")
    b = build_chp(18, 4, "abcd")
    assert np.array_equal(a.centers, b.centers)
    assert a.diameter == b.diameter


def test_hexagon_is_triangular_lattice():
    k = 3
    config = build_chp(6, k)
    d = 1.0 / k
    # every center is an integer combination of the two lattice vectors
    basis = np.array([[d, 0.0], [d / 2.0, d * math.sqrt(3) / 2.0]])
    coeffs = config.centers @ np.linalg.inv(basis)
    assert np.abs(coeffs - np.round(coeffs)).max() < 1e-9


def test_wrong_multiset_rejected():
    with pytest.raises(InconsistentDna):
        build_chp(12, 4, "aaab")
    with pytest.raises(InconsistentDna):
        build_chp(12, 4, "ab")


def test_intersection_points():
    p, q = circle_pair_intersection((-0.5, 0.0), (0.5, 0.0), 1.0)
    # left of the directed line from c1 to c2 comes first
    assert p == pytest.approx((0.0, math.sqrt(3) / 2), abs=1e-15)
    assert q == pytest.approx((0.0, -math.sqrt(3) / 2), abs=1e-15)
    with pytest.raises(Coincident):
        circle_pair_intersection((0.1, 0.2), (0.1, 0.2), 1.0)
    with pytest.raises(NoIntersection):
        circle_pair_intersection((0.0, 0.0), (3.0, 0.0), 1.0)
    # tangency collapses both points onto the midpoint
    p, q = circle_pair_intersection((0.0, 0.0), (2.0, 0.0), 1.0)
    assert p == pytest.approx((1.0, 0.0), abs=1e-9)


def test_extract_dna_round_trip():
    for sigma, k in ((12, 3), (12, 5), (18, 4)):
        for dna in enumerate_dnas(sigma, k):
            config = build_chp(sigma, k, dna)
            got = extract_dna(config, sigma, k)
            assert got.letters == dna.letters


def test_extract_dna_tolerates_noise():
    rng = np.random.default_rng(42)
    config = build_chp(12, 4, "abab")
    jitter = rng.uniform(-1e-8, 1e-8, config.centers.shape)
    noisy = config.centers + jitter
    from chp_pack.builder import PackingConfiguration

    cfg = PackingConfiguration(spec=config.spec, centers=noisy, diameter=config.diameter, meta={})
    assert extract_dna(cfg, 12, 4, tol=1e-6).letters == "abab"


def test_extract_dna_requires_start_disk():
    config = build_chp(12, 3)
    from chp_pack.builder import PackingConfiguration

    shifted = PackingConfiguration(
        spec=config.spec,
        centers=config.centers + np.array([0.002, 0.0]),
        diameter=config.diameter,
        meta={},
    )
    with pytest.raises(AmbiguousStart):
        extract_dna(shifted, 12, 3, tol=1e-7)
