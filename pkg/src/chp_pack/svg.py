"""Static SVG diagrams of packing configurations.

Output is a pure function of the input configuration and options, so
identical inputs give byte-identical documents.  The container drawn
is the physical one, offset outward from the center domain by one
disk radius.
"""

from __future__ import annotations

import math
from typing import List

import numpy as np

from .builder import PackingConfiguration, _contact_pairs
from .geometry import vertex_angle


def _f(x: float) -> str:
    return f"{x:.8f}"


def _container_vertices(sigma: int, r: float) -> List[tuple]:
    rc = (math.cos(math.pi / sigma) + r) / math.cos(math.pi / sigma)
    u0 = vertex_angle(sigma)
    out = []
    for i in range(sigma):
        a = u0 + 2.0 * math.pi * i / sigma
        out.append((rc * math.cos(a), rc * math.sin(a)))
    return out


def render_svg(
    config: PackingConfiguration,
    contacts: bool = False,
    fundamental: bool = False,
    size: int = 640,
) -> str:
    centers = np.asarray(config.centers, dtype=float)
    r = config.diameter / 2.0
    if config.spec is None:
        extent = 1.0 + r
    else:
        extent = (math.cos(math.pi / config.spec.sigma) + r) / math.cos(math.pi / config.spec.sigma)
    margin = extent * 1.02

    parts: List[str] = []
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="{_f(-margin)} {_f(-margin)} {_f(2 * margin)} {_f(2 * margin)}">'
    )
    parts.append('<g transform="scale(1,-1)">')

    stroke = config.diameter * 0.02
    if config.spec is None:
        parts.append(
            f'<circle class="container" cx="0" cy="0" r="{_f(1.0 + r)}" '
            f'fill="none" stroke="#222222" stroke-width="{_f(stroke)}"/>'
        )
    else:
        pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in _container_vertices(config.spec.sigma, r))
        parts.append(
            f'<polygon class="container" points="{pts}" '
            f'fill="none" stroke="#222222" stroke-width="{_f(stroke)}"/>'
        )

    if fundamental:
        if config.spec is None:
            a0 = 1.5 * math.pi
            a1 = a0 + math.pi / 3.0
            rr = 1.0 + r
            x0, y0 = rr * math.cos(a0), rr * math.sin(a0)
            x1, y1 = rr * math.cos(a1), rr * math.sin(a1)
            parts.append(
                f'<path class="fundamental" d="M 0 0 L {_f(x0)} {_f(y0)} '
                f'A {_f(rr)} {_f(rr)} 0 0 1 {_f(x1)} {_f(y1)} Z" '
                f'fill="#f5d76e" fill-opacity="0.45" stroke="none"/>'
            )
        else:
            sigma = config.spec.sigma
            verts = _container_vertices(sigma, r)
            wedge = [(0.0, 0.0)] + [verts[i] for i in range(sigma // 6 + 1)]
            pts = " ".join(f"{_f(x)},{_f(y)}" for x, y in wedge)
            parts.append(
                f'<polygon class="fundamental" points="{pts}" '
                f'fill="#f5d76e" fill-opacity="0.45" stroke="none"/>'
            )

    if contacts and len(centers) >= 2:
        for i, j in _contact_pairs(centers, config.diameter, 1e-6):
            parts.append(
                f'<line class="contact" x1="{_f(centers[i, 0])}" y1="{_f(centers[i, 1])}" '
                f'x2="{_f(centers[j, 0])}" y2="{_f(centers[j, 1])}" '
                f'stroke="#b03a2e" stroke-width="{_f(stroke)}"/>'
            )

    for x, y in centers:
        parts.append(
            f'<circle class="disk" cx="{_f(x)}" cy="{_f(y)}" r="{_f(r)}" '
            f'fill="#5b8db8" fill-opacity="0.75" stroke="#1f4060" stroke-width="{_f(stroke)}"/>'
        )

    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
