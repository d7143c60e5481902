"""Command line interface.

Exit codes: 0 success, 2 bad arguments, 3 computation or input errors.
Errors go to stderr as one JSON object per failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from typing import List, Optional, Sequence

import numpy as np

from .builder import build_chp
from .chp import (
    CIRCLE,
    CountInput,
    count_configurations,
    chp_density,
    disk_count,
    enumerate_dnas,
    solve_border,
)
from .configio import read_config, write_config
from .errors import ChpError
from .optimizer import OptimizerParams, PinSet, algorithm1, algorithm2
from .svg import render_svg
from .validation import density as packing_density
from .validation import packing_radius, validate_config

_TABLE_SIGMAS = "12,18,24,30,36,42,48,54,60"


class _BadArguments(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _BadArguments(message)


def _sigma_arg(text: str):
    if text == CIRCLE:
        return CIRCLE
    value = int(text)
    if value < 3:
        raise ValueError("sigma must be at least 3")
    return value


def _fmt17(x: float) -> str:
    return format(float(x), ".17g")


def _emit(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _workers() -> int:
    raw = os.environ.get("CHP_PACK_THREADS", "")
    if raw.strip():
        return max(1, int(raw))
    return os.cpu_count() or 1


def _build_parser() -> _Parser:
    p = _Parser(prog="chp-pack", description="Curved hexagonal disk packings in regular polygons.")
    sub = p.add_subparsers(dest="command", required=True)

    def add_sigma_k(sp):
        sp.add_argument("--sigma", type=_sigma_arg, required=True, help='polygon side count (multiple of 6) or "circle"')
        sp.add_argument("--k", type=int, required=True, help="number of shells")

    sp = sub.add_parser("solve", help="border chain angles and chord length")
    add_sigma_k(sp)

    sp = sub.add_parser("density", help="packing fraction of the k-shell configuration")
    add_sigma_k(sp)

    sp = sub.add_parser("count", help="number of inequivalent configurations")
    add_sigma_k(sp)

    sp = sub.add_parser("enumerate", help="list canonical DNA strings")
    add_sigma_k(sp)
    sp.add_argument("--limit", type=int, default=100000, help="refuse when the class count exceeds this")

    sp = sub.add_parser("build", help="construct a configuration deterministically")
    add_sigma_k(sp)
    sp.add_argument("--dna", default=None, help="DNA letters (default: lexicographically first)")
    sp.add_argument("-o", "--output", default=None, help="output JSON path (default: stdout)")

    sp = sub.add_parser("tables", help="reproduce the configuration-count tables")
    sp.add_argument("--sigma-list", default=_TABLE_SIGMAS, help="comma-separated side counts")
    sp.add_argument("--k-max", type=int, default=8, help="largest shell count per sigma")
    sp.add_argument("--enumerate-limit", type=int, default=2520, help="enumerate only rows with count at most this")
    sp.add_argument("-o", "--output", default=None, help="output CSV path (default: stdout)")

    sp = sub.add_parser("pack", help="random-start energy ladder packing")
    sp.add_argument("--sigma", type=_sigma_arg, required=True)
    sp.add_argument("--n", type=int, required=True, help="number of disks")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=1)
    sp.add_argument("-o", "--output", default=None, help="write best configuration JSON here")

    sp = sub.add_parser("shake", help="perturb and re-pack an existing configuration")
    sp.add_argument("-i", "--input", required=True)
    sp.add_argument("--trials", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--pin", choices=["border", "none"], default="none")
    sp.add_argument("-o", "--output", default=None, help="write retained configuration JSON here")

    sp = sub.add_parser("validate", help="check separation and containment")
    sp.add_argument("-i", "--input", required=True)

    sp = sub.add_parser("render", help="draw a configuration as SVG")
    sp.add_argument("-i", "--input", required=True)
    sp.add_argument("-o", "--output", default=None, help="output SVG path (default: stdout)")
    sp.add_argument("--contacts", action="store_true", help="draw contact-graph edges")
    sp.add_argument("--fundamental", action="store_true", help="shade the fundamental sector")
    return p


def _cmd_solve(args) -> int:
    b = solve_border(args.sigma, args.k)
    doc = {
        "sigma": b.sigma,
        "k": b.k,
        "n_disks": disk_count(b.k),
        "d": b.d,
        "phi": list(b.phi),
        "degeneracies": list(b.degeneracies),
        "blocks": len(b.degeneracies),
        "eta": b.eta,
        "n_V": b.n_V,
        "vertex_hits": list(b.vertex_hits),
        "vertex_angles": list(b.vertex_angles),
    }
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    return 0


def _cmd_density(args) -> int:
    sys.stdout.write(format(chp_density(args.sigma, args.k), ".12g") + "\n")
    return 0


def _cmd_count(args) -> int:
    b = solve_border(args.sigma, args.k)
    sys.stdout.write(str(count_configurations(CountInput.from_border(b))) + "\n")
    return 0


def _cmd_enumerate(args) -> int:
    dnas = enumerate_dnas(args.sigma, args.k, cap=args.limit)
    sys.stdout.write("".join(d.letters + "\n" for d in dnas))
    return 0


def _cmd_build(args) -> int:
    config = build_chp(args.sigma, args.k, args.dna)
    import io

    buf = io.StringIO()
    write_config(config, buf)
    _emit(buf.getvalue(), args.output)
    return 0


def _table_row(job) -> tuple:
    sigma, k, limit = job
    b = solve_border(sigma, k)
    cnt = count_configurations(CountInput.from_border(b))
    if cnt <= limit:
        enumerated = str(len(enumerate_dnas(sigma, k, cap=limit)))
    else:
        enumerated = ""
    return (
        sigma,
        k,
        len(b.degeneracies),
        ";".join(str(n) for n in b.degeneracies),
        b.eta,
        b.n_V,
        k % (sigma // 6),
        cnt,
        enumerated,
    )


def _cmd_tables(args) -> int:
    sigmas = [int(s) for s in args.sigma_list.split(",") if s.strip()]
    jobs = [(s, k, args.enumerate_limit) for s in sigmas for k in range(1, args.k_max + 1)]
    workers = min(_workers(), len(jobs)) if jobs else 1
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_table_row, jobs))
    else:
        rows = [_table_row(j) for j in jobs]
    rows.sort(key=lambda r: (r[0], r[1]))
    lines = ["sigma,k,blocks,degeneracies,eta,n_V,k_mod,formula_count,enumerated_count"]
    lines.extend(",".join(str(c) for c in row) for row in rows)
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def _config_summary(config) -> dict:
    return {
        "sigma": config.sigma,
        "n_disks": config.n_disks,
        "min_distance": _fmt17(packing_radius(config.centers)),
        "density": _fmt17(packing_density(config)),
    }


def _cmd_pack(args) -> int:
    if args.n < 2:
        raise _BadArguments("--n must be at least 2")
    if args.trials < 1:
        raise _BadArguments("--trials must be at least 1")
    best = None
    best_d = -math.inf
    for t in range(args.trials):
        params = OptimizerParams(seed=args.seed + t)
        cand = algorithm1(args.sigma, args.n, params)
        cand_d = packing_radius(cand.centers)
        if cand_d > best_d:
            best, best_d = cand, cand_d
    import io

    buf = io.StringIO()
    write_config(best, buf)
    if args.output is None:
        sys.stdout.write(buf.getvalue())
    else:
        _emit(buf.getvalue(), args.output)
        sys.stdout.write(json.dumps(_config_summary(best)) + "\n")
    return 0


def _border_pins(config) -> PinSet:
    centers = np.asarray(config.centers, dtype=float)
    if config.spec is None:
        on = [i for i, p in enumerate(centers) if abs(math.hypot(p[0], p[1]) - 1.0) <= 1e-7]
        return PinSet.of(on)
    from . import geometry

    angles = geometry.edge_normal_angles(config.spec.sigma)
    normals = np.array([[math.cos(a), math.sin(a)] for a in angles])
    apothem = geometry.apothem(config.spec.sigma, config.spec.delta)
    proj = centers @ normals.T
    on = [i for i in range(len(centers)) if abs(proj[i].max() - apothem) <= 1e-7]
    return PinSet.of(on)


def _cmd_shake(args) -> int:
    if args.trials < 1:
        raise _BadArguments("--trials must be at least 1")
    config = read_config(args.input)
    pins = _border_pins(config) if args.pin == "border" else PinSet()
    params = OptimizerParams(seed=args.seed)
    sys.stdout.write("trial,rung,s,density\n")
    current = config
    for t in range(args.trials):
        rows: List[str] = []

        def record(rung: int, s: float, cfg) -> None:
            rows.append(f"{t},{rung},{format(s, '.6g')},{format(packing_density(cfg), '.12g')}")

        current = algorithm2(current, params, pins, trial=t, record=record)
        sys.stdout.write("".join(r + "\n" for r in rows))
    if args.output is not None:
        import io

        buf = io.StringIO()
        write_config(current, buf)
        _emit(buf.getvalue(), args.output)
    return 0


def _cmd_validate(args) -> int:
    config = read_config(args.input)
    report = validate_config(config)
    sys.stdout.write(json.dumps(report.to_json_dict(), indent=2, sort_keys=True) + "\n")
    return 0 if report.is_valid else 3


def _cmd_render(args) -> int:
    config = read_config(args.input)
    _emit(render_svg(config, contacts=args.contacts, fundamental=args.fundamental), args.output)
    return 0


_HANDLERS = {
    "solve": _cmd_solve,
    "density": _cmd_density,
    "count": _cmd_count,
    "enumerate": _cmd_enumerate,
    "build": _cmd_build,
    "tables": _cmd_tables,
    "pack": _cmd_pack,
    "shake": _cmd_shake,
    "validate": _cmd_validate,
    "render": _cmd_render,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _BadArguments as exc:
        sys.stderr.write(json.dumps({"error": "bad_arguments", "message": str(exc)}) + "\n")
        return 2
    try:
        return _HANDLERS[args.command](args)
    except _BadArguments as exc:
        sys.stderr.write(json.dumps({"error": "bad_arguments", "message": str(exc)}) + "\n")
        return 2
    except FileNotFoundError as exc:
        sys.stderr.write(json.dumps({"error": "bad_arguments", "message": str(exc)}) + "\n")
        return 2
    except ChpError as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 3
    except (ValueError, OSError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
