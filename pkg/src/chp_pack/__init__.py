"""Curved hexagonal packings of congruent disks in regular polygons."""

from .chp import (
    CIRCLE,
    BorderSolution,
    CountInput,
    Dna,
    canonicalize_dna,
    chp_density,
    chp_density_full_vertex,
    count_configurations,
    disk_count,
    dna_from_letters,
    dna_from_values,
    enumerate_dnas,
    reflect_dna,
    solve_border,
)
from .errors import (
    AmbiguousStart,
    CapExceeded,
    ChpError,
    Coincident,
    CoincidentPoints,
    ConstructionFailed,
    InconsistentDna,
    NoIntersection,
    NoPath,
    NonFinite,
    NoSolution,
    NotMultipleOfSix,
    ParseError,
    PreconditionViolated,
    SchemaMismatch,
    ShellCountMismatch,
)
from .builder import PackingConfiguration, build_chp, extract_dna
from .geometry import PolygonSpec
from .optimizer import (
    OptimizerParams,
    PinSet,
    algorithm1,
    algorithm2,
    refine,
    seed_guided,
    shell_rotation_search,
)
from .validation import (
    ValidationReport,
    contact_count_histogram,
    density,
    equivalent,
    is_chp,
    packing_radius,
    validate_config,
)

__version__ = "0.1.0"

__all__ = [
    "CIRCLE",
    "BorderSolution",
    "CountInput",
    "Dna",
    "PolygonSpec",
    "canonicalize_dna",
    "chp_density",
    "chp_density_full_vertex",
    "count_configurations",
    "disk_count",
    "dna_from_letters",
    "dna_from_values",
    "enumerate_dnas",
    "reflect_dna",
    "solve_border",
    "PackingConfiguration",
    "build_chp",
    "extract_dna",
    "OptimizerParams",
    "PinSet",
    "algorithm1",
    "algorithm2",
    "refine",
    "seed_guided",
    "shell_rotation_search",
    "ValidationReport",
    "contact_count_histogram",
    "density",
    "equivalent",
    "is_chp",
    "packing_radius",
    "validate_config",
    "AmbiguousStart",
    "CapExceeded",
    "ChpError",
    "Coincident",
    "CoincidentPoints",
    "ConstructionFailed",
    "InconsistentDna",
    "NoIntersection",
    "NoPath",
    "NoSolution",
    "NonFinite",
    "NotMultipleOfSix",
    "ParseError",
    "PreconditionViolated",
    "SchemaMismatch",
    "ShellCountMismatch",
    "__version__",
]
