"""Exact radius-of-convergence polygons of p-adic differential modules.

Everything is computed over Q with exact p-adic valuations.  Log-radii are
base p and written ``s = log_p r``.
"""

from .diffmod import (
    DiffModule,
    Domain,
    RadiusEstimate,
    Triangulation,
    emb_radius_pl,
    iterate,
    log_rho,
    log_rho_relative,
    normalize,
    radius_log_at,
    retriangulate,
)
from .graph import (
    Edge,
    GraphPL,
    MetrizedGraph,
    PointMeasure,
    classify,
    direction_count_bound,
    dirichlet_solve,
    laplacian,
    pairing,
)
from .laurent import LaurentPoly, gauss_norm_log, gauss_norm_pl, parse_laurent, recenter_norm_log
from .padic import Prime, ValuedRational, val_factorial, valp
from .polygon import (
    PolygonReport,
    Verdict,
    assemble,
    borddisque_check,
    check_superharmonic_logR,
    rho_maps_check,
)
from .tropical import TropicalPL, certify_slopes

__version__ = "0.1.0"

__all__ = [
    "DiffModule", "Domain", "RadiusEstimate", "Triangulation", "emb_radius_pl", "iterate",
    "log_rho", "log_rho_relative", "normalize", "radius_log_at", "retriangulate",
    "Edge", "GraphPL", "MetrizedGraph", "PointMeasure", "classify", "direction_count_bound",
    "dirichlet_solve", "laplacian", "pairing",
    "LaurentPoly", "gauss_norm_log", "gauss_norm_pl", "parse_laurent", "recenter_norm_log",
    "Prime", "ValuedRational", "val_factorial", "valp",
    "PolygonReport", "Verdict", "assemble", "borddisque_check", "check_superharmonic_logR",
    "rho_maps_check", "TropicalPL", "certify_slopes", "__version__",
]
