"""Prime factorisation of knots via normal 2-spheres in edge-ideal triangulations."""
from .perm import Perm4
from .triangulation import (
    Triangulation,
    ValidityReport,
    from_gluings,
    validate,
)
from .homology import homology_h1
from .isosig import iso_signature
from .edge_ideal import EdgeIdeal, make_edge_ideal, randomize, simplify
from .diagram import Diagram, build_edge_ideal, connected_sum, parse_dt, parse_pd
from .normal import NormalSurface, enumerate_quad_vertex, find_crushable_sphere
from .crush import certify_quad_vertex, crush
from .pi1 import Presentation, nontriviality_verdict
from .factorize import Config, factorize, verify_certificate

__all__ = [
    "Perm4",
    "Triangulation",
    "ValidityReport",
    "from_gluings",
    "validate",
    "homology_h1",
    "iso_signature",
    "EdgeIdeal",
    "make_edge_ideal",
    "simplify",
    "randomize",
    "Diagram",
    "parse_pd",
    "parse_dt",
    "connected_sum",
    "build_edge_ideal",
    "NormalSurface",
    "enumerate_quad_vertex",
    "find_crushable_sphere",
    "certify_quad_vertex",
    "crush",
    "Presentation",
    "nontriviality_verdict",
    "Config",
    "factorize",
    "verify_certificate",
]
__version__ = "0.1.0"
