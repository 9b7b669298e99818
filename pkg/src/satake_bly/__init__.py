"""Satake boundary combinatorics, torus-level orbitope geometry and balanced points for SL(n, C) flag manifolds."""

from .roots import CartanType, RootSystem, build_root_system, fundamental_weight, parse_weight
from .satake import (
    BoundaryComponent,
    enumerate_boundary_components,
    is_mu_connected,
    mu_saturation,
    support,
)
from .weights import WeightDiagram, dim_V_I, weight_diagram, weyl_dimension

__version__ = "0.1.0"

__all__ = [
    "BoundaryComponent",
    "CartanType",
    "RootSystem",
    "WeightDiagram",
    "build_root_system",
    "dim_V_I",
    "enumerate_boundary_components",
    "fundamental_weight",
    "is_mu_connected",
    "mu_saturation",
    "parse_weight",
    "support",
    "weight_diagram",
    "weyl_dimension",
]
