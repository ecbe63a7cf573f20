"""Reconstruction from connected triples under a graph-class promise."""

from .outerplanar import (
    find_degree2_vertex_outerplanar,
    reconstruct_outerplanar_2connected,
    reconstruct_outerplanar_six,
    six_vertex_profiles,
)
from .planar import (
    SeparatorCertificate,
    find_size3_separators,
    reconstruct_max_planar,
    reconstruct_max_planar_4connected,
    small_planar_side,
)
from .triangle_free import OrderedTripleList, reconstruct_triangle_free

__all__ = [
    "OrderedTripleList",
    "SeparatorCertificate",
    "find_degree2_vertex_outerplanar",
    "find_size3_separators",
    "reconstruct_max_planar",
    "reconstruct_max_planar_4connected",
    "reconstruct_outerplanar_2connected",
    "reconstruct_outerplanar_six",
    "reconstruct_triangle_free",
    "six_vertex_profiles",
    "small_planar_side",
]
