"""Discretised surfaces: strip and pants metrics, the tree surface Sigma, the corner
plug, plug trees and the leaf bookkeeping."""
from .corner import CornerPlug, build_corner_plug, calibrate_chi1
from .mesh import Mesh, STENCIL16, DisconnectedError, quotient
from .pants import PantsSurface, build_pants, pants_template
from .plugtree import InvalidPlugTree, plug_tree_distances
from .sigma import (BallTruncationError, SigmaSurface, assemble_sigma, fixed_point_integrals,
                    geodesic_distance, make_phi, metric_ball, oscillation_series,
                    sigma_product_check)
from .strip import StripMetric, build_strip

__all__ = [
    "CornerPlug", "build_corner_plug", "calibrate_chi1", "Mesh", "STENCIL16",
    "DisconnectedError", "quotient", "PantsSurface", "build_pants", "pants_template",
    "InvalidPlugTree", "plug_tree_distances", "BallTruncationError", "SigmaSurface",
    "assemble_sigma", "fixed_point_integrals", "geodesic_distance", "make_phi",
    "metric_ball", "oscillation_series", "sigma_product_check", "StripMetric", "build_strip",
]
