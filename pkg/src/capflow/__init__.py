"""Curvature flow and quermassintegral toolkit for convex capillary surfaces.

The package simulates the locally constrained flow of convex surfaces in the
upper half-space that meet the supporting hyperplane at a constant contact
angle, computes their capillary quermassintegrals, and audits the associated
conservation laws and Alexandrov-Fenchel type inequalities at desk scale.
"""

__version__ = "0.1.0"

from capflow.halfsphere import HalfSphereGrid, make_grid
from capflow.surface import GeometricState, RadialField, geometry_from_phi
from capflow.quermass import CapConstants, QuermassVector, cap_constants, quermass_all

__all__ = [
    "HalfSphereGrid",
    "make_grid",
    "RadialField",
    "GeometricState",
    "geometry_from_phi",
    "CapConstants",
    "QuermassVector",
    "cap_constants",
    "quermass_all",
    "__version__",
]
