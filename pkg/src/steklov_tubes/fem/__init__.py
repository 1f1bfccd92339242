"""Flat 2D finite element layer: meshes, spectra, inequality checks."""

from .mesh import Annulus, Disk, Mesh, mesh_planar, mesh_torus_minus_disks
from .solve import neumann_spectrum, steklov_spectrum
from .checks import (
    CheckResult,
    dirichlet_energy_check,
    metric_scaling_ratio_check,
    poincare_check,
)

__all__ = [
    "Annulus",
    "Disk",
    "Mesh",
    "mesh_planar",
    "mesh_torus_minus_disks",
    "steklov_spectrum",
    "neumann_spectrum",
    "CheckResult",
    "dirichlet_energy_check",
    "poincare_check",
    "metric_scaling_ratio_check",
]
