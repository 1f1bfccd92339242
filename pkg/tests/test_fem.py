"""FEM spectra against separated closed forms.

Disk of radius R: sigma = k/R, each k >= 1 twice.  Annulus [1/2, 1]
with Steklov on both circles: quadratic-determinant pairs from the
radial solver.  Mixed conditions on the outer circle reproduce the SN
and SD model families.  The bare unit torus has Neumann spectrum
4 pi^2 (p^2 + q^2) with multiplicity 4 at the first gap.
"""

import math

import numpy as np
import pytest

from steklov_tubes.errors import ConfigurationError
from steklov_tubes.fem import (
    mesh_torus_minus_disks,
    neumann_spectrum,
    steklov_spectrum,
)
from steklov_tubes.fem.solve import assemble, boundary_mass
from steklov_tubes.radial import RadialMode, sigma_annulus_pair, sigma_mixed


def test_disk_spectrum(disk_mesh):
    vals = steklov_spectrum(disk_mesh, 7)
    assert abs(vals[0]) < 1e-10
    want = [1.0, 1.0, 2.0, 2.0, 3.0, 3.0]
    assert list(vals[1:]) == pytest.approx(want, rel=4e-3)


def test_annulus_both_steklov(annulus_mesh):
    vals = steklov_spectrum(annulus_mesh, 6)
    pairs = [sigma_annulus_pair(RadialMode(1, q, 0.0), 0.5, 1.0) for q in range(4)]
    exact = sorted(
        v for q, p in enumerate(pairs) for v in p for _ in range(1 if q == 0 else 2)
    )[:6]
    assert abs(vals[0]) < 1e-10
    assert list(vals[1:]) == pytest.approx(exact[1:], rel=4e-3)


def test_annulus_mixed_outer_dirichlet(annulus_mesh):
    # inner circle Steklov, outer Dirichlet: the SD model family
    vals = steklov_spectrum(annulus_mesh, 5, dirichlet_markers=(1,))
    sd = [sigma_mixed(RadialMode(1, q, 0.0), 0.5, 1.0, "Dirichlet") for q in range(3)]
    exact = sorted([sd[0]] + [sd[1]] * 2 + [sd[2]] * 2)
    # mixed modes concentrate at the inner circle, so the h = 0.05
    # mesh carries a larger discretization error than the pure case
    assert list(vals) == pytest.approx(exact, rel=1.5e-2)


def test_annulus_mixed_outer_neumann(annulus_mesh):
    # inner circle Steklov, outer Neumann: the SN model family
    vals = steklov_spectrum(annulus_mesh, 5, neumann_markers=(1,))
    sn = [sigma_mixed(RadialMode(1, q, 0.0), 0.5, 1.0, "Neumann") for q in range(3)]
    exact = sorted([sn[0]] + [sn[1]] * 2 + [sn[2]] * 2)
    assert abs(vals[0]) < 1e-10
    assert list(vals[1:]) == pytest.approx(exact[1:], rel=1.5e-2)


def test_steklov_zero_mode_is_constant(annulus_mesh):
    vals, modes = steklov_spectrum(annulus_mesh, 1, return_modes=True)
    assert abs(vals[0]) < 1e-10
    u = modes[:, 0]
    assert float(np.std(u)) < 1e-8 * max(1.0, float(np.abs(u).mean()))


def test_bare_torus_neumann():
    mesh = mesh_torus_minus_disks(1.0, [], 0.05, 0.01)
    vals = neumann_spectrum(mesh, 5)
    base = 4.0 * math.pi**2
    assert abs(vals[0]) < 1e-8
    # first positive eigenvalue has multiplicity 4; mesh error is O(h^2)
    assert list(vals[1:]) == pytest.approx([base] * 4, rel=5e-3)


def test_neumann_dense_sparse_agree():
    mesh = mesh_torus_minus_disks(1.0, [], 0.05, 0.015)
    dense = neumann_spectrum(mesh, 4)
    sparse = neumann_spectrum(mesh, 4, dense_cutoff=10)
    assert list(sparse) == pytest.approx(list(dense), rel=1e-8, abs=1e-8)


def test_assemble_partition_of_unity(annulus_mesh):
    K, M, dof, ndof = assemble(annulus_mesh)
    ones = np.ones(ndof)
    # constants are in the stiffness kernel; mass integrates the area
    assert float(np.abs(K @ ones).max()) < 1e-12
    area = math.pi * (1.0 - 0.25)
    assert float(ones @ (M @ ones)) == pytest.approx(area, rel=5e-3)
    d = boundary_mass(annulus_mesh, {0, 1}, dof, ndof)
    assert float(d.sum()) == pytest.approx(3 * math.pi, rel=5e-3)


def test_marker_validation(annulus_mesh):
    with pytest.raises(ConfigurationError):
        steklov_spectrum(annulus_mesh, 3, dirichlet_markers=(7,))
    with pytest.raises(ConfigurationError):
        steklov_spectrum(annulus_mesh, 3, dirichlet_markers=(0,), neumann_markers=(0,))
    with pytest.raises(ConfigurationError):
        # nothing left as Steklov
        steklov_spectrum(annulus_mesh, 3, dirichlet_markers=(0, 1))
    with pytest.raises(ValueError):
        steklov_spectrum(annulus_mesh, 0)
