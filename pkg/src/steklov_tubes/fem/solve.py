"""P1 assembly and the two spectral solves used by the benchmarks.

The Steklov problem K u = sigma D u (D the lumped boundary mass, zero
off the Steklov part of the boundary) is reduced to the boundary before
solving: with S the Steklov boundary dofs and I the rest,

    T = K_SS - K_SI K_II^{-1} K_IS

is the discrete Dirichlet-to-Neumann operator, and T w = sigma D_S w is
a dense symmetric problem of boundary size.  This removes the infinite
eigenvalues of the degenerate pencil (D is supported only on S) and
costs one sparse factorization plus |S| solves, done in column chunks.

Dirichlet-marked boundary parts are eliminated, Neumann-marked parts
are left free, every other marker is Steklov.

neumann_spectrum solves K u = lam M u with the consistent mass matrix,
densely up to DENSE_CUTOFF dofs and by shift-invert Lanczos above.
"""

from __future__ import annotations

import numpy as np
from scipy import sparse
from scipy.linalg import eigh
from scipy.sparse.linalg import eigsh, splu

from ..errors import ConfigurationError, NumericalError
from .mesh import Mesh

DENSE_CUTOFF = 3000
_SCHUR_CHUNK = 128


def assemble(mesh: Mesh) -> tuple[sparse.csr_matrix, sparse.csr_matrix, np.ndarray, int]:
    """Stiffness and consistent mass in dof space; returns (K, M, dof, ndof)."""
    dof, ndof = mesh.dof_map()
    p = mesh.vertices[mesh.triangles]
    # edge vectors opposite each vertex; grad phi_i = perp(e_i) / (2A)
    e = p[:, [2, 0, 1], :] - p[:, [1, 2, 0], :]
    area = 0.5 * (e[:, 2, 0] * e[:, 0, 1] - e[:, 2, 1] * e[:, 0, 0])
    if np.any(area <= 0):
        raise NumericalError("assembly requires CCW triangles with positive area")
    k_loc = np.einsum("tia,tja->tij", e, e) / (4.0 * area)[:, None, None]
    m_loc = (area[:, None, None] / 12.0) * (np.ones((3, 3)) + np.eye(3))

    td = dof[mesh.triangles]
    rows = np.repeat(td, 3, axis=1).ravel()
    cols = np.tile(td, (1, 3)).ravel()
    K = sparse.coo_matrix(
        (k_loc.ravel(), (rows, cols)), shape=(ndof, ndof)
    ).tocsr()
    M = sparse.coo_matrix(
        (m_loc.ravel(), (rows, cols)), shape=(ndof, ndof)
    ).tocsr()
    return K, M, dof, ndof


def boundary_mass(mesh: Mesh, markers: set[int], dof: np.ndarray, ndof: int) -> np.ndarray:
    """Lumped boundary mass vector over edges with the given markers."""
    d = np.zeros(ndof)
    sel = np.isin(mesh.boundary_markers, list(markers))
    for (a, b) in mesh.boundary_edges[sel]:
        length = float(np.hypot(*(mesh.vertices[a] - mesh.vertices[b])))
        d[dof[a]] += 0.5 * length
        d[dof[b]] += 0.5 * length
    return d


def _marker_sets(mesh, dirichlet_markers, neumann_markers):
    present = set(int(m) for m in np.unique(mesh.boundary_markers))
    dset, nset = set(dirichlet_markers), set(neumann_markers)
    for m in dset | nset:
        if m not in present:
            raise ConfigurationError(f"marker {m} not present in mesh boundary")
    if dset & nset:
        raise ConfigurationError(f"markers {dset & nset} listed as both bc types")
    steklov = present - dset - nset
    if not steklov:
        raise ConfigurationError("no Steklov boundary left after bc assignment")
    return dset, steklov


def steklov_spectrum(
    mesh: Mesh,
    count: int,
    dirichlet_markers: tuple[int, ...] = (),
    neumann_markers: tuple[int, ...] = (),
    return_modes: bool = False,
):
    """First `count` Steklov eigenvalues (ascending), optionally with modes.

    Modes are returned as vertex-space functions, one column per
    eigenvalue, normalized in the boundary mass.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    dset, _ = _marker_sets(mesh, dirichlet_markers, neumann_markers)
    K, _, dof, ndof = assemble(mesh)
    steklov_markers = set(int(m) for m in np.unique(mesh.boundary_markers)) - dset - set(
        neumann_markers
    )
    d_vec = boundary_mass(mesh, steklov_markers, dof, ndof)

    fixed = np.zeros(ndof, dtype=bool)
    sel = np.isin(mesh.boundary_markers, list(dset))
    fixed[dof[mesh.boundary_edges[sel].ravel()]] = True

    is_s = (d_vec > 0) & ~fixed
    si = np.flatnonzero(is_s)
    ii = np.flatnonzero(~is_s & ~fixed)
    if count > len(si):
        raise ConfigurationError(
            f"requested {count} eigenvalues but only {len(si)} boundary dofs"
        )

    t_mat = K[si][:, si].toarray()
    if len(ii):
        k_ii = K[ii][:, ii].tocsc()
        k_is = K[ii][:, si].tocsc()
        lu = splu(k_ii)
        k_si = k_is.T.tocsr()
        for lo in range(0, len(si), _SCHUR_CHUNK):
            hi = min(lo + _SCHUR_CHUNK, len(si))
            x = lu.solve(k_is[:, lo:hi].toarray())
            t_mat[:, lo:hi] -= k_si @ x
    t_mat = 0.5 * (t_mat + t_mat.T)

    w = 1.0 / np.sqrt(d_vec[si])
    vals, vecs = eigh(w[:, None] * t_mat * w[None, :])
    sigmas = vals[:count]
    if not return_modes:
        return sigmas

    u_s = w[:, None] * vecs[:, :count]
    u = np.zeros((ndof, count))
    u[si] = u_s
    if len(ii):
        u[ii] = -lu.solve(k_is @ u_s)
    return sigmas, u[dof]


def neumann_spectrum(
    mesh: Mesh, count: int, dense_cutoff: int = DENSE_CUTOFF
) -> np.ndarray:
    """First `count` Neumann eigenvalues of the mesh, ascending from ~0."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    K, M, _, ndof = assemble(mesh)
    if count > ndof:
        raise ConfigurationError(f"requested {count} eigenvalues of {ndof} dofs")
    if ndof <= dense_cutoff:
        vals = eigh(
            K.toarray(), M.toarray(), eigvals_only=True, subset_by_index=[0, count - 1]
        )
        return np.asarray(vals)
    # shift-invert about a small negative value; K + tau*M stays SPD and
    # the constant mode is recovered as the eigenvalue nearest zero
    tau = 1.0 / float(M.sum())
    v0 = np.random.default_rng(0).standard_normal(ndof)
    vals = eigsh(
        K,
        k=count,
        M=M,
        sigma=-tau,
        which="LM",
        v0=v0,
        ncv=min(ndof - 1, max(4 * count, 60)),
        return_eigenvectors=False,
    )
    return np.sort(vals)
