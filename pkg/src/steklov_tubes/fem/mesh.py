"""Triangle meshes for the flat benchmark domains.

Three generators:

  * mesh_planar(Disk(R), h): spiderweb mesh, ring i carries 6i vertices,
    so refining h by 2 roughly quadruples the vertex count and meshes of
    different h are geometrically similar.
  * mesh_planar(Annulus(r_in, r_out), h): structured polar grid.
  * mesh_torus_minus_disks(side, centers, eps, h): fundamental square of
    a flat torus with circular holes.  Hole boundaries are exact
    inscribed polygons at edge length h, graded collar rings blend into
    a hex background lattice capped at a coarser edge length, and the
    square's opposite edges carry matching vertices that are identified
    through periodic_pairs.  Delaunay triangulation with a few rounds of
    Laplacian smoothing; hole triangles are dropped by a centroid test
    whose margin separates polygon ears from kept collar triangles.

Vertex coordinates live on the fundamental square; the periodic gluing
exists only in the degree-of-freedom map, so boundary extraction and
the Euler characteristic are computed in dof space.  For a torus of
genus 1 with b holes that characteristic is -b.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import Delaunay

from ..errors import ConfigurationError, NumericalError


def _cross2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


# Collar grading around each hole: ring spacing stays at h on a band of
# width _COLLAR_BAND*eps, then grows proportionally to the radius
# (s = h*r/band) until it reaches the background size.  Proportional
# growth keeps the local resolution h(r)/r constant, so the collar's
# share of the interpolation error scales like (h/eps)^2 with no
# h-independent floor from the transition zone; boundary modes decay
# like powers of eps/r and are meshed self-similarly.
_COLLAR_BAND = 0.5


@dataclass(frozen=True)
class Disk:
    radius: float


@dataclass(frozen=True)
class Annulus:
    r_in: float
    r_out: float


@dataclass
class Mesh:
    vertices: np.ndarray          # (nv, 2)
    triangles: np.ndarray         # (nt, 3), CCW
    boundary_edges: np.ndarray    # (nbe, 2) vertex indices
    boundary_markers: np.ndarray  # (nbe,)
    periodic_pairs: np.ndarray = field(
        default_factory=lambda: np.zeros((0, 2), dtype=np.int64)
    )

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_triangles(self) -> int:
        return len(self.triangles)

    def dof_map(self) -> tuple[np.ndarray, int]:
        """Vertex -> dof indices after periodic identification."""
        parent = np.arange(self.num_vertices)

        def root(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for dup, rep in self.periodic_pairs:
            a, b = root(int(dup)), root(int(rep))
            if a != b:
                parent[max(a, b)] = min(a, b)
        roots = np.array([root(i) for i in range(self.num_vertices)])
        uniq, dof = np.unique(roots, return_inverse=True)
        return dof, len(uniq)

    def areas(self) -> np.ndarray:
        p = self.vertices[self.triangles]
        return 0.5 * _cross2(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])

    def euler_characteristic(self) -> int:
        dof, ndof = self.dof_map()
        tri = dof[self.triangles]
        edges = np.sort(
            np.concatenate([tri[:, [0, 1]], tri[:, [1, 2]], tri[:, [2, 0]]]), axis=1
        )
        n_edges = len(np.unique(edges, axis=0))
        return ndof - n_edges + len(tri)

    def boundary_length(self, marker: int | None = None) -> float:
        sel = (
            slice(None)
            if marker is None
            else np.flatnonzero(self.boundary_markers == marker)
        )
        e = self.boundary_edges[sel]
        d = self.vertices[e[:, 0]] - self.vertices[e[:, 1]]
        return float(np.hypot(d[:, 0], d[:, 1]).sum())

    def validate(self) -> None:
        if np.any(self.areas() <= 0):
            raise NumericalError("mesh has non-CCW or degenerate triangles")
        dof, _ = self.dof_map()
        tri = dof[self.triangles]
        edges = np.sort(
            np.concatenate([tri[:, [0, 1]], tri[:, [1, 2]], tri[:, [2, 0]]]), axis=1
        )
        uniq, counts = np.unique(edges, axis=0, return_counts=True)
        if np.any(counts > 2):
            raise NumericalError("mesh edge shared by more than two triangles")
        free = {tuple(e) for e in uniq[counts == 1]}
        listed = {tuple(sorted(dof[e])) for e in self.boundary_edges}
        if free != listed:
            raise NumericalError(
                f"boundary edges inconsistent: {len(free)} from triangles, "
                f"{len(listed)} listed"
            )
        if len(self.boundary_markers) != len(self.boundary_edges):
            raise NumericalError("boundary marker array length mismatch")

    # ------------------------------------------------------------------
    # plain text serialization

    def save(self, path: str) -> None:
        with open(path, "w") as fh:
            fh.write(
                f"{self.num_vertices} {self.num_triangles} {len(self.boundary_edges)}\n"
            )
            for x, y in self.vertices:
                fh.write(f"{float(x)!r} {float(y)!r}\n")
            for a, b, c in self.triangles:
                fh.write(f"{a} {b} {c}\n")
            for (a, b), m in zip(self.boundary_edges, self.boundary_markers):
                fh.write(f"{a} {b} {m}\n")
            if len(self.periodic_pairs):
                fh.write(f"periodic {len(self.periodic_pairs)}\n")
                for dup, rep in self.periodic_pairs:
                    fh.write(f"{dup} {rep}\n")

    @classmethod
    def load(cls, path: str) -> "Mesh":
        with open(path) as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
        try:
            nv, nt, nbe = map(int, lines[0].split())
            pos = 1
            verts = np.array(
                [[float(t) for t in ln.split()] for ln in lines[pos : pos + nv]]
            )
            pos += nv
            tris = np.array(
                [[int(t) for t in ln.split()] for ln in lines[pos : pos + nt]],
                dtype=np.int64,
            )
            pos += nt
            be = np.zeros((nbe, 2), dtype=np.int64)
            bm = np.zeros(nbe, dtype=np.int64)
            for i, ln in enumerate(lines[pos : pos + nbe]):
                a, b, m = map(int, ln.split())
                be[i] = a, b
                bm[i] = m
            pos += nbe
            pairs = np.zeros((0, 2), dtype=np.int64)
            if pos < len(lines):
                tag, npairs = lines[pos].split()
                if tag != "periodic":
                    raise ValueError(f"unexpected section {tag!r}")
                pairs = np.array(
                    [
                        [int(t) for t in ln.split()]
                        for ln in lines[pos + 1 : pos + 1 + int(npairs)]
                    ],
                    dtype=np.int64,
                )
        except (ValueError, IndexError) as exc:
            raise ConfigurationError(f"malformed mesh file {path}: {exc}") from exc
        mesh = cls(verts, tris, be, bm, pairs)
        mesh.validate()
        return mesh


# ---------------------------------------------------------------------------
# shared helpers


def _orient_ccw(vertices: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    p = vertices[triangles]
    flip = _cross2(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]) < 0
    out = triangles.copy()
    out[flip] = out[flip][:, [0, 2, 1]]
    return out


def _stitch(inner: np.ndarray, inner_ang: np.ndarray, outer: np.ndarray,
            outer_ang: np.ndarray) -> list[tuple[int, int, int]]:
    """Triangle strip between two concentric vertex rings, merged by angle."""
    n_in, n_out = len(inner), len(outer)
    ia = np.append(inner_ang, inner_ang[0] + 2.0 * math.pi)
    oa = np.append(outer_ang, outer_ang[0] + 2.0 * math.pi)
    tris = []
    i = j = 0
    while i < n_in or j < n_out:
        if i < n_in and (j >= n_out or ia[i + 1] <= oa[j + 1]):
            tris.append((inner[i], outer[j % n_out], inner[(i + 1) % n_in]))
            i += 1
        else:
            tris.append((inner[i % n_in], outer[j], outer[(j + 1) % n_out]))
            j += 1
    return tris


def _ring(center: np.ndarray, radius: float, n: int, offset: float = 0.0) -> np.ndarray:
    ang = 2.0 * math.pi * (np.arange(n) + offset) / n
    return center + radius * np.column_stack([np.cos(ang), np.sin(ang)])


# ---------------------------------------------------------------------------
# planar domains


def _mesh_disk(radius: float, h: float) -> Mesh:
    if radius <= 0 or not (0 < h < radius):
        raise ConfigurationError(f"need 0 < h < radius, got h={h}, radius={radius}")
    n_r = max(2, round(radius / h))
    dr = radius / n_r
    verts = [np.zeros((1, 2))]
    rings: list[np.ndarray] = []
    angs: list[np.ndarray] = []
    start = 1
    for i in range(1, n_r + 1):
        n_i = 6 * i
        ang = 2.0 * math.pi * np.arange(n_i) / n_i
        verts.append(
            i * dr * np.column_stack([np.cos(ang), np.sin(ang)])
        )
        rings.append(np.arange(start, start + n_i))
        angs.append(ang)
        start += n_i
    vertices = np.concatenate(verts)
    tris = [(0, rings[0][k], rings[0][(k + 1) % 6]) for k in range(6)]
    for i in range(n_r - 1):
        tris.extend(_stitch(rings[i], angs[i], rings[i + 1], angs[i + 1]))
    triangles = _orient_ccw(vertices, np.array(tris, dtype=np.int64))
    outer = rings[-1]
    be = np.column_stack([outer, np.roll(outer, -1)]).astype(np.int64)
    mesh = Mesh(vertices, triangles, be, np.ones(len(be), dtype=np.int64))
    mesh.validate()
    return mesh


def _mesh_annulus(r_in: float, r_out: float, h: float) -> Mesh:
    if not (0 < r_in < r_out) or h <= 0:
        raise ConfigurationError(
            f"need 0 < r_in < r_out and h > 0, got {r_in}, {r_out}, {h}"
        )
    n_r = max(2, round((r_out - r_in) / h))
    n_t = max(8, round(math.pi * (r_in + r_out) / h))
    ang = 2.0 * math.pi * np.arange(n_t) / n_t
    cs = np.column_stack([np.cos(ang), np.sin(ang)])
    vertices = np.concatenate(
        [(r_in + i * (r_out - r_in) / n_r) * cs for i in range(n_r + 1)]
    )

    def idx(i, k):
        return i * n_t + k % n_t

    tris = []
    for i in range(n_r):
        for k in range(n_t):
            tris.append((idx(i, k), idx(i + 1, k), idx(i + 1, k + 1)))
            tris.append((idx(i, k), idx(i + 1, k + 1), idx(i, k + 1)))
    triangles = _orient_ccw(vertices, np.array(tris, dtype=np.int64))
    be, bm = [], []
    for k in range(n_t):
        be.append((idx(0, k), idx(0, k + 1)))
        bm.append(0)
    for k in range(n_t):
        be.append((idx(n_r, k), idx(n_r, k + 1)))
        bm.append(1)
    mesh = Mesh(
        vertices,
        triangles,
        np.array(be, dtype=np.int64),
        np.array(bm, dtype=np.int64),
    )
    mesh.validate()
    return mesh


def mesh_planar(shape: Disk | Annulus, h: float) -> Mesh:
    """Mesh a disk (outer marker 1) or annulus (inner 0, outer 1)."""
    if isinstance(shape, Disk):
        return _mesh_disk(shape.radius, h)
    if isinstance(shape, Annulus):
        return _mesh_annulus(shape.r_in, shape.r_out, h)
    raise ConfigurationError(f"unknown planar shape {shape!r}")


# ---------------------------------------------------------------------------
# flat torus with circular excisions


def _periodic_dist(p: np.ndarray, q: np.ndarray, side: float) -> float:
    d = np.abs(p - q) % side
    d = np.minimum(d, side - d)
    return float(np.hypot(d[0], d[1]))


def _seam_margin(centers: np.ndarray, off: np.ndarray, side: float) -> float:
    t = (centers - off) % side
    return float(np.minimum(t, side - t).min()) if len(t) else side / 2.0


def _best_offset(centers: np.ndarray, side: float) -> np.ndarray:
    # Translate the fundamental square so its seams run as far as
    # possible from every hole; the torus itself does not care.
    best, arg = -1.0, np.zeros(2)
    for ox in np.linspace(0.0, side, 64, endpoint=False):
        for oy in np.linspace(0.0, side, 64, endpoint=False):
            off = np.array([ox, oy])
            m = _seam_margin(centers, off, side)
            if m > best:
                best, arg = m, off
    return arg


def mesh_torus_minus_disks(
    side: float,
    centers: list[tuple[float, float]] | np.ndarray,
    eps: float,
    h: float,
    h_max: float | None = None,
) -> Mesh:
    """Fundamental-square mesh of a flat torus with round holes.

    h is the target edge length on the hole boundaries (requires
    h < eps/4); away from the holes the edge length grows to h_max
    (default max(h, side/32)).  Hole centers must be separated by more
    than 4*eps in the periodic metric.  Returns a validated mesh whose
    only boundary edges are the hole polygons, marked by hole index.
    """
    if side <= 0:
        raise ConfigurationError(f"side must be > 0, got {side}")
    centers = np.asarray(centers, dtype=float).reshape(-1, 2) % side
    b = len(centers)
    if b and not (0 < h < eps / 4):
        raise ConfigurationError(f"need 0 < h < eps/4, got h={h}, eps={eps}")
    if h_max is None:
        h_max = max(h, side / 32.0)
    h_max = min(h_max, side / 8.0)
    for i in range(b):
        for j in range(i, b):
            shifts = [
                np.array([sx, sy])
                for sx in (-side, 0.0, side)
                for sy in (-side, 0.0, side)
                if not (i == j and sx == 0.0 and sy == 0.0)
            ]
            dmin = min(
                float(np.hypot(*(centers[i] - centers[j] + s))) for s in shifts
            )
            if dmin <= 4.0 * eps:
                raise ConfigurationError(
                    f"holes {i} and {j} are {dmin:.4g} apart (periodic); "
                    f"need more than {4.0 * eps:.4g}"
                )

    off = _best_offset(centers, side) if b else np.zeros(2)
    margin = _seam_margin(centers, off, side)
    if b and margin <= 2.0 * eps + h_max:
        raise ConfigurationError(
            "cannot place the fundamental square seams clear of the holes"
        )
    frame = (centers - off) % side

    points: list[np.ndarray] = []
    pinned: list[np.ndarray] = []

    def add(pts: np.ndarray, pin: bool) -> np.ndarray:
        start = sum(len(p) for p in points)
        points.append(pts)
        pinned.append(np.full(len(pts), pin))
        return np.arange(start, start + len(pts))

    # square corners and matched edge points (all pinned)
    n_e = max(8, round(side / h_max))
    step = side / n_e
    ticks = step * np.arange(1, n_e)
    corner_idx = add(
        np.array([[0.0, 0.0], [side, 0.0], [0.0, side], [side, side]]), True
    )
    bot = add(np.column_stack([ticks, np.zeros(n_e - 1)]), True)
    top = add(np.column_stack([ticks, np.full(n_e - 1, side)]), True)
    left = add(np.column_stack([np.zeros(n_e - 1), ticks]), True)
    right = add(np.column_stack([np.full(n_e - 1, side), ticks]), True)
    pairs = [(corner_idx[1], corner_idx[0]), (corner_idx[2], corner_idx[0]),
             (corner_idx[3], corner_idx[0])]
    pairs += list(zip(top, bot)) + list(zip(right, left))

    # hole polygons (pinned) and graded collar rings (free)
    sep_min = math.inf
    for i in range(b):
        for j in range(b):
            if i < j:
                sep_min = min(sep_min, _periodic_dist(frame[i], frame[j], side))
    n_b = max(12, round(2.0 * math.pi * eps / h)) if b else 0
    ring_tops = []
    for c in frame:
        add(_ring(c, eps, n_b), True)
        band = (1.0 + _COLLAR_BAND) * eps
        collar_end = min(
            band * h_max / h,
            0.45 * sep_min,
            margin - 0.8 * h_max,
        )
        r, k, r_top = eps, 0, eps
        while True:
            if r - eps < h:
                # wall layer: eigenfunctions behave like (eps/r)^q, so the
                # normal second derivative peaks at the circle; halve the
                # first ring spacings to keep that layer's share of the
                # interpolation error in line with the rest of the collar.
                s = 0.5 * h + 0.5 * (r - eps)
            else:
                s = min(h * max(1.0, r / band), h_max)
            if r + s > collar_end:
                break
            r += s
            k += 1
            n_k = max(10, round(2.0 * math.pi * r / s))
            add(_ring(c, r, n_k, offset=0.5 * (k % 2)), False)
            r_top = r
        ring_tops.append(r_top)

    # hex background lattice (free), kept clear of seams and collars
    ny = max(2, round(side / (h_max * math.sqrt(3.0) / 2.0)))
    nx = max(2, round(side / h_max))
    hy, hx = side / ny, side / nx
    rows = []
    for r in range(ny):
        y = (r + 0.5) * hy
        x = ((np.arange(nx) + 0.25 + 0.5 * (r % 2)) * hx) % side
        rows.append(np.column_stack([x, np.full(nx, y)]))
    hexpts = np.concatenate(rows)
    keep = np.ones(len(hexpts), dtype=bool)
    keep &= np.minimum(hexpts[:, 0], side - hexpts[:, 0]) > 0.35 * h_max
    keep &= np.minimum(hexpts[:, 1], side - hexpts[:, 1]) > 0.35 * h_max
    for c, r_top in zip(frame, ring_tops):
        keep &= np.hypot(*(hexpts - c).T) > r_top + 0.55 * h_max
    add(hexpts[keep], False)

    pts = np.concatenate(points)
    pin = np.concatenate(pinned)
    free = ~pin

    chord = 2.0 * eps * math.sin(math.pi / n_b) if b else 0.0
    drop_radius = eps - chord * chord / (6.0 * eps) if b else 0.0

    def hole_mask(tri_pts: np.ndarray) -> np.ndarray:
        cent = tri_pts.mean(axis=1)
        inside = np.zeros(len(cent), dtype=bool)
        for c in frame:
            inside |= np.hypot(*(cent - c).T) < drop_radius
        return inside

    tri = None
    for it in range(4):
        tri = Delaunay(pts)
        simp = tri.simplices
        simp = simp[~hole_mask(pts[simp])]
        if it == 3:
            break
        edges = np.unique(
            np.sort(
                np.concatenate(
                    [simp[:, [0, 1]], simp[:, [1, 2]], simp[:, [2, 0]]]
                ),
                axis=1,
            ),
            axis=0,
        )
        sums = np.zeros_like(pts)
        cnt = np.zeros(len(pts))
        np.add.at(sums, edges[:, 0], pts[edges[:, 1]])
        np.add.at(sums, edges[:, 1], pts[edges[:, 0]])
        np.add.at(cnt, edges[:, 0], 1)
        np.add.at(cnt, edges[:, 1], 1)
        ok = free & (cnt > 0)
        avg = sums[ok] / cnt[ok, None]
        pts[ok] = 0.3 * pts[ok] + 0.7 * avg
        for c in frame:
            d = np.hypot(*(pts - c).T)
            bad = free & (d < eps + 0.45 * h)
            if np.any(bad):
                u = (pts[bad] - c) / d[bad, None]
                pts[bad] = c + (eps + 0.6 * h) * u

    triangles = _orient_ccw(pts, simp.astype(np.int64))
    pair_arr = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    mesh = Mesh(
        pts + off,
        triangles,
        np.zeros((0, 2), dtype=np.int64),
        np.zeros(0, dtype=np.int64),
        pair_arr,
    )
    mesh.boundary_edges, mesh.boundary_markers = _extract_boundary(
        mesh, centers, eps
    )
    mesh.validate()
    chi = mesh.euler_characteristic()
    if chi != -b:
        raise NumericalError(f"torus mesh has Euler characteristic {chi}, want {-b}")
    for j in range(b):
        n_edges = int(np.sum(mesh.boundary_markers == j))
        if n_edges != n_b:
            raise NumericalError(
                f"hole {j} has {n_edges} boundary edges, expected {n_b}"
            )
    return mesh


def _extract_boundary(
    mesh: Mesh, centers: np.ndarray, eps: float
) -> tuple[np.ndarray, np.ndarray]:
    """Boundary edges in dof space, mapped back to owning vertex pairs."""
    dof, _ = mesh.dof_map()
    tri_v = mesh.triangles
    tri_d = dof[tri_v]
    edge_v = np.concatenate([tri_v[:, [0, 1]], tri_v[:, [1, 2]], tri_v[:, [2, 0]]])
    edge_d = np.sort(
        np.concatenate([tri_d[:, [0, 1]], tri_d[:, [1, 2]], tri_d[:, [2, 0]]]), axis=1
    )
    uniq, inv, counts = np.unique(
        edge_d, axis=0, return_inverse=True, return_counts=True
    )
    sel = np.flatnonzero(counts[inv] == 1)
    be = edge_v[sel]
    if len(be) == 0:
        return np.zeros((0, 2), dtype=np.int64), np.zeros(0, dtype=np.int64)
    markers = np.full(len(be), -1, dtype=np.int64)
    mids = 0.5 * (mesh.vertices[be[:, 0]] + mesh.vertices[be[:, 1]])
    ends = np.stack([mesh.vertices[be[:, 0]], mesh.vertices[be[:, 1]]])
    for j, c in enumerate(centers):
        on_circle = np.all(
            np.abs(np.hypot(*(ends - c).transpose(2, 0, 1)) - eps) < 1e-9 * (1 + eps),
            axis=0,
        )
        markers[on_circle & (np.hypot(*(mids - c).T) < 2 * eps)] = j
    if np.any(markers < 0):
        raise NumericalError("boundary edge found away from every hole circle")
    return be.astype(np.int64), markers
