"""Lattice bases, point clouds, topologies, and the four distance functions.

Everything downstream (spanning trees, ratios, habitats, persistence) works on
the types defined here.  Distances between lattice points are evaluated from
integer quadratic forms whenever the Gram matrix of the basis is recognizably
half-integral, so squared lengths are exact; square roots are taken once at
the end.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DegenerateBasis,
    DuplicatePoints,
    NotHexagonal,
    TopologyMismatch,
)

EPS_DET = 1e-12
_GRAM_SNAP = 1e-9

Vec = tuple[float, float]


def _dot(w: Vec, z: Vec) -> float:
    return w[0] * z[0] + w[1] * z[1]


def _det2(w: Vec, z: Vec) -> float:
    return w[0] * z[1] - w[1] * z[0]


@dataclass(frozen=True)
class Basis:
    """Two linearly independent vectors spanning a lattice.

    The doubled Gram entries (2u·u, 2u·v, 2v·v) are snapped to integers when
    within 1e-9, which makes squared point distances exact for the unit
    hexagonal basis, the integer grid, and the stretched variants used by the
    constructions.
    """

    u: Vec
    v: Vec

    def __post_init__(self):
        u = (float(self.u[0]), float(self.u[1]))
        v = (float(self.v[0]), float(self.v[1]))
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        if abs(_det2(u, v)) <= EPS_DET:
            raise DegenerateBasis(f"det {u}, {v} below {EPS_DET}")
        g2 = (2.0 * _dot(u, u), 2.0 * _dot(u, v), 2.0 * _dot(v, v))
        snapped = tuple(round(x) for x in g2)
        exact = all(abs(x - s) < _GRAM_SNAP for x, s in zip(g2, snapped))
        object.__setattr__(self, "_g2", snapped if exact else g2)
        object.__setattr__(self, "exact_gram", exact)

    # -- geometry ---------------------------------------------------------

    @property
    def nu(self) -> float:
        """Length ratio ‖v‖/‖u‖ (the ν of a reduced basis normalized to ‖u‖=1)."""
        return math.sqrt(_dot(self.v, self.v) / _dot(self.u, self.u))

    @property
    def is_hexagonal(self) -> bool:
        """True for the unit hexagonal basis with a +60° angle (u·v = +1/2)."""
        return self.exact_gram and self._g2 == (2, 1, 2)

    @property
    def is_reduced(self) -> bool:
        a, b, c = self._g2
        return a <= c + _GRAM_SNAP and 2 * abs(b) <= a + _GRAM_SNAP

    def matrix(self) -> np.ndarray:
        """Rows u, v; cartesian = coords @ matrix()."""
        return np.array([self.u, self.v], dtype=float)

    def sq_offset(self, di: int, dj: int) -> float:
        """Squared Euclidean length of di·u + dj·v (exact when Gram is exact)."""
        a, b, c = self._g2
        return (a * di * di + 2 * b * di * dj + c * dj * dj) / 2.0

    def sq_offset_arr(self, di: np.ndarray, dj: np.ndarray) -> np.ndarray:
        a, b, c = self._g2
        if self.exact_gram:
            di = di.astype(np.int64)
            dj = dj.astype(np.int64)
        return (a * di * di + 2 * b * di * dj + c * dj * dj) / 2.0

    def reduced(self) -> "Basis":
        """Lagrange-Gauss reduction: ‖u‖ ≤ ‖v‖ and |u·v| ≤ ½‖u‖².

        Comparisons carry a relative tolerance so half-integral inputs (the
        hexagonal basis in particular) are already fixed points of the
        reduction despite float rounding.
        """
        u, v = self.u, self.v
        if _dot(v, v) < _dot(u, u) * (1.0 - 1e-12):
            u, v = v, u
        while True:
            mu = round(_dot(u, v) / _dot(u, u))
            v = (v[0] - mu * u[0], v[1] - mu * u[1])
            if _dot(v, v) >= _dot(u, u) * (1.0 - 1e-12):
                break
            u, v = v, u
        return Basis(u, v)


def make_basis(u: Vec, v: Vec) -> Basis:
    """Validate and Lagrange-Gauss-reduce a basis (same lattice, shortest pair)."""
    return Basis(u, v).reduced()


def hexagonal_basis() -> Basis:
    return Basis((1.0, 0.0), (0.5, math.sqrt(3.0) / 2.0))


def square_basis() -> Basis:
    return Basis((1.0, 0.0), (0.0, 1.0))


# -- topology and metric ---------------------------------------------------


@dataclass(frozen=True)
class Topology:
    kind: str  # "plane" | "torus"
    n: int | None = None

    def __post_init__(self):
        if self.kind not in ("plane", "torus"):
            raise ValueError(f"unknown topology {self.kind!r}")
        if self.kind == "torus" and (self.n is None or self.n < 2):
            raise ValueError("torus period must be an integer >= 2")

    @classmethod
    def plane(cls) -> "Topology":
        return cls("plane")

    @classmethod
    def torus(cls, n: int) -> "Topology":
        return cls("torus", int(n))

    @property
    def is_torus(self) -> bool:
        return self.kind == "torus"


class Metric(Enum):
    EUCLIDEAN_PLANE = "euclidean-plane"
    EUCLIDEAN_TORUS = "euclidean-torus"
    HEX_PLANE = "hex-plane"
    HEX_TORUS = "hex-torus"

    @property
    def requires_torus(self) -> bool:
        return self in (Metric.EUCLIDEAN_TORUS, Metric.HEX_TORUS)

    @property
    def is_hex(self) -> bool:
        return self in (Metric.HEX_PLANE, Metric.HEX_TORUS)

    @classmethod
    def euclidean(cls, topology: Topology) -> "Metric":
        return cls.EUCLIDEAN_TORUS if topology.is_torus else cls.EUCLIDEAN_PLANE

    @classmethod
    def hexagonal(cls, topology: Topology) -> "Metric":
        return cls.HEX_TORUS if topology.is_torus else cls.HEX_PLANE


# -- hexagonal distance and tri-coordinates --------------------------------


def hex_distance(di: int, dj: int) -> int:
    """Hexagonal length of the lattice offset (di, dj): max(|i|, |j|, |i+j|)."""
    return max(abs(di), abs(dj), abs(di + dj))


def hex_distance_arr(di: np.ndarray, dj: np.ndarray) -> np.ndarray:
    return np.maximum(np.abs(di), np.maximum(np.abs(dj), np.abs(di + dj)))


@dataclass(frozen=True)
class TriCoord:
    """Three-coordinate address (a, b, c) with a + b + c = 0."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a + self.b + self.c != 0:
            raise ValueError("tri-coordinates must sum to zero")

    def to_lattice(self) -> tuple[int, int]:
        return self.c, self.a


def tri_coords(i: int, j: int) -> TriCoord:
    """Map lattice coordinates to the zero-sum three-coordinate frame.

    Orientation convention: (a, b, c) = (j, -i-j, i), so the hexagonal length
    max(|a|,|b|,|c|) coincides with hex_distance(i, j) and the inverse map is
    (i, j) = (c, a).
    """
    return TriCoord(j, -i - j, i)


# -- point clouds -----------------------------------------------------------


def _dedupe_rows(rows: np.ndarray) -> bool:
    return len(np.unique(rows, axis=0)) == len(rows)


@dataclass(frozen=True)
class PointCloud:
    """Finite ordered point set: lattice coords plus derived cartesian positions.

    ``coords`` is None for clouds given directly by cartesian coordinates
    (the perturbed constructions); those are always planar.
    """

    basis: Basis
    topology: Topology
    coords: np.ndarray | None
    cartesian: np.ndarray

    def __post_init__(self):
        cart = np.asarray(self.cartesian, dtype=float)
        object.__setattr__(self, "cartesian", cart)
        if self.coords is not None:
            coords = np.asarray(self.coords, dtype=np.int64)
            if self.topology.is_torus:
                coords = np.mod(coords, self.topology.n)
            object.__setattr__(self, "coords", coords)
            if not _dedupe_rows(coords):
                raise DuplicatePoints("coincident lattice points (mod period)")
        else:
            if self.topology.is_torus:
                raise TopologyMismatch("cartesian-only clouds must be planar")
            if len(cart) and not _dedupe_rows(cart):
                raise DuplicatePoints("coincident cartesian points")
        self.cartesian.setflags(write=False)
        if self.coords is not None:
            self.coords.setflags(write=False)

    @property
    def size(self) -> int:
        return len(self.cartesian)

    def subset(self, indices) -> "PointCloud":
        idx = np.asarray(indices, dtype=np.int64)
        coords = None if self.coords is None else self.coords[idx]
        return PointCloud(self.basis, self.topology, coords, self.cartesian[idx])


def lattice_cloud(basis: Basis, topology: Topology, coords) -> PointCloud:
    coords = np.asarray(coords, dtype=np.int64).reshape(-1, 2)
    cart = coords @ basis.matrix()
    return PointCloud(basis, topology, coords, cart)


def cloud_from_cartesian(points, basis: Basis | None = None) -> PointCloud:
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    return PointCloud(basis or square_basis(), Topology.plane(), None, pts)


def generate_square(basis: Basis, r: float, topology: Topology | None = None) -> PointCloud:
    """All lattice points with cartesian coordinates in the closed square [-r, r]².

    Points are ordered row-major by (j, i).
    """
    topology = topology or Topology.plane()
    if topology.is_torus:
        raise TopologyMismatch("square windows are planar")
    if r <= 0:
        raise ValueError("window radius must be positive")
    minv = np.linalg.inv(basis.matrix().T)
    corners = np.array([[r, r], [r, -r], [-r, r], [-r, -r]], dtype=float)
    ij = corners @ minv.T
    lo = np.floor(ij.min(axis=0)).astype(int) - 1
    hi = np.ceil(ij.max(axis=0)).astype(int) + 1
    ii, jj = np.meshgrid(
        np.arange(lo[0], hi[0] + 1), np.arange(lo[1], hi[1] + 1), indexing="ij"
    )
    coords = np.column_stack([ii.ravel(), jj.ravel()])
    cart = coords @ basis.matrix()
    tol = 1e-9
    mask = (np.abs(cart[:, 0]) <= r + tol) & (np.abs(cart[:, 1]) <= r + tol)
    coords = coords[mask]
    order = np.lexsort((coords[:, 0], coords[:, 1]))
    return lattice_cloud(basis, topology, coords[order])


def generate_rhombus(basis: Basis, n: int, topology: Topology | None = None) -> PointCloud:
    """The n² points i·u + j·v with 0 ≤ i, j ≤ n-1, row-major by (j, i)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    topology = topology or Topology.plane()
    if topology.is_torus and topology.n != n:
        raise TopologyMismatch(f"rhombus size {n} != torus period {topology.n}")
    jj, ii = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    coords = np.column_stack([ii.ravel(), jj.ravel()])
    return lattice_cloud(basis, topology, coords)


# -- distances ---------------------------------------------------------------


def _torus_sq_arr(basis: Basis, n: int, di: np.ndarray, dj: np.ndarray) -> np.ndarray:
    """Min over the 9 translates (s,t) in {-1,0,1}² of |(di+sn)u + (dj+tn)v|²."""
    best = None
    for s in (-1, 0, 1):
        for t in (-1, 0, 1):
            sq = basis.sq_offset_arr(di + s * n, dj + t * n)
            best = sq if best is None else np.minimum(best, sq)
    return best


def _torus_hex_arr(n: int, di: np.ndarray, dj: np.ndarray) -> np.ndarray:
    best = None
    for s in (-1, 0, 1):
        for t in (-1, 0, 1):
            h = hex_distance_arr(di + s * n, dj + t * n)
            best = h if best is None else np.minimum(best, h)
    return best


def pair_sq(cloud: PointCloud, metric: Metric, ia, ib) -> np.ndarray:
    """Squared Euclidean pair distances under the metric's topology (vectorized)."""
    ia = np.atleast_1d(np.asarray(ia, dtype=np.int64))
    ib = np.atleast_1d(np.asarray(ib, dtype=np.int64))
    if metric.requires_torus and not cloud.topology.is_torus:
        raise TopologyMismatch("torus metric on a plane cloud")
    if cloud.coords is None:
        d = cloud.cartesian[ib] - cloud.cartesian[ia]
        return d[:, 0] ** 2 + d[:, 1] ** 2
    di = cloud.coords[ib, 0] - cloud.coords[ia, 0]
    dj = cloud.coords[ib, 1] - cloud.coords[ia, 1]
    if metric.requires_torus:
        return _torus_sq_arr(cloud.basis, cloud.topology.n, di, dj)
    return cloud.basis.sq_offset_arr(di, dj)


def pair_hex(cloud: PointCloud, metric: Metric, ia, ib) -> np.ndarray:
    """Hexagonal pair distances (topology taken from the metric)."""
    if cloud.coords is None:
        raise NotHexagonal("hexagonal distance requires lattice coordinates")
    if metric.requires_torus and not cloud.topology.is_torus:
        raise TopologyMismatch("torus metric on a plane cloud")
    ia = np.atleast_1d(np.asarray(ia, dtype=np.int64))
    ib = np.atleast_1d(np.asarray(ib, dtype=np.int64))
    di = cloud.coords[ib, 0] - cloud.coords[ia, 0]
    dj = cloud.coords[ib, 1] - cloud.coords[ia, 1]
    if metric.requires_torus:
        return _torus_hex_arr(cloud.topology.n, di, dj)
    return hex_distance_arr(di, dj)


def distance(metric: Metric, cloud: PointCloud, p: int, q: int) -> float:
    """Distance between points p and q of the cloud under the chosen metric."""
    if metric.is_hex:
        return float(pair_hex(cloud, metric, [p], [q])[0])
    return math.sqrt(float(pair_sq(cloud, metric, [p], [q])[0]))


def distance_matrix(cloud: PointCloud, metric: Metric) -> np.ndarray:
    """Dense (V, V) matrix of pair distances (lengths, not squares)."""
    v = cloud.size
    ii, jj = np.meshgrid(np.arange(v), np.arange(v), indexing="ij")
    sq = pair_sq(cloud, metric, ii.ravel(), jj.ravel()) if not metric.is_hex else None
    if metric.is_hex:
        d = pair_hex(cloud, metric, ii.ravel(), jj.ravel()).astype(float)
    else:
        d = np.sqrt(sq)
    return d.reshape(v, v)


# -- canonical JSON document -------------------------------------------------


def cloud_to_doc(cloud: PointCloud, colors=None) -> dict:
    doc: dict = {
        "basis": {"u": list(cloud.basis.u), "v": list(cloud.basis.v)},
        "topology": (
            {"type": "torus", "n": cloud.topology.n}
            if cloud.topology.is_torus
            else {"type": "plane"}
        ),
        "coords": None if cloud.coords is None else cloud.coords.tolist(),
    }
    if cloud.coords is None:
        doc["cartesian"] = [[float(x), float(y)] for x, y in cloud.cartesian]
    if colors is not None:
        doc["colors"] = [int(c) for c in colors]
    return doc


def cloud_from_doc(doc: dict) -> tuple[PointCloud, list[int] | None]:
    basis = Basis(tuple(doc["basis"]["u"]), tuple(doc["basis"]["v"]))
    topo = doc.get("topology", {"type": "plane"})
    topology = (
        Topology.torus(topo["n"]) if topo.get("type") == "torus" else Topology.plane()
    )
    coords = doc.get("coords")
    if coords is not None:
        cloud = lattice_cloud(basis, topology, coords)
    else:
        cloud = cloud_from_cartesian(doc["cartesian"], basis)
    colors = doc.get("colors")
    return cloud, colors
