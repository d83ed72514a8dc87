# Copyright (c) 2026 SkelGrasp Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import functools
import logging
import math
import os

import numpy as np
import trimesh
from scipy.sparse.csgraph import connected_components
from scipy.sparse import coo_matrix
from scipy.spatial import cKDTree

from skelgrasp.mesh.bvh import BVH
from skelgrasp.mesh.triangle import closest_point_on_triangle
from skelgrasp.mesh.triangle import triangle_normals
from skelgrasp.utils.errors import MeshError
from skelgrasp.utils.file_utils import atomic_write_bytes

MERGE_DISTANCE = 1e-6
MIN_TRIANGLE_AREA = 1e-9
UNIT_SCALES = {'mm': 1.0, 'cm': 10.0, 'm': 1000.0}


class Mesh:
    """ Immutable triangle mesh in millimetres, outward-facing normals.

    Surface points of the skeletonizer are the vertex indices of this
    mesh.
    """

    def __init__(self, vertices, triangles, name=''):
        vertices = np.array(vertices, dtype=np.float64).reshape(-1, 3)
        triangles = np.array(triangles, dtype=np.int64).reshape(-1, 3)
        if triangles.shape[0] == 0:
            raise MeshError('mesh {} has no triangles'.format(name))
        if triangles.min() < 0 or triangles.max() >= vertices.shape[0]:
            raise MeshError('mesh {} indexes missing vertices'.format(name))
        self.name = name
        edges = np.sort(triangles[:, [0, 1, 1, 2, 2, 0]].reshape(-1, 2),
                        axis=1)
        unique, counts = np.unique(edges, axis=0, return_counts=True)
        self.edges = unique
        self.open_edges = unique[counts != 2]
        self.is_watertight = self.open_edges.shape[0] == 0
        if self.is_watertight and _signed_volume(vertices, triangles) < 0.0:
            triangles = triangles[:, ::-1].copy()
        self.vertices = vertices
        self.triangles = triangles
        self.triangle_points = vertices[triangles]
        self.normals, self.areas = triangle_normals(self.triangle_points)
        for array in (self.vertices, self.triangles, self.triangle_points,
                      self.normals, self.areas, self.edges):
            array.setflags(write=False)

    def __repr__(self):
        return 'Mesh(name={!r}, vertices={}, triangles={})'.format(
            self.name, self.num_vertices, self.num_triangles)

    @property
    def num_vertices(self):
        return self.vertices.shape[0]

    @property
    def num_triangles(self):
        return self.triangles.shape[0]

    @property
    def area(self):
        return float(self.areas.sum())

    @property
    def bounds(self):
        return np.stack([self.vertices.min(axis=0), self.vertices.max(axis=0)])

    @property
    def diagonal(self):
        lo, hi = self.bounds
        return float(np.linalg.norm(hi - lo))

    @functools.cached_property
    def centroid(self):
        """ Centre of mass for closed meshes, area-weighted centroid else """
        if self.is_watertight:
            tm = self.to_trimesh()
            if tm.volume > 0.0:
                return np.asarray(tm.center_mass, dtype=np.float64)
        centers = self.triangle_points.mean(axis=1)
        return (centers * self.areas[:, None]).sum(axis=0) / self.area

    @functools.cached_property
    def radius(self):
        """ Largest distance from the centroid to the surface """
        return float(
            np.linalg.norm(self.vertices - self.centroid, axis=1).max())

    @functools.cached_property
    def bvh(self):
        return BVH(self.triangle_points)

    @functools.cached_property
    def vertex_normals(self):
        normals = np.zeros_like(self.vertices)
        weighted = self.normals * self.areas[:, None]
        for k in range(3):
            np.add.at(normals, self.triangles[:, k], weighted)
        norm = np.linalg.norm(normals, axis=1)
        return normals / np.where(norm > 0.0, norm, 1.0)[:, None]

    def to_trimesh(self):
        return trimesh.Trimesh(vertices=np.array(self.vertices),
                               faces=np.array(self.triangles),
                               process=False)

    def closest_point(self, points):
        """ Closest surface points to query points (N, 3)

        Returns:
            (closest (N, 3), distance (N,), triangle index (N,))
        """
        points = np.atleast_2d(np.asarray(points, dtype=np.float64))
        centers = self.triangle_points.mean(axis=1)
        _, guess = cKDTree(centers).query(points)
        closest = np.zeros_like(points)
        distance = np.zeros(points.shape[0])
        index = np.zeros(points.shape[0], dtype=np.int64)
        for i, p in enumerate(points):
            tri = self.triangle_points[guess[i]]
            bound = np.linalg.norm(
                closest_point_on_triangle(p[None], tri[None, 0], tri[None, 1],
                                          tri[None, 2])[0] - p)
            cand = self.bvh.query_box(p - bound, p + bound)
            tris = self.triangle_points[cand]
            q = closest_point_on_triangle(np.repeat(p[None], cand.size, 0),
                                          tris[:, 0], tris[:, 1], tris[:, 2])
            d = np.linalg.norm(q - p, axis=1)
            best = int(np.argmin(d))
            closest[i] = q[best]
            distance[i] = d[best]
            index[i] = cand[best]
        return closest, distance, index

    def winding_number(self, points, chunk=32):
        """ Generalized winding number of query points (N,) """
        points = np.atleast_2d(np.asarray(points, dtype=np.float64))
        result = np.zeros(points.shape[0])
        for start in range(0, points.shape[0], chunk):
            p = points[start:start + chunk]
            rel = self.triangle_points[None] - p[:, None, None]
            a, b, c = rel[:, :, 0], rel[:, :, 1], rel[:, :, 2]
            la = np.linalg.norm(a, axis=-1)
            lb = np.linalg.norm(b, axis=-1)
            lc = np.linalg.norm(c, axis=-1)
            det = np.einsum('ijk,ijk->ij', a, np.cross(b, c))
            div = (la * lb * lc + np.einsum('ijk,ijk->ij', a, b) * lc +
                   np.einsum('ijk,ijk->ij', a, c) * lb +
                   np.einsum('ijk,ijk->ij', b, c) * la)
            solid = 2.0 * np.arctan2(det, div)
            result[start:start + chunk] = solid.sum(axis=1) / (4.0 * np.pi)
        return result

    def contains(self, points):
        return self.winding_number(points) > 0.5

    def sample_surface(self, count, rng):
        """ Area-uniform surface samples

        Returns:
            (points (count, 3), triangle index (count,))
        """
        prob = self.areas / self.areas.sum()
        index = rng.choice(self.num_triangles, size=count, p=prob)
        u = rng.random(count)
        v = rng.random(count)
        flip = u + v > 1.0
        u = np.where(flip, 1.0 - u, u)
        v = np.where(flip, 1.0 - v, v)
        tri = self.triangle_points[index]
        points = (tri[:, 0] + u[:, None] * (tri[:, 1] - tri[:, 0]) +
                  v[:, None] * (tri[:, 2] - tri[:, 0]))
        return points, index

    def ray_hit(self, origin, direction):
        """ Distance along the ray to the first surface hit, None if none """
        origin = np.asarray(origin, dtype=np.float64)
        direction = np.asarray(direction, dtype=np.float64)
        tri = self.triangle_points
        e1 = tri[:, 1] - tri[:, 0]
        e2 = tri[:, 2] - tri[:, 0]
        h = np.cross(direction[None], e2)
        a = np.einsum('ij,ij->i', e1, h)
        ok = np.abs(a) > 1e-12
        f = np.where(ok, 1.0 / np.where(ok, a, 1.0), 0.0)
        s = origin[None] - tri[:, 0]
        u = f * np.einsum('ij,ij->i', s, h)
        q = np.cross(s, e1)
        v = f * (q @ direction)
        t = f * np.einsum('ij,ij->i', e2, q)
        hit = ok & (u >= 0.0) & (v >= 0.0) & (u + v <= 1.0) & (t > 0.0)
        if not np.any(hit):
            return None
        return float(t[hit].min())


def _signed_volume(vertices, triangles):
    tri = vertices[triangles]
    return float(
        np.einsum('ij,ij->i', tri[:, 0], np.cross(tri[:, 1], tri[:, 2])).sum()
        / 6.0)


def merge_close_vertices(vertices, triangles, distance=MERGE_DISTANCE):
    """ Weld vertices closer than `distance`, drop degenerate, duplicated
        and tiny triangles, drop unreferenced vertices.
    """
    n = vertices.shape[0]
    pairs = cKDTree(vertices).query_pairs(distance, output_type='ndarray')
    graph = coo_matrix((np.ones(pairs.shape[0]), (pairs[:, 0], pairs[:, 1])),
                       shape=(n, n))
    _, labels = connected_components(graph, directed=False)
    # representative of every group is its lowest vertex index
    first = np.full(labels.max() + 1, n, dtype=np.int64)
    np.minimum.at(first, labels, np.arange(n))
    triangles = first[labels][triangles]

    keep = ((triangles[:, 0] != triangles[:, 1]) &
            (triangles[:, 1] != triangles[:, 2]) &
            (triangles[:, 2] != triangles[:, 0]))
    triangles = triangles[keep]
    _, areas = triangle_normals(vertices[triangles])
    triangles = triangles[areas >= MIN_TRIANGLE_AREA]
    _, unique_idx = np.unique(np.sort(triangles, axis=1), axis=0,
                              return_index=True)
    triangles = triangles[np.sort(unique_idx)]

    used, inverse = np.unique(triangles, return_inverse=True)
    return vertices[used], inverse.reshape(-1, 3)


def unit_scale(units):
    """ Factor from file coordinates to mm, `units` is a unit name or a
        positive scale factor
    """
    if isinstance(units, str) and units in UNIT_SCALES:
        return UNIT_SCALES[units]
    try:
        scale = float(units)
    except (TypeError, ValueError):
        raise MeshError('unknown units {}'.format(units)) from None
    if not math.isfinite(scale) or scale <= 0.0:
        raise MeshError('units scale must be positive, got {}'.format(units))
    return scale


def load_mesh(path, units='mm', require_watertight=False, name=None):
    """ Read an OFF, OBJ or STL file into a cleaned `Mesh`

    Args:
        path: mesh file
        units: mm, cm, m or a scale factor from the file coordinates
            to mm
        require_watertight: raise MeshError listing the open edges of a
            mesh that is not closed
    """
    scale = unit_scale(units)
    if not os.path.exists(path):
        raise MeshError('mesh file {} not found'.format(path))
    try:
        loaded = trimesh.load(path, force='mesh', process=False)
    except Exception as e:
        raise MeshError('cannot read mesh {}: {}'.format(path, e)) from e
    if not isinstance(loaded, trimesh.Trimesh) or len(loaded.faces) == 0:
        raise MeshError('mesh {} has no triangles'.format(path))
    vertices = np.asarray(loaded.vertices, dtype=np.float64)
    vertices = vertices * scale
    return mesh_from_arrays(vertices,
                            np.asarray(loaded.faces, dtype=np.int64),
                            name=name or os.path.splitext(
                                os.path.basename(path))[0],
                            require_watertight=require_watertight)


def mesh_from_arrays(vertices, triangles, name='', require_watertight=False):
    vertices = np.asarray(vertices, dtype=np.float64)
    triangles = np.asarray(triangles, dtype=np.int64)
    if triangles.size == 0:
        raise MeshError('mesh {} has no triangles'.format(name))
    if not np.all(np.isfinite(vertices)):
        raise MeshError('mesh {} has non-finite coordinates'.format(name))
    vertices, triangles = merge_close_vertices(vertices, triangles)
    if triangles.shape[0] == 0:
        raise MeshError('mesh {} is empty after clean-up'.format(name))
    mesh = Mesh(vertices, triangles, name=name)
    if not mesh.is_watertight:
        if require_watertight:
            raise MeshError(
                'mesh {} is not watertight, {} open edges'.format(
                    name, mesh.open_edges.shape[0]),
                open_edges=mesh.open_edges.tolist())
        logging.warning('mesh %s is not watertight, %d open edges', name,
                        mesh.open_edges.shape[0])
    logging.debug('loaded %r', mesh)
    return mesh


def mesh_from_trimesh(tm, name=''):
    return mesh_from_arrays(np.asarray(tm.vertices), np.asarray(tm.faces),
                            name=name)


def save_mesh(mesh, path):
    file_type = os.path.splitext(path)[1].lstrip('.').lower()
    data = mesh.to_trimesh().export(file_type=file_type)
    if isinstance(data, str):
        data = data.encode('utf8')
    atomic_write_bytes(path, data)
