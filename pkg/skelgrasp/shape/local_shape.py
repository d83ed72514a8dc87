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

from dataclasses import dataclass
from typing import Tuple

import numpy as np
import yaml

from skelgrasp.skeleton.types import BRANCHING
from skelgrasp.skeleton.types import ENDPOINT
from skelgrasp.utils.errors import DegenerateShapeError
from skelgrasp.utils.file_utils import atomic_write_text

ROUND = 'round'
RECTANGULAR = 'rectangular'
# path lengths within this of the budget count as reaching it
LENGTH_EPS = 1e-9


def _derivatives(prev, cur, nxt):
    """ First and second derivative at `cur` by central differences with
        the actual spacing on both sides
    """
    h1 = np.linalg.norm(cur - prev)
    h2 = np.linalg.norm(nxt - cur)
    denom = h1 * h2 * (h1 + h2)
    if denom <= 0.0:
        return np.zeros(3), np.zeros(3)
    d1 = (h1 * h1 * (nxt - cur) + h2 * h2 * (cur - prev)) / denom
    d2 = 2.0 * (h1 * (nxt - cur) - h2 * (cur - prev)) / denom
    return d1, d2


def curvature(skeleton, v):
    """ kappa = |s' x s''| / |s'|^3, zero unless `v` has exactly two
        neighbours
    """
    nbrs = skeleton.neighbors[v]
    if len(nbrs) != 2:
        return 0.0
    pos = skeleton.positions
    d1, d2 = _derivatives(pos[nbrs[0]], pos[v], pos[nbrs[1]])
    speed = np.linalg.norm(d1)
    if speed <= 0.0:
        return 0.0
    return float(np.linalg.norm(np.cross(d1, d2)) / speed**3)


def tangent(skeleton, v):
    """ Unit skeleton direction at `v`

    Connecting vertices use the central difference, endpoints point away
    from their neighbour, branching vertices follow the two most collinear
    incident edges.
    """
    pos = skeleton.positions
    nbrs = skeleton.neighbors[v]
    if len(nbrs) == 1:
        t = pos[v] - pos[nbrs[0]]
    elif len(nbrs) == 2:
        t, _ = _derivatives(pos[nbrs[0]], pos[v], pos[nbrs[1]])
    else:
        dirs = [_unit(pos[w] - pos[v]) for w in nbrs]
        best = None
        for i in range(len(dirs)):
            for j in range(i + 1, len(dirs)):
                dot = float(dirs[i] @ dirs[j])
                if best is None or dot < best[0]:
                    best = (dot, i, j)
        _, i, j = best
        t = dirs[j] - dirs[i]
    return _unit(t)


def _unit(v):
    norm = np.linalg.norm(v)
    if norm <= 0.0:
        raise DegenerateShapeError('zero-length skeleton direction')
    return v / norm


@dataclass(frozen=True)
class GraspingInterval:
    """ Paths leaving the query vertex, one per incident edge """
    vertex: int
    paths: Tuple[Tuple[int, ...], ...]
    lengths: Tuple[float, ...]

    def __len__(self):
        return len(self.paths)

    def vertices(self):
        seen = {self.vertex}
        for path in self.paths:
            seen.update(path)
        return sorted(seen)

    def reaches(self, length):
        return all(x >= length - LENGTH_EPS for x in self.lengths)


def grasping_interval(skeleton, v, max_len, kappa_max=0.1):
    """ Follow every incident edge until a branching or endpoint vertex,
        the length budget `max_len`, or a vertex bending sharper than
        `kappa_max` (kept as the last vertex of the path).
    """
    nbrs = skeleton.neighbors
    paths = []
    lengths = []
    for first in nbrs[v]:
        path = [v, first]
        total = skeleton.edge_length(v, first)
        while True:
            cur = path[-1]
            if skeleton.kind(cur) in (BRANCHING, ENDPOINT):
                break
            if total >= max_len - LENGTH_EPS:
                break
            if curvature(skeleton, cur) > kappa_max:
                break
            nxt = [w for w in nbrs[cur] if w != path[-2]]
            if not nxt or nxt[0] == v:
                break
            total += skeleton.edge_length(cur, nxt[0])
            path.append(nxt[0])
        paths.append(tuple(path))
        lengths.append(total)
    return GraspingInterval(v, tuple(paths), tuple(lengths))


@dataclass(frozen=True)
class LocalSurfaceShape:
    eigenvalues: Tuple[float, float]
    ev1: np.ndarray
    ev2: np.ndarray
    shape: str
    origin: np.ndarray
    normal: np.ndarray
    # projected points in (ev1, ev2) coordinates, for diagnostics
    projected: np.ndarray = None

    @property
    def ratio(self):
        l1, l2 = self.eigenvalues
        return np.inf if l2 <= 0.0 else l1 / l2

    def thickness(self, mode='length'):
        """ (along ev1, along ev2) sizes compared against the strategy
            thresholds
        """
        l1, l2 = self.eigenvalues
        if mode == 'eigenvalue':
            return l1, l2
        if mode == 'length':
            return 2.0 * np.sqrt(l1), 2.0 * np.sqrt(l2)
        raise ValueError('unknown thickness mode {}'.format(mode))


def classify_ratio(l1, l2, t_r):
    if l2 <= 0.0:
        return RECTANGULAR
    return ROUND if l1 / l2 < t_r else RECTANGULAR


def plane_basis(normal):
    ref = np.eye(3)[int(np.argmin(np.abs(normal)))]
    u = np.cross(normal, ref)
    u /= np.linalg.norm(u)
    return u, np.cross(normal, u)


def surface_shape(mesh, skeleton, v, interval, t_r=1.2):
    """ PCA of the surface points owned by the interval vertices, projected
        onto the plane through s_v normal to the skeleton tangent
    """
    owners = interval.vertices()
    points = np.concatenate([skeleton.vertices[w].points for w in owners])
    if points.size < 3:
        raise DegenerateShapeError(
            'vertex {} owns {} surface points in its interval'.format(
                v, points.size))
    normal = tangent(skeleton, v)
    origin = skeleton.positions[v]
    u, w = plane_basis(normal)
    rel = np.asarray(mesh.vertices)[points] - origin
    coords = np.stack([rel @ u, rel @ w], axis=1)
    cov = np.cov(coords, rowvar=False, bias=True)
    values, vectors = np.linalg.eigh(cov)
    values = np.maximum(values, 0.0)
    l1, l2 = float(values[1]), float(values[0])
    ev1 = vectors[0, 1] * u + vectors[1, 1] * w
    ev1 /= np.linalg.norm(ev1)
    # sign: non-negative along +x, ties broken by +y then +z
    for axis in range(3):
        if abs(ev1[axis]) > 1e-12:
            if ev1[axis] < 0.0:
                ev1 = -ev1
            break
    ev2 = np.cross(normal, ev1)
    projected = np.stack([rel @ ev1, rel @ ev2], axis=1)
    return LocalSurfaceShape((l1, l2), ev1, ev2, classify_ratio(l1, l2, t_r),
                             origin, normal, projected)


def shape_to_dict(shape: LocalSurfaceShape, vertex=None, kind=None):
    return {
        'vertex': vertex,
        'kind': kind,
        'plane': {
            'origin': [float(x) for x in shape.origin],
            'normal': [float(x) for x in shape.normal],
        },
        'eigenvalues': [float(x) for x in shape.eigenvalues],
        'ev1': [float(x) for x in shape.ev1],
        'ev2': [float(x) for x in shape.ev2],
        'shape': shape.shape,
        'projected': [[float(a), float(b)] for a, b in shape.projected],
    }


def write_shape_diagnostics(entries, path):
    """ `entries`: dicts from shape_to_dict, one per skeleton vertex """
    atomic_write_text(path, yaml.safe_dump({'shapes': list(entries)}))

