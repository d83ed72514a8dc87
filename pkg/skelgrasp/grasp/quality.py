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

import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull
from scipy.spatial import QhullError

from skelgrasp.utils.config import dataclass_from_dict
from skelgrasp.utils.errors import GraspError

EPS_TOL = 1e-6


@dataclass(frozen=True)
class QualityConfig:
    mu: float = 0.3
    cone_edges: int = 8
    eps_tol: float = EPS_TOL

    @classmethod
    def from_dict(cls, conf):
        return dataclass_from_dict(cls, conf)


@dataclass(frozen=True)
class WrenchSet:
    # (N, 6): unit force, then torque about the centroid divided by rho
    wrenches: np.ndarray
    mu: float
    cone_edges: int
    centroid: np.ndarray
    rho: float

    def __len__(self):
        return self.wrenches.shape[0]


@dataclass(frozen=True)
class QualityResult:
    force_closure: bool
    epsilon: float


def _tangent(normal, toward):
    """ Unit vector orthogonal to `normal`, pointing at `toward` when
        possible, so cone edges turn with the contact set
    """
    t = toward - (toward @ normal) * normal
    norm = np.linalg.norm(t)
    if norm > 1e-9 * max(np.linalg.norm(toward), 1e-300):
        return t / norm
    ref = np.eye(3)[int(np.argmin(np.abs(normal)))]
    t = np.cross(normal, ref)
    return t / np.linalg.norm(t)


def build_wrenches(contacts, mu, m, centroid, rho) -> WrenchSet:
    """ Discretized Coulomb cones, m unit edges per contact about the
        inward normal
    """
    if len(contacts) == 0:
        raise GraspError('no contacts to build wrenches from')
    assert mu > 0.0 and m >= 3 and rho > 0.0
    centroid = np.asarray(centroid, dtype=np.float64)
    phi = 2.0 * np.pi * np.arange(m) / m
    scale = 1.0 / np.sqrt(1.0 + mu * mu)
    rows = []
    for contact in contacts:
        normal = np.asarray(contact.normal, dtype=np.float64)
        length = np.linalg.norm(normal)
        if length <= 0.0:
            raise GraspError('contact with zero normal')
        inward = -normal / length
        p = np.asarray(contact.position, dtype=np.float64)
        t1 = _tangent(inward, centroid - p)
        t2 = np.cross(inward, t1)
        forces = (inward[None] + mu *
                  (np.cos(phi)[:, None] * t1[None] +
                   np.sin(phi)[:, None] * t2[None])) * scale
        torques = np.cross(p - centroid, forces) / rho
        rows.append(np.concatenate([forces, torques], axis=1))
    return WrenchSet(np.concatenate(rows), mu, m, centroid, rho)


def evaluate(wrench_set: WrenchSet, eps_tol=EPS_TOL) -> QualityResult:
    """ Force closure and the radius of the largest origin-centred ball
        in the convex hull of the wrenches
    """
    w = wrench_set.wrenches
    if w.shape[0] < 7:
        return QualityResult(False, 0.0)
    if np.linalg.matrix_rank(w[1:] - w[0]) < 6:
        return QualityResult(False, 0.0)
    try:
        hull = ConvexHull(w)
    except QhullError as e:
        logging.debug('degenerate wrench hull: %s', e)
        return QualityResult(False, 0.0)
    # facets satisfy normal . x + offset <= 0 inside, with unit normals
    offsets = hull.equations[:, -1]
    if not np.all(offsets < 0.0):
        return QualityResult(False, 0.0)
    epsilon = float(np.min(-offsets))
    return QualityResult(epsilon > eps_tol, epsilon)


def force_closure_oracle_lp(wrench_set: WrenchSet, eps_tol=EPS_TOL):
    """ Origin strictly inside the hull, decided by linear programs

    For each of the 12 signed unit directions d, maximise t such that t*d
    is a convex combination of the wrenches; the hull holds a ball around
    the origin exactly when every such t is positive.
    """
    w = wrench_set.wrenches
    n = w.shape[0]
    if n == 0:
        return False
    cost = np.zeros(n + 1)
    cost[-1] = -1.0
    b_eq = np.zeros(7)
    b_eq[-1] = 1.0
    bounds = [(0.0, None)] * (n + 1)
    for axis in range(6):
        for sign in (1.0, -1.0):
            d = np.zeros(6)
            d[axis] = sign
            a_eq = np.zeros((7, n + 1))
            a_eq[:6, :n] = w.T
            a_eq[:6, n] = -d
            a_eq[6, :n] = 1.0
            res = linprog(cost, A_eq=a_eq, b_eq=b_eq, bounds=bounds,
                          method='highs')
            if res.status != 0 or -res.fun <= eps_tol:
                return False
    return True


def grasp_quality(contacts, obj, config: QualityConfig = None):
    """ QualityResult of contacts on `obj`, torques about its centroid """
    if config is None:
        config = QualityConfig()
    if not contacts:
        return QualityResult(False, 0.0)
    wrenches = build_wrenches(contacts, config.mu, config.cone_edges,
                              obj.centroid, obj.radius)
    return evaluate(wrenches, config.eps_tol)
