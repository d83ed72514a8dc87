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
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu
from tqdm import tqdm

from skelgrasp.utils.config import dataclass_from_dict
from skelgrasp.utils.errors import SkeletonError
from skelgrasp.utils.logging_utils import progress_enabled

# double area below this times the squared longest edge: collapsed
DEGENERATE_RATIO = 1e-6


@dataclass(frozen=True)
class ContractionParams:
    max_iterations: int = 20
    # stop once the surface area falls below this fraction of the input
    area_ratio: float = 1e-4
    # None: 2% of the bounding box diagonal
    max_edge_length: Optional[float] = None
    contraction_weight: float = 1.0
    contraction_growth: float = 2.0
    attraction_weight: float = 1.0
    max_cot_weight: float = 1e3
    spur_radius_factor: float = 1.5

    @classmethod
    def from_dict(cls, conf):
        return dataclass_from_dict(cls, conf)

    def edge_length(self, mesh):
        if self.max_edge_length is not None:
            return self.max_edge_length
        return 0.02 * mesh.diagonal


def cotangent_laplacian(verts, faces, max_weight=1e3):
    """ L[i, j] = (cot a_ij + cot b_ij) / 2 off the diagonal, rows sum to 0

    Weights are clipped to [0, max_weight]. Triangles already collapsed
    to a segment or a point contribute nothing, so contracted parts of
    the surface stay where they are.
    """
    n = verts.shape[0]
    v0, v1, v2 = verts[faces[:, 0]], verts[faces[:, 1]], verts[faces[:, 2]]
    double_area = np.linalg.norm(np.cross(v1 - v0, v2 - v0), axis=1)
    longest = np.max(np.stack([
        np.einsum('ij,ij->i', e, e) for e in (v1 - v0, v2 - v1, v0 - v2)
    ]), axis=0)
    collapsed = double_area <= DEGENERATE_RATIO * longest
    double_area = np.where(collapsed, 1.0, double_area)
    cot0 = np.einsum('ij,ij->i', v1 - v0, v2 - v0) / double_area
    cot1 = np.einsum('ij,ij->i', v0 - v1, v2 - v1) / double_area
    cot2 = np.einsum('ij,ij->i', v0 - v2, v1 - v2) / double_area
    # cot0 sits opposite edge (1, 2), and so on
    ii = faces[:, [1, 2, 0]].reshape(-1)
    jj = faces[:, [2, 0, 1]].reshape(-1)
    cot = 0.5 * np.stack([cot0, cot1, cot2], axis=1)
    cot[collapsed] = 0.0
    cot = cot.reshape(-1)
    w = sp.coo_matrix((cot, (ii, jj)), shape=(n, n)).tocsr()
    w = w + w.T
    w.data = np.clip(w.data, 0.0, max_weight)
    return w - sp.diags(np.asarray(w.sum(axis=1)).ravel())


def surface_area(verts, faces):
    v0, v1, v2 = verts[faces[:, 0]], verts[faces[:, 1]], verts[faces[:, 2]]
    return 0.5 * float(np.linalg.norm(np.cross(v1 - v0, v2 - v0), axis=1).sum())


def contract(mesh, params: ContractionParams):
    """ Shrink the mesh towards its medial curve

    Every iteration solves the least squares system
    [W_L L; W_H I] V = [0; W_H V_k] with W_L growing geometrically and
    W_H fixed, the Laplacian recomputed from the current positions.

    Returns:
        (contracted vertices (N, 3), iterations used)
    """
    faces = np.asarray(mesh.triangles)
    center = mesh.vertices.mean(axis=0)
    verts = np.array(mesh.vertices) - center
    n = verts.shape[0]
    area0 = surface_area(verts, faces)
    eye = sp.identity(n, format='csc')
    w_l = params.contraction_weight
    w_h = params.attraction_weight

    bar = tqdm(range(1, params.max_iterations + 1),
               desc='contract {}'.format(mesh.name),
               disable=not progress_enabled(),
               leave=False)
    for it in bar:
        lap = cotangent_laplacian(verts, faces, params.max_cot_weight)
        system = (w_l * w_l) * (lap.T @ lap) + (w_h * w_h) * eye
        solver = splu(sp.csc_matrix(system))
        verts = solver.solve((w_h * w_h) * verts)
        ratio = surface_area(verts, faces) / area0
        bar.set_postfix(area=float(ratio))
        logging.debug('contraction iteration %d, W_L %.1f, area ratio %.2e',
                      it, w_l, ratio)
        if ratio < params.area_ratio:
            bar.close()
            return verts + center, it
        w_l *= params.contraction_growth
    bar.close()
    raise SkeletonError(
        'contraction of {} did not converge after {} iterations'.format(
            mesh.name, params.max_iterations),
        iterations=params.max_iterations)
