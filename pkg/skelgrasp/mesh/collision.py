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
from typing import List

import numpy as np

from skelgrasp.mesh.pose import RigidPose
from skelgrasp.mesh.triangle import triangle_pair_distance

CONTACT_TOLERANCE = 0.5
CLUSTER_RADIUS = 5.0
CHUNK = 16384


@dataclass(frozen=True)
class Contact:
    position: np.ndarray
    normal: np.ndarray
    link: str = ''

    def to_dict(self):
        return {
            'position': [float(v) for v in self.position],
            'normal': [float(v) for v in self.normal],
            'link': self.link,
        }

    @classmethod
    def from_dict(cls, obj):
        return cls(np.asarray(obj['position'], dtype=np.float64),
                   np.asarray(obj['normal'], dtype=np.float64),
                   obj.get('link', ''))


def _relative(pose_a, pose_b):
    """ Rotation and translation mapping b-local into a-local """
    rel = pose_a.inverse().compose(pose_b)
    return rel.rotation_matrix(), rel.translation


def _candidates(a, pose_a, b, pose_b, margin):
    rotation, translation = _relative(pose_a, pose_b)
    ta, tb = a.bvh.overlap_pairs(b.bvh, rotation, translation, margin)
    tri_b = b.triangle_points[tb] @ rotation.T + translation
    tri_a = a.triangle_points[ta]
    gap = np.maximum(tri_a.min(axis=1) - tri_b.max(axis=1),
                     tri_b.min(axis=1) - tri_a.max(axis=1))
    near = np.all(gap <= margin, axis=1)
    return ta[near], tb[near], tri_a[near], tri_b[near]


def collide(a, pose_a, b, pose_b, tolerance=CONTACT_TOLERANCE):
    """ True when any triangle of `a` comes closer than `tolerance` to a
        triangle of `b`, meshes placed at the given poses.
    """
    _, _, tri_a, tri_b = _candidates(a, pose_a, b, pose_b, tolerance)
    for start in range(0, tri_a.shape[0], CHUNK):
        dist, _, _ = triangle_pair_distance(tri_a[start:start + CHUNK],
                                            tri_b[start:start + CHUNK])
        if np.any(dist < tolerance):
            return True
    return False


def collide_exhaustive(a, pose_a, b, pose_b, tolerance=CONTACT_TOLERANCE):
    """ All-pairs reference for `collide` """
    rotation, translation = _relative(pose_a, pose_b)
    ia, ib = np.meshgrid(np.arange(a.num_triangles),
                         np.arange(b.num_triangles),
                         indexing='ij')
    tri_a = a.triangle_points[ia.ravel()]
    tri_b = b.triangle_points[ib.ravel()] @ rotation.T + translation
    dist, _, _ = triangle_pair_distance(tri_a, tri_b)
    return bool(np.any(dist < tolerance))


def distance_lower_bound(a, pose_a, b, pose_b, cutoff):
    """ A value no larger than the distance between the meshes, or
        `cutoff` if they are at least that far apart.
    """
    rotation, translation = _relative(pose_a, pose_b)
    return a.bvh.leaf_box_gap(b.bvh, rotation, translation, cutoff)


def close_pairs(a, pose_a, b, pose_b, tolerance=CONTACT_TOLERANCE):
    """ Triangle pairs closer than `tolerance` with their closest points

    Returns:
        (triangles of a, triangles of b, distance, point on a, point on b),
        points in the parent frame of the poses
    """
    ta, tb, tri_a, tri_b = _candidates(a, pose_a, b, pose_b, tolerance)
    dist, pa, pb = triangle_pair_distance(tri_a, tri_b)
    near = dist < tolerance
    return (ta[near], tb[near], dist[near], pose_a.apply(pa[near]),
            pose_a.apply(pb[near]))


def extract_contacts(link_mesh,
                     link_pose,
                     obj,
                     obj_pose=None,
                     tolerance=CONTACT_TOLERANCE,
                     cluster_radius=CLUSTER_RADIUS,
                     link_name='') -> List[Contact]:
    """ Contacts between a hand link and the object

    Triangle pairs within `tolerance` are taken closest first and
    clustered greedily: a pair starts a new contact unless its object
    point lies within `cluster_radius` of an existing one. Each contact
    sits on the object surface with the outward object normal.
    """
    if obj_pose is None:
        obj_pose = RigidPose.identity()
    ta, tb, dist, pa, _ = close_pairs(obj, obj_pose, link_mesh, link_pose,
                                      tolerance)
    order = np.lexsort((tb, ta, dist))
    centers = []
    normals = []
    for k in order:
        p = pa[k]
        if any(np.linalg.norm(p - c) <= cluster_radius for c in centers):
            continue
        centers.append(p)
        normals.append(obj_pose.apply_vector(obj.normals[ta[k]]))
    return [
        Contact(np.asarray(c), np.asarray(n), link_name)
        for c, n in zip(centers, normals)
    ]
