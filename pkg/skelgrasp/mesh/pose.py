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

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.transform import Rotation


def _as_wxyz(rotation):
    """ scipy keeps quaternions scalar-last, we keep them scalar-first """
    x, y, z, w = rotation.as_quat()
    return np.array([w, x, y, z])


def _to_rotation(quat):
    w, x, y, z = quat
    return Rotation.from_quat([x, y, z, w])


@dataclass(frozen=True)
class RigidPose:
    """ Rigid transform, translation in mm plus unit quaternion (w, x, y, z)

    `a.compose(b)` applies b first, then a.
    """
    translation: np.ndarray = field(default_factory=lambda: np.zeros(3))
    rotation: np.ndarray = field(
        default_factory=lambda: np.array([1.0, 0.0, 0.0, 0.0]))

    def __post_init__(self):
        t = np.asarray(self.translation, dtype=np.float64).reshape(3)
        q = np.asarray(self.rotation, dtype=np.float64).reshape(4)
        norm = np.linalg.norm(q)
        assert norm > 0.0, 'zero quaternion'
        q = q / norm
        # q and -q are the same rotation, keep w >= 0
        if q[0] < 0.0:
            q = -q
        t.setflags(write=False)
        q.setflags(write=False)
        object.__setattr__(self, 'translation', t)
        object.__setattr__(self, 'rotation', q)

    @classmethod
    def identity(cls):
        return cls()

    @classmethod
    def from_matrix(cls, matrix):
        matrix = np.asarray(matrix, dtype=np.float64)
        return cls.from_rotation_matrix(matrix[:3, :3], matrix[:3, 3])

    @classmethod
    def from_rotation_matrix(cls, rotation_matrix, translation=None):
        rotation = Rotation.from_matrix(rotation_matrix)
        if translation is None:
            translation = np.zeros(3)
        return cls(translation, _as_wxyz(rotation))

    @classmethod
    def from_axis_angle(cls, axis, angle, translation=None):
        axis = np.asarray(axis, dtype=np.float64)
        axis = axis / np.linalg.norm(axis)
        rotation = Rotation.from_rotvec(axis * angle)
        if translation is None:
            translation = np.zeros(3)
        return cls(translation, _as_wxyz(rotation))

    @classmethod
    def from_dict(cls, conf):
        conf = conf or {}
        return cls(conf.get('translation', [0.0, 0.0, 0.0]),
                   conf.get('rotation', [1.0, 0.0, 0.0, 0.0]))

    def to_dict(self):
        return {
            'translation': [float(v) for v in self.translation],
            'rotation': [float(v) for v in self.rotation],
        }

    def rotation_matrix(self):
        return _to_rotation(self.rotation).as_matrix()

    def matrix(self):
        m = np.eye(4)
        m[:3, :3] = self.rotation_matrix()
        m[:3, 3] = self.translation
        return m

    def compose(self, other):
        r = _to_rotation(self.rotation)
        rotation = r * _to_rotation(other.rotation)
        translation = r.apply(other.translation) + self.translation
        return RigidPose(translation, _as_wxyz(rotation))

    def inverse(self):
        r = _to_rotation(self.rotation).inv()
        return RigidPose(-r.apply(self.translation), _as_wxyz(r))

    def apply(self, points):
        """ Map points (N, 3) or (3,) from the local to the parent frame """
        points = np.asarray(points, dtype=np.float64)
        return points @ self.rotation_matrix().T + self.translation

    def apply_vector(self, vectors):
        vectors = np.asarray(vectors, dtype=np.float64)
        return vectors @ self.rotation_matrix().T

    def translated(self, offset):
        return RigidPose(self.translation + np.asarray(offset), self.rotation)

    def axis(self, index):
        """ Column `index` of the rotation matrix: local x, y or z axis """
        return self.rotation_matrix()[:, index]
