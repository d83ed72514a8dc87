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
"""Synthetic test objects. Shapes are signed distance fields turned into
closed triangle meshes with marching cubes, so every fixture is a
watertight surface with evenly sized triangles."""

import numpy as np
import trimesh
from skimage import measure

from skelgrasp.mesh.mesh import mesh_from_arrays
from skelgrasp.mesh.mesh import mesh_from_trimesh

DEFAULT_SPACING = 1.5


def _length(v):
    return np.linalg.norm(v, axis=-1)


def sdf_box(p, extents):
    q = np.abs(p) - np.asarray(extents) / 2.0
    outside = _length(np.maximum(q, 0.0))
    inside = np.minimum(q.max(axis=-1), 0.0)
    return outside + inside


def sdf_cylinder(p, radius, length):
    """ Capped cylinder along z centred at the origin """
    q = np.stack([_length(p[..., :2]) - radius,
                  np.abs(p[..., 2]) - length / 2.0], axis=-1)
    return _length(np.maximum(q, 0.0)) + np.minimum(q.max(axis=-1), 0.0)


def sdf_capsule(p, a, b, radius):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    ab = b - a
    t = np.clip(((p - a) @ ab) / (ab @ ab), 0.0, 1.0)
    return _length(p - (a + t[..., None] * ab)) - radius


def sdf_sphere(p, radius, center=(0.0, 0.0, 0.0)):
    return _length(p - np.asarray(center)) - radius


def mesh_from_sdf(sdf, lo, hi, spacing=DEFAULT_SPACING, name=''):
    """ Iso-surface of `sdf` sampled on a grid covering [lo, hi] """
    lo = np.asarray(lo, dtype=np.float64) - 3.0 * spacing
    hi = np.asarray(hi, dtype=np.float64) + 3.0 * spacing
    axes = [np.arange(lo[k], hi[k] + spacing, spacing) for k in range(3)]
    grid = np.stack(np.meshgrid(*axes, indexing='ij'), axis=-1)
    volume = sdf(grid)
    verts, faces, _, _ = measure.marching_cubes(volume,
                                                level=0.0,
                                                spacing=(spacing, ) * 3,
                                                allow_degenerate=False)
    return mesh_from_arrays(verts + lo, faces, name=name)


def cylinder(radius=10.0, length=100.0, spacing=DEFAULT_SPACING):
    half = np.array([radius, radius, length / 2.0])
    return mesh_from_sdf(lambda p: sdf_cylinder(p, radius, length),
                         -half, half, spacing, name='cylinder')


def box(extents=(120.0, 30.0, 20.0), spacing=DEFAULT_SPACING):
    half = np.asarray(extents) / 2.0
    return mesh_from_sdf(lambda p: sdf_box(p, extents), -half, half, spacing,
                         name='box')


def capsule(radius=12.0, length=90.0, spacing=DEFAULT_SPACING):
    a = np.array([0.0, 0.0, -length / 2.0])
    b = np.array([0.0, 0.0, length / 2.0])
    half = np.array([radius, radius, length / 2.0 + radius])
    return mesh_from_sdf(lambda p: sdf_capsule(p, a, b, radius), -half, half,
                         spacing, name='capsule')


def y_tube(radius=8.0, arm_length=45.0, spacing=DEFAULT_SPACING):
    """ Three capsule arms meeting at the origin, 120 degrees apart """
    ends = [
        arm_length * np.array([np.cos(a), np.sin(a), 0.0])
        for a in np.deg2rad([90.0, 210.0, 330.0])
    ]
    origin = np.zeros(3)

    def sdf(p):
        return np.min(
            np.stack([sdf_capsule(p, origin, e, radius) for e in ends]),
            axis=0)

    reach = arm_length + radius
    return mesh_from_sdf(sdf, [-reach, -reach, -radius],
                         [reach, reach, radius], spacing, name='y_tube')


def dumbbell(ball_radius=16.0, bar_radius=6.0, bar_length=90.0,
             spacing=DEFAULT_SPACING):
    a = np.array([0.0, 0.0, -bar_length / 2.0])
    b = np.array([0.0, 0.0, bar_length / 2.0])

    def sdf(p):
        return np.minimum.reduce([
            sdf_sphere(p, ball_radius, a),
            sdf_sphere(p, ball_radius, b),
            sdf_capsule(p, a, b, bar_radius),
        ])

    half = np.array([ball_radius, ball_radius, bar_length / 2.0 + ball_radius])
    return mesh_from_sdf(sdf, -half, half, spacing, name='dumbbell')


def sphere(radius=20.0, spacing=DEFAULT_SPACING):
    half = np.full(3, radius)
    return mesh_from_sdf(lambda p: sdf_sphere(p, radius), -half, half,
                         spacing, name='sphere')


def icosphere(radius=20.0, subdivisions=3):
    return mesh_from_trimesh(
        trimesh.creation.icosphere(subdivisions=subdivisions, radius=radius),
        name='icosphere')


def primitive_box(extents, center=(0.0, 0.0, 0.0), name='box'):
    """ 12-triangle box, used for hand links and unit tests """
    transform = np.eye(4)
    transform[:3, 3] = center
    return mesh_from_trimesh(
        trimesh.creation.box(extents=extents, transform=transform), name=name)


def corpus(spacing=DEFAULT_SPACING):
    """ Benchmark fixture objects in a fixed order """
    return [
        cylinder(spacing=spacing),
        box(spacing=spacing),
        y_tube(spacing=spacing),
        dumbbell(spacing=spacing),
        capsule(spacing=spacing),
    ]
