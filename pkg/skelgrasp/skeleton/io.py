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
"""Plain-text skeleton format

    # skelgrasp skeleton v1
    surface_points <count>
    vertices <count>
    <id> <x> <y> <z> <kind> <n> <point id> ...
    edges <count>
    <a> <b>
"""

import numpy as np
import trimesh

from skelgrasp.skeleton.segmentation import surface_partition_colors
from skelgrasp.skeleton.types import KINDS
from skelgrasp.skeleton.types import Skeleton
from skelgrasp.skeleton.types import SkeletonVertex
from skelgrasp.utils.errors import SkeletonError
from skelgrasp.utils.file_utils import atomic_write_bytes
from skelgrasp.utils.file_utils import atomic_write_text

HEADER = '# skelgrasp skeleton v1'


def skeleton_to_text(skeleton: Skeleton):
    lines = [HEADER, 'surface_points {}'.format(skeleton.num_surface_points)]
    lines.append('vertices {}'.format(len(skeleton)))
    for i, v in enumerate(skeleton.vertices):
        fields = [str(i)] + [repr(float(x)) for x in v.position]
        fields.append(v.kind or '-')
        fields.append(str(len(v.points)))
        fields.extend(str(int(p)) for p in v.points)
        lines.append(' '.join(fields))
    lines.append('edges {}'.format(len(skeleton.edges)))
    lines.extend('{} {}'.format(a, b) for a, b in skeleton.edges)
    return '\n'.join(lines) + '\n'


def write_skeleton(skeleton: Skeleton, path):
    atomic_write_text(path, skeleton_to_text(skeleton))


def read_skeleton(path) -> Skeleton:
    with open(path, 'r', encoding='utf8') as fin:
        lines = [line.strip() for line in fin if line.strip()]
    if not lines or lines[0] != HEADER:
        raise SkeletonError('{} is not a skeleton file'.format(path))
    try:
        num_points = int(lines[1].split()[1])
        num_vertices = int(lines[2].split()[1])
        vertices = []
        for line in lines[3:3 + num_vertices]:
            fields = line.split()
            position = np.array([float(x) for x in fields[1:4]])
            kind = fields[4]
            count = int(fields[5])
            points = np.array([int(p) for p in fields[6:6 + count]],
                              dtype=np.int64)
            if kind != '-' and kind not in KINDS:
                raise SkeletonError('unknown vertex kind {}'.format(kind))
            vertices.append(
                SkeletonVertex(position, points,
                               None if kind == '-' else kind))
        edge_start = 3 + num_vertices
        num_edges = int(lines[edge_start].split()[1])
        edges = [
            tuple(int(x) for x in line.split())
            for line in lines[edge_start + 1:edge_start + 1 + num_edges]
        ]
    except (IndexError, ValueError) as e:
        raise SkeletonError('malformed skeleton file {}: {}'.format(
            path, e)) from e
    for a, b in edges:
        if a == b or not (0 <= a < num_vertices and 0 <= b < num_vertices):
            raise SkeletonError('bad edge {} {} in {}'.format(a, b, path))
    return Skeleton(tuple(vertices), tuple(edges), num_points)


def write_segmentation_ply(skeleton: Skeleton, mesh, path):
    """ Mesh with per-vertex colours of the skeleton segmentation """
    _, colors = surface_partition_colors(skeleton, mesh)
    tm = trimesh.Trimesh(vertices=np.array(mesh.vertices),
                         faces=np.array(mesh.triangles),
                         vertex_colors=colors,
                         process=False)
    atomic_write_bytes(path, tm.export(file_type='ply'))
