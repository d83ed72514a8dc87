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

from typing import List

import numpy as np

from skelgrasp.skeleton.types import BRANCHING
from skelgrasp.skeleton.types import CONNECTING
from skelgrasp.skeleton.types import ENDPOINT
from skelgrasp.skeleton.types import Segment
from skelgrasp.skeleton.types import Skeleton
from skelgrasp.utils.errors import SkeletonError

KIND_COLORS = {
    ENDPOINT: (255, 0, 0, 255),
    CONNECTING: (255, 255, 0, 255),
    BRANCHING: (0, 0, 255, 255),
}
UNOWNED_COLOR = (128, 128, 128, 255)


def kind_of_degree(degree):
    if degree > 2:
        return BRANCHING
    if degree == 2:
        return CONNECTING
    if degree == 1:
        return ENDPOINT
    raise SkeletonError('isolated skeleton vertex, skeleton malformed')


def classify_vertices(skeleton: Skeleton) -> Skeleton:
    kinds = []
    for v in range(len(skeleton)):
        try:
            kinds.append(kind_of_degree(skeleton.degree(v)))
        except SkeletonError:
            raise SkeletonError(
                'vertex {} has no edges, skeleton malformed'.format(v))
    return skeleton.with_kinds(kinds)


def segment_skeleton(skeleton: Skeleton) -> List[Segment]:
    """ Maximal runs of connecting vertices, each closed off by endpoint
        or branching vertices. Loops made of connecting vertices only come
        out as closed segments without delimiters.
    """
    if any(v.kind is None for v in skeleton.vertices):
        raise SkeletonError('segment_skeleton needs classified vertices')
    nbrs = skeleton.neighbors
    seen_edges = set()
    segments = []
    for d in range(len(skeleton)):
        if skeleton.kind(d) == CONNECTING:
            continue
        for first in nbrs[d]:
            if (min(d, first), max(d, first)) in seen_edges:
                continue
            path = [d, first]
            while skeleton.kind(path[-1]) == CONNECTING:
                nxt = [w for w in nbrs[path[-1]] if w != path[-2]]
                path.append(nxt[0])
            seen_edges.update((min(a, b), max(a, b))
                              for a, b in zip(path, path[1:]))
            segments.append(
                Segment(tuple(path[1:-1]), (path[0], path[-1]), False))

    for v in range(len(skeleton)):
        if skeleton.kind(v) != CONNECTING:
            continue
        w = nbrs[v][0]
        if (min(v, w), max(v, w)) in seen_edges:
            continue
        path = [v, w]
        while path[-1] != v:
            nxt = [u for u in nbrs[path[-1]] if u != path[-2]]
            path.append(nxt[0])
        seen_edges.update((min(a, b), max(a, b))
                          for a, b in zip(path, path[1:]))
        segments.append(Segment(tuple(path[:-1]), (None, None), True))
    return segments


def surface_partition_labels(skeleton: Skeleton):
    """ Kind of the owning skeleton vertex for every surface point """
    labels = np.full(skeleton.num_surface_points, '', dtype=object)
    for v in skeleton.vertices:
        labels[v.points] = v.kind
    return labels


def surface_partition_colors(skeleton: Skeleton, mesh=None):
    """ RGBA colour per surface point: red endpoint, yellow connecting,
        blue branching regions
    """
    if mesh is not None:
        assert mesh.num_vertices == skeleton.num_surface_points
    labels = surface_partition_labels(skeleton)
    colors = np.array([KIND_COLORS.get(k, UNOWNED_COLOR) for k in labels],
                      dtype=np.uint8)
    return labels, colors.reshape(-1, 4)
