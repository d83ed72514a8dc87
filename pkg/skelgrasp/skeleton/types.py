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

import dataclasses
import functools
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import networkx as nx
import numpy as np

from skelgrasp.utils.errors import SkeletonError

ENDPOINT = 'endpoint'
CONNECTING = 'connecting'
BRANCHING = 'branching'
KINDS = (ENDPOINT, CONNECTING, BRANCHING)


@dataclass(frozen=True)
class SkeletonVertex:
    position: np.ndarray
    # indices of the mesh vertices this skeleton vertex stands for
    points: np.ndarray = field(
        default_factory=lambda: np.zeros(0, dtype=np.int64))
    kind: Optional[str] = None


@dataclass(frozen=True)
class Segment:
    """ Run of connecting vertices; `delimiters` are the endpoint or
        branching vertices at both ends, None for closed loops.
    """
    interior: Tuple[int, ...]
    delimiters: Tuple[Optional[int], Optional[int]] = (None, None)
    closed: bool = False


@dataclass(frozen=True)
class Skeleton:
    vertices: Tuple[SkeletonVertex, ...]
    edges: Tuple[Tuple[int, int], ...]
    num_surface_points: int

    def __post_init__(self):
        edges = tuple(sorted({(min(a, b), max(a, b)) for a, b in self.edges}))
        object.__setattr__(self, 'vertices', tuple(self.vertices))
        object.__setattr__(self, 'edges', edges)

    def __len__(self):
        return len(self.vertices)

    @functools.cached_property
    def positions(self):
        if not self.vertices:
            return np.zeros((0, 3))
        return np.stack([v.position for v in self.vertices])

    @functools.cached_property
    def neighbors(self) -> List[List[int]]:
        adj = [[] for _ in self.vertices]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return [sorted(n) for n in adj]

    def degree(self, v):
        return len(self.neighbors[v])

    def kind(self, v):
        return self.vertices[v].kind

    def edge_length(self, a, b):
        return float(np.linalg.norm(self.positions[a] - self.positions[b]))

    def graph(self):
        g = nx.Graph()
        g.add_nodes_from(range(len(self.vertices)))
        g.add_edges_from(self.edges)
        return g

    def with_kinds(self, kinds):
        vertices = tuple(
            dataclasses.replace(v, kind=k)
            for v, k in zip(self.vertices, kinds))
        return Skeleton(vertices, self.edges, self.num_surface_points)

    def point_owner(self):
        """ Skeleton vertex of every surface point, -1 if unowned """
        owner = np.full(self.num_surface_points, -1, dtype=np.int64)
        for i, v in enumerate(self.vertices):
            owner[v.points] = i
        return owner

    def validate(self):
        """ Raise SkeletonError unless the graph has no self-loops, the
            surface points are partitioned and the graph is a single
            component.
        """
        loops = sorted(a for a, b in self.edges if a == b)
        if loops:
            raise SkeletonError(
                'self-loop edges at vertices {}'.format(loops))
        seen = np.zeros(self.num_surface_points, dtype=np.int64)
        for v in self.vertices:
            np.add.at(seen, v.points, 1)
        if np.any(seen != 1):
            raise SkeletonError(
                'surface points not partitioned: {} missing, {} shared'.format(
                    int(np.sum(seen == 0)), int(np.sum(seen > 1))))
        if self.vertices and not nx.is_connected(self.graph()):
            raise SkeletonError('skeleton graph is not connected')
