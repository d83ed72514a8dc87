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

from skelgrasp.skeleton.segmentation import segment_skeleton
from skelgrasp.skeleton.types import CONNECTING
from skelgrasp.skeleton.types import Skeleton

# arc lengths within this of d count as reaching it
SPACING_EPS = 1e-9


class VertexCursor:
    """ Emission order over a segmented skeleton

    Every endpoint and branching vertex comes first, in index order. Then
    each segment is walked from its first delimiter and a connecting
    vertex is emitted once the arc length since the last emitted vertex
    reaches `d`. A closed loop starts its walk at its first vertex, which
    is emitted.
    """

    def __init__(self, skeleton: Skeleton, d):
        assert d > 0
        self.skeleton = skeleton
        self.d = d
        self.position = 0
        self._order = None

    def _build(self):
        skel = self.skeleton
        order = [v for v in range(len(skel)) if skel.kind(v) != CONNECTING]
        for segment in segment_skeleton(skel):
            if segment.closed:
                path = list(segment.interior)
                order.append(path[0])
                path = path[1:]
                prev = segment.interior[0]
            else:
                path = list(segment.interior)
                prev = segment.delimiters[0]
            arc = 0.0
            for v in path:
                arc += skel.edge_length(prev, v)
                prev = v
                if arc >= self.d - SPACING_EPS:
                    order.append(v)
                    arc = 0.0
        return order

    @property
    def order(self):
        if self._order is None:
            self._order = self._build()
        return self._order

    def next(self):
        if self.position >= len(self.order):
            return None
        v = self.order[self.position]
        self.position += 1
        return v

    def __iter__(self):
        while True:
            v = self.next()
            if v is None:
                return
            yield v


def next_skeleton_vertex(skeleton, d, cursor=None):
    """ Next vertex to plan at, or None once all are emitted

    Returns:
        (vertex or None, cursor); pass the cursor back in for the next call
    """
    if cursor is None:
        cursor = VertexCursor(skeleton, d)
    return cursor.next(), cursor
