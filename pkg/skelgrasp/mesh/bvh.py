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

import numpy as np


class BVH:
    """ Axis-aligned bounding volume hierarchy over a triangle soup.

    Nodes live in flat arrays; a node is a leaf when `left` is -1, its
    triangles are the non-negative entries of `leaf_triangles`.
    """

    def __init__(self, triangles, leaf_size=4):
        triangles = np.asarray(triangles, dtype=np.float64)
        assert triangles.ndim == 3 and triangles.shape[1:] == (3, 3)
        assert triangles.shape[0] > 0, 'empty BVH'
        self.leaf_size = leaf_size
        tri_lo = triangles.min(axis=1)
        tri_hi = triangles.max(axis=1)
        centroids = triangles.mean(axis=1)

        lo, hi, left, right, leaves = [], [], [], [], []

        def new_node():
            lo.append(None)
            hi.append(None)
            left.append(-1)
            right.append(-1)
            leaves.append(None)
            return len(lo) - 1

        stack = [(new_node(), np.arange(triangles.shape[0]))]
        while stack:
            node, idx = stack.pop()
            lo[node] = tri_lo[idx].min(axis=0)
            hi[node] = tri_hi[idx].max(axis=0)
            if idx.size <= leaf_size:
                leaf = np.full(leaf_size, -1, dtype=np.int64)
                leaf[:idx.size] = idx
                leaves[node] = leaf
                continue
            c = centroids[idx]
            axis = int(np.argmax(c.max(axis=0) - c.min(axis=0)))
            idx = idx[np.argsort(c[:, axis], kind='stable')]
            mid = idx.size // 2
            left[node] = new_node()
            right[node] = new_node()
            leaves[node] = np.full(leaf_size, -1, dtype=np.int64)
            stack.append((right[node], idx[mid:]))
            stack.append((left[node], idx[:mid]))

        self.lo = np.array(lo)
        self.hi = np.array(hi)
        self.left = np.array(left, dtype=np.int64)
        self.right = np.array(right, dtype=np.int64)
        self.leaf_triangles = np.stack(leaves)
        self.center = (self.lo + self.hi) / 2.0
        self.half = (self.hi - self.lo) / 2.0
        self.size = self.half.max(axis=1)
        self.tri_lo = tri_lo
        self.tri_hi = tri_hi

    @property
    def num_nodes(self):
        return self.left.shape[0]

    def query_box(self, lo, hi):
        """ Triangles whose bounding box overlaps the box [lo, hi] """
        lo = np.asarray(lo, dtype=np.float64)
        hi = np.asarray(hi, dtype=np.float64)
        nodes = np.zeros(1, dtype=np.int64)
        found = []
        while nodes.size:
            keep = np.all((self.lo[nodes] <= hi) & (self.hi[nodes] >= lo),
                          axis=1)
            nodes = nodes[keep]
            is_leaf = self.left[nodes] < 0
            found.append(self.leaf_triangles[nodes[is_leaf]].ravel())
            inner = nodes[~is_leaf]
            nodes = np.concatenate([self.left[inner], self.right[inner]])
        tris = np.concatenate(found)
        tris = tris[tris >= 0]
        ok = np.all((self.tri_lo[tris] <= hi) & (self.tri_hi[tris] >= lo),
                    axis=1)
        return np.sort(tris[ok])

    def overlap_pairs(self, other, rotation, translation, margin=0.0):
        """ Leaf pairs of `self` and `other` whose boxes come closer than
            `margin`, `other` being mapped into this frame by
            x -> rotation @ x + translation.

        Returns:
            (triangles of self, triangles of other): int arrays of the
            candidate triangle pairs
        """
        rotation = np.asarray(rotation, dtype=np.float64)
        translation = np.asarray(translation, dtype=np.float64)
        other_center = other.center @ rotation.T + translation
        other_half = other.half @ np.abs(rotation).T

        ia = np.zeros(1, dtype=np.int64)
        ib = np.zeros(1, dtype=np.int64)
        out_a, out_b = [], []
        while ia.size:
            gap = (np.abs(self.center[ia] - other_center[ib]) -
                   (self.half[ia] + other_half[ib]))
            keep = np.all(gap <= margin, axis=1)
            ia = ia[keep]
            ib = ib[keep]
            leaf_a = self.left[ia] < 0
            leaf_b = other.left[ib] < 0
            both = leaf_a & leaf_b
            out_a.append(ia[both])
            out_b.append(ib[both])
            ia, ib = ia[~both], ib[~both]
            leaf_a, leaf_b = leaf_a[~both], leaf_b[~both]
            split_a = ~leaf_a & (leaf_b | (self.size[ia] >= other.size[ib]))
            sa, ka = ia[split_a], ia[~split_a]
            sb, kb = ib[split_a], ib[~split_a]
            ia = np.concatenate([self.left[sa], self.right[sa], ka, ka])
            ib = np.concatenate([sb, sb, other.left[kb], other.right[kb]])

        la = np.concatenate(out_a)
        lb = np.concatenate(out_b)
        n = self.leaf_size
        m = other.leaf_size
        ta = np.repeat(self.leaf_triangles[la], m, axis=1)
        tb = np.tile(other.leaf_triangles[lb], (1, n))
        valid = (ta >= 0) & (tb >= 0)
        return ta[valid], tb[valid]

    def leaf_box_gap(self, other, rotation, translation, cutoff):
        """ Lower bound of the distance between the two triangle sets,
            capped at `cutoff`.
        """
        rotation = np.asarray(rotation, dtype=np.float64)
        translation = np.asarray(translation, dtype=np.float64)
        other_center = other.center @ rotation.T + translation
        other_half = other.half @ np.abs(rotation).T

        best = cutoff
        ia = np.zeros(1, dtype=np.int64)
        ib = np.zeros(1, dtype=np.int64)
        while ia.size:
            gap = np.maximum(
                np.abs(self.center[ia] - other_center[ib]) -
                (self.half[ia] + other_half[ib]), 0.0)
            dist = np.linalg.norm(gap, axis=1)
            keep = dist < best
            ia, ib, dist = ia[keep], ib[keep], dist[keep]
            leaf_a = self.left[ia] < 0
            leaf_b = other.left[ib] < 0
            both = leaf_a & leaf_b
            if np.any(both):
                best = min(best, float(dist[both].min()))
            ia, ib = ia[~both], ib[~both]
            leaf_a, leaf_b = leaf_a[~both], leaf_b[~both]
            split_a = ~leaf_a & (leaf_b | (self.size[ia] >= other.size[ib]))
            sa, ka = ia[split_a], ia[~split_a]
            sb, kb = ib[split_a], ib[~split_a]
            ia = np.concatenate([self.left[sa], self.right[sa], ka, ka])
            ib = np.concatenate([sb, sb, other.left[kb], other.right[kb]])
        return best
