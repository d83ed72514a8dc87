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

import heapq
import logging
import math

import networkx as nx
import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from skelgrasp.skeleton.contraction import ContractionParams
from skelgrasp.skeleton.contraction import contract
from skelgrasp.skeleton.segmentation import classify_vertices
from skelgrasp.skeleton.types import Skeleton
from skelgrasp.skeleton.types import SkeletonVertex
from skelgrasp.utils.errors import MeshError


def collapse_edges(points, faces):
    """ Greedy shortest-edge collapse of a contracted mesh into a graph

    Only edges still bordering a triangle are collapsed, shortest first
    with ties broken by vertex index, until no triangle is left. The
    surviving vertex sits at the count-weighted mean of the merged ones
    and inherits their surface points.

    Returns:
        nx.Graph, nodes carry 'pos' and 'points'
    """
    n = points.shape[0]
    pos = np.array(points, dtype=np.float64)
    weight = np.ones(n)
    members = [[i] for i in range(n)]
    alive = np.ones(n, dtype=bool)
    nbrs = [set() for _ in range(n)]
    vertex_faces = [set() for _ in range(n)]
    face_of_key = {}
    key_of_face = {}
    for f, tri in enumerate(faces):
        key = tuple(sorted(int(v) for v in tri))
        if key in face_of_key:
            continue
        face_of_key[key] = f
        key_of_face[f] = key
        a, b, c = key
        for v in key:
            vertex_faces[v].add(f)
        nbrs[a].update((b, c))
        nbrs[b].update((a, c))
        nbrs[c].update((a, b))

    def on_face(u, v):
        return any(v in key_of_face[f] for f in vertex_faces[u])

    def length(u, v):
        return float(np.linalg.norm(pos[u] - pos[v]))

    heap = [(length(u, v), u, v) for u in range(n) for v in nbrs[u] if u < v]
    heapq.heapify(heap)
    while heap:
        dist, u, v = heapq.heappop(heap)
        if not (alive[u] and alive[v]) or v not in nbrs[u]:
            continue
        current = length(u, v)
        if current != dist:
            heapq.heappush(heap, (current, u, v))
            continue
        if not on_face(u, v):
            continue
        keep, drop = u, v
        total = weight[keep] + weight[drop]
        pos[keep] = (weight[keep] * pos[keep] + weight[drop] * pos[drop]) / total
        weight[keep] = total
        members[keep].extend(members[drop])
        members[drop] = []

        for f in sorted(vertex_faces[drop]):
            key = key_of_face.pop(f)
            del face_of_key[key]
            for w in key:
                vertex_faces[w].discard(f)
            if keep in key:
                continue
            new_key = tuple(sorted(keep if w == drop else w for w in key))
            if new_key in face_of_key:
                continue
            face_of_key[new_key] = f
            key_of_face[f] = new_key
            for w in new_key:
                vertex_faces[w].add(f)

        for w in nbrs[drop]:
            nbrs[w].discard(drop)
            if w != keep:
                nbrs[w].add(keep)
                nbrs[keep].add(w)
        nbrs[drop] = set()
        alive[drop] = False
        for w in sorted(nbrs[keep]):
            if on_face(keep, w):
                a, b = min(keep, w), max(keep, w)
                heapq.heappush(heap, (length(a, b), a, b))
    assert not key_of_face, 'edge collapse left triangles behind'

    graph = nx.Graph()
    for v in np.flatnonzero(alive):
        graph.add_node(int(v), pos=pos[v].copy(), points=sorted(members[v]))
    for v in graph.nodes:
        for w in nbrs[v]:
            if v < w:
                graph.add_edge(v, w)
    return graph


class _Cleaner:
    """ Topology and sampling clean-up of the collapsed curve graph """

    def __init__(self, graph, mesh, edge_length, spur_radius_factor):
        self.g = graph
        self.mesh = mesh
        self.surface = np.asarray(mesh.vertices)
        self.edge_length = edge_length
        self.spur_radius_factor = spur_radius_factor
        self.next_id = max(graph.nodes) + 1

    def pos(self, v):
        return self.g.nodes[v]['pos']

    def dist(self, a, b):
        return float(np.linalg.norm(self.pos(a) - self.pos(b)))

    def radius(self, v):
        points = self.g.nodes[v]['points']
        if not points:
            return 0.0
        return float(
            np.linalg.norm(self.surface[points] - self.pos(v), axis=1).mean())

    def merge(self, src, dst, move):
        """ Fold node `src` into `dst` keeping its surface points """
        nodes = self.g.nodes
        if move:
            ws = max(len(nodes[src]['points']), 1)
            wd = max(len(nodes[dst]['points']), 1)
            nodes[dst]['pos'] = (ws * nodes[src]['pos'] +
                                 wd * nodes[dst]['pos']) / (ws + wd)
        nodes[dst]['points'] = sorted(nodes[dst]['points'] +
                                      nodes[src]['points'])
        for w in list(self.g.neighbors(src)):
            if w != dst:
                self.g.add_edge(dst, w)
        self.g.remove_node(src)

    def remove_loops(self):
        changed = True
        while changed:
            changed = False
            for cycle in sorted(nx.cycle_basis(self.g), key=min):
                perimeter = sum(
                    self.dist(a, b)
                    for a, b in zip(cycle, cycle[1:] + cycle[:1]))
                radius = np.mean([self.radius(v) for v in cycle])
                if perimeter < max(2.0 * math.pi * radius, self.edge_length):
                    target = min(cycle)
                    for v in sorted(cycle):
                        if v != target:
                            self.merge(v, target, move=True)
                    changed = True
                    break

    def walk(self, start, first):
        """ Follow degree-2 nodes from `start` through `first`; a cycle
            back to `start` ends the path with `start` again.
        """
        path = [start, first]
        while self.g.degree(path[-1]) == 2:
            nxt = [w for w in self.g.neighbors(path[-1]) if w != path[-2]]
            path.append(nxt[0])
            if nxt[0] == start:
                break
        return path

    def path_length(self, path):
        return sum(self.dist(a, b) for a, b in zip(path, path[1:]))

    def prune_spurs(self):
        changed = False
        while True:
            best = None
            for end in sorted(v for v in self.g if self.g.degree(v) == 1):
                path = self.walk(end, next(iter(self.g.neighbors(end))))
                junction = path[-1]
                if self.g.degree(junction) < 3:
                    continue
                length = self.path_length(path)
                limit = max(self.edge_length,
                            self.spur_radius_factor * self.radius(junction))
                if length < limit and (best is None or length < best[0]):
                    best = (length, path)
            if best is None:
                return changed
            path = best[1]
            for v in path[:-1]:
                self.merge(v, path[-1], move=False)
            changed = True

    def merge_junctions(self):
        for v in sorted(self.g):
            if v not in self.g or self.g.degree(v) < 3:
                continue
            for w in sorted(self.g.neighbors(v)):
                path = self.walk(v, w)
                other = path[-1]
                if other == v or self.g.degree(other) < 3:
                    continue
                limit = max(self.edge_length, self.radius(v),
                            self.radius(other))
                if self.path_length(path) < limit:
                    for u in path[1:-1]:
                        self.merge(u, v, move=False)
                    self.merge(other, v, move=True)
                    return True
        return False

    def chains(self):
        """ Node paths between delimiters plus closed degree-2 cycles """
        seen = set()
        result = []
        for v in sorted(self.g):
            if self.g.degree(v) == 2:
                continue
            for w in sorted(self.g.neighbors(v)):
                if frozenset((v, w)) in seen:
                    continue
                path = self.walk(v, w)
                seen.update(frozenset(e) for e in zip(path, path[1:]))
                result.append((path, False))
        for v in sorted(self.g):
            for w in sorted(self.g.neighbors(v)):
                if frozenset((v, w)) in seen:
                    continue
                path = self.walk(v, w)
                seen.update(frozenset(e) for e in zip(path, path[1:]))
                result.append((path, True))
        return result

    def resample(self):
        """ Re-space every chain evenly along its polyline, no gap longer
            than the edge length. Surface points move to the nearest new
            sample by arc length.
        """
        for path, closed in self.chains():
            pts = np.stack([self.pos(v) for v in path])
            seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
            arc = np.concatenate([[0.0], np.cumsum(seg)])
            total = arc[-1]
            count = max(1, int(math.ceil(total / self.edge_length - 1e-9)))
            if closed or path[0] == path[-1]:
                count = max(count, 3)
            step = total / count if total > 0.0 else 0.0
            nodes = self.g.nodes
            head, tail = path[0], path[-1]
            samples = [head]
            for k in range(1, count):
                t = k * step
                p = np.array([np.interp(t, arc, pts[:, i]) for i in range(3)])
                samples.append(self.next_id)
                self.g.add_node(self.next_id, pos=p, points=[])
                self.next_id += 1
            samples.append(tail)
            owner_points = {s: [] for s in samples}
            for v, t in zip(path[1:-1], arc[1:-1]):
                k = int(round(t / step)) if step > 0.0 else 0
                owner_points[samples[min(max(k, 0), count)]].extend(
                    nodes[v]['points'])
                self.g.remove_node(v)
            if self.g.has_edge(head, tail) and not closed and len(path) == 2:
                self.g.remove_edge(head, tail)
            for s in samples:
                if owner_points[s]:
                    nodes[s]['points'] = sorted(nodes[s]['points'] +
                                                owner_points[s])
            for a, b in zip(samples, samples[1:]):
                if a != b:
                    self.g.add_edge(a, b)

    def repair_outside(self):
        nodes = sorted(self.g)
        inside = self.mesh.contains(np.stack([self.pos(v) for v in nodes]))
        moved = 0
        for v, ok in zip(nodes, inside):
            points = self.g.nodes[v]['points']
            if ok or not points:
                continue
            self.g.nodes[v]['pos'] = self.surface[points].mean(axis=0)
            moved += 1
        if moved:
            logging.debug('moved %d skeleton points back inside', moved)

    def split_long_edges(self):
        """ Subdivide edges that a moved node stretched past the edge
            length; the inserted nodes own no surface points.
        """
        split = 0
        for a, b in sorted(self.g.edges):
            gap = self.dist(a, b)
            count = int(math.ceil(gap / self.edge_length - 1e-9))
            if count < 2:
                continue
            pa, pb = self.pos(a), self.pos(b)
            self.g.remove_edge(a, b)
            prev = a
            for k in range(1, count):
                self.g.add_node(self.next_id,
                                pos=pa + (pb - pa) * (k / count),
                                points=[])
                self.g.add_edge(prev, self.next_id)
                prev = self.next_id
                self.next_id += 1
            self.g.add_edge(prev, b)
            split += 1
        if split:
            logging.debug('split %d stretched skeleton edges', split)

    def run(self):
        self.remove_loops()
        while self.prune_spurs() | self.merge_junctions():
            self.remove_loops()
        self.repair_outside()
        self.resample()
        self.repair_outside()
        self.split_long_edges()
        return self.g


def minimal_skeleton(mesh, edge_length):
    """ Two vertices along the largest principal axis through the centre,
        surface points split by the mid plane.
    """
    surface = np.asarray(mesh.vertices)
    center = surface.mean(axis=0)
    _, _, vt = np.linalg.svd(surface - center, full_matrices=False)
    axis = vt[0]
    if axis[np.argmax(np.abs(axis))] < 0.0:
        axis = -axis
    side = (surface - center) @ axis >= 0.0
    index = np.arange(surface.shape[0], dtype=np.int64)
    vertices = (
        SkeletonVertex(center - 0.5 * edge_length * axis, index[~side]),
        SkeletonVertex(center + 0.5 * edge_length * axis, index[side]),
    )
    return Skeleton(vertices, ((0, 1), ), surface.shape[0])


def _check_input(mesh):
    if not mesh.is_watertight:
        raise MeshError('mesh {} is not watertight, {} open edges'.format(
            mesh.name, mesh.open_edges.shape[0]),
                        open_edges=mesh.open_edges.tolist())
    edges = mesh.edges
    graph = coo_matrix((np.ones(edges.shape[0]), (edges[:, 0], edges[:, 1])),
                       shape=(mesh.num_vertices, ) * 2)
    count, _ = connected_components(graph, directed=False)
    if count != 1:
        raise MeshError('mesh {} has {} connected components'.format(
            mesh.name, count))


def skeletonize(mesh, params=None):
    """ Curve skeleton of a closed mesh with every mesh vertex assigned
        to exactly one skeleton vertex.

    Args:
        mesh: watertight, connected Mesh
        params: ContractionParams

    Returns:
        Skeleton with vertex kinds filled in
    """
    if params is None:
        params = ContractionParams()
    _check_input(mesh)
    edge_length = params.edge_length(mesh)
    contracted, iterations = contract(mesh, params)
    extent = contracted.max(axis=0) - contracted.min(axis=0)
    if extent.max() < edge_length:
        logging.info('%s contracted to a point, minimal skeleton', mesh.name)
        return classify_vertices(minimal_skeleton(mesh, edge_length))

    graph = collapse_edges(contracted, mesh.triangles)
    logging.debug('%s: %d contraction iterations, %d curve nodes', mesh.name,
                  iterations, graph.number_of_nodes())
    graph = _Cleaner(graph, mesh, edge_length,
                     params.spur_radius_factor).run()
    if graph.number_of_nodes() < 2:
        logging.info('%s collapsed to a single node, minimal skeleton',
                     mesh.name)
        return classify_vertices(minimal_skeleton(mesh, edge_length))

    order = sorted(graph.nodes)
    index = {v: i for i, v in enumerate(order)}
    vertices = tuple(
        SkeletonVertex(graph.nodes[v]['pos'],
                       np.asarray(graph.nodes[v]['points'], dtype=np.int64))
        for v in order)
    edges = tuple((index[a], index[b]) for a, b in graph.edges)
    skeleton = classify_vertices(Skeleton(vertices, edges, mesh.num_vertices))
    skeleton.validate()
    logging.info('%s: skeleton with %d vertices, %d edges', mesh.name,
                 len(skeleton), len(skeleton.edges))
    return skeleton
