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
"""Vectorized closest-point queries between points, segments and
triangles. Every function works on stacked inputs of shape (N, 3)."""

import numpy as np

EPS = 1e-12


def _dot(a, b):
    return np.einsum('ij,ij->i', a, b)


def _safe_div(num, den):
    ok = np.abs(den) > EPS
    return np.where(ok, num / np.where(ok, den, 1.0), 0.0)


def closest_point_on_triangle(p, a, b, c):
    """ Closest point to `p` on triangle (a, b, c), Voronoi region walk """
    ab = b - a
    ac = c - a
    ap = p - a
    d1 = _dot(ab, ap)
    d2 = _dot(ac, ap)
    bp = p - b
    d3 = _dot(ab, bp)
    d4 = _dot(ac, bp)
    cp = p - c
    d5 = _dot(ab, cp)
    d6 = _dot(ac, cp)
    vc = d1 * d4 - d3 * d2
    vb = d5 * d2 - d1 * d6
    va = d3 * d6 - d5 * d4

    v_ab = _safe_div(d1, d1 - d3)[:, None]
    w_ac = _safe_div(d2, d2 - d6)[:, None]
    w_bc = _safe_div(d4 - d3, (d4 - d3) + (d5 - d6))[:, None]
    denom = va + vb + vc
    v_in = _safe_div(vb, denom)[:, None]
    w_in = _safe_div(vc, denom)[:, None]

    conditions = [
        ((d1 <= 0) & (d2 <= 0))[:, None],
        ((d3 >= 0) & (d4 <= d3))[:, None],
        ((vc <= 0) & (d1 >= 0) & (d3 <= 0))[:, None],
        ((d6 >= 0) & (d5 <= d6))[:, None],
        ((vb <= 0) & (d2 >= 0) & (d6 <= 0))[:, None],
        ((va <= 0) & ((d4 - d3) >= 0) & ((d5 - d6) >= 0))[:, None],
    ]
    choices = [a, b, a + v_ab * ab, c, a + w_ac * ac, b + w_bc * (c - b)]
    return np.select(conditions, choices, default=a + ab * v_in + ac * w_in)


def closest_points_segment_segment(p1, q1, p2, q2):
    """ Closest points c1 on [p1, q1] and c2 on [p2, q2] """
    d1 = q1 - p1
    d2 = q2 - p2
    r = p1 - p2
    a = _dot(d1, d1)
    e = _dot(d2, d2)
    f = _dot(d2, r)
    c = _dot(d1, r)
    b = _dot(d1, d2)
    denom = a * e - b * b

    s = np.where(denom > 1e-14 * a * e,
                 np.clip(_safe_div(b * f - c * e, denom), 0.0, 1.0), 0.0)
    t = _safe_div(b * s + f, e)
    low = t < 0.0
    high = t > 1.0
    s = np.where(low, np.clip(_safe_div(-c, a), 0.0, 1.0), s)
    s = np.where(high, np.clip(_safe_div(b - c, a), 0.0, 1.0), s)
    t = np.clip(t, 0.0, 1.0)

    # degenerate segments
    a_small = a <= EPS
    e_small = e <= EPS
    s = np.where(a_small, 0.0, s)
    t = np.where(a_small & ~e_small, np.clip(_safe_div(f, e), 0.0, 1.0), t)
    s = np.where(e_small & ~a_small, np.clip(_safe_div(-c, a), 0.0, 1.0), s)
    t = np.where(e_small, 0.0, t)
    return p1 + d1 * s[:, None], p2 + d2 * t[:, None]


def segment_triangle_crossing(p, q, a, b, c):
    """ Whether segment [p, q] passes through triangle (a, b, c)

    Returns:
        (hit, point): bool (N,) and the crossing point (N, 3). Segments
        lying in the triangle plane never count as crossing.
    """
    n = np.cross(b - a, c - a)
    dp = _dot(p - a, n)
    dq = _dot(q - a, n)
    spans = (dp * dq <= 0.0) & (dp != dq)
    t = _safe_div(dp, dp - dq)[:, None]
    x = p + t * (q - p)
    inside = ((_dot(np.cross(b - a, x - a), n) >= 0.0)
              & (_dot(np.cross(c - b, x - b), n) >= 0.0)
              & (_dot(np.cross(a - c, x - c), n) >= 0.0))
    return spans & inside, x


_EDGES = ((0, 1), (1, 2), (2, 0))


def triangle_pair_distance(tri_a, tri_b):
    """ Exact distance between triangles tri_a[i] and tri_b[i]

    Args:
        tri_a, tri_b: (N, 3, 3) vertex coordinates in a common frame

    Returns:
        (distance (N,), point on A (N, 3), point on B (N, 3))
    """
    tri_a = np.asarray(tri_a, dtype=np.float64)
    tri_b = np.asarray(tri_b, dtype=np.float64)
    n = tri_a.shape[0]
    if n == 0:
        empty = np.zeros((0, 3))
        return np.zeros(0), empty, empty

    cand_a = []
    cand_b = []
    for i, j in _EDGES:
        for k, m in _EDGES:
            ca, cb = closest_points_segment_segment(tri_a[:, i], tri_a[:, j],
                                                    tri_b[:, k], tri_b[:, m])
            cand_a.append(ca)
            cand_b.append(cb)
    for i in range(3):
        cb = closest_point_on_triangle(tri_a[:, i], tri_b[:, 0], tri_b[:, 1],
                                       tri_b[:, 2])
        cand_a.append(tri_a[:, i])
        cand_b.append(cb)
        ca = closest_point_on_triangle(tri_b[:, i], tri_a[:, 0], tri_a[:, 1],
                                       tri_a[:, 2])
        cand_a.append(ca)
        cand_b.append(tri_b[:, i])
    cand_a = np.stack(cand_a, axis=1)
    cand_b = np.stack(cand_b, axis=1)
    dist = np.linalg.norm(cand_a - cand_b, axis=2)
    best = np.argmin(dist, axis=1)
    rows = np.arange(n)
    distance = dist[rows, best]
    point_a = cand_a[rows, best]
    point_b = cand_b[rows, best]

    hit = np.zeros(n, dtype=bool)
    hit_point = np.zeros((n, 3))
    for first, second in ((tri_a, tri_b), (tri_b, tri_a)):
        for i, j in _EDGES:
            crossing, x = segment_triangle_crossing(first[:, i], first[:, j],
                                                    second[:, 0],
                                                    second[:, 1],
                                                    second[:, 2])
            new = crossing & ~hit
            hit_point[new] = x[new]
            hit |= crossing
    distance = np.where(hit, 0.0, distance)
    point_a = np.where(hit[:, None], hit_point, point_a)
    point_b = np.where(hit[:, None], hit_point, point_b)
    return distance, point_a, point_b


def triangle_normals(triangles):
    """ Unit normals and areas of (N, 3, 3) triangles """
    cross = np.cross(triangles[:, 1] - triangles[:, 0],
                     triangles[:, 2] - triangles[:, 0])
    norm = np.linalg.norm(cross, axis=1)
    normals = cross / np.where(norm > 0.0, norm, 1.0)[:, None]
    return normals, 0.5 * norm
