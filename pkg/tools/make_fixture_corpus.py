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

import argparse
import logging
import os

from skelgrasp.mesh.fixtures import DEFAULT_SPACING
from skelgrasp.mesh.fixtures import corpus
from skelgrasp.mesh.fixtures import sphere
from skelgrasp.mesh.mesh import save_mesh
from skelgrasp.utils.file_utils import atomic_write_text

if __name__ == '__main__':
    parser = argparse.ArgumentParser(
        description='write the synthetic fixture meshes as OFF files')
    parser.add_argument('out_dir', help='output directory')
    parser.add_argument('--spacing',
                        type=float,
                        default=DEFAULT_SPACING,
                        help='marching cubes grid spacing in mm')
    parser.add_argument('--with_sphere',
                        action='store_true',
                        default=False,
                        help='also write the sphere fixture')
    parser.add_argument('--list_file',
                        default=None,
                        help='also write a list file of the mesh paths')
    args = parser.parse_args()
    logging.basicConfig(level=logging.INFO,
                        format='%(asctime)s %(levelname)s %(message)s')

    meshes = corpus(args.spacing)
    if args.with_sphere:
        meshes.append(sphere(spacing=args.spacing))
    os.makedirs(args.out_dir, exist_ok=True)
    paths = []
    for mesh in meshes:
        path = os.path.join(args.out_dir, mesh.name + '.off')
        save_mesh(mesh, path)
        logging.info('%s: %d vertices, %d triangles', path,
                     mesh.num_vertices, mesh.num_triangles)
        paths.append(path)
    if args.list_file:
        atomic_write_text(args.list_file, '\n'.join(paths) + '\n')
