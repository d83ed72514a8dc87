# Copyright (c) 2021 Mobvoi Inc. (authors: Binbin Zhang)
#               2026 SkelGrasp Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import contextlib
import os
import tempfile

MESH_SUFFIXES = ('.off', '.obj', '.stl')


def read_lists(list_file):
    lists = []
    with open(list_file, 'r', encoding='utf8') as fin:
        for line in fin:
            line = line.strip()
            if line and not line.startswith('#'):
                lists.append(line)
    return lists


def list_meshes(path):
    """ Mesh files of a benchmark corpus, sorted by name

    Args:
        path: a directory scanned for OFF/OBJ/STL files, or a list file
            with one mesh path per line

    Returns:
        List[str]
    """
    if os.path.isdir(path):
        names = sorted(os.listdir(path))
        return [
            os.path.join(path, name) for name in names
            if name.lower().endswith(MESH_SUFFIXES)
        ]
    return read_lists(path)


@contextlib.contextmanager
def atomic_open(path, mode='w', encoding='utf8'):
    """ Write to a temporary file next to `path` and move it into place
        only when the block finishes without an exception.
    """
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(prefix='.tmp.',
                                    suffix=os.path.basename(path),
                                    dir=directory)
    try:
        if 'b' in mode:
            fout = os.fdopen(fd, mode)
        else:
            fout = os.fdopen(fd, mode, encoding=encoding)
        with fout:
            yield fout
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise


def atomic_write_text(path, text):
    with atomic_open(path, 'w') as fout:
        fout.write(text)


def atomic_write_bytes(path, data):
    with atomic_open(path, 'wb') as fout:
        fout.write(data)


@contextlib.contextmanager
def staged_outputs():
    """ Write a group of output files together: `stage(path)` hands out a
        temporary path next to `path`, and every staged file is moved
        into place only when the block finishes without an exception.
        On failure no output of the group is left behind.
    """
    staged = []

    def stage(path):
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)
        fd, tmp_path = tempfile.mkstemp(prefix='.tmp.',
                                        suffix=os.path.basename(path),
                                        dir=directory)
        os.close(fd)
        staged.append((tmp_path, path))
        return tmp_path

    try:
        yield stage
        for tmp_path, path in staged:
            os.replace(tmp_path, path)
    finally:
        for tmp_path, _ in staged:
            if os.path.exists(tmp_path):
                os.remove(tmp_path)
