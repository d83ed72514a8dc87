# Copyright (c) 2021 Binbin Zhang
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

import dataclasses
import logging
import os

import yaml

from skelgrasp.utils.errors import SkelGraspError
from skelgrasp.utils.file_utils import atomic_write_text


def load_config(path) -> dict:
    if path is None:
        return {}
    if not os.path.exists(path):
        raise SkelGraspError('config file {} not found'.format(path))
    logging.info('Config: loading from %s' % path)
    with open(path, 'r') as fin:
        configs = yaml.load(fin, Loader=yaml.FullLoader)
    return configs or {}


def save_config(configs: dict, path):
    logging.info('Config: save to %s' % path)
    atomic_write_text(path, yaml.dump(configs))


def dataclass_from_dict(cls, conf):
    """ Build the parameter dataclass `cls` from a config section,
        falling back to the dataclass defaults for missing keys.
    """
    conf = conf or {}
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = sorted(set(conf) - names)
    if unknown:
        raise SkelGraspError('unknown keys {} for {}'.format(
            unknown, cls.__name__))
    return cls(**conf)


def override(params, **kwargs):
    """ Replace the fields given as not None, keep the others. """
    changes = {k: v for k, v in kwargs.items() if v is not None}
    return dataclasses.replace(params, **changes)
