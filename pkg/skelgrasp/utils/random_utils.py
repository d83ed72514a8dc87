# Copyright (c) 2021 Jingyong Hou (houjingyong@gmail.com)
#               2026 SkelGrasp Authors
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

import hashlib
import random

import numpy as np


def set_manual_seed(seed):
    np.random.seed(seed)
    random.seed(seed)


def derive_rng(seed, *keys):
    """ A numpy Generator that depends only on `seed` and the `keys`,
        so every object or grasp gets a stream of its own whatever the
        processing order is.
    """
    text = '/'.join([str(seed)] + [str(k) for k in keys])
    digest = hashlib.sha256(text.encode('utf8')).digest()
    return np.random.default_rng(int.from_bytes(digest[:8], 'little'))
