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

import os
from concurrent.futures import ThreadPoolExecutor


def default_threads():
    return os.cpu_count() or 1


class Executor:
    """ Thread pool whose `map` hands results back in submission order,
        so output does not depend on the number of workers.
    """

    def __init__(self, threads=None):
        self.threads = threads or default_threads()
        self.pool = None
        self.step = 0

    def __enter__(self):
        if self.threads > 1:
            self.pool = ThreadPoolExecutor(max_workers=self.threads)
        return self

    def __exit__(self, *exc):
        if self.pool is not None:
            self.pool.shutdown(wait=True)
            self.pool = None
        return False

    def map(self, fn, items):
        items = list(items)
        self.step += len(items)
        if self.pool is None or len(items) <= 1:
            return [fn(x) for x in items]
        return list(self.pool.map(fn, items))
