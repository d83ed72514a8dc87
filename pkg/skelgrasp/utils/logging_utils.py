# Copyright (c) 2026 SkelGrasp Authors
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

import json
import logging

# attributes every LogRecord has; anything else came in through `extra=`
_RECORD_KEYS = set(vars(logging.makeLogRecord({}))) | {'message', 'asctime'}


class JsonFormatter(logging.Formatter):

    def format(self, record):
        obj = {
            'time': self.formatTime(record),
            'level': record.levelname,
            'message': record.getMessage(),
        }
        for key, value in vars(record).items():
            if key not in _RECORD_KEYS:
                obj[key] = value
        if record.exc_info:
            obj['exception'] = self.formatException(record.exc_info)
        return json.dumps(obj, default=str)


def init_logging(level='INFO', json_log=False):
    handler = logging.StreamHandler()
    if json_log:
        handler.setFormatter(JsonFormatter())
    else:
        handler.setFormatter(
            logging.Formatter('%(asctime)s %(levelname)s %(message)s'))
    root = logging.getLogger()
    for old in list(root.handlers):
        root.removeHandler(old)
    root.addHandler(handler)
    root.setLevel(getattr(logging, str(level).upper(), logging.INFO))


def progress_enabled():
    """ tqdm bars are noise when records go out as JSON """
    for handler in logging.getLogger().handlers:
        if isinstance(handler.formatter, JsonFormatter):
            return False
    return True
