#!/usr/bin/env python3
# Copyright 2026 The factframe Authors.
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

"""Stand-in external SRL tool for the subprocess backend tests.

Every word ending in "ed" is a predicate with the previous word as ARG0.
Sentences containing "FAIL" get an error reply.
"""

import json
import sys

for line in sys.stdin:
    tokens = json.loads(line)["tokens"]
    if "FAIL" in tokens:
        print(json.dumps({"error": "cannot parse"}), flush=True)
        continue
    frames = []
    for i, tok in enumerate(tokens):
        if tok.endswith("ed"):
            args = [{"role": "ARG0", "span": [i - 1, i]}] if i > 0 else []
            frames.append({"predicate": [i, i + 1], "args": args})
    print(json.dumps({"frames": frames}), flush=True)
