#!/usr/bin/env python3
# Copyright 2026 The rforge Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Test adapter: answers ANSWERED requests, then stops responding."""
import json
import sys
import time

answered = int(sys.argv[1])
count = 0
for line in sys.stdin:
    if count == answered:
        time.sleep(60)
    count += 1
    m = {"achieved_bps": 2.0e11, "achieved_pps": 1.0e6,
         "pause_duration_ratio": 0.0, "perf_counters": {}, "diag_counters": {}}
    print(json.dumps({"measurement": m}), flush=True)
