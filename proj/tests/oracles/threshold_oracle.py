# Copyright 2026 The Authors.
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

"""Line-protocol agnostic oracle over one-sided axis thresholds.

Reads one JSON request per line on stdin and writes one JSON predicate per
line on stdout. Used by the oracle tests to exercise the subprocess oracle
against an implementation written independently of the C++ one.

  --garbage   answer every request with a non-JSON line
  --exit      exit on the first request without answering
"""

import json
import sys


def best_threshold(examples):
  """Returns (value, predicate) of the best threshold, or the empty set."""
  best = (0.0, {"none": True})
  total = sum(w * r for w, r, _ in examples)
  if total > best[0]:
    best = (total, {"all": True})
  dim = len(examples[0][2]) if examples else 0
  for c in range(dim):
    values = sorted({x[c] for _, _, x in examples})
    for v in values:
      above = sum(w * r for w, r, x in examples if x[c] >= v)
      below = sum(w * r for w, r, x in examples if x[c] < v)
      if above > best[0]:
        best = (above, {"box": [{"coord": c, "lo": v}]})
      if below > best[0]:
        best = (below, {"box": [{"coord": c, "hi": v}]})
  return best


def main():
  mode = sys.argv[1] if len(sys.argv) > 1 else ""
  for line in sys.stdin:
    if mode == "--exit":
      return
    if mode == "--garbage":
      print("not json", flush=True)
      continue
    request = json.loads(line)
    _, predicate = best_threshold(request["examples"])
    print(json.dumps(predicate), flush=True)


if __name__ == "__main__":
  main()
