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

"""Standalone reimplementation of exact-mode alternating descent.

Written from the algorithm description only (no shared code with the C++
library) and run on the small fixed instance below; the C++ test
exact_trainer_test freezes the printed update counts and final predictions.
Run: python3 tests/oracles/exact_reference.py
"""

import json
import math

# (x, mass, [(label, prob), ...])
SUPPORT = [
    (0.05, 0.10, [(0.0, 0.7), (1.0, 0.3)]),
    (0.20, 0.15, [(0.2, 0.5), (0.9, 0.5)]),
    (0.35, 0.20, [(0.5, 1.0)]),
    (0.50, 0.10, [(0.0, 0.4), (0.6, 0.3), (1.0, 0.3)]),
    (0.70, 0.25, [(0.8, 0.9), (0.1, 0.1)]),
    (0.90, 0.20, [(1.0, 0.6), (0.4, 0.4)]),
]
# name, lo (inclusive), hi (exclusive)
GROUPS = [("all", -math.inf, math.inf), ("low", 0.0, 0.5), ("high", 0.3, 1.0)]
M = 5
ALPHA = 0.1
BETA = 0.1
DEGREES = [2, 4]


def bucket(v, m):
  i = int(math.floor(v * m))
  if i >= m:
    return m
  if i / m > v:
    i -= 1
  if i + 1 < m and (i + 1) / m <= v:
    i += 1
  return i + 1


def project(v):
  return min(1.0, max(0.0, v))


def cap(rate):
  return math.ceil(1.0 / (rate * rate) - 1.0 - 1e-9)


def in_group(g, x):
  _, lo, hi = GROUPS[g]
  return lo <= x < hi


def cells_of(p, state, mean_cells, degrees):
  """Cells containing point p in canonical order."""
  mu = state[p]["mean"]
  i = bucket(mu, M)
  out = []
  for g in range(len(GROUPS)):
    if not in_group(g, SUPPORT[p][0]):
      continue
    if mean_cells:
      out.append((g, 0, 0, i, 0))
    for a in degrees:
      out.append((g, 1, a, i, bucket(state[p][a], M)))
  return out


def first_violation(state, slot, observed, mean_cells, degrees, rate):
  sums = {}
  for p in range(len(SUPPORT)):
    pred = state[p][slot]
    for key in cells_of(p, state, mean_cells, degrees):
      w, pr, ob = sums.get(key, (0.0, 0.0, 0.0))
      mass = SUPPORT[p][1]
      sums[key] = (w + mass, pr + mass * pred, ob + mass * observed[p])
  for key in sorted(sums):
    w, pr, ob = sums[key]
    if w > 0 and abs(pr - ob) >= rate:
      return key, pr - ob
  return None


def apply(state, key, slot, step):
  g, has_moment, a, i, j = key
  for p in range(len(SUPPORT)):
    if not in_group(g, SUPPORT[p][0]):
      continue
    if bucket(state[p]["mean"], M) != i:
      continue
    if has_moment and bucket(state[p][a], M) != j:
      continue
    state[p][slot] = project(state[p][slot] - step)


def central(law, center, a):
  return sum(prob * (y - center) ** a for y, prob in law)


def main():
  state = [dict([("mean", 0.0)] + [(a, 0.0) for a in DEGREES]) for _ in SUPPORT]
  means = [sum(prob * y for y, prob in law) for _, _, law in SUPPORT]
  outer = 0
  per_degree = {a: 0 for a in DEGREES}
  while True:
    v = first_violation(state, "mean", means, True, DEGREES, ALPHA)
    if v is None:
      break
    assert outer < cap(ALPHA)
    key, diff = v
    apply(state, key, "mean", ALPHA * (1 if diff > 0 else -1))
    outer += 1
    for a in DEGREES:
      labels = [central(law, state[p]["mean"], a) for p, (_, _, law) in enumerate(SUPPORT)]
      steps = 0
      while True:
        w = first_violation(state, a, labels, False, [a], BETA)
        if w is None:
          break
        assert steps < cap(BETA)
        key, diff = w
        apply(state, key, a, BETA * (1 if diff > 0 else -1))
        steps += 1
      per_degree[a] += steps
  print(json.dumps({
      "outer": outer,
      "per_degree": per_degree,
      "final": [[repr(s["mean"])] + [repr(s[a]) for a in DEGREES] for s in state],
  }, indent=1))


if __name__ == "__main__":
  main()
