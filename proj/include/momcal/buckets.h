// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MOMCAL_BUCKETS_H_
#define MOMCAL_BUCKETS_H_

#include <cmath>
#include <cstdint>
#include <string>

#include "momcal/errors.h"

namespace momcal {

// Euclidean projection onto [0,1].
inline double ProjectUnit(double v) {
  if (!std::isfinite(v)) throw InvalidArgument("ProjectUnit: non-finite input");
  return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

// 1-based bucket of v among m buckets [(i-1)/m, i/m), with 1.0 in bucket m.
inline int BucketIndex(double v, int m) {
  if (m <= 0) throw InvalidArgument("BucketIndex: bucket count must be positive");
  if (!(v >= 0.0 && v <= 1.0)) {
    throw InvalidArgument("BucketIndex: value " + std::to_string(v) + " outside [0,1]");
  }
  // floor(v*m) can round up across a boundary when v*m is inexact; compare
  // against the boundary values directly.
  int i = static_cast<int>(std::floor(v * m));
  if (i >= m) return m;
  if (static_cast<double>(i) / m > v) --i;
  if (i + 1 < m && static_cast<double>(i + 1) / m <= v) ++i;
  return i + 1;
}

// Iteration cap ceil(1/rate^2) - 1 for a projected step size `rate`. The
// small tolerance keeps e.g. rate = 0.1 at 99 despite 1/0.1^2 = 99.999...
inline std::int64_t IterationCap(double rate) {
  if (!(rate > 0.0 && rate <= 1.0)) throw InvalidArgument("IterationCap: rate outside (0,1]");
  return static_cast<std::int64_t>(std::ceil(1.0 / (rate * rate) - 1.0 - 1e-9));
}

}  // namespace momcal

#endif  // MOMCAL_BUCKETS_H_
