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

// Seeded synthetic distributions and group families used by tests and the
// `synth` command. Every generator is deterministic under its seed.
//
// Generators (SyntheticSpec::generator, parameters in SyntheticSpec::params):
//   two_point      x1 = (0.25) with y = 0, x2 = (0.75) with y = 1, each of
//                  mass 1/2. No parameters.
//   finite         random masses and random label laws on a label grid.
//                  points, dim, labels (grid size >= 2).
//   bernoulli      y ~ Bernoulli(q(x)) with q(x) = 0.05 + 0.9 (x_0 + x_1^2)/2
//                  (x_1 = x_0 when dim = 1), so the variance q(1-q) varies
//                  with x. points, dim.
//   beta           y on the grid {0, 1/(L-1), ..., 1} with probabilities
//                  proportional to the Beta(a(x), b(x)) density at the grid
//                  points, a(x) = 1 + 4 x_0, b(x) = 1 + 4 (1 - x_0) x_d
//                  (d = dim - 1). points, dim, labels (L >= 2).
// Feature coordinates are multiples of 1/1000 in [0,1).

#ifndef MOMCAL_SYNTHETIC_H_
#define MOMCAL_SYNTHETIC_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "momcal/types.h"

namespace momcal {

struct SyntheticSpec {
  std::string generator = "bernoulli";
  nlohmann::json params = nlohmann::json::object();

  nlohmann::json ToJson() const;
  static SyntheticSpec FromJson(const nlohmann::json& j);
};

// Throws InvalidArgument on unknown generators or invalid parameters.
FiniteDistribution GenerateSynthetic(const SyntheticSpec& spec, std::uint64_t seed);

FiniteDistribution TwoPointDistribution();
FiniteDistribution RandomFiniteDistribution(int points, int dim, int labels, std::uint64_t seed);
FiniteDistribution BernoulliDistribution(int points, int dim, std::uint64_t seed);
FiniteDistribution BetaGridDistribution(int points, int dim, int labels, std::uint64_t seed);

// q(x) of the bernoulli generator.
double BernoulliRate(const std::vector<double>& x);

// `count` groups: "all" (the whole domain) followed by random boxes named
// g1, g2, ... Each box constrains every coordinate to an interval of length
// at least 0.3, so groups overlap heavily.
GroupFamily RandomBoxFamily(int count, int dim, std::uint64_t seed);

// "all" plus `count - 1` one-sided threshold groups {x_c >= t} / {x_c < t}.
GroupFamily RandomThresholdFamily(int count, int dim, std::uint64_t seed);

// n i.i.d. draws, one example per draw (multiplicity 1).
std::vector<LabeledExample> SampleExamples(const FiniteDistribution& dist, std::uint64_t n,
                                           std::uint64_t seed);

}  // namespace momcal

#endif  // MOMCAL_SYNTHETIC_H_
