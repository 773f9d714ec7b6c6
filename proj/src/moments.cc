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

#include "momcal/moments.h"

#include <algorithm>
#include <cmath>

#include "momcal/errors.h"

namespace momcal {

namespace {

constexpr double kMomentTolerance = 1e-12;

}  // namespace

std::optional<SetMoments> TrueMeanAndMoments(const FiniteDistribution& dist,
                                             const std::function<bool(size_t)>& member, int k,
                                             bool absolute) {
  if (k < 2) throw InvalidArgument("moment degree k must be at least 2");
  SetMoments out;
  double weighted_label = 0.0;
  for (size_t p = 0; p < dist.size(); ++p) {
    if (!member(p)) continue;
    out.mass += dist[p].mass;
    weighted_label += dist[p].mass * dist[p].ConditionalMean();
  }
  if (!(out.mass > 0.0)) return std::nullopt;
  out.mean = weighted_label / out.mass;
  out.moments.assign(static_cast<size_t>(k - 1), 0.0);
  for (size_t p = 0; p < dist.size(); ++p) {
    if (!member(p)) continue;
    for (int a = 2; a <= k; ++a) {
      out.moments[a - 2] += dist[p].mass * dist[p].ConditionalCentralMoment(out.mean, a, absolute);
    }
  }
  for (double& m : out.moments) m /= out.mass;
  return out;
}

std::optional<SetMoments> TrueMeanAndMoments(const FiniteDistribution& dist,
                                             const Predicate& member, int k, bool absolute) {
  return TrueMeanAndMoments(
      dist, [&](size_t p) { return member.Contains(dist[p].features.values); }, k, absolute);
}

double Binomial(int n, int r) {
  if (r < 0 || r > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return std::round(c);
}

double MixtureMoment(const std::vector<MixtureComponent>& components, int k) {
  if (k < 0) throw InvalidArgument("mixture moment degree must be non-negative");
  if (components.empty()) throw InvalidArgument("mixture needs at least one component");
  double total_weight = 0.0;
  double mu = 0.0;
  for (const MixtureComponent& c : components) {
    if (!(c.weight >= 0.0)) throw InvalidArgument("mixture weight must be non-negative");
    if (c.moments.size() < static_cast<size_t>(k) + 1 || c.moments.size() < 2) {
      throw InvalidArgument("component needs central moments m_0..m_k");
    }
    if (std::abs(c.moments[0] - 1.0) > kMomentTolerance ||
        std::abs(c.moments[1]) > kMomentTolerance) {
      throw InvalidArgument("component central moments need m_0 = 1 and m_1 = 0");
    }
    total_weight += c.weight;
    mu += c.weight * c.mean;
  }
  if (std::abs(total_weight - 1.0) > kMomentTolerance * static_cast<double>(components.size())) {
    throw InvalidArgument("mixture weights must sum to 1");
  }
  // With a common mean the shifts must be exactly zero, which the weighted
  // sum above only achieves up to rounding.
  const bool common_mean = std::all_of(components.begin(), components.end(), [&](const auto& c) {
    return c.mean == components.front().mean;
  });
  if (common_mean) mu = components.front().mean;
  double m = 0.0;
  for (const MixtureComponent& c : components) {
    const double shift = c.mean - mu;
    double inner = 0.0;
    for (int a = 0; a <= k; ++a) inner += Binomial(k, a) * std::pow(shift, k - a) * c.moments[a];
    m += c.weight * inner;
  }
  return m;
}

}  // namespace momcal
