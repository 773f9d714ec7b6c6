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

#include "momcal/synthetic.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "momcal/errors.h"

namespace momcal {

using nlohmann::json;

namespace {

std::mt19937_64 SeededEngine(std::uint64_t seed, std::uint32_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    salt};
  return std::mt19937_64(seq);
}

void CheckShape(int points, int dim) {
  if (points <= 0) throw InvalidArgument("synthetic support size must be positive");
  if (dim <= 0) throw InvalidArgument("synthetic dimension must be positive");
}

// Random support features on the 1/1000 grid plus normalized random masses
// bounded away from zero.
std::vector<SupportPoint> RandomSupport(int points, int dim, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coord(0, 999);
  std::uniform_real_distribution<double> weight(0.5, 1.5);
  std::vector<SupportPoint> support(static_cast<size_t>(points));
  double total = 0.0;
  for (int p = 0; p < points; ++p) {
    SupportPoint& s = support[static_cast<size_t>(p)];
    s.features.id = "x" + std::to_string(p);
    for (int c = 0; c < dim; ++c) s.features.values.push_back(coord(rng) / 1000.0);
    s.mass = weight(rng);
    total += s.mass;
  }
  for (SupportPoint& s : support) s.mass /= total;
  return support;
}

std::vector<double> LabelGrid(int labels) {
  std::vector<double> grid;
  for (int l = 0; l < labels; ++l) grid.push_back(static_cast<double>(l) / (labels - 1));
  return grid;
}

int IntParam(const json& params, const char* name, int fallback) {
  const json::const_iterator it = params.find(name);
  if (it == params.end()) return fallback;
  if (!it->is_number_integer()) {
    throw InvalidArgument(std::string("synthetic parameter '") + name + "' must be an integer");
  }
  return it->get<int>();
}

}  // namespace

json SyntheticSpec::ToJson() const { return {{"generator", generator}, {"params", params}}; }

SyntheticSpec SyntheticSpec::FromJson(const json& j) {
  if (!j.is_object() || !j.contains("generator") || !j["generator"].is_string()) {
    throw InvalidArgument("synthetic spec needs a string 'generator'");
  }
  SyntheticSpec spec;
  spec.generator = j["generator"].get<std::string>();
  spec.params = j.value("params", json::object());
  if (!spec.params.is_object()) throw InvalidArgument("synthetic 'params' must be an object");
  return spec;
}

FiniteDistribution GenerateSynthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  const json& p = spec.params;
  if (spec.generator == "two_point") return TwoPointDistribution();
  if (spec.generator == "finite") {
    return RandomFiniteDistribution(IntParam(p, "points", 40), IntParam(p, "dim", 2),
                                    IntParam(p, "labels", 5), seed);
  }
  if (spec.generator == "bernoulli") {
    return BernoulliDistribution(IntParam(p, "points", 40), IntParam(p, "dim", 2), seed);
  }
  if (spec.generator == "beta") {
    return BetaGridDistribution(IntParam(p, "points", 40), IntParam(p, "dim", 2),
                                IntParam(p, "labels", 11), seed);
  }
  throw InvalidArgument("unknown synthetic generator '" + spec.generator +
                        "' (expected two_point, finite, bernoulli or beta)");
}

FiniteDistribution TwoPointDistribution() {
  std::vector<SupportPoint> support(2);
  support[0].features = FeatureVector{"x1", {0.25}};
  support[0].mass = 0.5;
  support[0].label_law = {LabelOutcome{0.0, 1.0}};
  support[1].features = FeatureVector{"x2", {0.75}};
  support[1].mass = 0.5;
  support[1].label_law = {LabelOutcome{1.0, 1.0}};
  return FiniteDistribution(std::move(support));
}

FiniteDistribution RandomFiniteDistribution(int points, int dim, int labels, std::uint64_t seed) {
  CheckShape(points, dim);
  if (labels < 2) throw InvalidArgument("finite generator needs at least 2 labels");
  std::mt19937_64 rng = SeededEngine(seed, 1);
  std::vector<SupportPoint> support = RandomSupport(points, dim, rng);
  const std::vector<double> grid = LabelGrid(labels);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (SupportPoint& s : support) {
    // Sparse random laws: each grid label is kept with probability 1/2.
    std::vector<double> w(grid.size(), 0.0);
    double total = 0.0;
    for (size_t l = 0; l < grid.size(); ++l) {
      if (u(rng) < 0.5) continue;
      w[l] = 0.1 + u(rng);
      total += w[l];
    }
    if (total == 0.0) {
      w[static_cast<size_t>(rng() % grid.size())] = 1.0;
      total = 1.0;
    }
    for (size_t l = 0; l < grid.size(); ++l) {
      if (w[l] > 0.0) s.label_law.push_back(LabelOutcome{grid[l], w[l] / total});
    }
  }
  return FiniteDistribution(std::move(support));
}

double BernoulliRate(const std::vector<double>& x) {
  const double x1 = x.size() > 1 ? x[1] : x[0];
  return 0.05 + 0.9 * (x[0] + x1 * x1) / 2.0;
}

FiniteDistribution BernoulliDistribution(int points, int dim, std::uint64_t seed) {
  CheckShape(points, dim);
  std::mt19937_64 rng = SeededEngine(seed, 2);
  std::vector<SupportPoint> support = RandomSupport(points, dim, rng);
  for (SupportPoint& s : support) {
    const double q = BernoulliRate(s.features.values);
    s.label_law = {LabelOutcome{0.0, 1.0 - q}, LabelOutcome{1.0, q}};
  }
  return FiniteDistribution(std::move(support));
}

FiniteDistribution BetaGridDistribution(int points, int dim, int labels, std::uint64_t seed) {
  CheckShape(points, dim);
  if (labels < 2) throw InvalidArgument("beta generator needs at least 2 labels");
  std::mt19937_64 rng = SeededEngine(seed, 3);
  std::vector<SupportPoint> support = RandomSupport(points, dim, rng);
  const std::vector<double> grid = LabelGrid(labels);
  for (SupportPoint& s : support) {
    const std::vector<double>& x = s.features.values;
    const double a = 1.0 + 4.0 * x[0];
    const double b = 1.0 + 4.0 * (1.0 - x[0]) * x[x.size() - 1];
    // Density at interior grid points; the end points use half a step
    // inward so that a, b >= 1 never yield an infinite weight.
    const double half = 0.5 / (labels - 1);
    std::vector<double> w(grid.size());
    double total = 0.0;
    for (size_t l = 0; l < grid.size(); ++l) {
      const double t = std::clamp(grid[l], half, 1.0 - half);
      w[l] = std::pow(t, a - 1.0) * std::pow(1.0 - t, b - 1.0);
      total += w[l];
    }
    for (size_t l = 0; l < grid.size(); ++l) {
      s.label_law.push_back(LabelOutcome{grid[l], w[l] / total});
    }
  }
  return FiniteDistribution(std::move(support));
}

GroupFamily RandomBoxFamily(int count, int dim, std::uint64_t seed) {
  if (count <= 0) throw InvalidArgument("group count must be positive");
  if (dim <= 0) throw InvalidArgument("dimension must be positive");
  std::mt19937_64 rng = SeededEngine(seed, 4);
  std::uniform_real_distribution<double> length(0.3, 0.9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<GroupFamily::Group> groups;
  groups.push_back({"all", Predicate::All()});
  for (int g = 1; g < count; ++g) {
    std::vector<BoxConstraint> box;
    for (int c = 0; c < dim; ++c) {
      const double len = std::round(length(rng) * 100.0) / 100.0;
      const double lo = std::round(u(rng) * (1.0 - len) * 100.0) / 100.0;
      box.push_back(BoxConstraint{c, lo, lo + len});
    }
    groups.push_back({"g" + std::to_string(g), Predicate::Box(std::move(box))});
  }
  return GroupFamily(std::move(groups));
}

GroupFamily RandomThresholdFamily(int count, int dim, std::uint64_t seed) {
  if (count <= 0) throw InvalidArgument("group count must be positive");
  if (dim <= 0) throw InvalidArgument("dimension must be positive");
  std::mt19937_64 rng = SeededEngine(seed, 5);
  std::uniform_int_distribution<int> coord(0, dim - 1);
  std::uniform_int_distribution<int> cut(2, 8);
  std::vector<GroupFamily::Group> groups;
  groups.push_back({"all", Predicate::All()});
  for (int g = 1; g < count; ++g) {
    const int c = coord(rng);
    const double t = cut(rng) / 10.0;
    BoxConstraint b{c, {}, {}};
    if (rng() % 2 == 0) {
      b.lo = t;
    } else {
      b.hi = t;
    }
    groups.push_back({"t" + std::to_string(g), Predicate::Box({b})});
  }
  return GroupFamily(std::move(groups));
}

std::vector<LabeledExample> SampleExamples(const FiniteDistribution& dist, std::uint64_t n,
                                           std::uint64_t seed) {
  std::mt19937_64 rng = SeededEngine(seed, 6);
  std::vector<double> masses;
  for (const SupportPoint& s : dist.support()) masses.push_back(s.mass);
  std::discrete_distribution<size_t> point(masses.begin(), masses.end());
  std::vector<std::discrete_distribution<size_t>> label;
  for (const SupportPoint& s : dist.support()) {
    std::vector<double> probs;
    for (const LabelOutcome& o : s.label_law) probs.push_back(o.prob);
    label.emplace_back(probs.begin(), probs.end());
  }
  std::vector<LabeledExample> out;
  out.reserve(n);
  for (std::uint64_t d = 0; d < n; ++d) {
    const size_t p = point(rng);
    const size_t l = label[p](rng);
    out.push_back(LabeledExample{dist[p].features, dist[p].label_law[l].label, 1});
  }
  return out;
}

}  // namespace momcal
