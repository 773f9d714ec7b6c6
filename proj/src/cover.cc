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

#include "momcal/cover.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "momcal/errors.h"

namespace momcal {

using nlohmann::json;

void CoverInstance::Validate() const {
  double total = 0.0;
  for (const CoverPoint& p : points) {
    if (!(p.mass >= 0.0)) throw InvalidArgument("cover point '" + p.id + "' has negative mass");
    total += p.mass;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidArgument("cover point masses sum to " + std::to_string(total) + ", not 1");
  }
  std::vector<char> covered(points.size(), 0);
  for (const CoverSet& s : sets) {
    if (s.members.size() != s.widths.size()) {
      throw InvalidArgument("cover set '" + s.name + "' has mismatched members and widths");
    }
    for (size_t k = 0; k < s.members.size(); ++k) {
      if (s.members[k] >= points.size()) {
        throw InvalidArgument("cover set '" + s.name + "' names an unknown point");
      }
      if (k > 0 && s.members[k] <= s.members[k - 1]) {
        throw InvalidArgument("cover set '" + s.name + "' members must be strictly ascending");
      }
      if (!(s.widths[k] >= 0.0)) {
        throw InvalidArgument("cover set '" + s.name + "' has a negative width");
      }
      covered[s.members[k]] = 1;
    }
  }
  for (size_t p = 0; p < points.size(); ++p) {
    if (!covered[p]) {
      throw InvalidArgument("point '" + points[p].id +
                            "' lies in no qualifying cell (every point must be covered)");
    }
  }
}

json CoverInstance::ToJson() const {
  json pts = json::array();
  for (const CoverPoint& p : points) pts.push_back({{"id", p.id}, {"mass", p.mass}});
  json ss = json::array();
  for (const CoverSet& s : sets) {
    ss.push_back({{"name", s.name}, {"degree", s.degree}, {"members", s.members},
                  {"widths", s.widths}});
  }
  return {{"points", pts},
          {"sets", ss},
          {"max_degree", max_degree},
          {"empirical_masses", empirical_masses}};
}

CoverInstance CoverInstance::FromJson(const json& j) {
  CoverInstance out;
  try {
    for (const json& p : j.at("points")) {
      out.points.push_back(CoverPoint{p.at("id").get<std::string>(), p.at("mass").get<double>()});
    }
    for (const json& s : j.at("sets")) {
      CoverSet set;
      set.name = s.value("name", std::string("S") + std::to_string(out.sets.size() + 1));
      set.degree = s.value("degree", 2);
      set.members = s.at("members").get<std::vector<size_t>>();
      set.widths = s.at("widths").get<std::vector<double>>();
      out.sets.push_back(std::move(set));
    }
    out.max_degree = j.value("max_degree", 2);
    out.empirical_masses = j.value("empirical_masses", false);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad cover instance: ") + e.what());
  }
  out.Validate();
  return out;
}

CoverInstance BuildCoverInstance(const PredictorBundle& bundle, const GroupFamily& family,
                                 const std::vector<const FeatureVector*>& points,
                                 const std::vector<double>& masses,
                                 const std::map<int, IntervalParams>& params,
                                 bool empirical_masses) {
  if (points.size() != masses.size()) {
    throw InvalidArgument("cover instance needs one mass per point");
  }
  if (params.empty()) throw InvalidArgument("cover instance needs at least one degree");
  CoverInstance out;
  out.empirical_masses = empirical_masses;
  out.max_degree = params.rbegin()->first;
  std::vector<size_t> index(points.size(), std::numeric_limits<size_t>::max());
  for (size_t p = 0; p < points.size(); ++p) {
    if (masses[p] > 0.0) {
      index[p] = out.points.size();
      out.points.push_back(CoverPoint{points[p]->id, masses[p]});
    }
  }
  CellScope scope;
  scope.mean_cells = false;
  for (const auto& [degree, p] : params) {
    p.Validate(bundle.absolute_moments());
    if (p.degree != degree) throw InvalidArgument("interval parameters keyed by the wrong degree");
    if (bundle.MomentSlot(degree) < 0) {
      throw InvalidArgument("bundle does not track moment degree " + std::to_string(degree));
    }
    scope.moment_degrees.push_back(degree);
  }
  const PointSet cache(bundle, family, points);
  std::vector<CellRow> rows(points.size());
  for (size_t p = 0; p < points.size(); ++p) rows[p] = CellRow{p, masses[p], 0.0, 0};
  for (const auto& [key, members] : CellMembers(cache, rows, scope, bundle)) {
    double mass = 0.0;
    for (size_t r : members) mass += masses[r];
    const IntervalParams& p = params.at(key.moment->degree);
    if (mass < p.gamma) continue;
    CoverSet set;
    set.name = key.ToString(family);
    set.degree = key.moment->degree;
    const int slot = bundle.MomentSlot(set.degree);
    for (size_t r : members) {
      if (index[r] == std::numeric_limits<size_t>::max()) continue;
      set.members.push_back(index[r]);
      set.widths.push_back(IntervalWidth(cache.state(r).moments[slot], p));
    }
    out.sets.push_back(std::move(set));
  }
  out.Validate();
  return out;
}

double CoverWidth(const CoverInstance& instance, const std::vector<size_t>& chosen, size_t p) {
  double width = -1.0;
  for (size_t s : chosen) {
    const CoverSet& set = instance.sets.at(s);
    auto it = std::lower_bound(set.members.begin(), set.members.end(), p);
    if (it != set.members.end() && *it == p) {
      width = std::max(width, set.widths[static_cast<size_t>(it - set.members.begin())]);
    }
  }
  if (width < 0.0) {
    throw InvalidArgument("point '" + instance.points.at(p).id + "' is not covered");
  }
  return width;
}

double CoverObjective(const CoverInstance& instance, const std::vector<size_t>& chosen) {
  double f = 0.0;
  for (size_t p = 0; p < instance.points.size(); ++p) {
    f += instance.points[p].mass * CoverWidth(instance, chosen, p);
  }
  return f;
}

CoverSolution GreedyCover(const CoverInstance& instance) {
  instance.Validate();
  const size_t n = instance.points.size();
  std::vector<double> current(n, 0.0);  // max chosen width so far
  std::vector<char> covered(n, 0);
  std::vector<char> used(instance.sets.size(), 0);
  size_t remaining = n;
  CoverSolution out;
  while (remaining > 0) {
    size_t best = instance.sets.size();
    double best_ratio = std::numeric_limits<double>::infinity();
    for (size_t s = 0; s < instance.sets.size(); ++s) {
      if (used[s]) continue;
      const CoverSet& set = instance.sets[s];
      double increase = 0.0;
      size_t fresh = 0;
      for (size_t k = 0; k < set.members.size(); ++k) {
        const size_t p = set.members[k];
        if (!covered[p]) ++fresh;
        increase += instance.points[p].mass * std::max(0.0, set.widths[k] - current[p]);
      }
      if (fresh == 0) continue;
      const double ratio = increase / static_cast<double>(fresh);
      if (ratio < best_ratio) {
        best_ratio = ratio;
        best = s;
      }
    }
    if (best == instance.sets.size()) throw InternalLogicError("greedy cover stalled");
    used[best] = 1;
    out.chosen.push_back(best);
    const CoverSet& set = instance.sets[best];
    for (size_t k = 0; k < set.members.size(); ++k) {
      const size_t p = set.members[k];
      if (!covered[p]) {
        covered[p] = 1;
        --remaining;
      }
      current[p] = std::max(current[p], set.widths[k]);
    }
  }
  for (size_t p = 0; p < n; ++p) out.objective += instance.points[p].mass * current[p];
  return out;
}

CoverSolution BruteForceOptimum(const CoverInstance& instance) {
  instance.Validate();
  const size_t count = instance.sets.size();
  if (count > 20) throw InvalidArgument("brute-force cover is limited to 20 sets");
  CoverSolution best;
  best.objective = std::numeric_limits<double>::infinity();
  const size_t n = instance.points.size();
  std::vector<double> width(n);
  for (std::uint32_t mask = 1; mask < (1u << count); ++mask) {
    std::fill(width.begin(), width.end(), -1.0);
    for (size_t s = 0; s < count; ++s) {
      if (!(mask & (1u << s))) continue;
      const CoverSet& set = instance.sets[s];
      for (size_t k = 0; k < set.members.size(); ++k) {
        width[set.members[k]] = std::max(width[set.members[k]], set.widths[k]);
      }
    }
    double f = 0.0;
    bool feasible = true;
    for (size_t p = 0; p < n && feasible; ++p) {
      feasible = width[p] >= 0.0;
      f += instance.points[p].mass * width[p];
    }
    if (feasible && f < best.objective) {
      best.objective = f;
      best.chosen.clear();
      for (size_t s = 0; s < count; ++s) {
        if (mask & (1u << s)) best.chosen.push_back(s);
      }
    }
  }
  return best;
}

double HarmonicNumber(int l) {
  if (l < 0) throw InvalidArgument("harmonic number of a negative index");
  double h = 0.0;
  for (int i = 1; i <= l; ++i) h += 1.0 / i;
  return h;
}

double GreedyApproximationFactor(const CoverInstance& instance) {
  size_t largest = 0;
  for (const CoverSet& s : instance.sets) largest = std::max(largest, s.members.size());
  return 0.5 * instance.max_degree * HarmonicNumber(static_cast<int>(largest));
}

PredictionInterval PerPointIntervalFromCover(const CoverInstance& instance,
                                             const std::vector<size_t>& chosen, size_t p,
                                             double mean) {
  return IntervalAround(mean, CoverWidth(instance, chosen, p));
}

}  // namespace momcal
