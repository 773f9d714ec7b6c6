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

#include "momcal/exact_trainer.h"

#include <cmath>
#include <utility>

#include "momcal/buckets.h"
#include "momcal/errors.h"

namespace momcal {

using nlohmann::json;

namespace {

std::vector<const FeatureVector*> SupportFeatures(const FiniteDistribution& dist) {
  std::vector<const FeatureVector*> out;
  out.reserve(dist.size());
  for (const SupportPoint& p : dist.support()) out.push_back(&p.features);
  return out;
}

struct Violation {
  CellKey cell;
  CellSums sums;
  double diff = 0.0;  // sum P(x) predicted - sum P(x) observed
};

// First (or largest) cell whose weighted gap reaches `rate`.
std::optional<Violation> FindViolation(const PointSet& points, const std::vector<CellRow>& rows,
                                       const CellScope& scope, const PredictorBundle& bundle,
                                       int slot, double rate, bool max_search) {
  std::optional<Violation> best;
  for (auto& [key, sums] : AggregateCells(points, rows, scope, bundle, slot)) {
    if (!(sums.weight > 0.0)) continue;
    const double diff = sums.predicted - sums.observed;
    if (std::abs(diff) < rate) continue;
    if (!max_search) return Violation{key, sums, diff};
    if (!best || std::abs(diff) > std::abs(best->diff)) best = Violation{key, sums, diff};
  }
  return best;
}

std::vector<CellRow> ExactRows(const FiniteDistribution& dist, const std::vector<double>& obs) {
  std::vector<CellRow> rows(dist.size());
  for (size_t p = 0; p < dist.size(); ++p) rows[p] = CellRow{p, dist[p].mass, obs[p], 0};
  return rows;
}

std::vector<double> PseudoMomentLabels(const PointSet& points, const FiniteDistribution& dist,
                                       int a, bool absolute) {
  std::vector<double> out(dist.size());
  for (size_t p = 0; p < dist.size(); ++p) {
    out[p] = dist[p].ConditionalCentralMoment(points.state(p).mean, a, absolute);
  }
  return out;
}

}  // namespace

std::string HaltReasonName(HaltReason r) {
  return r == HaltReason::kConverged ? "converged" : "cap_exceeded";
}

json TraceEntry::ToJson() const {
  return json{{"target", target.is_mean() ? json("mean") : json(target.degree)},
              {"selector", selector.ToJson()},
              {"sign", sign},
              {"mass", mass},
              {"weighted_gap", weighted_gap},
              {"potential_before", potential_before},
              {"potential_after", potential_after}};
}

json TrainReport::ToJson(bool include_trace) const {
  json per_degree = json::object();
  for (auto [a, q] : per_degree_updates) per_degree[std::to_string(a)] = q;
  json longest = json::object();
  for (auto [a, q] : longest_inner_loop) longest[std::to_string(a)] = q;
  json j{{"outer_iterations", outer_iterations},
         {"total_updates", total_updates},
         {"per_degree_updates", per_degree},
         {"longest_inner_loop", longest},
         {"halt_reason", HaltReasonName(halt_reason)},
         {"statistical_failure", statistical_failure},
         {"events", events}};
  if (include_trace) {
    json t = json::array();
    for (const TraceEntry& e : trace) t.push_back(e.ToJson());
    j["trace"] = std::move(t);
  }
  return j;
}

void ExactTrainConfig::Validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0,1)");
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidArgument("beta must lie in (0,1)");
  if (bucket_count <= 0) throw InvalidArgument("bucket count m must be positive");
  if (max_degree < 2) throw InvalidArgument("max degree k must be at least 2");
  // Degree checks live in the bundle constructor.
  PredictorBundle(bucket_count, max_degree, moment_degrees, absolute_moments);
}

std::int64_t MeanUpdateCap(double alpha) { return IterationCap(alpha); }

std::int64_t TotalUpdateCap(double alpha, double beta, int max_degree) {
  return IterationCap(alpha) * (1 + static_cast<std::int64_t>(max_degree - 1) * IterationCap(beta));
}

void MeanConsistencyUpdate(PredictorBundle& bundle, const SetDescriptor& selector, int lambda,
                           double eta) {
  if (lambda != 1 && lambda != -1) throw InvalidArgument("lambda must be +1 or -1");
  bundle.Append(UpdateRecord{Target::Mean(), eta * lambda, selector});
}

double SquaredErrorPotential(const PointSet& points, const FiniteDistribution& dist, int slot,
                             const std::vector<double>& targets) {
  double total = 0.0;
  for (size_t p = 0; p < dist.size(); ++p) {
    const double d = points.state(p).value(slot) - targets[p];
    total += dist[p].mass * d * d;
  }
  return total;
}

std::int64_t ExactPseudoMomentLoop(int a, double beta, PredictorBundle& bundle, PointSet& points,
                                   const FiniteDistribution& dist, bool max_search,
                                   TrainReport* report) {
  const int slot = bundle.SlotOf(Target::Moment(a));
  const std::int64_t cap = IterationCap(beta);
  // The mean is frozen for the whole call, so the pseudo labels are too.
  const std::vector<double> labels = PseudoMomentLabels(points, dist, a, bundle.absolute_moments());
  const std::vector<CellRow> rows = ExactRows(dist, labels);
  CellScope scope;
  scope.mean_cells = false;
  scope.moment_degrees = {a};
  std::int64_t steps = 0;
  while (auto v = FindViolation(points, rows, scope, bundle, slot, beta, max_search)) {
    if (steps >= cap) {
      throw InternalLogicError("pseudo-moment loop for degree " + std::to_string(a) +
                               " exceeded its cap of " + std::to_string(cap) + " steps");
    }
    const int psi = v->diff > 0 ? 1 : -1;
    TraceEntry entry;
    if (report && report->record_trace) {
      entry.potential_before = SquaredErrorPotential(points, dist, slot, labels);
    }
    UpdateRecord record{Target::Moment(a), beta * psi, v->cell.ToSelector(points.family())};
    bundle.Append(record);
    points.Apply(record);
    ++steps;
    if (report) {
      ++report->total_updates;
      ++report->per_degree_updates[a];
      if (report->record_trace) {
        entry.target = record.target;
        entry.selector = record.selector;
        entry.sign = psi;
        entry.mass = v->sums.weight;
        entry.weighted_gap = v->diff;
        entry.potential_after = SquaredErrorPotential(points, dist, slot, labels);
        report->trace.push_back(std::move(entry));
      }
    }
  }
  if (report) {
    std::int64_t& longest = report->longest_inner_loop[a];
    longest = std::max(longest, steps);
  }
  return steps;
}

std::int64_t ExactPseudoMomentLoop(int a, double beta, PredictorBundle& bundle,
                                   const FiniteDistribution& dist, const GroupFamily& family) {
  PointSet points(bundle, family, SupportFeatures(dist));
  return ExactPseudoMomentLoop(a, beta, bundle, points, dist, false, nullptr);
}

ExactTrainResult ExactAlternatingDescent(const ExactTrainConfig& config,
                                         const FiniteDistribution& dist,
                                         const GroupFamily& family) {
  config.Validate();
  ExactTrainResult result{PredictorBundle(config.bucket_count, config.max_degree,
                                          config.moment_degrees, config.absolute_moments),
                          TrainReport{}};
  PredictorBundle& bundle = result.bundle;
  TrainReport& report = result.report;
  report.record_trace = config.record_trace;
  for (int a : bundle.moment_degrees()) {
    report.per_degree_updates[a] = 0;
    report.longest_inner_loop[a] = 0;
  }

  PointSet points(bundle, family, SupportFeatures(dist));
  std::vector<double> means(dist.size());
  for (size_t p = 0; p < dist.size(); ++p) means[p] = dist[p].ConditionalMean();
  const std::vector<CellRow> rows = ExactRows(dist, means);
  CellScope scope;
  scope.mean_cells = true;
  scope.moment_degrees = bundle.moment_degrees();
  const std::int64_t cap = MeanUpdateCap(config.alpha);

  while (auto v = FindViolation(points, rows, scope, bundle, -1, config.alpha,
                                config.max_search)) {
    if (report.outer_iterations >= cap) {
      throw InternalLogicError("mean updates exceeded the cap of " + std::to_string(cap));
    }
    const int lambda = v->diff > 0 ? 1 : -1;
    TraceEntry entry;
    if (config.record_trace) entry.potential_before = SquaredErrorPotential(points, dist, -1, means);
    const SetDescriptor selector = v->cell.ToSelector(family);
    MeanConsistencyUpdate(bundle, selector, lambda, config.alpha);
    points.Apply(bundle.updates().back());
    ++report.outer_iterations;
    ++report.total_updates;
    if (config.record_trace) {
      entry.target = Target::Mean();
      entry.selector = selector;
      entry.sign = lambda;
      entry.mass = v->sums.weight;
      entry.weighted_gap = v->diff;
      entry.potential_after = SquaredErrorPotential(points, dist, -1, means);
      report.trace.push_back(std::move(entry));
    }
    for (int a : bundle.moment_degrees()) {
      ExactPseudoMomentLoop(a, config.beta, bundle, points, dist, config.max_search, &report);
    }
  }
  report.halt_reason = HaltReason::kConverged;
  return result;
}

}  // namespace momcal
