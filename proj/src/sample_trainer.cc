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

#include "momcal/sample_trainer.h"

#include <cmath>
#include <string>
#include <utility>

#include "momcal/buckets.h"
#include "momcal/errors.h"

namespace momcal {

void SampleTrainConfig::Validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0,1)");
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidArgument("beta must lie in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0,1)");
  if (n == 0) throw InvalidArgument("sample size n must be positive");
  if (bucket_count <= 0) throw InvalidArgument("bucket count m must be positive");
  PredictorBundle(bucket_count, max_degree, moment_degrees, absolute_moments);
  const double bound = 2.0 * ChernoffRadius(delta, static_cast<double>(n));
  if (bound > alpha || bound > beta) {
    throw PreconditionError("sample size too small: need 2*sqrt(ln(2/delta)/(2n)) <= alpha and "
                            "<= beta, but 2*sqrt(ln(2/delta)/(2n)) = " +
                            std::to_string(bound) + " for n = " + std::to_string(n) +
                            ", delta = " + std::to_string(delta));
  }
}

BlockCache::BlockCache(const PredictorBundle& bundle, const GroupFamily& family,
                       const FiniteDistribution* support)
    : bundle_(&bundle), family_(&family), support_(support) {
  if (support_) {
    for (const SupportPoint& p : support_->support()) features_.push_back(&p.features);
    points_ = std::make_unique<PointSet>(bundle, family, features_);
  }
}

void BlockCache::Load(Block block) {
  block_ = std::move(block);
  if (support_) {
    point_of_ = block_.support_index;
    return;
  }
  features_.clear();
  point_of_.clear();
  for (size_t e = 0; e < block_.examples.size(); ++e) {
    features_.push_back(&block_.examples[e].features);
    point_of_.push_back(e);
  }
  points_ = std::make_unique<PointSet>(*bundle_, *family_, features_);
}

double PseudoMomentObservation(double y, double mean, int a, bool absolute) {
  const double d = absolute ? std::abs(y - mean) : y - mean;
  return std::pow(d, a);
}

std::vector<CellRow> BlockCache::MeanRows() const {
  std::vector<CellRow> rows(block_.examples.size());
  for (size_t e = 0; e < rows.size(); ++e) {
    const LabeledExample& ex = block_.examples[e];
    rows[e] = CellRow{point_of_[e], static_cast<double>(ex.multiplicity), ex.label,
                      ex.multiplicity};
  }
  return rows;
}

std::vector<CellRow> BlockCache::MomentRows(int a) const {
  std::vector<CellRow> rows(block_.examples.size());
  const bool absolute = bundle_->absolute_moments();
  for (size_t e = 0; e < rows.size(); ++e) {
    const LabeledExample& ex = block_.examples[e];
    const double mean = points_->state(point_of_[e]).mean;
    rows[e] = CellRow{point_of_[e], static_cast<double>(ex.multiplicity),
                      PseudoMomentObservation(ex.label, mean, a, absolute), ex.multiplicity};
  }
  return rows;
}

AuditVerdict AuditCells(const PointSet& points, const std::vector<CellRow>& rows,
                        const CellScope& scope, const PredictorBundle& bundle, int slot,
                        std::uint64_t n, double rate, double delta) {
  AuditVerdict verdict;
  size_t index = 0;
  for (auto& [key, sums] : AggregateCells(points, rows, scope, bundle, slot)) {
    AuditRecord r = TestSetSummary(sums.predicted, sums.observed, sums.count, n, rate, delta);
    if (r.violation) {
      r.set = key.ToString(points.family());
      verdict.violation = true;
      verdict.sign = r.sign;
      verdict.index = index;
      verdict.set = key.ToSelector(points.family());
      verdict.record = std::move(r);
      return verdict;
    }
    ++index;
  }
  return verdict;
}

namespace {

TraceEntry SampleTraceEntry(const UpdateRecord& record, const AuditVerdict& v) {
  TraceEntry t;
  t.target = record.target;
  t.selector = record.selector;
  t.sign = v.sign;
  t.mass = static_cast<double>(v.record.n_sub) / static_cast<double>(v.record.n);
  t.weighted_gap = t.mass * v.record.gap;
  return t;
}

}  // namespace

std::int64_t SamplePseudoMomentLoop(int a, double beta, double delta, PredictorBundle& bundle,
                                    SampleSource& source, BlockCache& cache, std::uint64_t n,
                                    TrainReport& report) {
  const int slot = bundle.SlotOf(Target::Moment(a));
  if (a % 2 != 0 && !bundle.absolute_moments()) {
    throw InvalidArgument("odd degree " + std::to_string(a) + " requires absolute moments");
  }
  const std::int64_t cap = IterationCap(beta);
  CellScope scope;
  scope.mean_cells = false;
  scope.moment_degrees = {a};
  std::int64_t steps = 0;
  while (true) {
    cache.Load(source.Draw(n, Stream::kAudit));
    const AuditVerdict v =
        AuditCells(cache.points(), cache.MomentRows(a), scope, bundle, slot, n, beta, delta);
    if (!v.violation) break;
    if (steps >= cap) {
      report.statistical_failure = true;
      report.events.push_back("pseudo-moment loop for degree " + std::to_string(a) +
                              " reached its cap of " + std::to_string(cap) +
                              " steps; stopping the loop (statistical failure event)");
      break;
    }
    UpdateRecord record{Target::Moment(a), beta * v.sign, *v.set};
    bundle.Append(record);
    cache.Apply(record);
    ++steps;
    ++report.total_updates;
    ++report.per_degree_updates[a];
    if (report.record_trace) report.trace.push_back(SampleTraceEntry(record, v));
  }
  std::int64_t& longest = report.longest_inner_loop[a];
  longest = std::max(longest, steps);
  return steps;
}

SampleTrainResult SampleAlternatingDescent(const SampleTrainConfig& config, SampleSource& source,
                                           const GroupFamily& family) {
  config.Validate();
  const std::uint64_t blocks_before = source.blocks_drawn(Stream::kAudit);
  const std::uint64_t examples_before = source.examples_drawn(Stream::kAudit);
  SampleTrainResult result{PredictorBundle(config.bucket_count, config.max_degree,
                                           config.moment_degrees, config.absolute_moments),
                           TrainReport{}};
  PredictorBundle& bundle = result.bundle;
  TrainReport& report = result.report;
  report.record_trace = config.record_trace;
  for (int a : bundle.moment_degrees()) {
    report.per_degree_updates[a] = 0;
    report.longest_inner_loop[a] = 0;
  }
  BlockCache cache(bundle, family, source.support());
  CellScope scope;
  scope.mean_cells = true;
  scope.moment_degrees = bundle.moment_degrees();
  const std::int64_t cap = MeanUpdateCap(config.alpha);

  auto audit_mean = [&](bool first) {
    cache.Load(source.Draw(config.n, Stream::kAudit));
    const Block& block = cache.block();
    if (first) {
      for (size_t g = 0; g < family.size(); ++g) {
        bool any = false;
        for (size_t e = 0; e < block.examples.size() && !any; ++e) {
          any = cache.points().InGroup(static_cast<int>(g), cache.point_of(e));
        }
        if (!any) report.events.push_back("warning: group '" + family[g].name +
                                          "' has zero empirical mass in the first block");
      }
    }
    return AuditCells(cache.points(), cache.MeanRows(), scope, bundle, -1, config.n,
                      config.alpha, config.delta);
  };

  AuditVerdict v = audit_mean(true);
  while (v.violation) {
    if (report.outer_iterations >= cap) {
      report.halt_reason = HaltReason::kCapExceeded;
      report.statistical_failure = true;
      report.events.push_back("mean updates reached the cap of " + std::to_string(cap) +
                              " while a violation was still reported (statistical failure event)");
      break;
    }
    MeanConsistencyUpdate(bundle, *v.set, v.sign, config.alpha);
    cache.Apply(bundle.updates().back());
    ++report.outer_iterations;
    ++report.total_updates;
    if (report.record_trace) report.trace.push_back(SampleTraceEntry(bundle.updates().back(), v));
    for (int a : bundle.moment_degrees()) {
      SamplePseudoMomentLoop(a, config.beta, config.delta, bundle, source, cache, config.n,
                             report);
    }
    v = audit_mean(false);
  }
  result.blocks_consumed = source.blocks_drawn(Stream::kAudit) - blocks_before;
  result.examples_consumed = source.examples_drawn(Stream::kAudit) - examples_before;
  return result;
}

}  // namespace momcal
