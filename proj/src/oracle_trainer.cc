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

#include "momcal/oracle_trainer.h"

#include <map>
#include <string>
#include <utility>

#include "momcal/buckets.h"
#include "momcal/errors.h"

namespace momcal {

namespace {

AuditSample ToSample(const BlockCache& cache, const std::vector<CellRow>& rows, int slot) {
  AuditSample s;
  s.examples = &cache.block().examples;
  s.predicted.reserve(rows.size());
  s.observed.reserve(rows.size());
  for (const CellRow& row : rows) {
    s.predicted.push_back(cache.points().state(row.point).value(slot));
    s.observed.push_back(row.observed);
  }
  return s;
}

TraceEntry OracleTraceEntry(const UpdateRecord& record, const AuditVerdict& v) {
  TraceEntry t;
  t.target = record.target;
  t.selector = record.selector;
  t.sign = v.sign;
  t.mass = static_cast<double>(v.record.n_sub) / static_cast<double>(v.record.n);
  t.weighted_gap = t.mass * v.record.gap;
  return t;
}

}  // namespace

AuditVerdict OracleAuditCells(const OracleBlocks& blocks, const CellScope& scope,
                              const PredictorBundle& bundle, int slot, int degree, double rate,
                              double delta, AgnosticOracle& oracle, OracleAuditStats* stats) {
  CellScope domain = scope;
  domain.whole_domain_only = true;
  const BlockCache& train = blocks.train();
  const BlockCache& check = blocks.check();
  const std::vector<CellRow> train_rows = degree == 0 ? train.MeanRows() : train.MomentRows(degree);
  const std::vector<CellRow> check_rows = degree == 0 ? check.MeanRows() : check.MomentRows(degree);

  // Refinements populated on the training block, in canonical order.
  std::map<CellKey, std::vector<size_t>> check_members;
  for (auto& [key, members] : CellMembers(check.points(), check_rows, domain, bundle)) {
    check_members.emplace(key, std::move(members));
  }
  std::vector<Refinement> refinements;
  for (const auto& [key, members] : CellMembers(train.points(), train_rows, domain, bundle)) {
    Refinement r;
    r.descriptor = key.ToSelector(train.points().family());
    r.in_train.assign(train_rows.size(), 0);
    for (size_t e : members) r.in_train[e] = 1;
    r.in_check.assign(check_rows.size(), 0);
    auto it = check_members.find(key);
    if (it != check_members.end()) {
      for (size_t e : it->second) r.in_check[e] = 1;
    }
    refinements.push_back(std::move(r));
  }
  return OracleAuditCore(ToSample(train, train_rows, slot), ToSample(check, check_rows, slot),
                         refinements, rate, delta, oracle, train.points().family(), stats);
}

std::int64_t OraclePseudoMomentLoop(int a, double beta, double delta, PredictorBundle& bundle,
                                    SampleSource& source, OracleBlocks& blocks, std::uint64_t n,
                                    AgnosticOracle& oracle, TrainReport& report,
                                    OracleAuditStats& stats) {
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
    blocks.Draw(source, n);
    const AuditVerdict v =
        OracleAuditCells(blocks, scope, bundle, slot, a, beta, delta, oracle, &stats);
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
    blocks.Apply(record);
    ++steps;
    ++report.total_updates;
    ++report.per_degree_updates[a];
    if (report.record_trace) report.trace.push_back(OracleTraceEntry(record, v));
  }
  std::int64_t& longest = report.longest_inner_loop[a];
  longest = std::max(longest, steps);
  return steps;
}

OracleTrainResult OracleAlternatingDescent(const OracleTrainConfig& config,
                                           SampleSource& source, const GroupFamily& family,
                                           AgnosticOracle& oracle) {
  config.Validate();
  const SampleTrainConfig& c = config.sample;
  auto drawn = [&](bool examples) {
    std::uint64_t total = 0;
    for (Stream s : {Stream::kAudit, Stream::kOracleTrain}) {
      total += examples ? source.examples_drawn(s) : source.blocks_drawn(s);
    }
    return total;
  };
  const std::uint64_t blocks_before = drawn(false);
  const std::uint64_t examples_before = drawn(true);
  OracleTrainResult result{PredictorBundle(c.bucket_count, c.max_degree, c.moment_degrees,
                                           c.absolute_moments),
                           TrainReport{}, OracleAuditStats{}};
  PredictorBundle& bundle = result.bundle;
  TrainReport& report = result.report;
  report.record_trace = c.record_trace;
  for (int a : bundle.moment_degrees()) {
    report.per_degree_updates[a] = 0;
    report.longest_inner_loop[a] = 0;
  }
  OracleBlocks blocks(bundle, family, source.support());
  CellScope scope;
  scope.mean_cells = true;
  scope.moment_degrees = bundle.moment_degrees();
  const std::int64_t cap = MeanUpdateCap(c.alpha);

  auto audit_mean = [&]() {
    blocks.Draw(source, c.n);
    return OracleAuditCells(blocks, scope, bundle, -1, 0, c.alpha, c.delta, oracle,
                            &result.stats);
  };

  AuditVerdict v = audit_mean();
  while (v.violation) {
    if (report.outer_iterations >= cap) {
      report.halt_reason = HaltReason::kCapExceeded;
      report.statistical_failure = true;
      report.events.push_back("mean updates reached the cap of " + std::to_string(cap) +
                              " while a violation was still reported (statistical failure event)");
      break;
    }
    MeanConsistencyUpdate(bundle, *v.set, v.sign, c.alpha);
    blocks.Apply(bundle.updates().back());
    ++report.outer_iterations;
    ++report.total_updates;
    if (report.record_trace) report.trace.push_back(OracleTraceEntry(bundle.updates().back(), v));
    for (int a : bundle.moment_degrees()) {
      OraclePseudoMomentLoop(a, c.beta, c.delta, bundle, source, blocks, c.n, oracle, report,
                             result.stats);
    }
    v = audit_mean();
  }
  result.blocks_consumed = drawn(false) - blocks_before;
  result.examples_consumed = drawn(true) - examples_before;
  report.events.push_back("oracle '" + oracle.name() + "': " +
                          std::to_string(result.stats.oracle_calls) + " calls, " +
                          std::to_string(result.stats.candidates) + " candidate sets");
  return result;
}

}  // namespace momcal
