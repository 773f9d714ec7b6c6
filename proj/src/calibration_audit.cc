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

#include "momcal/calibration_audit.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <utility>

#include "momcal/auditor.h"
#include "momcal/errors.h"

namespace momcal {

using nlohmann::json;

namespace {

// Labeled rows over a point cache: one row per (support point, label
// outcome) with weight P(x) P(y|x) in exact mode, one per example with its
// multiplicity otherwise.
struct LabeledRows {
  std::vector<const FeatureVector*> features;
  std::vector<CellRow> rows;  // observed = label
  double total_weight = 0.0;
  std::uint64_t n = 0;
};

LabeledRows ExactRows(const FiniteDistribution& dist) {
  LabeledRows out;
  for (size_t p = 0; p < dist.size(); ++p) {
    out.features.push_back(&dist[p].features);
    for (const LabelOutcome& o : dist[p].label_law) {
      const double w = dist[p].mass * o.prob;
      if (w > 0.0) out.rows.push_back(CellRow{p, w, o.label, 0});
    }
  }
  out.total_weight = 1.0;
  return out;
}

LabeledRows SampleRows(const std::vector<LabeledExample>& data) {
  LabeledRows out;
  for (size_t e = 0; e < data.size(); ++e) {
    out.features.push_back(&data[e].features);
    out.rows.push_back(CellRow{e, static_cast<double>(data[e].multiplicity), data[e].label,
                               data[e].multiplicity});
    out.n += data[e].multiplicity;
  }
  out.total_weight = static_cast<double>(out.n);
  return out;
}

double Power(double d, int a, bool absolute) { return std::pow(absolute ? std::abs(d) : d, a); }

CalibrationReport Audit(const PredictorBundle& bundle, const GroupFamily& family,
                        const LabeledRows& data, const CalibrationBudgets& budgets,
                        bool empirical) {
  CalibrationReport report;
  report.empirical = empirical;
  report.n = data.n;
  report.budgets = budgets;
  if (data.rows.empty()) return report;
  const PointSet points(bundle, family, data.features);
  CellScope scope;
  scope.mean_cells = true;
  scope.moment_degrees = bundle.moment_degrees();
  const bool absolute = bundle.absolute_moments();
  const double m = bundle.bucket_count();
  for (const auto& [key, members] : CellMembers(points, data.rows, scope, bundle)) {
    CalibrationRow row;
    row.key = key;
    row.cell = key.ToString(family);
    double weight = 0.0;
    double predicted = 0.0;
    double observed = 0.0;
    for (size_t r : members) {
      const CellRow& c = data.rows[r];
      weight += c.weight;
      predicted += c.weight * points.state(c.point).mean;
      observed += c.weight * c.observed;
      row.count += c.count;
    }
    if (!(weight > 0.0)) continue;
    row.mass = weight / data.total_weight;
    row.predicted_mean = predicted / weight;
    row.true_mean = observed / weight;
    row.mean_gap = std::abs(row.predicted_mean - row.true_mean);
    row.mean_budget = budgets.alpha / row.mass + budgets.slack;
    row.ratio = row.mean_gap / row.mean_budget;
    row.pass = row.mean_gap <= row.mean_budget;
    if (key.moment) {
      const int a = key.moment->degree;
      const int slot = bundle.MomentSlot(a);
      double predicted_moment = 0.0;
      double true_moment = 0.0;
      for (size_t r : members) {
        const CellRow& c = data.rows[r];
        predicted_moment += c.weight * points.state(c.point).moments[slot];
        true_moment += c.weight * Power(c.observed - row.true_mean, a, absolute);
      }
      row.predicted_moment = predicted_moment / weight;
      row.true_moment = true_moment / weight;
      row.moment_gap = std::abs(row.predicted_moment - row.true_moment);
      row.moment_budget = (budgets.beta + a * budgets.alpha) / row.mass + a / m + budgets.slack;
      row.ratio = std::max(row.ratio, row.moment_gap / row.moment_budget);
      row.pass = row.pass && row.moment_gap <= row.moment_budget;
    }
    if (empirical) row.uncertainty = 2.0 * ChernoffRadius(budgets.delta, row.count);
    if (!row.pass) ++report.violations;
    report.worst_ratio = std::max(report.worst_ratio, row.ratio);
    report.rows.push_back(std::move(row));
  }
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const CalibrationRow& a, const CalibrationRow& b) { return a.ratio > b.ratio; });
  return report;
}

CoverageReport Coverage(const PredictorBundle& bundle, const GroupFamily& family,
                        const LabeledRows& data, const IntervalParams& params, double slack,
                        bool empirical) {
  params.Validate(bundle.absolute_moments());
  const int slot = bundle.MomentSlot(params.degree);
  if (slot < 0) {
    throw InvalidArgument("bundle does not track moment degree " + std::to_string(params.degree));
  }
  CoverageReport report;
  report.empirical = empirical;
  report.params = params;
  report.slack = slack;
  if (data.rows.empty()) return report;
  const PointSet points(bundle, family, data.features);
  CellScope scope;
  scope.mean_cells = false;
  scope.moment_degrees = {params.degree};
  for (const auto& [key, members] : CellMembers(points, data.rows, scope, bundle)) {
    double weight = 0.0;
    double inside = 0.0;
    CoverageRow row;
    for (size_t r : members) {
      const CellRow& c = data.rows[r];
      const Prediction& p = points.state(c.point);
      const PredictionInterval interval = IntervalAround(p.mean, IntervalWidth(p.moments[slot], params));
      weight += c.weight;
      if (interval.Contains(c.observed)) inside += c.weight;
      row.count += c.count;
    }
    row.mass = weight / data.total_weight;
    if (!(row.mass >= params.gamma)) continue;
    row.key = key;
    row.cell = key.ToString(family);
    row.coverage = inside / weight;
    row.pass = row.coverage >= 1.0 - params.delta - slack;
    if (!row.pass) ++report.failures;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace

json CalibrationRow::ToJson() const {
  json j = {{"cell", cell},
            {"mass", mass},
            {"count", count},
            {"predicted_mean", predicted_mean},
            {"true_mean", true_mean},
            {"mean_gap", mean_gap},
            {"mean_budget", mean_budget},
            {"ratio", ratio},
            {"pass", pass}};
  if (is_moment()) {
    j["degree"] = key.moment->degree;
    j["predicted_moment"] = predicted_moment;
    j["true_moment"] = true_moment;
    j["moment_gap"] = moment_gap;
    j["moment_budget"] = moment_budget;
  }
  if (uncertainty > 0.0) j["uncertainty"] = uncertainty;
  return j;
}

json CalibrationReport::ToJson() const {
  json rs = json::array();
  for (const CalibrationRow& r : rows) rs.push_back(r.ToJson());
  return {{"empirical", empirical},
          {"n", n},
          {"alpha", budgets.alpha},
          {"beta", budgets.beta},
          {"slack", budgets.slack},
          {"cells", rows.size()},
          {"violations", violations},
          {"worst_ratio", worst_ratio},
          {"rows", rs}};
}

std::string CalibrationReport::ToTable() const {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-40s %10s %10s %10s %10s %10s %8s %5s\n", "cell", "mass",
                "mean_gap", "budget", "mom_gap", "budget", "ratio", "pass");
  out << line;
  for (const CalibrationRow& r : rows) {
    if (r.is_moment()) {
      std::snprintf(line, sizeof(line), "%-40s %10.6f %10.6f %10.4f %10.6f %10.4f %8.4f %5s\n",
                    r.cell.c_str(), r.mass, r.mean_gap, r.mean_budget, r.moment_gap,
                    r.moment_budget, r.ratio, r.pass ? "yes" : "NO");
    } else {
      std::snprintf(line, sizeof(line), "%-40s %10.6f %10.6f %10.4f %10s %10s %8.4f %5s\n",
                    r.cell.c_str(), r.mass, r.mean_gap, r.mean_budget, "-", "-", r.ratio,
                    r.pass ? "yes" : "NO");
    }
    out << line;
  }
  out << rows.size() << " cells, " << violations << " violations\n";
  return out.str();
}

json CoverageRow::ToJson() const {
  return {{"cell", cell}, {"mass", mass}, {"count", count}, {"coverage", coverage}, {"pass", pass}};
}

json CoverageReport::ToJson() const {
  json rs = json::array();
  for (const CoverageRow& r : rows) rs.push_back(r.ToJson());
  return {{"empirical", empirical}, {"params", params.ToJson()}, {"slack", slack},
          {"failures", failures}, {"rows", rs}};
}

std::string CoverageReport::ToCsv() const {
  std::ostringstream out;
  out << "cell,mass,count,coverage,pass\n";
  for (const CoverageRow& r : rows) {
    out << '"' << r.cell << '"' << ',' << r.mass << ',' << r.count << ',' << r.coverage << ','
        << (r.pass ? 1 : 0) << '\n';
  }
  return out.str();
}

CalibrationReport ExactCalibrationAudit(const PredictorBundle& bundle,
                                        const FiniteDistribution& dist, const GroupFamily& family,
                                        const CalibrationBudgets& budgets) {
  return Audit(bundle, family, ExactRows(dist), budgets, false);
}

CalibrationReport EmpiricalCalibrationAudit(const PredictorBundle& bundle,
                                            const std::vector<LabeledExample>& data,
                                            const GroupFamily& family,
                                            const CalibrationBudgets& budgets) {
  return Audit(bundle, family, SampleRows(data), budgets, true);
}

CoverageReport ExactCoverageAudit(const PredictorBundle& bundle, const FiniteDistribution& dist,
                                  const GroupFamily& family, const IntervalParams& params,
                                  double slack) {
  return Coverage(bundle, family, ExactRows(dist), params, slack, false);
}

CoverageReport EmpiricalCoverageAudit(const PredictorBundle& bundle,
                                      const std::vector<LabeledExample>& data,
                                      const GroupFamily& family, const IntervalParams& params,
                                      double slack) {
  return Coverage(bundle, family, SampleRows(data), params, slack, true);
}

}  // namespace momcal
