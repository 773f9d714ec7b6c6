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

// Ground-truth and held-out calibration audits and interval coverage tables.
//
// A calibration report has one row per populated cell: the mean cells
// G(mu, i) and the moment cells G(mu, m_a, i, j) of every tracked degree, for
// every group. Budgets are
//   mean:    alpha / mass
//   moment:  (beta + a alpha) / mass + a / m
// each plus an optional additive slack. Rows are sorted by their worst
// gap/budget ratio, most violated first.

#ifndef MOMCAL_CALIBRATION_AUDIT_H_
#define MOMCAL_CALIBRATION_AUDIT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "momcal/bundle.h"
#include "momcal/cells.h"
#include "momcal/intervals.h"
#include "momcal/types.h"

namespace momcal {

struct CalibrationBudgets {
  double alpha = 0.1;
  double beta = 0.1;
  double slack = 0.0;   // added to every budget
  double delta = 0.05;  // confidence used for the empirical uncertainty column
};

struct CalibrationRow {
  CellKey key;
  std::string cell;
  double mass = 0.0;  // P(cell), or n'/n for empirical audits
  std::uint64_t count = 0;
  double predicted_mean = 0.0;
  double true_mean = 0.0;
  double mean_gap = 0.0;
  double mean_budget = 0.0;
  // Moment cells only (degree = key.moment->degree).
  double predicted_moment = 0.0;
  double true_moment = 0.0;
  double moment_gap = 0.0;
  double moment_budget = 0.0;
  // Empirical audits: 2 sqrt(ln(2/delta) / (2 n')); 0 for exact audits.
  double uncertainty = 0.0;
  double ratio = 0.0;  // largest gap / budget of the row
  bool pass = true;

  bool is_moment() const { return key.moment.has_value(); }
  nlohmann::json ToJson() const;
};

struct CalibrationReport {
  bool empirical = false;
  std::uint64_t n = 0;  // sample size (empirical audits)
  CalibrationBudgets budgets;
  std::vector<CalibrationRow> rows;
  std::uint64_t violations = 0;
  double worst_ratio = 0.0;

  bool passed() const { return violations == 0; }
  nlohmann::json ToJson() const;
  std::string ToTable() const;
};

// Exhaustive audit against the exact conditional means and pooled central
// moments of the distribution (absolute moments in absolute mode).
CalibrationReport ExactCalibrationAudit(const PredictorBundle& bundle,
                                        const FiniteDistribution& dist, const GroupFamily& family,
                                        const CalibrationBudgets& budgets);

// The same audit with empirical masses, label means and pooled central
// moments of `data`. An empty sample yields an empty report.
CalibrationReport EmpiricalCalibrationAudit(const PredictorBundle& bundle,
                                            const std::vector<LabeledExample>& data,
                                            const GroupFamily& family,
                                            const CalibrationBudgets& budgets);

struct CoverageRow {
  CellKey key;
  std::string cell;
  double mass = 0.0;
  std::uint64_t count = 0;
  double coverage = 0.0;  // P(y in I(x) | x in cell)
  bool pass = true;       // coverage >= 1 - delta - slack

  nlohmann::json ToJson() const;
};

struct CoverageReport {
  bool empirical = false;
  IntervalParams params;
  double slack = 0.0;
  std::vector<CoverageRow> rows;  // canonical cell order
  std::uint64_t failures = 0;

  nlohmann::json ToJson() const;
  std::string ToCsv() const;
};

// Coverage of the raw intervals on every cell G(mu, m_k, i, j) (k =
// params.degree) of mass >= params.gamma, computed by exact summation.
CoverageReport ExactCoverageAudit(const PredictorBundle& bundle, const FiniteDistribution& dist,
                                  const GroupFamily& family, const IntervalParams& params,
                                  double slack = 0.0);

// The same on a sample, with empirical cell masses.
CoverageReport EmpiricalCoverageAudit(const PredictorBundle& bundle,
                                      const std::vector<LabeledExample>& data,
                                      const GroupFamily& family, const IntervalParams& params,
                                      double slack = 0.0);

}  // namespace momcal

#endif  // MOMCAL_CALIBRATION_AUDIT_H_
