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

#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "momcal/calibration_audit.h"
#include "momcal/errors.h"
#include "momcal/exact_trainer.h"
#include "momcal/io.h"
#include "momcal/synthetic.h"

namespace momcal {
namespace {

const GroupFamily& AllOnly() {
  static const GroupFamily* family = new GroupFamily({{"all", Predicate::All()}});
  return *family;
}

// Predicts the exact mean 1/2 and variance 1/4 of the two-point fixture.
PredictorBundle TwoPointTruth() {
  PredictorBundle b(10, 2);
  b.Append({Target::Mean(), -0.5, SetDescriptor{}});
  b.Append({Target::Moment(2), -0.25, SetDescriptor{}});
  return b;
}

TEST(EvalTest, TruthHasZeroGaps) {
  const CalibrationReport r =
      ExactCalibrationAudit(TwoPointTruth(), TwoPointDistribution(), AllOnly(), {1e-9, 1e-9});
  ASSERT_EQ(r.rows.size(), 2u);  // one mean cell, one moment cell
  for (const CalibrationRow& row : r.rows) {
    EXPECT_DOUBLE_EQ(row.mass, 1.0);
    EXPECT_EQ(row.mean_gap, 0.0);
    EXPECT_EQ(row.moment_gap, 0.0);
  }
  EXPECT_TRUE(r.passed());
  EXPECT_DOUBLE_EQ(r.rows[1].true_moment, 0.25);
}

TEST(EvalTest, MiscalibratedCellIsFlaggedFirst) {
  // Correct mean, untrained variance.
  PredictorBundle b(100, 2);
  b.Append({Target::Mean(), -0.5, SetDescriptor{}});
  const CalibrationReport r =
      ExactCalibrationAudit(b, TwoPointDistribution(), AllOnly(), {0.01, 0.01});
  EXPECT_EQ(r.violations, 1u);
  ASSERT_EQ(r.rows.size(), 2u);
  const CalibrationRow& worst = r.rows.front();
  EXPECT_TRUE(worst.is_moment());
  EXPECT_FALSE(worst.pass);
  EXPECT_DOUBLE_EQ(worst.moment_gap, 0.25);  // gaps are absolute
  // (beta + 2 alpha)/mass + 2/m = 0.03 + 0.02.
  EXPECT_NEAR(worst.moment_budget, 0.05, 1e-15);
  EXPECT_DOUBLE_EQ(worst.mean_budget, 0.01);
  EXPECT_NEAR(r.worst_ratio, 5.0, 1e-12);
  EXPECT_TRUE(r.rows.back().pass);
  EXPECT_NE(r.ToTable().find(worst.cell), std::string::npos);
}

TEST(EvalTest, ExactTrainedBundlesPass) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const FiniteDistribution dist = RandomFiniteDistribution(25, 2, 5, seed);
    const GroupFamily family = RandomBoxFamily(5, 2, seed);
    ExactTrainConfig c;
    c.max_degree = 4;
    const ExactTrainResult t = ExactAlternatingDescent(c, dist, family);
    const CalibrationReport r = ExactCalibrationAudit(t.bundle, dist, family, {0.1, 0.1});
    EXPECT_TRUE(r.passed()) << r.ToTable();
    for (size_t i = 1; i < r.rows.size(); ++i) EXPECT_GE(r.rows[i - 1].ratio, r.rows[i].ratio);
  }
}

TEST(EvalTest, EmpiricalAudit) {
  EXPECT_TRUE(EmpiricalCalibrationAudit(TwoPointTruth(), {}, AllOnly(), {}).rows.empty());
  const FiniteDistribution dist = TwoPointDistribution();
  const std::vector<LabeledExample> data = {{dist[0].features, 0.0, 300},
                                            {dist[1].features, 1.0, 100}};
  const CalibrationReport r = EmpiricalCalibrationAudit(TwoPointTruth(), data, AllOnly(), {});
  EXPECT_TRUE(r.empirical);
  EXPECT_EQ(r.n, 400u);
  ASSERT_EQ(r.rows.size(), 2u);
  for (const CalibrationRow& row : r.rows) {
    EXPECT_EQ(row.count, 400u);
    EXPECT_DOUBLE_EQ(row.uncertainty, 2 * std::sqrt(std::log(2 / 0.05) / 800));
    if (row.is_moment()) {
      EXPECT_DOUBLE_EQ(row.true_moment, 0.1875);  // pooled variance of 1/4 ones
    } else {
      EXPECT_DOUBLE_EQ(row.true_mean, 0.25);
    }
  }
}

TEST(EvalTest, CoverageOfDegenerateLabels) {
  std::vector<SupportPoint> support = {{{"a", {0.2}}, 0.5, {{0.3, 1.0}}},
                                       {{"b", {0.8}}, 0.5, {{0.3, 1.0}}}};
  const FiniteDistribution dist(std::move(support));
  PredictorBundle b(10, 2);
  b.Append({Target::Mean(), -0.3, SetDescriptor{}});
  const IntervalParams p = IntervalParams::ForExactTraining(0.1, 0.1, 10, 2, 0.1, 0.1);
  const CoverageReport r = ExactCoverageAudit(b, dist, AllOnly(), p);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_DOUBLE_EQ(r.rows[0].coverage, 1.0);
  EXPECT_EQ(r.failures, 0u);
  EXPECT_NE(r.ToCsv().find(r.rows[0].cell), std::string::npos);
}

TEST(EvalTest, NarrowIntervalsFailCoverage) {
  // Mean 1/2 with an untrained moment of 0 gives a tiny width; the labels
  // 0 and 1 are never covered.
  PredictorBundle b(10, 2);
  b.Append({Target::Mean(), -0.5, SetDescriptor{}});
  IntervalParams p;
  p.bucket_count = 1000;
  p.delta = 0.5;
  const CoverageReport r = ExactCoverageAudit(b, TwoPointDistribution(), AllOnly(), p);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_DOUBLE_EQ(r.rows[0].coverage, 0.0);
  EXPECT_EQ(r.failures, 1u);
  const std::vector<LabeledExample> data = SampleExamples(TwoPointDistribution(), 100, 1);
  const CoverageReport e = EmpiricalCoverageAudit(b, data, AllOnly(), p, 0.02);
  EXPECT_TRUE(e.empirical);
  EXPECT_EQ(e.failures, 1u);
}

TEST(EvalTest, GeneratorsAreDeterministic) {
  for (const char* g : {"finite", "bernoulli", "beta"}) {
    SyntheticSpec spec;
    spec.generator = g;
    spec.params = {{"points", 12}, {"dim", 2}, {"labels", 4}};
    const std::string a = DistributionToJson(GenerateSynthetic(spec, 5)).dump();
    EXPECT_EQ(a, DistributionToJson(GenerateSynthetic(spec, 5)).dump()) << g;
    EXPECT_NE(a, DistributionToJson(GenerateSynthetic(spec, 6)).dump()) << g;
  }
  SyntheticSpec bad;
  bad.generator = "nope";
  EXPECT_THROW(GenerateSynthetic(bad, 1), InvalidArgument);
  bad.generator = "finite";
  bad.params = {{"points", 0}, {"dim", 1}, {"labels", 3}};
  EXPECT_THROW(GenerateSynthetic(bad, 1), InvalidArgument);
}

TEST(EvalTest, GeneratorShapes) {
  const FiniteDistribution two = TwoPointDistribution();
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0].features.id, "x1");
  EXPECT_DOUBLE_EQ(two[1].features.values[0], 0.75);
  const FiniteDistribution bern = BernoulliDistribution(30, 2, 9);
  for (const SupportPoint& p : bern.support()) {
    for (double v : p.features.values) {
      EXPECT_DOUBLE_EQ(std::round(v * 1000) / 1000, v);
      EXPECT_GE(v, 0.0);
      EXPECT_LT(v, 1.0);
    }
    EXPECT_NEAR(p.ConditionalMean(), BernoulliRate(p.features.values), 1e-15);
  }
  const GroupFamily boxes = RandomBoxFamily(6, 2, 3);
  ASSERT_EQ(boxes.size(), 6u);
  EXPECT_EQ(boxes[0].name, "all");
  EXPECT_EQ(boxes[5].name, "g5");
  const std::vector<LabeledExample> draws = SampleExamples(bern, 500, 2);
  EXPECT_EQ(draws.size(), 500u);
  EXPECT_EQ(TotalCount(draws), 500u);
}

}  // namespace
}  // namespace momcal
