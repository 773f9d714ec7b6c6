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

#include <string>
#include <vector>

#include "momcal/buckets.h"
#include "momcal/calibration_audit.h"
#include "momcal/errors.h"
#include "momcal/sample_trainer.h"
#include "momcal/synthetic.h"

namespace momcal {
namespace {

SampleTrainConfig SmallConfig() {
  SampleTrainConfig c;
  c.alpha = 0.1;
  c.beta = 0.1;
  c.delta = 0.05;
  c.n = 200000;
  c.bucket_count = 5;
  c.max_degree = 4;
  return c;
}

TEST(SampleTrainerTest, PreconditionNamesTheInequality) {
  SampleTrainConfig c = SmallConfig();
  c.n = 100;
  try {
    c.Validate();
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("2*sqrt(ln(2/delta)/(2n)) <= alpha"), std::string::npos);
  }
  c = SmallConfig();
  c.delta = 1.0;
  EXPECT_THROW(c.Validate(), InvalidArgument);
  c = SmallConfig();
  c.n = 0;
  EXPECT_THROW(c.Validate(), InvalidArgument);
}

TEST(SampleTrainerTest, DeterministicUnderSeed) {
  const FiniteDistribution dist = BernoulliDistribution(20, 2, 5);
  const GroupFamily family = RandomBoxFamily(4, 2, 5);
  DistributionSource a(dist, 11), b(dist, 11);
  const SampleTrainResult ra = SampleAlternatingDescent(SmallConfig(), a, family);
  const SampleTrainResult rb = SampleAlternatingDescent(SmallConfig(), b, family);
  EXPECT_EQ(ra.bundle.Serialize(), rb.bundle.Serialize());
  EXPECT_EQ(ra.report.ToJson(true).dump(), rb.report.ToJson(true).dump());
  EXPECT_GT(ra.report.outer_iterations, 0);
  // A different seed draws different blocks.
  DistributionSource d(dist, 11), e(dist, 12);
  const Block bd = d.Draw(100000, Stream::kAudit);
  const Block be = e.Draw(100000, Stream::kAudit);
  bool same = bd.examples.size() == be.examples.size();
  for (size_t i = 0; same && i < bd.examples.size(); ++i) {
    same = bd.examples[i].multiplicity == be.examples[i].multiplicity;
  }
  EXPECT_FALSE(same);
}

TEST(SampleTrainerTest, EveryAuditConsumesOneFreshBlock) {
  const FiniteDistribution dist = BetaGridDistribution(15, 1, 6, 2);
  const GroupFamily family = RandomBoxFamily(3, 1, 2);
  DistributionSource source(dist, 3);
  const SampleTrainConfig c = SmallConfig();
  const SampleTrainResult r = SampleAlternatingDescent(c, source, family);
  ASSERT_FALSE(r.report.statistical_failure);
  // One block for each audit: the final mean audit, one per mean update, and
  // for each mean update one per moment step plus the final moment audit.
  const std::uint64_t degrees = r.bundle.moment_degrees().size();
  const std::uint64_t expected = 1 + static_cast<std::uint64_t>(r.report.total_updates) +
                                 static_cast<std::uint64_t>(r.report.outer_iterations) * degrees;
  EXPECT_EQ(r.blocks_consumed, expected);
  EXPECT_EQ(r.examples_consumed, expected * c.n);
  EXPECT_EQ(source.blocks_drawn(Stream::kOracleTrain), 0u);
  EXPECT_LE(r.report.outer_iterations, MeanUpdateCap(c.alpha));
  for (const auto& [a, longest] : r.report.longest_inner_loop) {
    EXPECT_LE(longest, IterationCap(c.beta)) << "degree " << a;
  }
}

TEST(SampleTrainerTest, BlocksAreExactlyN) {
  const FiniteDistribution dist = RandomFiniteDistribution(30, 2, 4, 9);
  DistributionSource source(dist, 1);
  for (std::uint64_t n : {1ull, 17ull, 1000000ull, 2517607176ull}) {
    const Block b = source.Draw(n, Stream::kAudit);
    EXPECT_EQ(TotalCount(b.examples), n);
    EXPECT_EQ(b.support_index.size(), b.examples.size());
    for (size_t e = 0; e < b.examples.size(); ++e) {
      EXPECT_EQ(b.examples[e].features.id, dist[b.support_index[e]].features.id);
    }
  }
  EXPECT_THROW(source.Draw(0, Stream::kAudit), InvalidArgument);
}

TEST(SampleTrainerTest, TrainedBundlePassesHeldOutAudit) {
  const FiniteDistribution dist = BernoulliDistribution(20, 2, 7);
  const GroupFamily family = RandomBoxFamily(4, 2, 7);
  DistributionSource source(dist, 5);
  SampleTrainConfig c = SmallConfig();
  c.max_degree = 2;
  c.n = 1000000;
  const SampleTrainResult r = SampleAlternatingDescent(c, source, family);
  ASSERT_FALSE(r.report.statistical_failure);
  const double ap = AlphaPrime(c.alpha, c.delta, static_cast<double>(c.n));
  const CalibrationReport audit = ExactCalibrationAudit(r.bundle, dist, family, {ap, ap});
  EXPECT_TRUE(audit.passed()) << audit.ToTable();
}

TEST(SampleTrainerTest, PoolExhaustionReportsShortfall) {
  const FiniteDistribution dist = BernoulliDistribution(10, 1, 3);
  const GroupFamily family = RandomBoxFamily(3, 1, 3);
  PoolSource pool(SampleExamples(dist, 250000, 8));
  SampleTrainConfig c = SmallConfig();
  c.n = 100000;
  try {
    SampleAlternatingDescent(c, pool, family);
    // Training may legitimately finish within two blocks.
    SUCCEED();
  } catch (const PoolExhausted& e) {
    EXPECT_EQ(e.missing_examples(), 50000u);
    EXPECT_NE(std::string(e.what()).find("50000 remain"), std::string::npos);
  }
  PoolSource tiny(SampleExamples(dist, 10, 8));
  EXPECT_THROW(tiny.Draw(11, Stream::kAudit), PoolExhausted);
  std::vector<LabeledExample> bad = {{{"a", {0.1}}, 0.5, 2}};
  EXPECT_THROW(PoolSource{bad}, InvalidArgument);
}

TEST(SampleTrainerTest, PoolSourceTrainsOnSamplesWithoutSupport) {
  const FiniteDistribution dist = BernoulliDistribution(10, 1, 3);
  const GroupFamily family = RandomBoxFamily(3, 1, 3);
  SampleTrainConfig c = SmallConfig();
  c.n = 20000;
  c.max_degree = 2;
  PoolSource pool(SampleExamples(dist, 20000 * 200, 8));
  const SampleTrainResult r = SampleAlternatingDescent(c, pool, family);
  EXPECT_EQ(pool.remaining(), 20000u * 200 - r.examples_consumed);
  EXPECT_GT(r.report.outer_iterations, 0);
}

}  // namespace
}  // namespace momcal
