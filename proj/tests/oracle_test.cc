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
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "momcal/buckets.h"
#include "momcal/errors.h"
#include "momcal/oracle.h"
#include "momcal/oracle_trainer.h"
#include "momcal/sample_trainer.h"
#include "momcal/synthetic.h"

namespace momcal {
namespace {

struct Examples {
  std::vector<FeatureVector> points;
  std::vector<OracleExample> rows;
};

Examples RandomExamples(int count, int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> grid(0, 19);
  std::uniform_real_distribution<double> residual(-1.0, 1.0);
  std::uniform_int_distribution<int> weight(1, 5);
  Examples out;
  out.points.resize(count);
  for (int i = 0; i < count; ++i) {
    for (int c = 0; c < dim; ++c) out.points[i].values.push_back(grid(rng) / 20.0);
  }
  for (int i = 0; i < count; ++i) {
    out.rows.push_back(OracleExample{&out.points[i], static_cast<std::uint64_t>(weight(rng)),
                                     residual(rng)});
  }
  return out;
}

// sum_b w_b h(x_b) r_b for a region (family unused for learned regions).
double RegionValue(const Region& region, const std::vector<OracleExample>& rows) {
  double total = 0.0;
  for (const OracleExample& e : rows) {
    if (RegionContains(region, GroupFamily{}, *e.x)) total += e.weight * e.residual;
  }
  return total;
}

// Best value over the threshold class by direct enumeration.
double BestThresholdValue(const std::vector<OracleExample>& rows) {
  double best = std::max(0.0, RegionValue(Region::All(), rows));
  for (const OracleExample& t : rows) {
    for (size_t c = 0; c < t.x->values.size(); ++c) {
      const double v = t.x->values[c];
      double above = 0.0, below = 0.0;
      for (const OracleExample& e : rows) {
        (e.x->values[c] >= v ? above : below) += e.weight * e.residual;
      }
      best = std::max({best, above, below});
    }
  }
  return best;
}

TEST(OracleTest, ExhaustivePicksTheBestGroupWithEarlierTies) {
  const GroupFamily family({{"left", Predicate::Box({BoxConstraint{0, {}, 0.5}})},
                            {"left_again", Predicate::Box({BoxConstraint{0, {}, 0.5}})},
                            {"right", Predicate::Box({BoxConstraint{0, 0.5, {}}})}});
  ExhaustiveOracle oracle(family);
  FeatureVector a{"a", {0.2}}, b{"b", {0.8}};
  std::vector<OracleExample> rows = {{&a, 2, 0.5}, {&b, 1, -0.25}};
  EXPECT_EQ(oracle.Learn(rows), Region::Group("left"));
  EXPECT_DOUBLE_EQ(oracle.Value(0, rows), 1.0 / 3.0);
  rows = {{&a, 2, -0.5}, {&b, 1, 0.25}};
  EXPECT_EQ(oracle.Learn(rows), Region::Group("right"));
  rows = {{&a, 2, -0.5}, {&b, 1, -0.25}};
  EXPECT_EQ(oracle.Learn(rows), Region::Empty());
  EXPECT_THROW(ExhaustiveOracle(GroupFamily{}), InvalidArgument);
  EXPECT_THROW(ExhaustiveOracle(std::vector<Predicate>{}), InvalidArgument);
}

TEST(OracleTest, StumpMatchesEnumeration) {
  StumpOracle oracle;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Examples ex = RandomExamples(25, 2, seed);
    const Region r = oracle.Learn(ex.rows);
    const double best = BestThresholdValue(ex.rows);
    const double got = r == Region::Empty() ? 0.0 : RegionValue(r, ex.rows);
    EXPECT_NEAR(got, best, 1e-9) << "seed " << seed;
  }
}

std::string OracleCommand(const std::string& flag = "") {
  return std::string("python3 ") + MOMCAL_SOURCE_DIR + "/tests/oracles/threshold_oracle.py " +
         flag;
}

TEST(OracleTest, SubprocessOracleAgreesWithIndependentScript) {
  SubprocessOracle oracle(OracleCommand());
  StumpOracle stump;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Examples ex = RandomExamples(15, 2, seed);
    const Region r = oracle.Learn(ex.rows);  // one process serves every call
    const double got = r == Region::Empty() ? 0.0 : RegionValue(r, ex.rows);
    const Region s = stump.Learn(ex.rows);
    const double want = s == Region::Empty() ? 0.0 : RegionValue(s, ex.rows);
    EXPECT_NEAR(got, want, 1e-9) << "seed " << seed;
  }
  FeatureVector a{"a", {0.5}};
  EXPECT_EQ(oracle.Learn({{&a, 1, -1.0}}), Region::Empty());
}

TEST(OracleTest, SubprocessFailuresAreReported) {
  FeatureVector a{"a", {0.5}};
  const std::vector<OracleExample> rows = {{&a, 1, 1.0}};
  SubprocessOracle garbage(OracleCommand("--garbage"));
  EXPECT_THROW(garbage.Learn(rows), InvalidArgument);
  SubprocessOracle quits(OracleCommand("--exit"));
  EXPECT_THROW(quits.Learn(rows), IoError);
  SubprocessOracle missing("exit 3");
  EXPECT_THROW(missing.Learn(rows), IoError);
}

TEST(OracleTest, RegionContainsResolvesGroups) {
  const GroupFamily family({{"low", Predicate::Box({BoxConstraint{0, {}, 0.5}})}});
  const FeatureVector x{"x", {0.2}};
  EXPECT_TRUE(RegionContains(Region::Group("low"), family, x));
  EXPECT_TRUE(RegionContains(Region::All(), family, x));
  EXPECT_FALSE(RegionContains(Region::Empty(), family, x));
  EXPECT_THROW(RegionContains(Region::Group("nope"), family, x), InvalidArgument);
}

// The correlation of chi_S with the residual of R equals the mass of R ∩ S
// times the gap on R ∩ S, computed here by exact summation over the support.
TEST(OracleTest, ResidualCorrelationIdentity) {
  const FiniteDistribution dist = RandomFiniteDistribution(12, 2, 5, 4);
  const GroupFamily family = RandomBoxFamily(5, 2, 4);
  const LabelSpec spec{[](const FeatureVector& x) { return 0.3 + 0.4 * x.values[0]; },
                       [](const FeatureVector&, double y) { return y; }};
  std::vector<LabeledExample> outcomes;
  std::vector<double> prob;
  for (const SupportPoint& p : dist.support()) {
    for (const LabelOutcome& o : p.label_law) {
      outcomes.push_back({p.features, o.label, 1});
      prob.push_back(p.mass * o.prob);
    }
  }
  for (size_t r = 0; r < family.size(); ++r) {
    auto in_r = [&](const FeatureVector& x) { return family.Contains(r, x); };
    const ResidualSets res = ResidualLabels(spec, in_r, outcomes);
    for (size_t s = 0; s < family.size(); ++s) {
      double lhs_plus = 0.0, lhs_minus = 0.0;
      for (size_t e = 0; e < outcomes.size(); ++e) {
        if (!family.Contains(s, outcomes[e].features)) continue;
        lhs_plus += prob[e] * res.positive[e].label;
        lhs_minus += prob[e] * res.negative[e].label;
      }
      double mass = 0.0, predicted = 0.0, observed = 0.0;
      for (const SupportPoint& p : dist.support()) {
        if (!family.Contains(r, p.features) || !family.Contains(s, p.features)) continue;
        mass += p.mass;
        predicted += p.mass * spec.predicted(p.features);
        observed += p.mass * p.ConditionalMean();
      }
      const double rhs = mass > 0 ? mass * (predicted / mass - observed / mass) : 0.0;
      EXPECT_NEAR(lhs_plus, rhs, 1e-14);
      EXPECT_NEAR(lhs_minus, -rhs, 1e-14);
    }
  }
}

class ThrowingOracle : public AgnosticOracle {
 public:
  std::string name() const override { return "thrower"; }
  Region Learn(const std::vector<OracleExample>&) override {
    throw std::runtime_error("boom");
  }
};

TEST(OracleTest, OracleErrorsNameTheRefinement) {
  const std::vector<LabeledExample> data = {{{"a", {0.3}}, 1.0, 10}};
  const LabelSpec spec{[](const FeatureVector&) { return 0.0; },
                       [](const FeatureVector&, double y) { return y; }};
  SetDescriptor cell;
  cell.mean_bucket = 1;
  const std::vector<AuditCandidate> refinements = {
      {cell, [](const FeatureVector&) { return true; }}};
  ThrowingOracle oracle;
  try {
    OracleAuditWrapper(spec, 0.1, 0.05, data, data, refinements, oracle, GroupFamily{});
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("thrower"), std::string::npos);
    EXPECT_NE(what.find(cell.ToString()), std::string::npos);
    EXPECT_NE(what.find("boom"), std::string::npos);
  }
}

// With the whole domain as the only hypothesis the oracle audit tests
// exactly the refinement cells, so it must agree with direct enumeration.
TEST(OracleTest, WrapperAgreesWithEnumerationForTheTrivialClass) {
  const GroupFamily all({{"all", Predicate::All()}});
  const FiniteDistribution dist = BernoulliDistribution(10, 1, 6);
  const LabelSpec spec{[](const FeatureVector& x) { return std::round(x.values[0] * 4) / 4; },
                       [](const FeatureVector&, double y) { return y; }};
  std::vector<AuditCandidate> cells;
  for (int i = 1; i <= 5; ++i) {
    SetDescriptor d;
    d.mean_bucket = i;
    cells.push_back({d, [i, &spec](const FeatureVector& x) {
                       return BucketIndex(spec.predicted(x), 5) == i;
                     }});
  }
  ExhaustiveOracle oracle(all);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::vector<LabeledExample> data = SampleExamples(dist, 3000, seed);
    const AuditVerdict direct = ConsistencyAuditor(spec, 0.05, 0.05, data, cells);
    OracleAuditStats stats;
    const AuditVerdict via =
        OracleAuditWrapper(spec, 0.05, 0.05, data, data, cells, oracle, all, &stats);
    ASSERT_EQ(direct.violation, via.violation) << "seed " << seed;
    EXPECT_GT(stats.oracle_calls, 0u);
    if (!direct.violation) continue;
    EXPECT_EQ(direct.sign, via.sign);
    EXPECT_EQ(direct.set->mean_bucket, via.set->mean_bucket);
    EXPECT_EQ(via.set->region, Region::Group("all"));
    EXPECT_EQ(direct.record.gap, via.record.gap);
  }
}

TEST(OracleTest, OracleTrainingReproducesSampleTraining) {
  const GroupFamily all({{"all", Predicate::All()}});
  const FiniteDistribution dist = BernoulliDistribution(12, 2, 2);
  SampleTrainConfig c;
  c.n = 50000;
  c.bucket_count = 8;
  c.max_degree = 4;
  DistributionSource s1(dist, 21), s2(dist, 21);
  const SampleTrainResult sample = SampleAlternatingDescent(c, s1, all);
  ExhaustiveOracle oracle(all);
  const OracleTrainResult via = OracleAlternatingDescent(OracleTrainConfig{c}, s2, all, oracle);
  ASSERT_EQ(sample.bundle.updates().size(), via.bundle.updates().size());
  for (size_t u = 0; u < sample.bundle.updates().size(); ++u) {
    const UpdateRecord& a = sample.bundle.updates()[u];
    const UpdateRecord& b = via.bundle.updates()[u];
    EXPECT_EQ(a.target, b.target);
    EXPECT_EQ(a.step, b.step);
    EXPECT_TRUE(a.selector == b.selector) << a.selector.ToString() << " vs "
                                          << b.selector.ToString();
  }
  EXPECT_GT(sample.bundle.updates().size(), 0u);
  EXPECT_EQ(via.blocks_consumed, 2 * sample.blocks_consumed);
}

}  // namespace
}  // namespace momcal
