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
#include "momcal/bundle.h"
#include "momcal/errors.h"
#include "momcal/exact_trainer.h"
#include "momcal/types.h"

namespace momcal {
namespace {

GroupFamily TwoGroups() {
  return GroupFamily({{"all", Predicate::All()},
                      {"left", Predicate::Box({BoxConstraint{0, {}, 0.5}})}});
}

SetDescriptor Cell(Region r, std::optional<int> i = std::nullopt,
                   std::optional<MomentBucket> j = std::nullopt) {
  SetDescriptor s;
  s.region = std::move(r);
  s.mean_bucket = i;
  s.moment = j;
  return s;
}

TEST(BucketsTest, ProjectUnitClamps) {
  EXPECT_EQ(ProjectUnit(-0.3), 0.0);
  EXPECT_EQ(ProjectUnit(0.4), 0.4);
  EXPECT_EQ(ProjectUnit(1.7), 1.0);
  EXPECT_THROW(ProjectUnit(std::nan("")), InvalidArgument);
}

TEST(BucketsTest, HalfOpenBucketsWithTopClosed) {
  EXPECT_EQ(BucketIndex(0.0, 10), 1);
  EXPECT_EQ(BucketIndex(0.1, 10), 2);
  EXPECT_EQ(BucketIndex(0.3, 10), 4);
  EXPECT_EQ(BucketIndex(0.7, 10), 8);
  EXPECT_EQ(BucketIndex(0.99999, 10), 10);
  EXPECT_EQ(BucketIndex(1.0, 10), 10);
  EXPECT_EQ(BucketIndex(0.5, 1), 1);
  // Every boundary k/m opens bucket k+1.
  for (int m : {3, 7, 10, 20, 1000}) {
    for (int k = 0; k < m; ++k) EXPECT_EQ(BucketIndex(static_cast<double>(k) / m, m), k + 1);
  }
  EXPECT_THROW(BucketIndex(1.01, 10), InvalidArgument);
  EXPECT_THROW(BucketIndex(0.5, 0), InvalidArgument);
}

TEST(BucketsTest, IterationCaps) {
  EXPECT_EQ(IterationCap(0.1), 99);
  EXPECT_EQ(IterationCap(0.5), 3);
  EXPECT_EQ(IterationCap(1.0), 0);
  EXPECT_EQ(MeanUpdateCap(0.1), 99);
  EXPECT_EQ(TotalUpdateCap(0.1, 0.1, 4), 29502);
  EXPECT_THROW(IterationCap(0.0), InvalidArgument);
}

TEST(BundleTest, DefaultDegreesAreEven) {
  PredictorBundle b(10, 5, std::nullopt, false);
  EXPECT_EQ(b.moment_degrees(), (std::vector<int>{2, 4}));
  EXPECT_EQ(b.MomentSlot(4), 1);
  EXPECT_EQ(b.MomentSlot(3), -1);
  EXPECT_THROW(PredictorBundle(10, 3, std::vector<int>{3}, false), InvalidArgument);
  PredictorBundle abs(10, 3, std::vector<int>{2, 3}, true);
  EXPECT_EQ(abs.MomentSlot(3), 1);
}

TEST(BundleTest, EmptyBundleEvaluatesToZero) {
  const PredictorBundle b(10, 2);
  const Prediction p = EvaluateBundle(b, TwoGroups(), FeatureVector{"a", {0.2}});
  EXPECT_EQ(p.mean, 0.0);
  EXPECT_EQ(p.moments, std::vector<double>{0.0});
}

TEST(BundleTest, ReplayUsesBucketsOfTheValuesSoFar) {
  const GroupFamily family = TwoGroups();
  PredictorBundle b(10, 2);
  // Raise the mean of the left half to 0.3 in three steps; each step is
  // selected by the bucket the point is in before it.
  b.Append({Target::Mean(), -0.1, Cell(Region::Group("left"), 1)});
  b.Append({Target::Mean(), -0.1, Cell(Region::Group("left"), 2)});
  b.Append({Target::Mean(), -0.1, Cell(Region::Group("left"), 3)});
  // Bucket 3 no longer matches after the previous steps.
  b.Append({Target::Mean(), -0.1, Cell(Region::Group("left"), 3)});
  b.Append({Target::Moment(2), -0.2, Cell(Region::All(), 4, MomentBucket{2, 1})});
  const Prediction left = EvaluateBundle(b, family, FeatureVector{"l", {0.2}});
  const Prediction right = EvaluateBundle(b, family, FeatureVector{"r", {0.8}});
  EXPECT_NEAR(left.mean, 0.3, 1e-15);
  EXPECT_NEAR(left.moments[0], 0.2, 1e-15);
  EXPECT_EQ(right.mean, 0.0);
  EXPECT_EQ(right.moments[0], 0.0);
}

TEST(BundleTest, UpdatesClampToUnitInterval) {
  PredictorBundle b(4, 2);
  b.Append({Target::Mean(), 0.5, Cell(Region::All())});
  b.Append({Target::Moment(2), -3.0, Cell(Region::All())});
  const Prediction p = EvaluateBundle(b, TwoGroups(), FeatureVector{"x", {0.1}});
  EXPECT_EQ(p.mean, 0.0);
  EXPECT_EQ(p.moments[0], 1.0);
}

TEST(BundleTest, RejectsInvalidSelectors) {
  PredictorBundle b(10, 2);
  EXPECT_THROW(b.Append({Target::Mean(), 0.1, Cell(Region::All(), 11)}), InvalidArgument);
  EXPECT_THROW(b.Append({Target::Mean(), 0.1, Cell(Region::All(), 1, MomentBucket{4, 1})}),
               InvalidArgument);
  EXPECT_THROW(b.Append({Target::Moment(4), 0.1, Cell(Region::All())}), InvalidArgument);
  b.Append({Target::Mean(), 0.1, Cell(Region::Group("missing"))});
  EXPECT_THROW(BundleEvaluator(b, TwoGroups()), InvalidArgument);
}

TEST(BundleTest, SerializationRoundTripsBitExactly) {
  PredictorBundle b(7, 4, std::vector<int>{2, 3, 4}, true);
  b.Append({Target::Mean(), -0.1 / 3.0, Cell(Region::Group("left"), 1)});
  b.Append({Target::Moment(3), 0.07, Cell(Region::All(), 1, MomentBucket{3, 1})});
  b.Append({Target::Moment(4), -0.3,
            Cell(Region::Learned(Predicate::Box({BoxConstraint{0, 0.1, {}}})), std::nullopt,
                 MomentBucket{2, 1})});
  b.metadata()["note"] = "roundtrip";
  const std::string text = b.Serialize();
  const PredictorBundle back = PredictorBundle::Parse(text);
  EXPECT_EQ(back.Serialize(), text);
  ASSERT_EQ(back.updates().size(), 3u);
  EXPECT_EQ(back.updates()[0].step, -0.1 / 3.0);
  EXPECT_EQ(back.moment_degrees(), b.moment_degrees());
  EXPECT_TRUE(back.absolute_moments());
  for (double x : {0.0, 0.05, 0.2, 0.6, 0.99}) {
    const FeatureVector f{"x", {x}};
    EXPECT_EQ(EvaluateBundle(back, TwoGroups(), f), EvaluateBundle(b, TwoGroups(), f));
  }
}

TEST(BundleTest, ParseRejectsMalformedInput) {
  EXPECT_THROW(PredictorBundle::Parse("{\"format\":\"momcal-bundle/1\"}"), std::exception);
  EXPECT_THROW(PredictorBundle::Parse("[1,2]"), std::exception);
  EXPECT_THROW(PredictorBundle::Parse("not json"), std::exception);
}

TEST(RegionTest, JsonForms) {
  for (const Region& r : {Region::All(), Region::Empty(), Region::Group("g"),
                          Region::Learned(Predicate::Linear({1.0, -1.0}, 0.25))}) {
    EXPECT_EQ(Region::FromJson(r.ToJson()), r);
  }
  EXPECT_THROW(Region::FromJson(nlohmann::json::object()), InvalidArgument);
}

}  // namespace
}  // namespace momcal
