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
#include <vector>

#include "momcal/errors.h"
#include "momcal/moments.h"
#include "momcal/synthetic.h"

namespace momcal {
namespace {

using Law = std::vector<LabelOutcome>;

double Mean(const Law& law) {
  double m = 0.0;
  for (const LabelOutcome& o : law) m += o.prob * o.label;
  return m;
}

double Central(const Law& law, int k) {
  const double mu = Mean(law);
  double m = 0.0;
  for (const LabelOutcome& o : law) m += o.prob * std::pow(o.label - mu, k);
  return m;
}

MixtureComponent Component(double weight, const Law& law, int k) {
  MixtureComponent c{weight, Mean(law), {}};
  for (int a = 0; a <= k; ++a) c.moments.push_back(a == 1 ? 0.0 : Central(law, a));
  c.moments[0] = 1.0;
  return c;
}

TEST(MomentsTest, TwoPointPooledVersusPointwise) {
  const FiniteDistribution dist = TwoPointDistribution();
  const auto pooled = TrueMeanAndMoments(dist, Predicate::All(), 4);
  ASSERT_TRUE(pooled.has_value());
  EXPECT_DOUBLE_EQ(pooled->mass, 1.0);
  EXPECT_DOUBLE_EQ(pooled->mean, 0.5);
  EXPECT_DOUBLE_EQ(pooled->moment(2), 0.25);
  EXPECT_DOUBLE_EQ(pooled->moment(4), 0.0625);
  for (size_t p = 0; p < dist.size(); ++p) {
    const auto point = TrueMeanAndMoments(dist, [p](size_t q) { return q == p; }, 4);
    ASSERT_TRUE(point.has_value());
    EXPECT_EQ(point->mean, static_cast<double>(p));
    EXPECT_EQ(point->moment(2), 0.0);
    EXPECT_EQ(point->moment(4), 0.0);
  }
  EXPECT_FALSE(TrueMeanAndMoments(dist, Predicate::None(), 2).has_value());
}

TEST(MomentsTest, BernoulliVarianceMatchesRate) {
  const FiniteDistribution dist = BernoulliDistribution(12, 2, 4);
  for (size_t p = 0; p < dist.size(); ++p) {
    const double q = BernoulliRate(dist[p].features.values);
    const auto s = TrueMeanAndMoments(dist, [p](size_t r) { return r == p; }, 2);
    EXPECT_NEAR(s->mean, q, 1e-12);
    EXPECT_NEAR(s->moment(2), q * (1.0 - q), 1e-12);
  }
}

TEST(MomentsTest, AbsoluteOddMoments) {
  const FiniteDistribution dist = TwoPointDistribution();
  const auto s = TrueMeanAndMoments(dist, Predicate::All(), 3, true);
  EXPECT_DOUBLE_EQ(s->moment(3), 0.125);
  const auto signed_moment = TrueMeanAndMoments(dist, Predicate::All(), 3, false);
  EXPECT_DOUBLE_EQ(signed_moment->moment(3), 0.0);
}

TEST(MixtureTest, WorkedValues) {
  // Values from tests/oracles/small_cases.py.
  const double half = 0.5;
  EXPECT_DOUBLE_EQ(MixtureMoment({Component(half, {{0.0, 1.0}}, 4),
                                  Component(half, {{1.0, 1.0}}, 4)},
                                 2),
                   0.25);
  MixtureComponent a{0.5, 0.3, {1.0, 0.0, 0.1}};
  MixtureComponent b{0.5, 0.3, {1.0, 0.0, 0.2}};
  EXPECT_NEAR(MixtureMoment({a, b}, 2), 0.15, 1e-15);
  const Law u = {{0.0, 0.5}, {0.5, 0.5}};
  const Law d = {{1.0, 1.0}};
  const std::vector<MixtureComponent> mix = {Component(1.0 / 3.0, u, 4),
                                             Component(2.0 / 3.0, d, 4)};
  EXPECT_NEAR(MixtureMoment(mix, 2), 7.0 / 48.0, 1e-15);
  EXPECT_NEAR(MixtureMoment(mix, 3), -1.0 / 16.0, 1e-15);
  EXPECT_NEAR(MixtureMoment(mix, 4), 43.0 / 768.0, 1e-15);
}

TEST(MixtureTest, MatchesPooledMomentsOnRandomMixtures) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 4);
    const int parts = 1 + static_cast<int>(rng() % 4);
    std::vector<Law> laws(parts);
    std::vector<double> w(parts);
    double total = 0.0;
    for (int l = 0; l < parts; ++l) {
      w[l] = u(rng) + 0.05;
      total += w[l];
      const int outcomes = 1 + static_cast<int>(rng() % 4);
      double mass = 0.0;
      for (int o = 0; o < outcomes; ++o) {
        laws[l].push_back({u(rng), u(rng) + 0.05});
        mass += laws[l].back().prob;
      }
      for (LabelOutcome& o : laws[l]) o.prob /= mass;
    }
    std::vector<MixtureComponent> comps;
    Law pooled;
    for (int l = 0; l < parts; ++l) {
      comps.push_back(Component(w[l] / total, laws[l], k));
      for (const LabelOutcome& o : laws[l]) pooled.push_back({o.label, o.prob * w[l] / total});
    }
    EXPECT_NEAR(MixtureMoment(comps, k), Central(pooled, k), 1e-10);
  }
}

TEST(MixtureTest, EqualMeansGiveConvexCombination) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double mean = u(rng);
    std::vector<MixtureComponent> comps;
    double total = 0.0;
    for (int l = 0; l < 3; ++l) {
      comps.push_back({u(rng) + 0.1, mean, {1.0, 0.0, u(rng), u(rng) - 0.5, u(rng)}});
      total += comps.back().weight;
    }
    double expected = 0.0;
    for (MixtureComponent& c : comps) {
      c.weight /= total;
    }
    for (const MixtureComponent& c : comps) expected += c.weight * c.moments[4];
    EXPECT_EQ(MixtureMoment(comps, 4), expected);
  }
}

TEST(MixtureTest, RejectsInvalidComponents) {
  EXPECT_THROW(MixtureMoment({}, 2), InvalidArgument);
  EXPECT_THROW(MixtureMoment({{0.6, 0.1, {1.0, 0.0, 0.1}}}, 2), InvalidArgument);
  EXPECT_THROW(MixtureMoment({{1.0, 0.1, {1.0, 0.2, 0.1}}}, 2), InvalidArgument);
  EXPECT_THROW(MixtureMoment({{1.0, 0.1, {1.0, 0.0}}}, 2), InvalidArgument);
  EXPECT_EQ(Binomial(4, 2), 6.0);
  EXPECT_EQ(Binomial(10, 0), 1.0);
}

}  // namespace
}  // namespace momcal
