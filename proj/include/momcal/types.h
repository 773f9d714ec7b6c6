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

#ifndef MOMCAL_TYPES_H_
#define MOMCAL_TYPES_H_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "momcal/predicate.h"

namespace momcal {

struct FeatureVector {
  std::string id;
  std::vector<double> values;
};

// One observation. `multiplicity` > 1 stands for that many identical i.i.d.
// draws; samples drawn from a finite distribution are stored compressed this
// way, so a block of 10^9 draws costs as much as its number of distinct
// (point, label) outcomes.
struct LabeledExample {
  FeatureVector features;
  double label = 0.0;
  std::uint64_t multiplicity = 1;
};

// Total number of draws represented by `examples`.
std::uint64_t TotalCount(const std::vector<LabeledExample>& examples);

// Throws InvalidArgument unless every label is in [0,1], every feature is
// finite and all vectors share one dimensionality.
void ValidateExamples(const std::vector<LabeledExample>& examples);

struct LabelOutcome {
  double label = 0.0;
  double prob = 0.0;
};

struct SupportPoint {
  FeatureVector features;
  double mass = 0.0;
  std::vector<LabelOutcome> label_law;

  double ConditionalMean() const;
  // E[(y - center)^degree | x], or E[|y - center|^degree] when `absolute`.
  double ConditionalCentralMoment(double center, int degree, bool absolute = false) const;
};

// Finite-support joint distribution over features x labels.
class FiniteDistribution {
 public:
  FiniteDistribution() = default;
  // Validates: masses >= 0 summing to 1 and label probabilities summing to 1
  // (both within 1e-12 relative), labels in [0,1], consistent dimension.
  explicit FiniteDistribution(std::vector<SupportPoint> support);

  const std::vector<SupportPoint>& support() const { return support_; }
  size_t size() const { return support_.size(); }
  const SupportPoint& operator[](size_t i) const { return support_[i]; }
  size_t dimension() const;

 private:
  std::vector<SupportPoint> support_;
};

// Ordered, named membership predicates (the group collection).
class GroupFamily {
 public:
  struct Group {
    std::string name;
    Predicate predicate;
  };

  GroupFamily() = default;
  // Throws InvalidArgument on duplicate or empty names.
  explicit GroupFamily(std::vector<Group> groups);

  size_t size() const { return groups_.size(); }
  const Group& operator[](size_t i) const { return groups_[i]; }
  const std::vector<Group>& groups() const { return groups_; }

  // Index of the named group, or -1.
  int Find(const std::string& name) const;

  bool Contains(size_t group, const FeatureVector& x) const {
    return groups_[group].predicate.Contains(x.values);
  }

 private:
  std::vector<Group> groups_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace momcal

#endif  // MOMCAL_TYPES_H_
