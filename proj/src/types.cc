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

#include "momcal/types.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "momcal/errors.h"

namespace momcal {

namespace {

constexpr double kSumTolerance = 1e-12;

bool SumsToOne(double total, size_t terms) {
  // Relative tolerance scaled by the number of accumulated terms.
  return std::abs(total - 1.0) <= kSumTolerance * std::max<size_t>(1, terms);
}

void CheckFeatures(const FeatureVector& f, size_t dim) {
  if (f.values.size() != dim) {
    throw InvalidArgument("point '" + f.id + "' has dimension " +
                          std::to_string(f.values.size()) + ", expected " +
                          std::to_string(dim));
  }
  for (double v : f.values) {
    if (!std::isfinite(v)) throw InvalidArgument("point '" + f.id + "' has a non-finite feature");
  }
}

}  // namespace

std::uint64_t TotalCount(const std::vector<LabeledExample>& examples) {
  std::uint64_t n = 0;
  for (const LabeledExample& e : examples) n += e.multiplicity;
  return n;
}

void ValidateExamples(const std::vector<LabeledExample>& examples) {
  if (examples.empty()) return;
  const size_t dim = examples.front().features.values.size();
  for (const LabeledExample& e : examples) {
    CheckFeatures(e.features, dim);
    if (!(e.label >= 0.0 && e.label <= 1.0)) {
      throw InvalidArgument("example '" + e.features.id + "' label outside [0,1]");
    }
  }
}

double SupportPoint::ConditionalMean() const {
  double mean = 0.0;
  for (const LabelOutcome& o : label_law) mean += o.prob * o.label;
  return mean;
}

double SupportPoint::ConditionalCentralMoment(double center, int degree, bool absolute) const {
  double m = 0.0;
  for (const LabelOutcome& o : label_law) {
    const double d = absolute ? std::abs(o.label - center) : o.label - center;
    m += o.prob * std::pow(d, degree);
  }
  return m;
}

FiniteDistribution::FiniteDistribution(std::vector<SupportPoint> support)
    : support_(std::move(support)) {
  if (support_.empty()) throw InvalidArgument("distribution has empty support");
  const size_t dim = support_.front().features.values.size();
  double total = 0.0;
  for (const SupportPoint& p : support_) {
    CheckFeatures(p.features, dim);
    if (!(p.mass >= 0.0) || !std::isfinite(p.mass)) {
      throw InvalidArgument("point '" + p.features.id + "' has invalid mass");
    }
    total += p.mass;
    if (p.label_law.empty()) {
      throw InvalidArgument("point '" + p.features.id + "' has an empty label law");
    }
    double prob = 0.0;
    for (const LabelOutcome& o : p.label_law) {
      if (!(o.label >= 0.0 && o.label <= 1.0)) {
        throw InvalidArgument("point '" + p.features.id + "' has a label outside [0,1]");
      }
      if (!(o.prob >= 0.0)) {
        throw InvalidArgument("point '" + p.features.id + "' has a negative label probability");
      }
      prob += o.prob;
    }
    if (!SumsToOne(prob, p.label_law.size())) {
      throw InvalidArgument("label law of point '" + p.features.id + "' does not sum to 1");
    }
  }
  if (!SumsToOne(total, support_.size())) {
    throw InvalidArgument("support masses do not sum to 1");
  }
}

size_t FiniteDistribution::dimension() const {
  return support_.empty() ? 0 : support_.front().features.values.size();
}

GroupFamily::GroupFamily(std::vector<Group> groups) : groups_(std::move(groups)) {
  for (size_t i = 0; i < groups_.size(); ++i) {
    if (groups_[i].name.empty()) throw InvalidArgument("group with empty name");
    if (!index_.emplace(groups_[i].name, static_cast<int>(i)).second) {
      throw InvalidArgument("duplicate group name '" + groups_[i].name + "'");
    }
  }
}

int GroupFamily::Find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

}  // namespace momcal
