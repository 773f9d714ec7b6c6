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

// Mean and moment predictors stored as a replayable log of clamped updates.
//
// A bundle starts from mean = 0 and every moment = 0. Each UpdateRecord
// subtracts its step from one target value, clamps to [0,1], and applies only
// to points matched by its selector. Selectors test bucket membership against
// the values replayed so far, so the log is evaluated strictly in order.

#ifndef MOMCAL_BUNDLE_H_
#define MOMCAL_BUNDLE_H_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "momcal/predicate.h"
#include "momcal/types.h"

namespace momcal {

// Which predictor an update modifies: the mean, or the moment of `degree`.
struct Target {
  int degree = 0;  // 0 = mean

  static Target Mean() { return Target{0}; }
  static Target Moment(int a) { return Target{a}; }
  bool is_mean() const { return degree == 0; }
  bool operator==(const Target&) const = default;
};

// Feature-space part of a selector.
class Region {
 public:
  enum class Kind { kAll, kGroup, kPredicate, kEmpty };

  static Region All() { return Region(Kind::kAll, {}, {}); }
  static Region Empty() { return Region(Kind::kEmpty, {}, {}); }
  static Region Group(std::string name) { return Region(Kind::kGroup, std::move(name), {}); }
  static Region Learned(Predicate p) { return Region(Kind::kPredicate, {}, std::move(p)); }

  Kind kind() const { return kind_; }
  const std::string& group() const { return group_; }
  const Predicate& predicate() const { return predicate_; }

  nlohmann::json ToJson() const;
  static Region FromJson(const nlohmann::json& j);
  bool operator==(const Region& o) const;

 private:
  Region(Kind k, std::string g, Predicate p)
      : kind_(k), group_(std::move(g)), predicate_(std::move(p)) {}
  Kind kind_;
  std::string group_;
  Predicate predicate_;
};

struct MomentBucket {
  int degree = 2;
  int bucket = 1;
  bool operator==(const MomentBucket&) const = default;
};

// Region plus optional mean bucket i and optional (degree a, moment bucket j).
struct SetDescriptor {
  Region region = Region::All();
  std::optional<int> mean_bucket;
  std::optional<MomentBucket> moment;

  nlohmann::json ToJson() const;
  static SetDescriptor FromJson(const nlohmann::json& j);
  std::string ToString() const;
  bool operator==(const SetDescriptor& o) const;
};

struct UpdateRecord {
  Target target;
  double step = 0.0;  // new value = ProjectUnit(old - step)
  SetDescriptor selector;

  nlohmann::json ToJson() const;
  static UpdateRecord FromJson(const nlohmann::json& j);
};

// Replayed predictor values at one point. moments[s] belongs to
// moment_degrees()[s] of the owning bundle.
struct Prediction {
  double mean = 0.0;
  std::vector<double> moments;

  double& value(int slot) { return slot < 0 ? mean : moments[slot]; }
  double value(int slot) const { return slot < 0 ? mean : moments[slot]; }
  bool operator==(const Prediction&) const = default;
};

class PredictorBundle {
 public:
  // Empty-log bundle. `moment_degrees` defaults to the even degrees in
  // 2..max_degree. Odd degrees require `absolute_moments`.
  PredictorBundle(int bucket_count, int max_degree,
                  std::optional<std::vector<int>> moment_degrees = std::nullopt,
                  bool absolute_moments = false);

  int bucket_count() const { return bucket_count_; }
  int max_degree() const { return max_degree_; }
  const std::vector<int>& moment_degrees() const { return moment_degrees_; }
  bool absolute_moments() const { return absolute_moments_; }
  const std::vector<UpdateRecord>& updates() const { return updates_; }

  // Slot of `degree` in moment_degrees(), or -1 when absent.
  int MomentSlot(int degree) const;
  // -1 for the mean, otherwise the moment slot. Throws if not tracked.
  int SlotOf(const Target& t) const;

  // Validates the record against this bundle (degrees, bucket ranges).
  void Append(UpdateRecord record);

  Prediction InitialPrediction() const;

  // Free-form metadata echoed into serialized files.
  nlohmann::json& metadata() { return metadata_; }
  const nlohmann::json& metadata() const { return metadata_; }

  nlohmann::json ToJson() const;
  static PredictorBundle FromJson(const nlohmann::json& j);
  std::string Serialize() const;
  static PredictorBundle Parse(const std::string& text);

 private:
  void ValidateSelector(const SetDescriptor& s) const;

  int bucket_count_;
  int max_degree_;
  std::vector<int> moment_degrees_;
  bool absolute_moments_;
  std::vector<UpdateRecord> updates_;
  nlohmann::json metadata_ = nlohmann::json::object();
};

// Selector with group names resolved against a family.
struct ResolvedSelector {
  Region::Kind kind = Region::Kind::kAll;
  int group = -1;
  const Predicate* predicate = nullptr;
  int mean_bucket = 0;   // 0 = unconstrained
  int moment_slot = -1;  // -1 = unconstrained
  int moment_bucket = 0;

  bool InRegion(const GroupFamily& family, const FeatureVector& x) const;
  // Bucket constraints only, against the current replayed values.
  bool BucketsMatch(const Prediction& state, int m) const;
};

// Resolves `s` for `bundle` and `family`; throws InvalidArgument when the
// selector names a group the family lacks. The result borrows from `s`.
ResolvedSelector Resolve(const SetDescriptor& s, const PredictorBundle& bundle,
                         const GroupFamily& family);

// Applies one record to `state` given whether the point lies in the region.
// Returns true when the record matched.
bool ApplyUpdate(const UpdateRecord& record, int target_slot,
                 const ResolvedSelector& selector, bool in_region, int m,
                 Prediction& state);

// Replays a bundle against a fixed family. Safe for concurrent use.
class BundleEvaluator {
 public:
  BundleEvaluator(const PredictorBundle& bundle, const GroupFamily& family);

  Prediction Evaluate(const FeatureVector& x) const;
  const PredictorBundle& bundle() const { return *bundle_; }
  const GroupFamily& family() const { return *family_; }

 private:
  const PredictorBundle* bundle_;
  const GroupFamily* family_;
  std::vector<ResolvedSelector> selectors_;
  std::vector<int> target_slots_;
};

// One-shot replay.
Prediction EvaluateBundle(const PredictorBundle& bundle, const GroupFamily& family,
                          const FeatureVector& x);

}  // namespace momcal

#endif  // MOMCAL_BUNDLE_H_
