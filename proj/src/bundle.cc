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

#include "momcal/bundle.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "momcal/buckets.h"
#include "momcal/errors.h"

namespace momcal {

using nlohmann::json;

namespace {

constexpr char kFormat[] = "momcal-bundle/1";

int RequireInt(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    throw InvalidArgument(std::string("missing integer field '") + key + "'");
  }
  return j[key].get<int>();
}

}  // namespace

json Region::ToJson() const {
  switch (kind_) {
    case Kind::kAll:
      return json{{"all", true}};
    case Kind::kEmpty:
      return json{{"empty", true}};
    case Kind::kGroup:
      return json{{"group", group_}};
    case Kind::kPredicate:
      return json{{"predicate", predicate_.ToJson()}};
  }
  return json{};
}

Region Region::FromJson(const json& j) {
  if (!j.is_object()) throw InvalidArgument("region must be an object");
  if (j.contains("group")) {
    if (!j["group"].is_string()) throw InvalidArgument("region group must be a string");
    return Group(j["group"].get<std::string>());
  }
  if (j.contains("predicate")) return Learned(Predicate::FromJson(j["predicate"]));
  if (j.contains("all")) return All();
  if (j.contains("empty")) return Empty();
  throw InvalidArgument("unrecognized region " + j.dump());
}

bool Region::operator==(const Region& o) const {
  if (kind_ != o.kind_) return false;
  if (kind_ == Kind::kGroup) return group_ == o.group_;
  if (kind_ == Kind::kPredicate) return predicate_ == o.predicate_;
  return true;
}

json SetDescriptor::ToJson() const {
  json j{{"region", region.ToJson()}};
  if (mean_bucket) j["mean_bucket"] = *mean_bucket;
  if (moment) j["moment"] = json{{"degree", moment->degree}, {"bucket", moment->bucket}};
  return j;
}

SetDescriptor SetDescriptor::FromJson(const json& j) {
  if (!j.is_object() || !j.contains("region")) {
    throw InvalidArgument("selector needs a region");
  }
  SetDescriptor s;
  s.region = Region::FromJson(j["region"]);
  if (j.contains("mean_bucket")) s.mean_bucket = RequireInt(j, "mean_bucket");
  if (j.contains("moment")) {
    s.moment = MomentBucket{RequireInt(j["moment"], "degree"), RequireInt(j["moment"], "bucket")};
  }
  return s;
}

std::string SetDescriptor::ToString() const {
  std::ostringstream os;
  switch (region.kind()) {
    case Region::Kind::kAll:
      os << "X";
      break;
    case Region::Kind::kEmpty:
      os << "{}";
      break;
    case Region::Kind::kGroup:
      os << region.group();
      break;
    case Region::Kind::kPredicate:
      os << "h" << region.predicate().ToJson().dump();
      break;
  }
  if (mean_bucket) os << "(i=" << *mean_bucket;
  if (moment) os << (mean_bucket ? ", " : "(") << "m" << moment->degree << " j=" << moment->bucket;
  if (mean_bucket || moment) os << ")";
  return os.str();
}

bool SetDescriptor::operator==(const SetDescriptor& o) const {
  return region == o.region && mean_bucket == o.mean_bucket && moment == o.moment;
}

json UpdateRecord::ToJson() const {
  json j;
  if (target.is_mean()) {
    j["target"] = "mean";
  } else {
    j["target"] = "moment";
    j["degree"] = target.degree;
  }
  j["step"] = step;
  j["selector"] = selector.ToJson();
  return j;
}

UpdateRecord UpdateRecord::FromJson(const json& j) {
  if (!j.is_object() || !j.contains("target") || !j["target"].is_string()) {
    throw InvalidArgument("update record needs a target");
  }
  UpdateRecord r;
  const std::string t = j["target"].get<std::string>();
  if (t == "mean") {
    r.target = Target::Mean();
  } else if (t == "moment") {
    r.target = Target::Moment(RequireInt(j, "degree"));
  } else {
    throw InvalidArgument("unknown update target '" + t + "'");
  }
  if (!j.contains("step") || !j["step"].is_number()) throw InvalidArgument("update needs a step");
  r.step = j["step"].get<double>();
  if (!j.contains("selector")) throw InvalidArgument("update needs a selector");
  r.selector = SetDescriptor::FromJson(j["selector"]);
  return r;
}

PredictorBundle::PredictorBundle(int bucket_count, int max_degree,
                                 std::optional<std::vector<int>> moment_degrees,
                                 bool absolute_moments)
    : bucket_count_(bucket_count), max_degree_(max_degree), absolute_moments_(absolute_moments) {
  if (bucket_count <= 0) throw InvalidArgument("bucket count must be positive");
  if (max_degree < 2) throw InvalidArgument("max degree must be at least 2");
  if (moment_degrees) {
    moment_degrees_ = *moment_degrees;
  } else {
    for (int a = 2; a <= max_degree; a += 2) moment_degrees_.push_back(a);
  }
  std::sort(moment_degrees_.begin(), moment_degrees_.end());
  if (std::adjacent_find(moment_degrees_.begin(), moment_degrees_.end()) != moment_degrees_.end()) {
    throw InvalidArgument("duplicate moment degree");
  }
  for (int a : moment_degrees_) {
    if (a < 2 || a > max_degree) {
      throw InvalidArgument("moment degree " + std::to_string(a) + " outside 2..k");
    }
    if (a % 2 != 0 && !absolute_moments) {
      throw InvalidArgument("odd moment degree " + std::to_string(a) +
                            " requires absolute-central-moment mode");
    }
  }
}

int PredictorBundle::MomentSlot(int degree) const {
  auto it = std::find(moment_degrees_.begin(), moment_degrees_.end(), degree);
  return it == moment_degrees_.end() ? -1 : static_cast<int>(it - moment_degrees_.begin());
}

int PredictorBundle::SlotOf(const Target& t) const {
  if (t.is_mean()) return -1;
  const int slot = MomentSlot(t.degree);
  if (slot < 0) throw InvalidArgument("moment degree " + std::to_string(t.degree) + " not tracked");
  return slot;
}

void PredictorBundle::ValidateSelector(const SetDescriptor& s) const {
  if (s.mean_bucket && (*s.mean_bucket < 1 || *s.mean_bucket > bucket_count_)) {
    throw InvalidArgument("mean bucket out of range in " + s.ToString());
  }
  if (s.moment) {
    if (MomentSlot(s.moment->degree) < 0) {
      throw InvalidArgument("selector references untracked degree in " + s.ToString());
    }
    if (s.moment->bucket < 1 || s.moment->bucket > bucket_count_) {
      throw InvalidArgument("moment bucket out of range in " + s.ToString());
    }
  }
}

void PredictorBundle::Append(UpdateRecord record) {
  SlotOf(record.target);
  if (!std::isfinite(record.step)) throw InvalidArgument("non-finite update step");
  ValidateSelector(record.selector);
  updates_.push_back(std::move(record));
}

Prediction PredictorBundle::InitialPrediction() const {
  return Prediction{0.0, std::vector<double>(moment_degrees_.size(), 0.0)};
}

json PredictorBundle::ToJson() const {
  json updates = json::array();
  for (const UpdateRecord& r : updates_) updates.push_back(r.ToJson());
  json j{{"format", kFormat},
         {"bucket_count", bucket_count_},
         {"max_degree", max_degree_},
         {"moment_degrees", moment_degrees_},
         {"absolute_moments", absolute_moments_},
         {"updates", std::move(updates)}};
  if (!metadata_.empty()) j["metadata"] = metadata_;
  return j;
}

PredictorBundle PredictorBundle::FromJson(const json& j) {
  if (!j.is_object() || j.value("format", std::string()) != kFormat) {
    throw InvalidArgument(std::string("bundle must declare format ") + kFormat);
  }
  std::vector<int> degrees;
  if (!j.contains("moment_degrees") || !j["moment_degrees"].is_array()) {
    throw InvalidArgument("bundle needs moment_degrees");
  }
  for (const auto& d : j["moment_degrees"]) degrees.push_back(d.get<int>());
  PredictorBundle b(RequireInt(j, "bucket_count"), RequireInt(j, "max_degree"), degrees,
                    j.value("absolute_moments", false));
  if (j.contains("metadata")) b.metadata_ = j["metadata"];
  if (!j.contains("updates") || !j["updates"].is_array()) {
    throw InvalidArgument("bundle needs an updates array");
  }
  for (const auto& u : j["updates"]) b.Append(UpdateRecord::FromJson(u));
  return b;
}

std::string PredictorBundle::Serialize() const { return ToJson().dump(1) + "\n"; }

PredictorBundle PredictorBundle::Parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("bundle is not valid JSON: ") + e.what());
  }
  return FromJson(j);
}

bool ResolvedSelector::InRegion(const GroupFamily& family, const FeatureVector& x) const {
  switch (kind) {
    case Region::Kind::kAll:
      return true;
    case Region::Kind::kEmpty:
      return false;
    case Region::Kind::kGroup:
      return family.Contains(static_cast<size_t>(group), x);
    case Region::Kind::kPredicate:
      return predicate->Contains(x.values);
  }
  return false;
}

bool ResolvedSelector::BucketsMatch(const Prediction& state, int m) const {
  if (mean_bucket != 0 && BucketIndex(state.mean, m) != mean_bucket) return false;
  if (moment_slot >= 0 && BucketIndex(state.moments[moment_slot], m) != moment_bucket) {
    return false;
  }
  return true;
}

ResolvedSelector Resolve(const SetDescriptor& s, const PredictorBundle& bundle,
                         const GroupFamily& family) {
  ResolvedSelector r;
  r.kind = s.region.kind();
  if (r.kind == Region::Kind::kGroup) {
    r.group = family.Find(s.region.group());
    if (r.group < 0) {
      throw InvalidArgument("selector references unknown group '" + s.region.group() + "'");
    }
  } else if (r.kind == Region::Kind::kPredicate) {
    r.predicate = &s.region.predicate();
  }
  if (s.mean_bucket) r.mean_bucket = *s.mean_bucket;
  if (s.moment) {
    r.moment_slot = bundle.MomentSlot(s.moment->degree);
    if (r.moment_slot < 0) throw InvalidArgument("selector references untracked degree");
    r.moment_bucket = s.moment->bucket;
  }
  return r;
}

bool ApplyUpdate(const UpdateRecord& record, int target_slot, const ResolvedSelector& selector,
                 bool in_region, int m, Prediction& state) {
  if (!in_region || !selector.BucketsMatch(state, m)) return false;
  double& v = state.value(target_slot);
  v = ProjectUnit(v - record.step);
  return true;
}

BundleEvaluator::BundleEvaluator(const PredictorBundle& bundle, const GroupFamily& family)
    : bundle_(&bundle), family_(&family) {
  selectors_.reserve(bundle.updates().size());
  target_slots_.reserve(bundle.updates().size());
  for (const UpdateRecord& r : bundle.updates()) {
    selectors_.push_back(Resolve(r.selector, bundle, family));
    target_slots_.push_back(bundle.SlotOf(r.target));
  }
}

Prediction BundleEvaluator::Evaluate(const FeatureVector& x) const {
  Prediction state = bundle_->InitialPrediction();
  const int m = bundle_->bucket_count();
  const auto& updates = bundle_->updates();
  for (size_t t = 0; t < updates.size(); ++t) {
    const ResolvedSelector& sel = selectors_[t];
    ApplyUpdate(updates[t], target_slots_[t], sel, sel.InRegion(*family_, x), m, state);
  }
  return state;
}

Prediction EvaluateBundle(const PredictorBundle& bundle, const GroupFamily& family,
                          const FeatureVector& x) {
  return BundleEvaluator(bundle, family).Evaluate(x);
}

}  // namespace momcal
