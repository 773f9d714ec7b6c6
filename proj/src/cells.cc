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

#include "momcal/cells.h"

#include <map>
#include <sstream>
#include <tuple>

#include "momcal/buckets.h"
#include "momcal/errors.h"

namespace momcal {

namespace {

auto OrderTuple(const CellKey& c) {
  return std::make_tuple(c.group, c.moment.has_value(), c.moment ? c.moment->degree : 0,
                         c.mean_bucket, c.moment ? c.moment->bucket : 0);
}

// Calls fn(key) for every cell of `scope` containing cached point p.
template <typename Fn>
void ForEachCell(const PointSet& points, size_t p, const CellScope& scope,
                 const PredictorBundle& bundle, Fn&& fn) {
  const int m = points.bucket_count();
  const Prediction& s = points.state(p);
  const int i = BucketIndex(s.mean, m);
  const int first = scope.whole_domain_only ? -1 : 0;
  const int last = scope.whole_domain_only ? 0 : static_cast<int>(points.family().size());
  for (int g = first; g < last; ++g) {
    if (!points.InGroup(g, p)) continue;
    if (scope.mean_cells) fn(CellKey{g, i, std::nullopt});
    for (int a : scope.moment_degrees) {
      const int slot = bundle.MomentSlot(a);
      if (slot < 0) throw InvalidArgument("cell scope references untracked degree");
      fn(CellKey{g, i, MomentBucket{a, BucketIndex(s.moments[slot], m)}});
    }
  }
}

}  // namespace

bool CellKey::operator<(const CellKey& o) const { return OrderTuple(*this) < OrderTuple(o); }

SetDescriptor CellKey::ToSelector(const GroupFamily& family) const {
  SetDescriptor s;
  s.region = group < 0 ? Region::All() : Region::Group(family[static_cast<size_t>(group)].name);
  s.mean_bucket = mean_bucket;
  s.moment = moment;
  return s;
}

std::string CellKey::ToString(const GroupFamily& family) const {
  std::ostringstream os;
  os << (group < 0 ? std::string("X") : family[static_cast<size_t>(group)].name) << "(i="
     << mean_bucket;
  if (moment) os << ", m" << moment->degree << " j=" << moment->bucket;
  os << ")";
  return os.str();
}

bool CellMembership(const BundleEvaluator& evaluator, const CellKey& cell,
                    const FeatureVector& x) {
  const GroupFamily& family = evaluator.family();
  if (cell.group >= static_cast<int>(family.size())) {
    throw InvalidArgument("cell group index out of range");
  }
  if (cell.group >= 0 && !family.Contains(static_cast<size_t>(cell.group), x)) return false;
  const PredictorBundle& bundle = evaluator.bundle();
  const int m = bundle.bucket_count();
  const Prediction s = evaluator.Evaluate(x);
  if (BucketIndex(s.mean, m) != cell.mean_bucket) return false;
  if (cell.moment) {
    const int slot = bundle.MomentSlot(cell.moment->degree);
    if (slot < 0) throw InvalidArgument("cell references untracked degree");
    if (BucketIndex(s.moments[slot], m) != cell.moment->bucket) return false;
  }
  return true;
}

PointSet::PointSet(const PredictorBundle& bundle, const GroupFamily& family,
                   std::vector<const FeatureVector*> features)
    : bundle_(&bundle),
      family_(&family),
      bucket_count_(bundle.bucket_count()),
      features_(std::move(features)) {
  const size_t g = family.size();
  membership_.assign(features_.size() * g, 0);
  for (size_t p = 0; p < features_.size(); ++p) {
    for (size_t k = 0; k < g; ++k) membership_[p * g + k] = family.Contains(k, *features_[p]);
  }
  state_.assign(features_.size(), bundle.InitialPrediction());
  for (const UpdateRecord& r : bundle.updates()) Apply(r);
}

size_t PointSet::Apply(const UpdateRecord& record) {
  const ResolvedSelector sel = Resolve(record.selector, *bundle_, *family_);
  const int slot = bundle_->SlotOf(record.target);
  size_t matched = 0;
  for (size_t p = 0; p < features_.size(); ++p) {
    bool in_region = false;
    switch (sel.kind) {
      case Region::Kind::kAll:
        in_region = true;
        break;
      case Region::Kind::kEmpty:
        in_region = false;
        break;
      case Region::Kind::kGroup:
        in_region = InGroup(sel.group, p);
        break;
      case Region::Kind::kPredicate:
        in_region = sel.predicate->Contains(features_[p]->values);
        break;
    }
    if (ApplyUpdate(record, slot, sel, in_region, bucket_count_, state_[p])) ++matched;
  }
  return matched;
}

std::vector<std::pair<CellKey, CellSums>> AggregateCells(const PointSet& points,
                                                         std::span<const CellRow> rows,
                                                         const CellScope& scope,
                                                         const PredictorBundle& bundle,
                                                         int target_slot) {
  std::map<CellKey, CellSums> sums;
  for (const CellRow& row : rows) {
    const double pred = points.state(row.point).value(target_slot);
    ForEachCell(points, row.point, scope, bundle, [&](const CellKey& key) {
      CellSums& s = sums[key];
      s.weight += row.weight;
      s.predicted += row.weight * pred;
      s.observed += row.weight * row.observed;
      s.count += row.count;
    });
  }
  return {sums.begin(), sums.end()};
}

std::vector<std::pair<CellKey, std::vector<size_t>>> CellMembers(const PointSet& points,
                                                                 std::span<const CellRow> rows,
                                                                 const CellScope& scope,
                                                                 const PredictorBundle& bundle) {
  std::map<CellKey, std::vector<size_t>> members;
  for (size_t r = 0; r < rows.size(); ++r) {
    ForEachCell(points, rows[r].point, scope, bundle,
                [&](const CellKey& key) { members[key].push_back(r); });
  }
  return {members.begin(), members.end()};
}

}  // namespace momcal
