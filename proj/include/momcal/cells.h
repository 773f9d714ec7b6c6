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

// Group x bucket cells, cached per-point predictions, and weighted cell sums.
//
// Every cell search in the library walks cells in one canonical order:
// groups in declaration order (the whole domain, index -1, first when it is
// part of the scope), then mean-only cells by i, then moment cells by
// (degree, i, j). Sums inside a cell are accumulated in point order.

#ifndef MOMCAL_CELLS_H_
#define MOMCAL_CELLS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "momcal/bundle.h"
#include "momcal/types.h"

namespace momcal {

struct CellKey {
  int group = -1;  // index into the family; -1 = whole domain
  int mean_bucket = 1;
  std::optional<MomentBucket> moment;

  bool operator==(const CellKey&) const = default;
  bool operator<(const CellKey& o) const;

  // Selector naming this cell's set; the whole domain maps to Region::All.
  SetDescriptor ToSelector(const GroupFamily& family) const;
  std::string ToString(const GroupFamily& family) const;
};

// True iff x lies in the cell under the bundle's replayed predictions.
bool CellMembership(const BundleEvaluator& evaluator, const CellKey& cell, const FeatureVector& x);

// Feature vectors with precomputed group membership and cached replayed
// predictions. Apply() keeps the cache in sync as records are appended.
class PointSet {
 public:
  // Replays the full bundle for every point. `features` must outlive this.
  PointSet(const PredictorBundle& bundle, const GroupFamily& family,
           std::vector<const FeatureVector*> features);

  size_t size() const { return features_.size(); }
  const FeatureVector& features(size_t p) const { return *features_[p]; }
  const Prediction& state(size_t p) const { return state_[p]; }
  bool InGroup(int group, size_t p) const {
    return group < 0 || membership_[p * family_->size() + static_cast<size_t>(group)] != 0;
  }
  const GroupFamily& family() const { return *family_; }
  int bucket_count() const { return bucket_count_; }

  // Applies one record to every cached point; returns the number matched.
  size_t Apply(const UpdateRecord& record);

 private:
  const PredictorBundle* bundle_;
  const GroupFamily* family_;
  int bucket_count_;
  std::vector<const FeatureVector*> features_;
  std::vector<std::uint8_t> membership_;
  std::vector<Prediction> state_;
};

// Which cells a scan covers.
struct CellScope {
  bool mean_cells = true;          // G(mu, i)
  std::vector<int> moment_degrees;  // G(mu, m_a, i, j) for each listed degree
  bool whole_domain_only = false;   // the domain X instead of the family's groups
};

// One contribution to cell sums: a cached point with an aggregation weight
// (probability mass or sample count) and an observed label value.
struct CellRow {
  size_t point = 0;
  double weight = 0.0;
  double observed = 0.0;
  std::uint64_t count = 0;
};

struct CellSums {
  double weight = 0.0;
  double predicted = 0.0;  // sum of weight * predicted value
  double observed = 0.0;   // sum of weight * observed value
  std::uint64_t count = 0;

  double PredictedMean() const { return predicted / weight; }
  double ObservedMean() const { return observed / weight; }
};

// Aggregates `rows` into the populated cells of `scope`, in canonical order.
// The predicted value is the cached value in `target_slot` (-1 = mean).
std::vector<std::pair<CellKey, CellSums>> AggregateCells(const PointSet& points,
                                                         std::span<const CellRow> rows,
                                                         const CellScope& scope,
                                                         const PredictorBundle& bundle,
                                                         int target_slot);

// Member rows (indices into `rows`) of every populated cell of `scope`.
std::vector<std::pair<CellKey, std::vector<size_t>>> CellMembers(const PointSet& points,
                                                                 std::span<const CellRow> rows,
                                                                 const CellScope& scope,
                                                                 const PredictorBundle& bundle);

}  // namespace momcal

#endif  // MOMCAL_CELLS_H_
