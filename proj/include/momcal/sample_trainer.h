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

// Finite-sample training: the exact-mode loops with every cell search
// replaced by an empirical audit on a fresh block of n draws.

#ifndef MOMCAL_SAMPLE_TRAINER_H_
#define MOMCAL_SAMPLE_TRAINER_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "momcal/auditor.h"
#include "momcal/bundle.h"
#include "momcal/cells.h"
#include "momcal/exact_trainer.h"
#include "momcal/sample_source.h"

namespace momcal {

struct SampleTrainConfig {
  double alpha = 0.1;
  double beta = 0.1;
  double delta = 0.05;
  std::uint64_t n = 100000;
  int bucket_count = 10;
  int max_degree = 2;
  std::optional<std::vector<int>> moment_degrees;
  bool absolute_moments = false;
  bool record_trace = true;

  // Throws InvalidArgument on out-of-range fields and PreconditionError when
  // 2 sqrt(ln(2/delta)/(2n)) exceeds alpha or beta.
  void Validate() const;
};

// Replayed predictions for the points of the current block. With a fixed
// support the cache lives across blocks; otherwise it is rebuilt per block.
class BlockCache {
 public:
  BlockCache(const PredictorBundle& bundle, const GroupFamily& family,
             const FiniteDistribution* support);

  // Takes ownership of the block; the previous block is discarded.
  void Load(Block block);
  const Block& block() const { return block_; }
  const PointSet& points() const { return *points_; }
  // Cached point of example e of the loaded block.
  size_t point_of(size_t e) const { return point_of_[e]; }
  void Apply(const UpdateRecord& record) { points_->Apply(record); }

  // Rows with observed label y (mean phase) or (y - mu(x))^a (moment phase;
  // |y - mu(x)|^a in absolute mode), weighted by multiplicity.
  std::vector<CellRow> MeanRows() const;
  std::vector<CellRow> MomentRows(int a) const;

 private:
  const PredictorBundle* bundle_;
  const GroupFamily* family_;
  const FiniteDistribution* support_;
  Block block_;
  std::vector<const FeatureVector*> features_;
  std::unique_ptr<PointSet> points_;
  std::vector<size_t> point_of_;
};

// Observed pseudo-moment label of one example.
double PseudoMomentObservation(double y, double mean, int a, bool absolute);

// First cell of `scope` flagged by the threshold test on `rows`.
AuditVerdict AuditCells(const PointSet& points, const std::vector<CellRow>& rows,
                        const CellScope& scope, const PredictorBundle& bundle, int slot,
                        std::uint64_t n, double rate, double delta);

// Moment loop for degree a with the mean frozen. Returns the number of steps.
// Stops (logging a statistical-failure event in `report`) when the steps
// reach the cap ceil(1/beta^2) - 1.
std::int64_t SamplePseudoMomentLoop(int a, double beta, double delta, PredictorBundle& bundle,
                                    SampleSource& source, BlockCache& cache, std::uint64_t n,
                                    TrainReport& report);

struct SampleTrainResult {
  PredictorBundle bundle;
  TrainReport report;
  std::uint64_t blocks_consumed = 0;
  std::uint64_t examples_consumed = 0;
};

// Alternating descent on fresh blocks. A cap overrun halts with
// HaltReason::kCapExceeded and report.statistical_failure set.
SampleTrainResult SampleAlternatingDescent(const SampleTrainConfig& config, SampleSource& source,
                                           const GroupFamily& family);

}  // namespace momcal

#endif  // MOMCAL_SAMPLE_TRAINER_H_
