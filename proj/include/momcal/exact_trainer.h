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

// Training with exact access to a finite distribution: projected mean
// updates on violating cells, alternated with pseudo-moment loops that fit
// each moment predictor to E[(y - mu(x))^a | x] for the current mean.

#ifndef MOMCAL_EXACT_TRAINER_H_
#define MOMCAL_EXACT_TRAINER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "momcal/bundle.h"
#include "momcal/cells.h"
#include "momcal/types.h"

namespace momcal {

enum class HaltReason { kConverged, kCapExceeded };
std::string HaltReasonName(HaltReason r);

// One gradient step as recorded in a training trace.
struct TraceEntry {
  Target target;
  SetDescriptor selector;
  int sign = 0;            // lambda for mean steps, psi for moment steps
  double mass = 0.0;       // P(S), or the empirical mass n'/n in sample mode
  double weighted_gap = 0.0;  // sum over S of P(x) (predicted - observed)
  double potential_before = 0.0;  // exact mode only
  double potential_after = 0.0;   // exact mode only

  nlohmann::json ToJson() const;
};

struct TrainReport {
  std::int64_t outer_iterations = 0;  // mean updates applied (the final iterate is this + 1)
  std::int64_t total_updates = 0;
  std::map<int, std::int64_t> per_degree_updates;
  std::map<int, std::int64_t> longest_inner_loop;  // most steps in one pseudo-moment call
  HaltReason halt_reason = HaltReason::kConverged;
  bool statistical_failure = false;
  std::vector<std::string> events;
  bool record_trace = false;  // collect `trace` (with potentials in exact mode)
  std::vector<TraceEntry> trace;

  nlohmann::json ToJson(bool include_trace) const;
};

struct ExactTrainConfig {
  double alpha = 0.1;
  double beta = 0.1;
  int bucket_count = 10;
  int max_degree = 2;
  std::optional<std::vector<int>> moment_degrees;
  bool absolute_moments = false;
  // Step on the cell with the largest weighted gap instead of the first one.
  bool max_search = false;
  bool record_trace = true;

  // Throws InvalidArgument on out-of-range fields.
  void Validate() const;
};

// Bound on the mean updates, T_alpha = ceil(1/alpha^2) - 1, and on the total
// number of updates, T_alpha (1 + (k-1) T_beta). Training only loops over the
// tracked degrees, so the total bound also holds for even-only degree sets.
std::int64_t MeanUpdateCap(double alpha);
std::int64_t TotalUpdateCap(double alpha, double beta, int max_degree);

// Appends Mean(eta * lambda, selector) to the bundle. lambda must be +-1.
void MeanConsistencyUpdate(PredictorBundle& bundle, const SetDescriptor& selector, int lambda,
                           double eta);

// Runs the pseudo-moment loop for degree `a` with the bundle's mean frozen.
// Appends every step to `bundle` and keeps `points` (built over the
// distribution's support, in support order) in sync. Returns the number of
// steps. Throws InternalLogicError when the loop would exceed its cap.
std::int64_t ExactPseudoMomentLoop(int a, double beta, PredictorBundle& bundle, PointSet& points,
                                   const FiniteDistribution& dist, bool max_search,
                                   TrainReport* report);

// Convenience overload building the point cache internally.
std::int64_t ExactPseudoMomentLoop(int a, double beta, PredictorBundle& bundle,
                                   const FiniteDistribution& dist, const GroupFamily& family);

struct ExactTrainResult {
  PredictorBundle bundle;
  TrainReport report;
};

ExactTrainResult ExactAlternatingDescent(const ExactTrainConfig& config,
                                         const FiniteDistribution& dist,
                                         const GroupFamily& family);

// E[(prediction(x) - target(x))^2] over the support for a value slot.
double SquaredErrorPotential(const PointSet& points, const FiniteDistribution& dist, int slot,
                             const std::vector<double>& targets);

}  // namespace momcal

#endif  // MOMCAL_EXACT_TRAINER_H_
