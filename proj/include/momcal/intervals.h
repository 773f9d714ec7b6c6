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

// Marginal prediction intervals built from mean and moment predictions.
//
// For degree k the half-width at x is
//   Delta(x) = alpha/gamma + eps + 1/m + ((mk(x) + eps + 1/m + beta/gamma)/delta)^(1/k)
// where (alpha, beta, eps) are the calibration slacks of the bundle, gamma is
// the smallest cell mass the guarantee covers and delta the failure
// probability. The interval is [mu(x) - Delta(x), mu(x) + Delta(x)].

#ifndef MOMCAL_INTERVALS_H_
#define MOMCAL_INTERVALS_H_

#include "json.hpp"
#include "momcal/bundle.h"
#include "momcal/types.h"

namespace momcal {

struct IntervalParams {
  double gamma = 0.1;   // minimum cell mass, in (0,1]
  double delta = 0.1;   // coverage failure probability, in (0,1)
  int degree = 2;       // moment degree k used for the width
  double alpha = 0.0;   // mean calibration slack
  double beta = 0.0;    // moment calibration slack
  double epsilon = 0.0; // additive calibration slack
  int bucket_count = 10;

  // Throws InvalidArgument on out-of-range fields. Odd degrees are accepted
  // only when `absolute_moments` is set.
  void Validate(bool absolute_moments = false) const;

  // Slacks guaranteed by exact-mode training at rates (alpha, beta):
  // (alpha, beta + k alpha, k/m).
  static IntervalParams ForExactTraining(double alpha, double beta, int bucket_count, int degree,
                                         double gamma, double delta);

  nlohmann::json ToJson() const;
  static IntervalParams FromJson(const nlohmann::json& j);
};

// The half-width for a predicted k-th moment value.
double IntervalWidth(double moment, const IntervalParams& params);

// The half-width at x under the bundle. The degree must be tracked.
double IntervalWidth(const BundleEvaluator& evaluator, const FeatureVector& x,
                     const IntervalParams& params);

struct PredictionInterval {
  double mean = 0.0;
  double moment = 0.0;
  double width = 0.0;
  double raw_lo = 0.0;  // mean - width
  double raw_hi = 0.0;  // mean + width
  double lo = 0.0;      // raw interval intersected with [0,1]
  double hi = 0.0;

  bool Contains(double y) const { return y >= raw_lo && y <= raw_hi; }
};

PredictionInterval IntervalAround(double mean, double width);

PredictionInterval MakePredictionInterval(const BundleEvaluator& evaluator,
                                          const FeatureVector& x, const IntervalParams& params);

// min(1, mk / t^k): the moment tail bound P(|Y - E Y| >= t) <= E|Y - E Y|^k / t^k.
// Throws InvalidArgument unless t > 0 and k >= 1.
double ChebyshevTail(double moment, int k, double t);

}  // namespace momcal

#endif  // MOMCAL_INTERVALS_H_
