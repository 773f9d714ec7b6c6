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

#include "momcal/intervals.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "momcal/errors.h"

namespace momcal {

void IntervalParams::Validate(bool absolute_moments) const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidArgument("gamma must lie in (0,1]");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("interval delta must lie in (0,1)");
  if (degree < 1) throw InvalidArgument("interval degree must be positive");
  if (degree % 2 != 0 && !absolute_moments) {
    throw InvalidArgument("odd interval degree " + std::to_string(degree) +
                          " requires absolute moments");
  }
  if (!(alpha >= 0.0 && beta >= 0.0 && epsilon >= 0.0)) {
    throw InvalidArgument("calibration slacks must be non-negative");
  }
  if (bucket_count <= 0) throw InvalidArgument("bucket count m must be positive");
}

IntervalParams IntervalParams::ForExactTraining(double alpha, double beta, int bucket_count,
                                                int degree, double gamma, double delta) {
  IntervalParams p;
  p.gamma = gamma;
  p.delta = delta;
  p.degree = degree;
  p.alpha = alpha;
  p.beta = beta + degree * alpha;
  p.epsilon = static_cast<double>(degree) / bucket_count;
  p.bucket_count = bucket_count;
  return p;
}

nlohmann::json IntervalParams::ToJson() const {
  return {{"gamma", gamma}, {"delta", delta},     {"degree", degree},
          {"alpha", alpha}, {"beta", beta},       {"epsilon", epsilon},
          {"bucket_count", bucket_count}};
}

IntervalParams IntervalParams::FromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgument("interval parameters must be an object");
  IntervalParams p;
  try {
    p.gamma = j.value("gamma", p.gamma);
    p.delta = j.value("delta", p.delta);
    p.degree = j.value("degree", p.degree);
    p.alpha = j.value("alpha", p.alpha);
    p.beta = j.value("beta", p.beta);
    p.epsilon = j.value("epsilon", p.epsilon);
    p.bucket_count = j.value("bucket_count", p.bucket_count);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad interval parameters: ") + e.what());
  }
  return p;
}

double IntervalWidth(double moment, const IntervalParams& params) {
  if (!(params.delta > 0.0)) throw InvalidArgument("interval delta must be positive");
  if (!(params.gamma > 0.0)) throw InvalidArgument("gamma must be positive");
  const double grid = 1.0 / params.bucket_count;
  const double inner = (moment + params.epsilon + grid + params.beta / params.gamma) / params.delta;
  return params.alpha / params.gamma + params.epsilon + grid +
         std::pow(std::max(inner, 0.0), 1.0 / params.degree);
}

double IntervalWidth(const BundleEvaluator& evaluator, const FeatureVector& x,
                     const IntervalParams& params) {
  return MakePredictionInterval(evaluator, x, params).width;
}

PredictionInterval IntervalAround(double mean, double width) {
  PredictionInterval out;
  out.mean = mean;
  out.width = width;
  out.raw_lo = mean - width;
  out.raw_hi = mean + width;
  out.lo = std::clamp(out.raw_lo, 0.0, 1.0);
  out.hi = std::clamp(out.raw_hi, 0.0, 1.0);
  return out;
}

PredictionInterval MakePredictionInterval(const BundleEvaluator& evaluator,
                                          const FeatureVector& x, const IntervalParams& params) {
  const PredictorBundle& bundle = evaluator.bundle();
  params.Validate(bundle.absolute_moments());
  const int slot = bundle.MomentSlot(params.degree);
  if (slot < 0) {
    throw InvalidArgument("bundle does not track moment degree " + std::to_string(params.degree));
  }
  const Prediction p = evaluator.Evaluate(x);
  PredictionInterval out = IntervalAround(p.mean, IntervalWidth(p.moments[slot], params));
  out.moment = p.moments[slot];
  return out;
}

double ChebyshevTail(double moment, int k, double t) {
  if (!(t > 0.0)) throw InvalidArgument("tail bound needs t > 0");
  if (k < 1) throw InvalidArgument("tail bound needs a positive degree");
  return std::min(1.0, moment / std::pow(t, k));
}

}  // namespace momcal
