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

#include "momcal/auditor.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "momcal/errors.h"

namespace momcal {

using nlohmann::json;

namespace {

void CheckDelta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0,1)");
}

}  // namespace

double ChernoffRadius(double delta, double n) {
  CheckDelta(delta);
  if (!(n > 0.0)) throw InvalidArgument("sample size must be positive");
  return std::sqrt(std::log(2.0 / delta) / (2.0 * n));
}

json AuditRecord::ToJson() const {
  return json{{"set", set},
              {"n_sub", n_sub},
              {"n", n},
              {"predicted_avg", predicted_avg},
              {"observed_avg", observed_avg},
              {"gap", gap},
              {"threshold", std::isfinite(threshold) ? json(threshold) : json("inf")},
              {"verdict", violation ? "violation" : "null"},
              {"sign", sign}};
}

AuditRecord TestSetSummary(double predicted_sum, double observed_sum, std::uint64_t n_sub,
                           std::uint64_t n, double alpha, double delta) {
  CheckDelta(delta);
  if (!(alpha > 0.0)) throw InvalidArgument("audit rate must be positive");
  if (n == 0 || n_sub > n) throw InvalidArgument("audit needs 0 <= n' <= n and n > 0");
  AuditRecord r;
  r.n_sub = n_sub;
  r.n = n;
  r.threshold = std::numeric_limits<double>::infinity();
  if (n_sub == 0) return r;
  const double count = static_cast<double>(n_sub);
  r.predicted_avg = predicted_sum / count;
  r.observed_avg = observed_sum / count;
  r.gap = r.predicted_avg - r.observed_avg;
  const double denom = count / static_cast<double>(n) - ChernoffRadius(delta, static_cast<double>(n));
  if (!(denom > 0.0)) return r;
  r.threshold = 2.0 * ChernoffRadius(delta, count) + alpha / denom;
  if (std::abs(r.gap) - 2.0 * ChernoffRadius(delta, count) >= alpha / denom) {
    r.violation = true;
    r.sign = r.gap > 0 ? 1 : -1;
  }
  return r;
}

AuditVerdict AuditSingleSet(const LabelSpec& spec, double alpha, double delta, std::uint64_t n,
                            const std::vector<LabeledExample>& subset) {
  double predicted = 0.0;
  double observed = 0.0;
  for (const LabeledExample& e : subset) {
    const double w = static_cast<double>(e.multiplicity);
    predicted += w * spec.predicted(e.features);
    observed += w * spec.observed(e.features, e.label);
  }
  AuditVerdict v;
  v.record = TestSetSummary(predicted, observed, TotalCount(subset), n, alpha, delta);
  v.violation = v.record.violation;
  v.sign = v.record.sign;
  return v;
}

AuditVerdict ConsistencyAuditor(const LabelSpec& spec, double alpha, double delta,
                                const std::vector<LabeledExample>& data,
                                const std::vector<AuditCandidate>& candidates,
                                std::vector<AuditRecord>* records) {
  CheckDelta(delta);
  const std::uint64_t n = TotalCount(data);
  AuditVerdict null_verdict;
  if (n == 0) return null_verdict;
  // Evaluate the label functions once per example; candidates only filter.
  std::vector<double> pred(data.size());
  std::vector<double> obs(data.size());
  for (size_t e = 0; e < data.size(); ++e) {
    pred[e] = spec.predicted(data[e].features);
    obs[e] = spec.observed(data[e].features, data[e].label);
  }
  for (size_t c = 0; c < candidates.size(); ++c) {
    double predicted = 0.0;
    double observed = 0.0;
    std::uint64_t n_sub = 0;
    for (size_t e = 0; e < data.size(); ++e) {
      if (!candidates[c].member(data[e].features)) continue;
      const double w = static_cast<double>(data[e].multiplicity);
      predicted += w * pred[e];
      observed += w * obs[e];
      n_sub += data[e].multiplicity;
    }
    AuditRecord r = TestSetSummary(predicted, observed, n_sub, n, alpha, delta);
    r.set = candidates[c].descriptor.ToString();
    if (records) records->push_back(r);
    if (r.violation) {
      AuditVerdict v;
      v.violation = true;
      v.sign = r.sign;
      v.index = c;
      v.set = candidates[c].descriptor;
      v.record = r;
      return v;
    }
    null_verdict.record = r;
  }
  return null_verdict;
}

double AlphaPrime(double alpha, double delta, double n) {
  const double r = ChernoffRadius(delta, n);
  if (!(alpha > 2.0 * r)) {
    throw PreconditionError("alpha must exceed 2*sqrt(ln(2/delta)/(2n)) (alpha=" +
                            std::to_string(alpha) + ", 2*sqrt(ln(2/delta)/(2n))=" +
                            std::to_string(2.0 * r) + ")");
  }
  const double d = alpha - 2.0 * r;
  return alpha + 4.0 * r + 2.0 * r / (d * d);
}

bool ClosenessHolds(const FiniteDistribution& dist, const std::vector<LabeledExample>& data,
                    const std::function<bool(const FeatureVector&)>& member,
                    const LabelSpec& spec, double delta) {
  CheckDelta(delta);
  const std::uint64_t n = TotalCount(data);
  if (n == 0) return false;
  double mass = 0.0;
  double exact_pred = 0.0;
  double exact_obs = 0.0;
  for (const SupportPoint& p : dist.support()) {
    if (!member(p.features)) continue;
    mass += p.mass;
    exact_pred += p.mass * spec.predicted(p.features);
    double o = 0.0;
    for (const LabelOutcome& l : p.label_law) o += l.prob * spec.observed(p.features, l.label);
    exact_obs += p.mass * o;
  }
  double emp_pred = 0.0;
  double emp_obs = 0.0;
  std::uint64_t n_sub = 0;
  for (const LabeledExample& e : data) {
    if (!member(e.features)) continue;
    const double w = static_cast<double>(e.multiplicity);
    emp_pred += w * spec.predicted(e.features);
    emp_obs += w * spec.observed(e.features, e.label);
    n_sub += e.multiplicity;
  }
  if (n_sub == 0) return false;
  const double nn = static_cast<double>(n);
  const double ns = static_cast<double>(n_sub);
  if (std::abs(ns / nn - mass) > ChernoffRadius(delta, nn)) return false;
  if (!(mass > 0.0)) return false;
  const double r_sub = ChernoffRadius(delta, ns);
  return std::abs(emp_pred / ns - exact_pred / mass) <= r_sub &&
         std::abs(emp_obs / ns - exact_obs / mass) <= r_sub;
}

json SampleSizePlan::ToJson() const {
  return json{{"alpha", alpha}, {"beta", beta},       {"delta", delta},  {"n", n},
              {"q_bar", q_bar}, {"n_alpha", n_alpha}, {"n_beta", n_beta}};
}

SampleSizePlan SampleSizeCalculator(double alpha_target, double beta_target,
                                    double delta_target, double epsilon, std::uint64_t groups,
                                    int k, int m) {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (!(epsilon < alpha_target) || !(epsilon < beta_target)) {
    throw InvalidArgument("epsilon must be smaller than both target slacks");
  }
  CheckDelta(delta_target);
  if (groups == 0 || k < 2 || m <= 0) throw InvalidArgument("need |G| >= 1, k >= 2, m >= 1");
  const double scale = 6.0 + 2.0 / (epsilon * epsilon);
  const double ca = (alpha_target - epsilon) / scale;
  const double cb = (beta_target - epsilon) / scale;
  const double g = static_cast<double>(groups);
  const double mm = static_cast<double>(m);
  SampleSizePlan p;
  p.q_bar = 6.0 * g * k * mm * mm / (ca * ca * cb * cb);
  p.delta = delta_target / std::max(3.0 * g * (k * mm * mm + mm), p.q_bar);
  const double log_q = std::log(2.0 * p.q_bar / p.delta);
  const double log_1 = std::log(2.0 / p.delta);
  p.n_alpha = log_q / (2.0 * ca * ca);
  p.n_beta = log_q / (2.0 * cb * cb);
  p.alpha = 2.0 * std::sqrt(log_q / (2.0 * p.n_alpha)) + epsilon;
  p.beta = 2.0 * std::sqrt(log_q / (2.0 * p.n_beta)) + epsilon;
  p.n = std::max({log_q / log_1 * p.n_alpha, log_q / log_1 * p.n_beta,
                  2.0 * log_1 / (p.alpha * p.alpha), 2.0 * log_1 / (p.beta * p.beta)});
  return p;
}

}  // namespace momcal
