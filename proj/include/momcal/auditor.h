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

// Finite-sample consistency auditing.
//
// A set S is flagged when the empirical gap between predicted and observed
// label averages on the n' sample points inside S clears a threshold that
// accounts for both the Chernoff error of the averages and the error of n'/n
// as an estimate of P(S). All logarithms are natural.

#ifndef MOMCAL_AUDITOR_H_
#define MOMCAL_AUDITOR_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "momcal/bundle.h"
#include "momcal/types.h"

namespace momcal {

// Predicted label lbar(x) and observed label l(x, y), both in [0,1].
struct LabelSpec {
  std::function<double(const FeatureVector&)> predicted;
  std::function<double(const FeatureVector&, double)> observed;
};

// sqrt(ln(2/delta) / (2 n)).
double ChernoffRadius(double delta, double n);

// Per-set audit record: the inputs and outcome of one threshold test.
struct AuditRecord {
  std::string set;
  std::uint64_t n_sub = 0;
  std::uint64_t n = 0;
  double predicted_avg = 0.0;
  double observed_avg = 0.0;
  double gap = 0.0;        // predicted_avg - observed_avg
  double threshold = 0.0;  // |gap| needed for a violation; +inf when none is possible
  bool violation = false;
  int sign = 0;

  nlohmann::json ToJson() const;
};

// The threshold test on summary statistics: with n' = n_sub,
//   violation iff n' > 0, n'/n - r(n) > 0 and
//   |gap| - 2 r(n') >= alpha / (n'/n - r(n)),   r(k) = ChernoffRadius(delta, k).
// Throws InvalidArgument unless delta in (0,1), alpha > 0 and n_sub <= n.
AuditRecord TestSetSummary(double predicted_sum, double observed_sum, std::uint64_t n_sub,
                           std::uint64_t n, double alpha, double delta);

struct AuditVerdict {
  bool violation = false;
  int sign = 0;       // sign(avg lbar - avg l) when violation
  size_t index = 0;   // position of the flagged set in the audited list
  std::optional<SetDescriptor> set;
  AuditRecord record;  // record of the flagged set (or last audited set on Null)
};

// Audits one set given the sample points inside it. `n` is the size of the
// full sample the subset was taken from.
AuditVerdict AuditSingleSet(const LabelSpec& spec, double alpha, double delta, std::uint64_t n,
                            const std::vector<LabeledExample>& subset);

// A set to audit: a descriptor for reporting plus its membership test.
struct AuditCandidate {
  SetDescriptor descriptor;
  std::function<bool(const FeatureVector&)> member;
};

// Audits the candidates in order on sample `data` (n = TotalCount(data)) and
// returns the first violation, or Null. Optional `records` receives one
// record per audited candidate.
AuditVerdict ConsistencyAuditor(const LabelSpec& spec, double alpha, double delta,
                                const std::vector<LabeledExample>& data,
                                const std::vector<AuditCandidate>& candidates,
                                std::vector<AuditRecord>* records = nullptr);

// alpha + 4 r + 2 r / (alpha - 2 r)^2 with r = ChernoffRadius(delta, n).
// Throws PreconditionError unless alpha > 2 r.
double AlphaPrime(double alpha, double delta, double n);

// Checks the four closeness inequalities for set S (by membership) between a
// sample and the distribution it came from.
bool ClosenessHolds(const FiniteDistribution& dist, const std::vector<LabeledExample>& data,
                    const std::function<bool(const FeatureVector&)>& member,
                    const LabelSpec& spec, double delta);

struct SampleSizePlan {
  double alpha = 0.0;
  double beta = 0.0;
  double delta = 0.0;
  double n = 0.0;  // real-valued; round up before drawing
  double q_bar = 0.0;
  double n_alpha = 0.0;
  double n_beta = 0.0;

  nlohmann::json ToJson() const;
};

// Trainer parameters achieving target slacks (alpha', beta') with failure
// probability delta' for a family of `groups` groups, degree k, m buckets.
SampleSizePlan SampleSizeCalculator(double alpha_target, double beta_target,
                                    double delta_target, double epsilon, std::uint64_t groups,
                                    int k, int m);

}  // namespace momcal

#endif  // MOMCAL_AUDITOR_H_
