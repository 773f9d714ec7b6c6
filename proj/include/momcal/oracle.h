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

// Agnostic learning oracles and the oracle-backed consistency audit.
//
// Instead of enumerating every group, the audit asks an oracle for the set
// that best correlates with the residual lbar(x) - l(x, y) inside each bucket
// cell R of the whole domain, on a training block, and then tests the
// returned sets (intersected with R) on an independent check block.
//
// Subprocess protocol (one request and one response per line, UTF-8 JSON):
//   request:  {"n": <total draws>, "examples": [[w, r, [x0, x1, ...]], ...]}
//             w = multiplicity (integer), r = residual in [-1, 1]
//   response: a predicate in the group-family grammar, e.g. {"all": true},
//             {"none": true}, {"box": [{"coord": 0, "lo": 0.5}]}
// The oracle should return the predicate h maximizing sum_b w_b h(x_b) r_b / n.

#ifndef MOMCAL_ORACLE_H_
#define MOMCAL_ORACLE_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "momcal/auditor.h"
#include "momcal/bundle.h"
#include "momcal/types.h"

namespace momcal {

struct OracleExample {
  const FeatureVector* x = nullptr;
  std::uint64_t weight = 1;  // multiplicity
  double residual = 0.0;     // in [-1, 1]
};

// True iff x lies in `region`; group regions are resolved against `family`.
bool RegionContains(const Region& region, const GroupFamily& family, const FeatureVector& x);

class AgnosticOracle {
 public:
  virtual ~AgnosticOracle() = default;
  virtual std::string name() const = 0;
  // Approximation slack of the oracle's guarantee.
  virtual double rho() const { return 0.0; }
  // A hypothesis h approximately maximizing sum_b w_b h(x_b) r_b / n.
  // Region::Empty() stands for the all-zeros hypothesis.
  virtual Region Learn(const std::vector<OracleExample>& examples) = 0;
};

// Enumerates a finite class. Ties keep the earlier hypothesis; the all-zeros
// hypothesis is considered first, so a hypothesis must have strictly
// positive value to be returned.
class ExhaustiveOracle : public AgnosticOracle {
 public:
  // The class is the family's groups, returned as Region::Group(name).
  explicit ExhaustiveOracle(const GroupFamily& family);
  // A class of explicit predicates, returned as Region::Learned(p).
  explicit ExhaustiveOracle(std::vector<Predicate> hypotheses);

  std::string name() const override { return "exhaustive"; }
  Region Learn(const std::vector<OracleExample>& examples) override;
  // Empirical value of hypothesis h (index into the class).
  double Value(size_t h, const std::vector<OracleExample>& examples) const;
  size_t size() const { return regions_.size(); }

 private:
  std::vector<Region> regions_;
  std::vector<std::function<bool(const FeatureVector&)>> members_;
};

// Empirical risk minimizer over one-sided axis thresholds {x_c >= t} and
// {x_c < t} (plus the whole domain). The returned region is a Box predicate.
class StumpOracle : public AgnosticOracle {
 public:
  std::string name() const override { return "stump"; }
  Region Learn(const std::vector<OracleExample>& examples) override;
};

// Speaks the line protocol above with a child process started via /bin/sh.
// The process is started on first use and kept alive between calls. Not
// safe for concurrent use.
class SubprocessOracle : public AgnosticOracle {
 public:
  explicit SubprocessOracle(std::string command);
  ~SubprocessOracle() override;
  SubprocessOracle(const SubprocessOracle&) = delete;
  SubprocessOracle& operator=(const SubprocessOracle&) = delete;

  std::string name() const override { return "subprocess:" + command_; }
  Region Learn(const std::vector<OracleExample>& examples) override;

 private:
  void Start();
  void Stop();

  std::string command_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

// Residuals of `spec` restricted to R: r+ = lbar(x) - l(x,y) on R and 0 off
// R; r- = -r+. Returned as relabeled copies of `data`.
struct ResidualSets {
  std::vector<LabeledExample> positive;
  std::vector<LabeledExample> negative;
};
// The labels of the returned copies hold the residuals (so they may be
// negative); multiplicities are preserved.
ResidualSets ResidualLabels(const LabelSpec& spec,
                            const std::function<bool(const FeatureVector&)>& in_r,
                            const std::vector<LabeledExample>& data);

// Per-example label values of a block under a spec.
struct AuditSample {
  const std::vector<LabeledExample>* examples = nullptr;
  std::vector<double> predicted;
  std::vector<double> observed;
};

// A refinement cell R with its membership on both blocks.
struct Refinement {
  SetDescriptor descriptor;  // region must be Region::All()
  std::vector<char> in_train;
  std::vector<char> in_check;
};

struct OracleAuditStats {
  std::uint64_t oracle_calls = 0;
  std::uint64_t candidates = 0;
  double oracle_seconds = 0.0;
};

// Core of the oracle audit on precomputed per-example values. Candidates are
// S+ ∩ R then S- ∩ R for each R in order (all-zeros outputs dropped); the
// verdict is the first candidate flagged on the check block.
AuditVerdict OracleAuditCore(const AuditSample& train, const AuditSample& check,
                             const std::vector<Refinement>& refinements, double alpha,
                             double delta, AgnosticOracle& oracle, const GroupFamily& family,
                             OracleAuditStats* stats = nullptr);

// Spec-level wrapper: refinements given as membership tests over the domain.
AuditVerdict OracleAuditWrapper(const LabelSpec& spec, double alpha, double delta,
                                const std::vector<LabeledExample>& train,
                                const std::vector<LabeledExample>& check,
                                const std::vector<AuditCandidate>& refinements,
                                AgnosticOracle& oracle, const GroupFamily& family,
                                OracleAuditStats* stats = nullptr);

}  // namespace momcal

#endif  // MOMCAL_ORACLE_H_
