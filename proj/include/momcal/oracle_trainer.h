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

// Oracle-backed training: the sample-mode loops with every cell audit
// replaced by the oracle audit over bucket cells of the whole domain.
//
// Every audit draws a check block from Stream::kAudit and then a training
// block from Stream::kOracleTrain. The oracle only ever sees training
// blocks; verdicts are computed on check blocks alone.

#ifndef MOMCAL_ORACLE_TRAINER_H_
#define MOMCAL_ORACLE_TRAINER_H_

#include <cstdint>

#include "momcal/oracle.h"
#include "momcal/sample_trainer.h"

namespace momcal {

struct OracleTrainConfig {
  SampleTrainConfig sample;

  void Validate() const { sample.Validate(); }
};

// Check and training blocks of one audit with cached predictions.
class OracleBlocks {
 public:
  OracleBlocks(const PredictorBundle& bundle, const GroupFamily& family,
               const FiniteDistribution* support)
      : check_(bundle, family, support), train_(bundle, family, support) {}

  void Draw(SampleSource& source, std::uint64_t n) {
    check_.Load(source.Draw(n, Stream::kAudit));
    train_.Load(source.Draw(n, Stream::kOracleTrain));
  }
  void Apply(const UpdateRecord& record) {
    check_.Apply(record);
    train_.Apply(record);
  }
  const BlockCache& check() const { return check_; }
  const BlockCache& train() const { return train_; }

 private:
  BlockCache check_;
  BlockCache train_;
};

// Oracle audit of the current blocks over the whole-domain cells of
// `scope`, in canonical order. `slot` selects the predicted value (-1 =
// mean); `degree` = 0 audits the mean labels, otherwise the pseudo-moment
// labels of that degree.
AuditVerdict OracleAuditCells(const OracleBlocks& blocks, const CellScope& scope,
                              const PredictorBundle& bundle, int slot, int degree, double rate,
                              double delta, AgnosticOracle& oracle, OracleAuditStats* stats);

// Moment loop for degree a driven by the oracle audit. Same cap handling as
// SamplePseudoMomentLoop.
std::int64_t OraclePseudoMomentLoop(int a, double beta, double delta, PredictorBundle& bundle,
                                    SampleSource& source, OracleBlocks& blocks, std::uint64_t n,
                                    AgnosticOracle& oracle, TrainReport& report,
                                    OracleAuditStats& stats);

struct OracleTrainResult {
  PredictorBundle bundle;
  TrainReport report;
  OracleAuditStats stats;
  std::uint64_t blocks_consumed = 0;    // check blocks plus training blocks
  std::uint64_t examples_consumed = 0;  // over both streams
};

OracleTrainResult OracleAlternatingDescent(const OracleTrainConfig& config,
                                           SampleSource& source, const GroupFamily& family,
                                           AgnosticOracle& oracle);

}  // namespace momcal

#endif  // MOMCAL_ORACLE_TRAINER_H_
