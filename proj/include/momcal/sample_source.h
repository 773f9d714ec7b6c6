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

// Fresh-sample streams for finite-sample training. Every audit consumes one
// block of exactly n draws and no block is ever reused.

#ifndef MOMCAL_SAMPLE_SOURCE_H_
#define MOMCAL_SAMPLE_SOURCE_H_

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "momcal/types.h"

namespace momcal {

// Independent random streams of a source. Audit blocks always come from
// kAudit; oracle training blocks come from kOracleTrain, so adding an oracle
// leaves the audit blocks unchanged for a given seed.
enum class Stream { kAudit = 0, kOracleTrain = 1 };

struct Block {
  // Distinct outcomes with multiplicities summing to `n`.
  std::vector<LabeledExample> examples;
  // Index of each example's support point in the source distribution, or
  // empty when the source has no fixed support.
  std::vector<size_t> support_index;
  std::uint64_t n = 0;
};

class SampleSource {
 public:
  virtual ~SampleSource() = default;

  virtual Block Draw(std::uint64_t n, Stream stream) = 0;
  // Fixed support every block is drawn from, or nullptr.
  virtual const FiniteDistribution* support() const { return nullptr; }

  std::uint64_t blocks_drawn(Stream s) const { return blocks_[static_cast<int>(s)]; }
  std::uint64_t examples_drawn(Stream s) const { return examples_[static_cast<int>(s)]; }

 protected:
  void Count(Stream s, std::uint64_t n) {
    ++blocks_[static_cast<int>(s)];
    examples_[static_cast<int>(s)] += n;
  }

 private:
  std::array<std::uint64_t, 2> blocks_{};
  std::array<std::uint64_t, 2> examples_{};
};

// i.i.d. draws from a finite distribution, stored as count histograms
// (sequential conditional binomials), so the cost of a block is independent
// of n.
class DistributionSource : public SampleSource {
 public:
  DistributionSource(const FiniteDistribution& dist, std::uint64_t seed);

  Block Draw(std::uint64_t n, Stream stream) override;
  const FiniteDistribution* support() const override { return dist_; }

 private:
  const FiniteDistribution* dist_;
  std::array<std::mt19937_64, 2> rng_;
};

// A pre-drawn (pre-shuffled) pool consumed front to back. Both streams share
// the pool. Throws PoolExhausted when fewer than n examples remain.
class PoolSource : public SampleSource {
 public:
  explicit PoolSource(std::vector<LabeledExample> pool);

  Block Draw(std::uint64_t n, Stream stream) override;
  std::uint64_t remaining() const { return pool_.size() - next_; }

 private:
  std::vector<LabeledExample> pool_;
  size_t next_ = 0;
};

// Multinomial draw of n items over `probs` (clamped and renormalized on the
// fly), returning per-category counts.
std::vector<std::uint64_t> MultinomialCounts(std::uint64_t n, const std::vector<double>& probs,
                                             std::mt19937_64& rng);

}  // namespace momcal

#endif  // MOMCAL_SAMPLE_SOURCE_H_
