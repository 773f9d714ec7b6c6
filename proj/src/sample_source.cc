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

#include "momcal/sample_source.h"

#include <algorithm>
#include <string>

#include "momcal/errors.h"

namespace momcal {

std::vector<std::uint64_t> MultinomialCounts(std::uint64_t n, const std::vector<double>& probs,
                                             std::mt19937_64& rng) {
  std::vector<std::uint64_t> counts(probs.size(), 0);
  double remaining_mass = 0.0;
  for (double p : probs) remaining_mass += p;
  std::uint64_t remaining = n;
  for (size_t c = 0; c < probs.size() && remaining > 0; ++c) {
    if (c + 1 == probs.size()) {
      counts[c] = remaining;
      break;
    }
    const double q = remaining_mass > 0.0 ? std::clamp(probs[c] / remaining_mass, 0.0, 1.0) : 0.0;
    std::binomial_distribution<std::uint64_t> draw(remaining, q);
    counts[c] = q >= 1.0 ? remaining : (q <= 0.0 ? 0 : draw(rng));
    remaining -= counts[c];
    remaining_mass -= probs[c];
  }
  return counts;
}

DistributionSource::DistributionSource(const FiniteDistribution& dist, std::uint64_t seed)
    : dist_(&dist) {
  for (int s = 0; s < 2; ++s) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(s)};
    rng_[s].seed(seq);
  }
}

Block DistributionSource::Draw(std::uint64_t n, Stream stream) {
  if (n == 0) throw InvalidArgument("block size must be positive");
  std::mt19937_64& rng = rng_[static_cast<int>(stream)];
  std::vector<double> masses;
  masses.reserve(dist_->size());
  for (const SupportPoint& p : dist_->support()) masses.push_back(p.mass);
  const std::vector<std::uint64_t> per_point = MultinomialCounts(n, masses, rng);
  Block block;
  block.n = n;
  std::vector<double> probs;
  for (size_t p = 0; p < dist_->size(); ++p) {
    if (per_point[p] == 0) continue;
    const SupportPoint& sp = (*dist_)[p];
    probs.clear();
    for (const LabelOutcome& o : sp.label_law) probs.push_back(o.prob);
    const std::vector<std::uint64_t> per_label = MultinomialCounts(per_point[p], probs, rng);
    for (size_t l = 0; l < per_label.size(); ++l) {
      if (per_label[l] == 0) continue;
      block.examples.push_back(LabeledExample{sp.features, sp.label_law[l].label, per_label[l]});
      block.support_index.push_back(p);
    }
  }
  Count(stream, n);
  return block;
}

PoolSource::PoolSource(std::vector<LabeledExample> pool) : pool_(std::move(pool)) {
  for (const LabeledExample& e : pool_) {
    if (e.multiplicity != 1) throw InvalidArgument("pool examples must have multiplicity 1");
  }
  ValidateExamples(pool_);
}

Block PoolSource::Draw(std::uint64_t n, Stream stream) {
  if (n == 0) throw InvalidArgument("block size must be positive");
  if (remaining() < n) {
    throw PoolExhausted("sample pool exhausted: block needs " + std::to_string(n) +
                            " examples, " + std::to_string(remaining()) + " remain",
                        n - remaining());
  }
  Block block;
  block.n = n;
  block.examples.assign(pool_.begin() + static_cast<std::ptrdiff_t>(next_),
                        pool_.begin() + static_cast<std::ptrdiff_t>(next_ + n));
  next_ += n;
  Count(stream, n);
  return block;
}

}  // namespace momcal
