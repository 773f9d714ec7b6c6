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

// Exact set-conditional means and central moments over a finite support, and
// the moment of a mixture expressed through its components' moments.

#ifndef MOMCAL_MOMENTS_H_
#define MOMCAL_MOMENTS_H_

#include <functional>
#include <optional>
#include <vector>

#include "momcal/predicate.h"
#include "momcal/types.h"

namespace momcal {

struct SetMoments {
  double mass = 0.0;
  double mean = 0.0;
  // moments[a - 2] = E[(y - mean)^a | x in S] for a = 2..k.
  std::vector<double> moments;

  double moment(int a) const { return moments.at(static_cast<size_t>(a - 2)); }
};

// Exact mean and central moments of degrees 2..k on the support points
// selected by `member`. Returns nullopt when the selection has zero mass.
// With `absolute`, moments are E[|y - mean|^a | x in S].
std::optional<SetMoments> TrueMeanAndMoments(const FiniteDistribution& dist,
                                             const std::function<bool(size_t)>& member, int k,
                                             bool absolute = false);

// Same, selecting support points by feature predicate.
std::optional<SetMoments> TrueMeanAndMoments(const FiniteDistribution& dist,
                                             const Predicate& member, int k,
                                             bool absolute = false);

struct MixtureComponent {
  double weight = 0.0;
  double mean = 0.0;
  // Central moments m_0..m_k; m_0 must be 1 and m_1 must be 0.
  std::vector<double> moments;
};

// k-th central moment of the mixture about its overall mean:
//   sum_l w_l sum_{a=0}^{k} C(k,a) (mu_l - mu)^(k-a) m_{a,l}.
double MixtureMoment(const std::vector<MixtureComponent>& components, int k);

// Binomial coefficient as a double (exact for the small k used here).
double Binomial(int n, int r);

}  // namespace momcal

#endif  // MOMCAL_MOMENTS_H_
