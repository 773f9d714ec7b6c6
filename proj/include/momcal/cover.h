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

// Choosing which moment cells to use for per-point intervals.
//
// Every qualifying cell S (mass >= gamma, one per group, degree and bucket
// pair) provides an interval of half-width Delta_S(x) for its members. A
// cover is a family of cells containing every point; the half-width of x
// under the cover is the largest Delta_S(x) over chosen cells containing x
// (any valid interval containing a valid interval is valid). The objective
// is the expected half-width f(C) = sum_x P(x) max_{S in C, x in S} Delta_S(x).

#ifndef MOMCAL_COVER_H_
#define MOMCAL_COVER_H_

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "momcal/bundle.h"
#include "momcal/cells.h"
#include "momcal/intervals.h"
#include "momcal/types.h"

namespace momcal {

struct CoverPoint {
  std::string id;
  double mass = 0.0;
};

struct CoverSet {
  std::string name;
  int degree = 2;
  std::vector<size_t> members;  // ascending point indices
  std::vector<double> widths;   // Delta_S(x) for each member, same order
};

struct CoverInstance {
  std::vector<CoverPoint> points;
  std::vector<CoverSet> sets;
  int max_degree = 2;            // k in the approximation factor
  bool empirical_masses = false;  // masses estimated from a sample

  // Throws InvalidArgument unless masses are non-negative and sum to 1,
  // members are valid and sorted, and every point lies in some set (the
  // error names the first uncovered point).
  void Validate() const;

  nlohmann::json ToJson() const;
  static CoverInstance FromJson(const nlohmann::json& j);
};

// Builds the instance from the moment cells G(mu, m_a, i, j) with mass >=
// params.gamma for every degree in `params` (keyed by degree). `masses` are
// P(x) for each of `points` (probabilities or empirical frequencies).
// Points of zero mass are left out. Throws InvalidArgument when a point of
// positive mass lies in no qualifying cell.
CoverInstance BuildCoverInstance(const PredictorBundle& bundle, const GroupFamily& family,
                                 const std::vector<const FeatureVector*>& points,
                                 const std::vector<double>& masses,
                                 const std::map<int, IntervalParams>& params,
                                 bool empirical_masses);

struct CoverSolution {
  std::vector<size_t> chosen;  // set indices in the order chosen
  double objective = 0.0;
};

// f(chosen); throws InvalidArgument if `chosen` leaves a point uncovered.
double CoverObjective(const CoverInstance& instance, const std::vector<size_t>& chosen);

// Greedy: repeatedly add the set with the smallest (increase of f) divided
// by (number of newly covered points) among sets covering a new point; a
// set with zero increase therefore always wins; ties go to the lowest index.
CoverSolution GreedyCover(const CoverInstance& instance);

// Exhaustive minimum of f over all feasible covers (at most 20 sets).
CoverSolution BruteForceOptimum(const CoverInstance& instance);

// H_l = 1 + 1/2 + ... + 1/l.
double HarmonicNumber(int l);

// (k/2) H_l with l the largest set size of the instance.
double GreedyApproximationFactor(const CoverInstance& instance);

// Half-width of point p under the chosen sets (largest covering width).
// Throws InvalidArgument when no chosen set contains p.
double CoverWidth(const CoverInstance& instance, const std::vector<size_t>& chosen, size_t p);

// mean +- CoverWidth, clipped as in IntervalAround.
PredictionInterval PerPointIntervalFromCover(const CoverInstance& instance,
                                             const std::vector<size_t>& chosen, size_t p,
                                             double mean);

}  // namespace momcal

#endif  // MOMCAL_COVER_H_
