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

// Membership predicates over feature vectors.
//
// The same grammar is used by group family files, learned oracle hypotheses
// stored in bundles, and the external oracle protocol. JSON forms:
//
//   {"all": true}                  every point
//   {"none": true}                 no point
//   {"box": [{"coord": c, "lo": a, "hi": b}, ...]}
//                                  a <= x[c] < b for every listed constraint;
//                                  an omitted lo/hi is unbounded
//   {"linear": {"w": [...], "b": t}}
//                                  w . x >= t
//   {"and": [p, ...]}  {"or": [p, ...]}  {"not": p}

#ifndef MOMCAL_PREDICATE_H_
#define MOMCAL_PREDICATE_H_

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace momcal {

struct BoxConstraint {
  int coord = 0;
  std::optional<double> lo;  // inclusive
  std::optional<double> hi;  // exclusive
};

class Predicate {
 public:
  enum class Kind { kAll, kNone, kBox, kLinear, kAnd, kOr, kNot };

  // Default-constructed predicate matches everything.
  Predicate();

  static Predicate All();
  static Predicate None();
  static Predicate Box(std::vector<BoxConstraint> constraints);
  static Predicate Linear(std::vector<double> weights, double threshold);
  static Predicate And(std::vector<Predicate> operands);
  static Predicate Or(std::vector<Predicate> operands);
  static Predicate Not(Predicate operand);

  bool Contains(std::span<const double> x) const;
  bool operator()(std::span<const double> x) const { return Contains(x); }

  Kind kind() const;

  // Largest coordinate index referenced, or -1 if none.
  int MaxCoordinate() const;

  nlohmann::json ToJson() const;
  // Throws InvalidArgument on malformed input.
  static Predicate FromJson(const nlohmann::json& j);

  bool operator==(const Predicate& other) const;

 private:
  struct Node;
  explicit Predicate(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

}  // namespace momcal

#endif  // MOMCAL_PREDICATE_H_
