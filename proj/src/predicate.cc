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

#include "momcal/predicate.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "momcal/errors.h"

namespace momcal {

struct Predicate::Node {
  Kind kind = Kind::kAll;
  std::vector<BoxConstraint> box;
  std::vector<double> weights;
  double threshold = 0.0;
  std::vector<Predicate> operands;
};

Predicate::Predicate() : Predicate(All()) {}

Predicate::Predicate(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Predicate Predicate::All() {
  static const std::shared_ptr<const Node> kAll = std::make_shared<const Node>();
  return Predicate(kAll);
}

Predicate Predicate::None() {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kNone;
  return Predicate(std::move(node));
}

Predicate Predicate::Box(std::vector<BoxConstraint> constraints) {
  for (const BoxConstraint& c : constraints) {
    if (c.coord < 0) throw InvalidArgument("box constraint with negative coord");
    if ((c.lo && std::isnan(*c.lo)) || (c.hi && std::isnan(*c.hi))) {
      throw InvalidArgument("box constraint bound is NaN");
    }
  }
  auto node = std::make_shared<Node>();
  node->kind = Kind::kBox;
  node->box = std::move(constraints);
  return Predicate(std::move(node));
}

Predicate Predicate::Linear(std::vector<double> weights, double threshold) {
  if (weights.empty()) throw InvalidArgument("linear predicate needs weights");
  for (double w : weights) {
    if (!std::isfinite(w)) throw InvalidArgument("non-finite linear weight");
  }
  if (std::isnan(threshold)) throw InvalidArgument("linear threshold is NaN");
  auto node = std::make_shared<Node>();
  node->kind = Kind::kLinear;
  node->weights = std::move(weights);
  node->threshold = threshold;
  return Predicate(std::move(node));
}

Predicate Predicate::And(std::vector<Predicate> operands) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kAnd;
  node->operands = std::move(operands);
  return Predicate(std::move(node));
}

Predicate Predicate::Or(std::vector<Predicate> operands) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kOr;
  node->operands = std::move(operands);
  return Predicate(std::move(node));
}

Predicate Predicate::Not(Predicate operand) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::kNot;
  node->operands.push_back(std::move(operand));
  return Predicate(std::move(node));
}

Predicate::Kind Predicate::kind() const { return node_->kind; }

bool Predicate::Contains(std::span<const double> x) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kAll:
      return true;
    case Kind::kNone:
      return false;
    case Kind::kBox:
      for (const BoxConstraint& c : n.box) {
        if (static_cast<size_t>(c.coord) >= x.size()) {
          throw InvalidArgument("predicate references coordinate " +
                                std::to_string(c.coord) + " of a " +
                                std::to_string(x.size()) + "-dim point");
        }
        const double v = x[c.coord];
        if (c.lo && !(v >= *c.lo)) return false;
        if (c.hi && !(v < *c.hi)) return false;
      }
      return true;
    case Kind::kLinear: {
      if (n.weights.size() > x.size()) {
        throw InvalidArgument("linear predicate dimension exceeds point");
      }
      double dot = 0.0;
      for (size_t d = 0; d < n.weights.size(); ++d) dot += n.weights[d] * x[d];
      return dot >= n.threshold;
    }
    case Kind::kAnd:
      return std::all_of(n.operands.begin(), n.operands.end(),
                         [&](const Predicate& p) { return p.Contains(x); });
    case Kind::kOr:
      return std::any_of(n.operands.begin(), n.operands.end(),
                         [&](const Predicate& p) { return p.Contains(x); });
    case Kind::kNot:
      return !n.operands.front().Contains(x);
  }
  return false;
}

int Predicate::MaxCoordinate() const {
  const Node& n = *node_;
  int best = -1;
  switch (n.kind) {
    case Kind::kBox:
      for (const BoxConstraint& c : n.box) best = std::max(best, c.coord);
      break;
    case Kind::kLinear:
      best = static_cast<int>(n.weights.size()) - 1;
      break;
    case Kind::kAnd:
    case Kind::kOr:
    case Kind::kNot:
      for (const Predicate& p : n.operands) best = std::max(best, p.MaxCoordinate());
      break;
    default:
      break;
  }
  return best;
}

nlohmann::json Predicate::ToJson() const {
  using nlohmann::json;
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::kAll:
      return json{{"all", true}};
    case Kind::kNone:
      return json{{"none", true}};
    case Kind::kBox: {
      json arr = json::array();
      for (const BoxConstraint& c : n.box) {
        json e{{"coord", c.coord}};
        if (c.lo) e["lo"] = *c.lo;
        if (c.hi) e["hi"] = *c.hi;
        arr.push_back(std::move(e));
      }
      return json{{"box", std::move(arr)}};
    }
    case Kind::kLinear:
      return json{{"linear", {{"w", n.weights}, {"b", n.threshold}}}};
    case Kind::kAnd:
    case Kind::kOr: {
      json arr = json::array();
      for (const Predicate& p : n.operands) arr.push_back(p.ToJson());
      return json{{n.kind == Kind::kAnd ? "and" : "or", std::move(arr)}};
    }
    case Kind::kNot:
      return json{{"not", n.operands.front().ToJson()}};
  }
  return json{};
}

namespace {

double FiniteNumber(const nlohmann::json& j, const char* what) {
  if (!j.is_number()) throw InvalidArgument(std::string(what) + " must be a number");
  return j.get<double>();
}

}  // namespace

Predicate Predicate::FromJson(const nlohmann::json& j) {
  if (!j.is_object() || j.size() != 1) {
    throw InvalidArgument("predicate must be an object with exactly one key");
  }
  const std::string key = j.begin().key();
  const nlohmann::json& body = j.begin().value();
  if (key == "all") return All();
  if (key == "none") return None();
  if (key == "box") {
    if (!body.is_array()) throw InvalidArgument("box expects an array");
    std::vector<BoxConstraint> cs;
    for (const auto& e : body) {
      if (!e.is_object() || !e.contains("coord") || !e["coord"].is_number_integer()) {
        throw InvalidArgument("box constraint needs an integer coord");
      }
      BoxConstraint c;
      c.coord = e["coord"].get<int>();
      if (e.contains("lo") && !e["lo"].is_null()) c.lo = FiniteNumber(e["lo"], "lo");
      if (e.contains("hi") && !e["hi"].is_null()) c.hi = FiniteNumber(e["hi"], "hi");
      cs.push_back(c);
    }
    return Box(std::move(cs));
  }
  if (key == "linear") {
    if (!body.is_object() || !body.contains("w") || !body.contains("b")) {
      throw InvalidArgument("linear expects {\"w\": [...], \"b\": t}");
    }
    std::vector<double> w;
    for (const auto& v : body["w"]) w.push_back(FiniteNumber(v, "weight"));
    return Linear(std::move(w), FiniteNumber(body["b"], "b"));
  }
  if (key == "and" || key == "or") {
    if (!body.is_array()) throw InvalidArgument(key + " expects an array");
    std::vector<Predicate> ops;
    for (const auto& e : body) ops.push_back(FromJson(e));
    return key == "and" ? And(std::move(ops)) : Or(std::move(ops));
  }
  if (key == "not") return Not(FromJson(body));
  throw InvalidArgument("unknown predicate form '" + key + "'");
}

bool Predicate::operator==(const Predicate& other) const {
  return node_ == other.node_ || ToJson() == other.ToJson();
}

}  // namespace momcal
