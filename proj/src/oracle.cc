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

#include "momcal/oracle.h"

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>

#include "json.hpp"
#include "momcal/errors.h"

namespace momcal {

using nlohmann::json;

bool RegionContains(const Region& region, const GroupFamily& family, const FeatureVector& x) {
  switch (region.kind()) {
    case Region::Kind::kAll:
      return true;
    case Region::Kind::kEmpty:
      return false;
    case Region::Kind::kGroup: {
      const int g = family.Find(region.group());
      if (g < 0) throw InvalidArgument("unknown group '" + region.group() + "'");
      return family.Contains(static_cast<size_t>(g), x);
    }
    case Region::Kind::kPredicate:
      return region.predicate().Contains(x.values);
  }
  return false;
}

ExhaustiveOracle::ExhaustiveOracle(const GroupFamily& family) {
  if (family.size() == 0) throw InvalidArgument("exhaustive oracle needs a non-empty class");
  for (size_t g = 0; g < family.size(); ++g) {
    regions_.push_back(Region::Group(family[g].name));
    Predicate p = family[g].predicate;
    members_.push_back([p](const FeatureVector& x) { return p.Contains(x.values); });
  }
}

ExhaustiveOracle::ExhaustiveOracle(std::vector<Predicate> hypotheses) {
  if (hypotheses.empty()) throw InvalidArgument("exhaustive oracle needs a non-empty class");
  for (Predicate& p : hypotheses) {
    regions_.push_back(Region::Learned(p));
    members_.push_back([p](const FeatureVector& x) { return p.Contains(x.values); });
  }
}

double ExhaustiveOracle::Value(size_t h, const std::vector<OracleExample>& examples) const {
  double total = 0.0;
  std::uint64_t n = 0;
  for (const OracleExample& e : examples) {
    n += e.weight;
    if (members_[h](*e.x)) total += static_cast<double>(e.weight) * e.residual;
  }
  return n == 0 ? 0.0 : total / static_cast<double>(n);
}

Region ExhaustiveOracle::Learn(const std::vector<OracleExample>& examples) {
  Region best = Region::Empty();
  double best_value = 0.0;
  for (size_t h = 0; h < regions_.size(); ++h) {
    const double v = Value(h, examples);
    if (v > best_value) {
      best_value = v;
      best = regions_[h];
    }
  }
  return best;
}

Region StumpOracle::Learn(const std::vector<OracleExample>& examples) {
  Region best = Region::Empty();
  double best_value = 0.0;
  double total = 0.0;
  for (const OracleExample& e : examples) total += static_cast<double>(e.weight) * e.residual;
  if (total > best_value) {
    best_value = total;
    best = Region::Learned(Predicate::All());
  }
  const size_t dim = examples.empty() ? 0 : examples.front().x->values.size();
  std::vector<std::pair<double, double>> col(examples.size());
  for (size_t c = 0; c < dim; ++c) {
    for (size_t e = 0; e < examples.size(); ++e) {
      col[e] = {examples[e].x->values[c], static_cast<double>(examples[e].weight) *
                                              examples[e].residual};
    }
    std::stable_sort(col.begin(), col.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    // below = sum over x_c < v for the current distinct value v.
    double below = 0.0;
    for (size_t e = 0; e < col.size();) {
      const double v = col[e].first;
      const double above = total - below;
      if (above > best_value) {
        best_value = above;
        best = Region::Learned(Predicate::Box({BoxConstraint{static_cast<int>(c), v, {}}}));
      }
      if (below > best_value) {
        best_value = below;
        best = Region::Learned(Predicate::Box({BoxConstraint{static_cast<int>(c), {}, v}}));
      }
      while (e < col.size() && col[e].first == v) below += col[e++].second;
    }
  }
  return best;
}

SubprocessOracle::SubprocessOracle(std::string command) : command_(std::move(command)) {}

SubprocessOracle::~SubprocessOracle() { Stop(); }

void SubprocessOracle::Start() {
  int in_pipe[2];
  int out_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) {
    throw IoError(std::string("oracle pipe failed: ") + std::strerror(errno));
  }
  const pid_t pid = fork();
  if (pid < 0) throw IoError(std::string("oracle fork failed: ") + std::strerror(errno));
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  // A dead child must surface as an IoError, not kill us.
  signal(SIGPIPE, SIG_IGN);
}

void SubprocessOracle::Stop() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  if (pid_ > 0) {
    int status = 0;
    waitpid(pid_, &status, 0);
  }
  to_child_ = from_child_ = pid_ = -1;
  buffer_.clear();
}

Region SubprocessOracle::Learn(const std::vector<OracleExample>& examples) {
  if (pid_ < 0) Start();
  json rows = json::array();
  std::uint64_t n = 0;
  for (const OracleExample& e : examples) {
    n += e.weight;
    rows.push_back(json::array({e.weight, e.residual, e.x->values}));
  }
  const std::string request = json{{"n", n}, {"examples", std::move(rows)}}.dump() + "\n";
  size_t written = 0;
  while (written < request.size()) {
    const ssize_t w = write(to_child_, request.data() + written, request.size() - written);
    if (w <= 0) {
      Stop();
      throw IoError("oracle process '" + command_ + "' closed its input");
    }
    written += static_cast<size_t>(w);
  }
  size_t newline;
  while ((newline = buffer_.find('\n')) == std::string::npos) {
    char chunk[4096];
    const ssize_t r = read(from_child_, chunk, sizeof(chunk));
    if (r <= 0) {
      Stop();
      throw IoError("oracle process '" + command_ + "' ended without a response");
    }
    buffer_.append(chunk, static_cast<size_t>(r));
  }
  const std::string line = buffer_.substr(0, newline);
  buffer_.erase(0, newline + 1);
  json reply;
  try {
    reply = json::parse(line);
  } catch (const json::parse_error& e) {
    throw InvalidArgument("oracle response is not JSON: " + line);
  }
  Predicate p = Predicate::FromJson(reply);
  if (p.kind() == Predicate::Kind::kNone) return Region::Empty();
  return Region::Learned(std::move(p));
}

ResidualSets ResidualLabels(const LabelSpec& spec,
                            const std::function<bool(const FeatureVector&)>& in_r,
                            const std::vector<LabeledExample>& data) {
  ResidualSets out{data, data};
  for (size_t e = 0; e < data.size(); ++e) {
    double r = 0.0;
    if (in_r(data[e].features)) {
      r = spec.predicted(data[e].features) - spec.observed(data[e].features, data[e].label);
    }
    out.positive[e].label = r;
    out.negative[e].label = -r;
  }
  return out;
}

AuditVerdict OracleAuditCore(const AuditSample& train, const AuditSample& check,
                             const std::vector<Refinement>& refinements, double alpha,
                             double delta, AgnosticOracle& oracle, const GroupFamily& family,
                             OracleAuditStats* stats) {
  const std::vector<LabeledExample>& tr = *train.examples;
  const std::vector<LabeledExample>& ck = *check.examples;
  const std::uint64_t n_check = TotalCount(ck);
  struct Candidate {
    SetDescriptor descriptor;
    Region region;
    const Refinement* refinement;
  };
  std::vector<Candidate> candidates;
  std::vector<OracleExample> plus(tr.size());
  std::vector<OracleExample> minus(tr.size());
  for (const Refinement& r : refinements) {
    if (r.descriptor.region.kind() != Region::Kind::kAll) {
      throw InvalidArgument("refinement cells must cover the whole domain");
    }
    bool any = false;
    for (size_t e = 0; e < tr.size(); ++e) {
      const double res = r.in_train[e] ? train.predicted[e] - train.observed[e] : 0.0;
      any = any || r.in_train[e];
      plus[e] = OracleExample{&tr[e].features, tr[e].multiplicity, res};
      minus[e] = OracleExample{&tr[e].features, tr[e].multiplicity, -res};
    }
    if (!any) continue;
    for (const auto* labels : {&plus, &minus}) {
      const auto start = std::chrono::steady_clock::now();
      Region s = Region::Empty();
      try {
        s = oracle.Learn(*labels);
      } catch (const std::exception& e) {
        throw InvalidArgument("oracle '" + oracle.name() + "' failed on refinement " +
                              r.descriptor.ToString() + ": " + e.what());
      }
      if (stats) {
        ++stats->oracle_calls;
        stats->oracle_seconds +=
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      }
      if (s.kind() == Region::Kind::kEmpty) continue;
      SetDescriptor d = r.descriptor;
      d.region = s;
      candidates.push_back(Candidate{std::move(d), std::move(s), &r});
    }
  }
  if (stats) stats->candidates += candidates.size();
  AuditVerdict verdict;
  if (n_check == 0) return verdict;
  for (size_t c = 0; c < candidates.size(); ++c) {
    double predicted = 0.0;
    double observed = 0.0;
    std::uint64_t n_sub = 0;
    for (size_t e = 0; e < ck.size(); ++e) {
      if (!candidates[c].refinement->in_check[e]) continue;
      if (!RegionContains(candidates[c].region, family, ck[e].features)) continue;
      const double w = static_cast<double>(ck[e].multiplicity);
      predicted += w * check.predicted[e];
      observed += w * check.observed[e];
      n_sub += ck[e].multiplicity;
    }
    AuditRecord rec = TestSetSummary(predicted, observed, n_sub, n_check, alpha, delta);
    rec.set = candidates[c].descriptor.ToString();
    if (rec.violation) {
      verdict.violation = true;
      verdict.sign = rec.sign;
      verdict.index = c;
      verdict.set = candidates[c].descriptor;
      verdict.record = std::move(rec);
      return verdict;
    }
  }
  return verdict;
}

AuditVerdict OracleAuditWrapper(const LabelSpec& spec, double alpha, double delta,
                                const std::vector<LabeledExample>& train,
                                const std::vector<LabeledExample>& check,
                                const std::vector<AuditCandidate>& refinements,
                                AgnosticOracle& oracle, const GroupFamily& family,
                                OracleAuditStats* stats) {
  auto sample = [&](const std::vector<LabeledExample>& data) {
    AuditSample s;
    s.examples = &data;
    for (const LabeledExample& e : data) {
      s.predicted.push_back(spec.predicted(e.features));
      s.observed.push_back(spec.observed(e.features, e.label));
    }
    return s;
  };
  const AuditSample tr = sample(train);
  const AuditSample ck = sample(check);
  std::vector<Refinement> refs;
  for (const AuditCandidate& c : refinements) {
    Refinement r;
    r.descriptor = c.descriptor;
    for (const LabeledExample& e : train) r.in_train.push_back(c.member(e.features));
    for (const LabeledExample& e : check) r.in_check.push_back(c.member(e.features));
    refs.push_back(std::move(r));
  }
  return OracleAuditCore(tr, ck, refs, alpha, delta, oracle, family, stats);
}

}  // namespace momcal
