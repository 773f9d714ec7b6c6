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

// Command-line front end.
//
//   momcal train     --config run.json [--mode exact|sample|oracle] ...
//   momcal audit     --bundle B --distribution D | --dataset S [--groups G]
//   momcal intervals --bundle B --distribution D | --dataset S [--gamma ...]
//   momcal cover     --bundle B --distribution D | --dataset S [--degrees 2,4]
//   momcal calc-n    --alpha-target 0.2 --beta-target 0.2 --delta-target 0.05 ...
//   momcal synth     --generator bernoulli --points 40 --seed 1 --output DIR
//
// Every command reads an optional JSON config (--config); any flag given on
// the command line replaces the config value of the same name (flags use
// dashes, config keys use underscores). Every output file starts with a
// header carrying the hash of the effective configuration.
//
// Exit codes: 0 success, 2 configuration or precondition error, 3 a
// statistical-failure event was logged (artifacts are still written), 4 IO
// or parse error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "momcal/auditor.h"
#include "momcal/buckets.h"
#include "momcal/bundle.h"
#include "momcal/calibration_audit.h"
#include "momcal/cells.h"
#include "momcal/cover.h"
#include "momcal/errors.h"
#include "momcal/exact_trainer.h"
#include "momcal/intervals.h"
#include "momcal/io.h"
#include "momcal/oracle.h"
#include "momcal/oracle_trainer.h"
#include "momcal/sample_source.h"
#include "momcal/sample_trainer.h"
#include "momcal/synthetic.h"

namespace {

using nlohmann::json;
using namespace momcal;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitStatistical = 3;
constexpr int kExitIo = 4;

// Effective configuration: the config file overlaid with explicit flags.
class Settings {
 public:
  explicit Settings(std::string command) : command_(std::move(command)) {}

  void Load(const std::string& path) {
    if (path.empty()) return;
    json j = ReadJsonFile(path);
    if (!j.is_object()) throw InvalidArgument("config file " + path + " must hold a JSON object");
    for (auto& [k, v] : j.items()) config_[k] = v;
  }
  void Set(const std::string& key, json value) { config_[key] = std::move(value); }

  bool Has(const std::string& key) const {
    return config_.contains(key) && !config_[key].is_null();
  }
  template <typename T>
  T Get(const std::string& key, T fallback) const {
    if (!Has(key)) return fallback;
    try {
      return config_[key].get<T>();
    } catch (const json::exception&) {
      throw InvalidArgument("config value '" + key + "' has the wrong type");
    }
  }
  template <typename T>
  T Require(const std::string& key) const {
    if (!Has(key)) throw InvalidArgument("missing required setting '" + key + "'");
    return Get<T>(key, T{});
  }
  const json& config() const { return config_; }
  const std::string& command() const { return command_; }
  std::string Hash() const { return ConfigHash(json{{"command", command_}, {"config", config_}}); }

  json Header() const {
    return {{"tool", "momcal"}, {"command", command_}, {"config_hash", Hash()},
            {"parameters", config_}};
  }
  // Header as '#' comment lines for delimited files.
  std::string CommentHeader() const {
    return "momcal " + command_ + " config_hash=" + Hash() + "\nparameters " + config_.dump();
  }

 private:
  std::string command_;
  json config_ = json::object();
};

std::string OutputPath(const Settings& s, const std::string& name) {
  const std::string dir = s.Get<std::string>("output", ".");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
  return (std::filesystem::path(dir) / name).string();
}

void WriteJson(const Settings& s, const std::string& name, json body) {
  json out = {{"header", s.Header()}};
  for (auto& [k, v] : body.items()) out[k] = std::move(v);
  WriteTextFile(OutputPath(s, name), out.dump(1) + "\n");
}

void WriteDelimited(const Settings& s, const std::string& name, const std::string& body) {
  std::string text;
  std::string header = s.CommentHeader();
  size_t start = 0;
  while (start <= header.size()) {
    const size_t end = header.find('\n', start);
    text += "# " + header.substr(start, end == std::string::npos ? std::string::npos : end - start) + "\n";
    if (end == std::string::npos) break;
    start = end + 1;
  }
  WriteTextFile(OutputPath(s, name), text + body);
}

GroupFamily LoadFamily(const Settings& s) {
  if (s.Has("groups")) return ReadGroupFamily(s.Get<std::string>("groups", ""));
  return GroupFamily({{"all", Predicate::All()}});
}

std::optional<std::vector<int>> Degrees(const Settings& s) {
  if (!s.Has("moment_degrees")) return std::nullopt;
  return s.Get<std::vector<int>>("moment_degrees", {});
}

PredictorBundle LoadBundle(const Settings& s) {
  const std::string path = s.Require<std::string>("bundle");
  const std::string text = ReadTextFile(path);
  json j = ParseJsonText(text, path);
  if (j.contains("bundle")) j = j["bundle"];
  return PredictorBundle::FromJson(j);
}

// Either an exact distribution or a labeled sample.
struct Data {
  std::optional<FiniteDistribution> dist;
  std::vector<LabeledExample> sample;
};

Data LoadData(const Settings& s) {
  Data d;
  if (s.Has("distribution")) {
    d.dist = ReadDistribution(s.Get<std::string>("distribution", ""));
  } else if (s.Has("dataset")) {
    d.sample = ReadDatasetCsv(s.Get<std::string>("dataset", ""));
  } else {
    throw InvalidArgument("need a 'distribution' or a 'dataset'");
  }
  return d;
}

std::unique_ptr<AgnosticOracle> MakeOracle(const Settings& s, const GroupFamily& family) {
  const std::string name = s.Get<std::string>("oracle", "exhaustive");
  if (name == "exhaustive") return std::make_unique<ExhaustiveOracle>(family);
  if (name == "stump") return std::make_unique<StumpOracle>();
  if (name == "subprocess") {
    return std::make_unique<SubprocessOracle>(s.Require<std::string>("oracle_command"));
  }
  throw InvalidArgument("unknown oracle '" + name + "' (expected exhaustive, stump or subprocess)");
}

int CmdTrain(const Settings& s) {
  const std::string mode = s.Get<std::string>("mode", "exact");
  const GroupFamily family = LoadFamily(s);
  const bool trace = s.Get<bool>("trace", true);
  json report;
  json extra = json::object();
  std::optional<PredictorBundle> bundle;
  bool failure = false;
  if (mode == "exact") {
    ExactTrainConfig c;
    c.alpha = s.Get<double>("alpha", c.alpha);
    c.beta = s.Get<double>("beta", c.beta);
    c.bucket_count = s.Get<int>("bucket_count", c.bucket_count);
    c.max_degree = s.Get<int>("max_degree", c.max_degree);
    c.moment_degrees = Degrees(s);
    c.absolute_moments = s.Get<bool>("absolute_moments", false);
    c.max_search = s.Get<bool>("max_search", false);
    c.record_trace = trace;
    c.Validate();
    if (!s.Has("distribution")) throw InvalidArgument("exact mode needs a 'distribution'");
    const FiniteDistribution dist = ReadDistribution(s.Get<std::string>("distribution", ""));
    ExactTrainResult r = ExactAlternatingDescent(c, dist, family);
    report = r.report.ToJson(trace);
    failure = r.report.statistical_failure;
    bundle = std::move(r.bundle);
  } else if (mode == "sample" || mode == "oracle") {
    SampleTrainConfig c;
    c.alpha = s.Get<double>("alpha", c.alpha);
    c.beta = s.Get<double>("beta", c.beta);
    c.delta = s.Get<double>("delta", c.delta);
    c.n = s.Require<std::uint64_t>("n");
    c.bucket_count = s.Get<int>("bucket_count", c.bucket_count);
    c.max_degree = s.Get<int>("max_degree", c.max_degree);
    c.moment_degrees = Degrees(s);
    c.absolute_moments = s.Get<bool>("absolute_moments", false);
    c.record_trace = trace;
    c.Validate();
    const std::uint64_t seed = s.Get<std::uint64_t>("seed", 0);
    std::optional<FiniteDistribution> dist;
    std::unique_ptr<SampleSource> source;
    if (s.Has("distribution")) {
      dist = ReadDistribution(s.Get<std::string>("distribution", ""));
      source = std::make_unique<DistributionSource>(*dist, seed);
    } else if (s.Has("dataset")) {
      source = std::make_unique<PoolSource>(ReadDatasetCsv(s.Get<std::string>("dataset", "")));
    } else {
      throw InvalidArgument(mode + " mode needs a 'distribution' or a 'dataset'");
    }
    if (mode == "sample") {
      SampleTrainResult r = SampleAlternatingDescent(c, *source, family);
      report = r.report.ToJson(trace);
      extra = {{"blocks_consumed", r.blocks_consumed}, {"examples_consumed", r.examples_consumed}};
      failure = r.report.statistical_failure;
      bundle = std::move(r.bundle);
    } else {
      std::unique_ptr<AgnosticOracle> oracle = MakeOracle(s, family);
      OracleTrainResult r = OracleAlternatingDescent(OracleTrainConfig{c}, *source, family, *oracle);
      report = r.report.ToJson(trace);
      extra = {{"blocks_consumed", r.blocks_consumed},
               {"examples_consumed", r.examples_consumed},
               {"oracle", oracle->name()},
               {"oracle_calls", r.stats.oracle_calls},
               {"candidates", r.stats.candidates}};
      // Wall-clock time is not written to files so that outputs stay
      // byte-identical across runs.
      std::cerr << "oracle time: " << r.stats.oracle_seconds << " s over "
                << r.stats.oracle_calls << " calls\n";
      failure = r.report.statistical_failure;
      bundle = std::move(r.bundle);
    }
  } else {
    throw InvalidArgument("unknown mode '" + mode + "' (expected exact, sample or oracle)");
  }
  bundle->metadata()["header"] = s.Header();
  WriteTextFile(OutputPath(s, "bundle.json"), bundle->Serialize());
  for (auto& [k, v] : extra.items()) report[k] = v;
  WriteJson(s, "report.json", {{"mode", mode}, {"report", report}});
  std::cout << "mode " << mode << ": " << bundle->updates().size() << " updates, halt "
            << report["halt_reason"].get<std::string>() << "\n";
  if (failure) {
    for (const auto& e : report["events"]) std::cerr << e.get<std::string>() << "\n";
    return kExitStatistical;
  }
  return kExitOk;
}

int CmdAudit(const Settings& s) {
  const PredictorBundle bundle = LoadBundle(s);
  const GroupFamily family = LoadFamily(s);
  const Data data = LoadData(s);
  CalibrationBudgets b;
  b.alpha = s.Get<double>("alpha", b.alpha);
  b.beta = s.Get<double>("beta", b.beta);
  b.slack = s.Get<double>("slack", 0.0);
  b.delta = s.Get<double>("delta", b.delta);
  const CalibrationReport report = data.dist
                                       ? ExactCalibrationAudit(bundle, *data.dist, family, b)
                                       : EmpiricalCalibrationAudit(bundle, data.sample, family, b);
  WriteJson(s, "audit.json", {{"audit", report.ToJson()}});
  WriteDelimited(s, "audit.txt", report.ToTable());
  std::cout << report.rows.size() << " cells audited, " << report.violations << " violations\n";
  return kExitOk;
}

IntervalParams LoadIntervalParams(const Settings& s, int degree) {
  IntervalParams p;
  p.gamma = s.Get<double>("gamma", p.gamma);
  p.delta = s.Get<double>("coverage_delta", p.delta);
  p.degree = degree;
  p.bucket_count = s.Get<int>("bucket_count", p.bucket_count);
  if (s.Get<std::string>("slacks", "given") == "exact") {
    // Slacks implied by exact-mode training at (alpha, beta).
    return IntervalParams::ForExactTraining(s.Require<double>("alpha"), s.Require<double>("beta"),
                                            p.bucket_count, degree, p.gamma, p.delta);
  }
  p.alpha = s.Get<double>("alpha", 0.0);
  p.beta = s.Get<double>("beta", 0.0);
  p.epsilon = s.Get<double>("epsilon", 0.0);
  return p;
}

// Points and masses of the data: the support (exact) or the distinct sample
// feature vectors with empirical frequencies.
void PointsAndMasses(const Data& data, std::vector<const FeatureVector*>* points,
                     std::vector<double>* masses) {
  if (data.dist) {
    for (const SupportPoint& p : data.dist->support()) {
      points->push_back(&p.features);
      masses->push_back(p.mass);
    }
    return;
  }
  std::map<std::pair<std::string, std::vector<double>>, size_t> index;
  const double n = static_cast<double>(TotalCount(data.sample));
  for (const LabeledExample& e : data.sample) {
    auto [it, fresh] = index.emplace(std::make_pair(e.features.id, e.features.values), points->size());
    if (fresh) {
      points->push_back(&e.features);
      masses->push_back(0.0);
    }
    (*masses)[it->second] += static_cast<double>(e.multiplicity) / n;
  }
}

int CmdIntervals(const Settings& s) {
  const PredictorBundle bundle = LoadBundle(s);
  const GroupFamily family = LoadFamily(s);
  const Data data = LoadData(s);
  const IntervalParams params = LoadIntervalParams(s, s.Get<int>("degree", 2));
  params.Validate(bundle.absolute_moments());
  if (params.bucket_count != bundle.bucket_count()) {
    throw InvalidArgument("bucket_count does not match the bundle's");
  }
  const BundleEvaluator evaluator(bundle, family);
  std::vector<const FeatureVector*> points;
  std::vector<double> masses;
  PointsAndMasses(data, &points, &masses);
  std::string csv = "id,mean,moment,width,raw_lo,raw_hi,lo,hi,cell\n";
  const int m = bundle.bucket_count();
  for (const FeatureVector* x : points) {
    const PredictionInterval iv = MakePredictionInterval(evaluator, *x, params);
    csv += x->id + "," + FormatDouble(iv.mean) + "," + FormatDouble(iv.moment) + "," +
           FormatDouble(iv.width) + "," + FormatDouble(iv.raw_lo) + "," + FormatDouble(iv.raw_hi) +
           "," + FormatDouble(iv.lo) + "," + FormatDouble(iv.hi) + ",X(i=" +
           std::to_string(BucketIndex(iv.mean, m)) + ";j=" +
           std::to_string(BucketIndex(iv.moment, m)) + ")\n";
  }
  WriteDelimited(s, "intervals.csv", csv);
  const double slack = s.Get<double>("coverage_slack", 0.0);
  const CoverageReport coverage =
      data.dist ? ExactCoverageAudit(bundle, *data.dist, family, params, slack)
                : EmpiricalCoverageAudit(bundle, data.sample, family, params, slack);
  WriteDelimited(s, "coverage.csv", coverage.ToCsv());
  WriteJson(s, "coverage.json", {{"coverage", coverage.ToJson()}});
  std::cout << points.size() << " intervals, " << coverage.rows.size() << " qualifying cells, "
            << coverage.failures << " below 1 - delta\n";
  return kExitOk;
}

int CmdCover(const Settings& s) {
  const PredictorBundle bundle = LoadBundle(s);
  const GroupFamily family = LoadFamily(s);
  const Data data = LoadData(s);
  std::vector<int> degrees = s.Get<std::vector<int>>("degrees", bundle.moment_degrees());
  std::map<int, IntervalParams> params;
  for (int a : degrees) params[a] = LoadIntervalParams(s, a);
  std::vector<const FeatureVector*> points;
  std::vector<double> masses;
  PointsAndMasses(data, &points, &masses);
  const CoverInstance instance =
      BuildCoverInstance(bundle, family, points, masses, params, !data.dist.has_value());
  const CoverSolution greedy = GreedyCover(instance);
  json body = {{"instance", instance.ToJson()},
               {"greedy", {{"chosen", greedy.chosen}, {"objective", greedy.objective}}},
               {"approximation_factor", GreedyApproximationFactor(instance)}};
  if (instance.sets.size() <= static_cast<size_t>(s.Get<int>("brute_force_limit", 16))) {
    const CoverSolution opt = BruteForceOptimum(instance);
    body["optimum"] = {{"chosen", opt.chosen}, {"objective", opt.objective}};
  }
  WriteJson(s, "cover.json", body);
  const BundleEvaluator evaluator(bundle, family);
  std::string csv = "id,mass,mean,width,lo,hi\n";
  for (size_t p = 0; p < instance.points.size(); ++p) {
    size_t source = 0;
    while (points[source]->id != instance.points[p].id || masses[source] <= 0.0) ++source;
    const double mean = evaluator.Evaluate(*points[source]).mean;
    const PredictionInterval iv = PerPointIntervalFromCover(instance, greedy.chosen, p, mean);
    csv += instance.points[p].id + "," + FormatDouble(instance.points[p].mass) + "," +
           FormatDouble(mean) + "," + FormatDouble(iv.width) + "," + FormatDouble(iv.lo) + "," +
           FormatDouble(iv.hi) + "\n";
  }
  WriteDelimited(s, "cover_intervals.csv", csv);
  std::cout << instance.sets.size() << " qualifying cells, greedy chose " << greedy.chosen.size()
            << ", objective " << FormatDouble(greedy.objective) << "\n";
  return kExitOk;
}

int CmdCalcN(const Settings& s) {
  const SampleSizePlan plan = SampleSizeCalculator(
      s.Require<double>("alpha_target"), s.Require<double>("beta_target"),
      s.Require<double>("delta_target"), s.Require<double>("epsilon"),
      s.Require<std::uint64_t>("groups"), s.Require<int>("max_degree"),
      s.Require<int>("bucket_count"));
  std::printf("%-8s %s\n", "alpha", FormatDouble(plan.alpha).c_str());
  std::printf("%-8s %s\n", "beta", FormatDouble(plan.beta).c_str());
  std::printf("%-8s %s\n", "delta", FormatDouble(plan.delta).c_str());
  std::printf("%-8s %s\n", "n", FormatDouble(plan.n).c_str());
  std::printf("%-8s %s\n", "q_bar", FormatDouble(plan.q_bar).c_str());
  std::printf("%-8s %s\n", "n_alpha", FormatDouble(plan.n_alpha).c_str());
  std::printf("%-8s %s\n", "n_beta", FormatDouble(plan.n_beta).c_str());
  if (s.Has("output")) WriteJson(s, "calc_n.json", {{"plan", plan.ToJson()}});
  return kExitOk;
}

int CmdSynth(const Settings& s) {
  SyntheticSpec spec;
  spec.generator = s.Get<std::string>("generator", "bernoulli");
  for (const char* key : {"points", "dim", "labels"}) {
    if (s.Has(key)) spec.params[key] = s.Get<int>(key, 0);
  }
  const std::uint64_t seed = s.Get<std::uint64_t>("seed", 0);
  const FiniteDistribution dist = GenerateSynthetic(spec, seed);
  WriteJson(s, "distribution.json", DistributionToJson(dist));
  const int group_count = s.Get<int>("group_count", 1);
  const GroupFamily family =
      s.Get<std::string>("group_kind", "box") == "threshold"
          ? RandomThresholdFamily(group_count, static_cast<int>(dist.dimension()), seed)
          : RandomBoxFamily(group_count, static_cast<int>(dist.dimension()), seed);
  WriteJson(s, "groups.json", FamilyToJson(family));
  const std::uint64_t samples = s.Get<std::uint64_t>("samples", 0);
  if (samples > 0) {
    WriteTextFile(OutputPath(s, "samples.csv"),
                  DatasetToCsv(SampleExamples(dist, samples, seed), s.CommentHeader()));
  }
  std::cout << "wrote " << dist.size() << " support points and " << family.size()
            << " groups\n";
  return kExitOk;
}

// Registers a flag that, when given, overrides config key `key`.
template <typename T>
void Flag(CLI::App* app, std::vector<std::function<void(Settings&)>>* apply,
          const std::string& key, const std::string& help) {
  auto value = std::make_shared<std::optional<T>>();
  std::string name = "--" + key;
  for (char& c : name) {
    if (c == '_') c = '-';
  }
  app->add_option_function<T>(name, [value](const T& v) { *value = v; }, help);
  apply->push_back([value, key](Settings& s) {
    if (*value) s.Set(key, json(**value));
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean and moment multicalibration: training, audits and prediction intervals"};
  app.require_subcommand(1);
  std::string config_path;
  std::map<std::string, std::vector<std::function<void(Settings&)>>> flags;

  auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON configuration file");
    return sub;
  };
  CLI::App* train = add("train", "Train a predictor bundle (exact, sample or oracle mode)");
  CLI::App* audit = add("audit", "Calibration audit of a bundle");
  CLI::App* intervals = add("intervals", "Prediction intervals and coverage table");
  CLI::App* cover = add("cover", "Greedy multi-moment interval cover");
  CLI::App* calc = add("calc-n", "Trainer parameters for target slacks");
  CLI::App* synth = add("synth", "Write a synthetic distribution and group family");

  auto& tf = flags["train"];
  Flag<std::string>(train, &tf, "mode", "exact | sample | oracle");
  Flag<std::string>(train, &tf, "distribution", "distribution JSON");
  Flag<std::string>(train, &tf, "dataset", "sample pool CSV (sample/oracle modes)");
  Flag<std::string>(train, &tf, "groups", "group family JSON (default: the whole domain)");
  Flag<std::string>(train, &tf, "output", "output directory");
  Flag<double>(train, &tf, "alpha", "mean step / audit rate");
  Flag<double>(train, &tf, "beta", "moment step / audit rate");
  Flag<double>(train, &tf, "delta", "audit failure probability");
  Flag<std::uint64_t>(train, &tf, "n", "block size");
  Flag<int>(train, &tf, "bucket_count", "buckets m");
  Flag<int>(train, &tf, "max_degree", "highest moment degree k");
  Flag<std::vector<int>>(train, &tf, "moment_degrees", "tracked degrees");
  Flag<bool>(train, &tf, "absolute_moments", "absolute central moments");
  Flag<bool>(train, &tf, "max_search", "exact mode: step on the worst cell");
  Flag<bool>(train, &tf, "trace", "record the update trace");
  Flag<std::uint64_t>(train, &tf, "seed", "sampling seed");
  Flag<std::string>(train, &tf, "oracle", "exhaustive | stump | subprocess");
  Flag<std::string>(train, &tf, "oracle_command", "command for the subprocess oracle");

  for (auto [sub, name] : {std::pair{audit, "audit"}, std::pair{intervals, "intervals"},
                           std::pair{cover, "cover"}}) {
    auto& f = flags[name];
    Flag<std::string>(sub, &f, "bundle", "bundle file");
    Flag<std::string>(sub, &f, "distribution", "distribution JSON (exact evaluation)");
    Flag<std::string>(sub, &f, "dataset", "held-out CSV (empirical evaluation)");
    Flag<std::string>(sub, &f, "groups", "group family JSON");
    Flag<std::string>(sub, &f, "output", "output directory");
    Flag<double>(sub, &f, "alpha", "mean slack");
    Flag<double>(sub, &f, "beta", "moment slack");
  }
  Flag<double>(audit, &flags["audit"], "slack", "additive budget slack");
  Flag<double>(audit, &flags["audit"], "delta", "confidence for uncertainty column");
  for (auto [sub, name] : {std::pair{intervals, "intervals"}, std::pair{cover, "cover"}}) {
    auto& f = flags[name];
    Flag<double>(sub, &f, "epsilon", "additive calibration slack");
    Flag<double>(sub, &f, "gamma", "minimum cell mass");
    Flag<double>(sub, &f, "coverage_delta", "coverage failure probability");
    Flag<int>(sub, &f, "bucket_count", "buckets m");
    Flag<std::string>(sub, &f, "slacks", "given | exact (derive from alpha, beta)");
  }
  Flag<int>(intervals, &flags["intervals"], "degree", "moment degree k");
  Flag<double>(intervals, &flags["intervals"], "coverage_slack", "slack on 1 - delta");
  Flag<std::vector<int>>(cover, &flags["cover"], "degrees", "moment degrees");
  Flag<int>(cover, &flags["cover"], "brute_force_limit", "largest set count solved exactly");

  auto& cf = flags["calc-n"];
  Flag<double>(calc, &cf, "alpha_target", "target mean slack alpha'");
  Flag<double>(calc, &cf, "beta_target", "target moment slack beta'");
  Flag<double>(calc, &cf, "delta_target", "target failure probability delta'");
  Flag<double>(calc, &cf, "epsilon", "epsilon < alpha', beta'");
  Flag<std::uint64_t>(calc, &cf, "groups", "number of groups");
  Flag<int>(calc, &cf, "max_degree", "k");
  Flag<int>(calc, &cf, "bucket_count", "m");
  Flag<std::string>(calc, &cf, "output", "output directory");

  auto& sf = flags["synth"];
  Flag<std::string>(synth, &sf, "generator", "two_point | finite | bernoulli | beta");
  Flag<int>(synth, &sf, "points", "support size");
  Flag<int>(synth, &sf, "dim", "feature dimension");
  Flag<int>(synth, &sf, "labels", "label grid size");
  Flag<int>(synth, &sf, "group_count", "number of groups (first is 'all')");
  Flag<std::string>(synth, &sf, "group_kind", "box | threshold");
  Flag<std::uint64_t>(synth, &sf, "samples", "also write this many i.i.d. draws");
  Flag<std::uint64_t>(synth, &sf, "seed", "seed");
  Flag<std::string>(synth, &sf, "output", "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    Settings settings(command);
    settings.Load(config_path);
    for (auto& f : flags[command]) f(settings);
    if (command == "train") return CmdTrain(settings);
    if (command == "audit") return CmdAudit(settings);
    if (command == "intervals") return CmdIntervals(settings);
    if (command == "cover") return CmdCover(settings);
    if (command == "calc-n") return CmdCalcN(settings);
    return CmdSynth(settings);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const PoolExhausted& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InternalLogicError& e) {
    std::cerr << "update cap exceeded: " << e.what() << "\n";
    return kExitStatistical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
