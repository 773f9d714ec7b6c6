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

#include "momcal/io.h"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "momcal/errors.h"

namespace momcal {

using nlohmann::json;

namespace {

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) {
    const size_t b = cell.find_first_not_of(" \t\r");
    const size_t e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double ParseNumber(const std::string& s, const std::string& source, int line) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(source, line, "not a number: '" + s + "'");
  }
  return v;
}

int LineOfOffset(const std::string& text, size_t offset) {
  int line = 1;
  for (size_t i = 0; i < offset && i < text.size(); ++i) line += text[i] == '\n';
  return line;
}

}  // namespace

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteTextFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("write to '" + path + "' failed");
}

json ParseJsonText(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source, LineOfOffset(text, e.byte > 0 ? e.byte - 1 : 0), e.what());
  }
}

json ReadJsonFile(const std::string& path) { return ParseJsonText(ReadTextFile(path), path); }

std::vector<LabeledExample> ParseDatasetCsv(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::vector<std::string> header;
  std::vector<LabeledExample> out;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells = SplitCsv(line);
    if (header.empty()) {
      if (cells.size() < 2 || cells.front() != "id" || cells.back() != "label") {
        throw ParseError(source, lineno, "header must be 'id,<features...>,label'");
      }
      header = std::move(cells);
      continue;
    }
    if (cells.size() != header.size()) {
      throw ParseError(source, lineno,
                       "expected " + std::to_string(header.size()) + " columns, found " +
                           std::to_string(cells.size()));
    }
    LabeledExample e;
    e.features.id = cells.front();
    for (size_t c = 1; c + 1 < cells.size(); ++c) {
      e.features.values.push_back(ParseNumber(cells[c], source, lineno));
    }
    e.label = ParseNumber(cells.back(), source, lineno);
    if (!(e.label >= 0.0 && e.label <= 1.0)) {
      throw ParseError(source, lineno, "label outside [0,1]");
    }
    out.push_back(std::move(e));
  }
  if (header.empty()) throw ParseError(source, 0, "missing header row");
  return out;
}

std::vector<LabeledExample> ReadDatasetCsv(const std::string& path) {
  return ParseDatasetCsv(ReadTextFile(path), path);
}

std::string DatasetToCsv(const std::vector<LabeledExample>& examples, const std::string& header) {
  std::ostringstream os;
  if (!header.empty()) {
    std::istringstream hs(header);
    std::string line;
    while (std::getline(hs, line)) os << "# " << line << "\n";
  }
  const size_t dim = examples.empty() ? 0 : examples.front().features.values.size();
  os << "id";
  for (size_t c = 0; c < dim; ++c) os << ",x" << c;
  os << ",label\n";
  for (const LabeledExample& e : examples) {
    std::string row = e.features.id;
    for (double v : e.features.values) row += "," + FormatDouble(v);
    row += "," + FormatDouble(e.label) + "\n";
    for (std::uint64_t r = 0; r < e.multiplicity; ++r) os << row;
  }
  return os.str();
}

FiniteDistribution DistributionFromJson(const json& j) {
  if (!j.is_object() || !j.contains("points") || !j["points"].is_array()) {
    throw InvalidArgument("distribution needs a 'points' array");
  }
  std::vector<SupportPoint> support;
  size_t index = 0;
  for (const json& p : j["points"]) {
    SupportPoint sp;
    sp.features.id = p.contains("id") ? p["id"].get<std::string>() : "p" + std::to_string(index);
    if (!p.contains("x") || !p["x"].is_array()) throw InvalidArgument("point needs an 'x' array");
    for (const json& v : p["x"]) sp.features.values.push_back(v.get<double>());
    if (!p.contains("mass") || !p["mass"].is_number()) throw InvalidArgument("point needs a mass");
    sp.mass = p["mass"].get<double>();
    if (!p.contains("labels") || !p["labels"].is_array()) {
      throw InvalidArgument("point needs a 'labels' array of [label, prob] pairs");
    }
    for (const json& l : p["labels"]) {
      if (!l.is_array() || l.size() != 2) throw InvalidArgument("label outcome must be [y, prob]");
      sp.label_law.push_back(LabelOutcome{l[0].get<double>(), l[1].get<double>()});
    }
    support.push_back(std::move(sp));
    ++index;
  }
  return FiniteDistribution(std::move(support));
}

json DistributionToJson(const FiniteDistribution& dist) {
  json points = json::array();
  for (const SupportPoint& p : dist.support()) {
    json labels = json::array();
    for (const LabelOutcome& o : p.label_law) labels.push_back({o.label, o.prob});
    points.push_back(
        {{"id", p.features.id}, {"x", p.features.values}, {"mass", p.mass}, {"labels", labels}});
  }
  return json{{"points", std::move(points)}};
}

FiniteDistribution ReadDistribution(const std::string& path) {
  const json j = ReadJsonFile(path);
  try {
    return DistributionFromJson(j);
  } catch (const json::exception& e) {
    throw ParseError(path, 0, e.what());
  }
}

GroupFamily FamilyFromJson(const json& j) {
  if (!j.is_object() || !j.contains("groups") || !j["groups"].is_array()) {
    throw InvalidArgument("group family needs a 'groups' array");
  }
  std::vector<GroupFamily::Group> groups;
  for (const json& g : j["groups"]) {
    if (!g.contains("name") || !g["name"].is_string() || !g.contains("predicate")) {
      throw InvalidArgument("group needs 'name' and 'predicate'");
    }
    groups.push_back({g["name"].get<std::string>(), Predicate::FromJson(g["predicate"])});
  }
  return GroupFamily(std::move(groups));
}

json FamilyToJson(const GroupFamily& family) {
  json groups = json::array();
  for (const auto& g : family.groups()) {
    groups.push_back({{"name", g.name}, {"predicate", g.predicate.ToJson()}});
  }
  return json{{"groups", std::move(groups)}};
}

GroupFamily ReadGroupFamily(const std::string& path) {
  const json j = ReadJsonFile(path);
  try {
    return FamilyFromJson(j);
  } catch (const json::exception& e) {
    throw ParseError(path, 0, e.what());
  }
}

std::string ConfigHash(const json& config) {
  const std::string s = config.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string FormatDouble(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace momcal
