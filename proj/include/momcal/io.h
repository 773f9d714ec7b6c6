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

// File formats.
//
// Dataset (CSV): header "id,x0,...,x{d-1},label"; one example per row. Lines
// starting with '#' are comments (output headers) and are skipped.
//
// Distribution (JSON):
//   {"points": [{"id": "p0", "x": [..], "mass": 0.1,
//                "labels": [[y, prob], ...]}, ...]}
//
// Group family (JSON): {"groups": [{"name": "g", "predicate": {...}}, ...]}
// with predicates in the grammar of Predicate::ToJson.

#ifndef MOMCAL_IO_H_
#define MOMCAL_IO_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "momcal/types.h"

namespace momcal {

std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& content);

// Parses JSON text; syntax errors become ParseError with a line number.
nlohmann::json ParseJsonText(const std::string& text, const std::string& source);
nlohmann::json ReadJsonFile(const std::string& path);

std::vector<LabeledExample> ParseDatasetCsv(const std::string& text, const std::string& source);
std::vector<LabeledExample> ReadDatasetCsv(const std::string& path);
// Writes one row per draw (multiplicities expanded). `header` lines are
// emitted as '#' comments.
std::string DatasetToCsv(const std::vector<LabeledExample>& examples,
                         const std::string& header = "");

FiniteDistribution DistributionFromJson(const nlohmann::json& j);
nlohmann::json DistributionToJson(const FiniteDistribution& dist);
FiniteDistribution ReadDistribution(const std::string& path);

GroupFamily FamilyFromJson(const nlohmann::json& j);
nlohmann::json FamilyToJson(const GroupFamily& family);
GroupFamily ReadGroupFamily(const std::string& path);

// Stable 64-bit FNV-1a hash of the canonical JSON dump, as 16 hex digits.
std::string ConfigHash(const nlohmann::json& config);

// Shortest decimal that round-trips to the same double.
std::string FormatDouble(double v);

}  // namespace momcal

#endif  // MOMCAL_IO_H_
