// Copyright 2026 The hohl Authors
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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hohl/consistency.hpp"
#include "hohl/geometry.hpp"
#include "hohl/harness.hpp"

namespace hohl {

/// CSV with an optional header. A header is recognised by a non-numeric
/// cell in the first row; a last header column named `label` holds integer
/// class labels. Without a header every column is a feature.
PointCloud parse_dataset_csv(std::istream& in);
PointCloud load_dataset(const std::string& path, const std::string& format = "csv");

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double v);
/// Locale-independent; throws InvalidArgument on trailing garbage.
double parse_double(std::string_view s);

enum class ResultFormat { csv, json };
ResultFormat result_format_from_string(const std::string& s);

inline constexpr std::string_view kResultsHeader =
    "experiment,dataset,rate,method,q,j,mean_acc,std_acc,trials,master_seed,seconds";

void write_results_csv(std::ostream& out, std::span<const TrialResult> results);
void write_results_json(std::ostream& out, std::span<const TrialResult> results);
void write_results(const std::string& path, std::span<const TrialResult> results,
                   ResultFormat format = ResultFormat::csv);
std::vector<TrialResult> read_results_csv(std::istream& in);
std::vector<TrialResult> read_results_json(std::istream& in);
std::vector<TrialResult> read_results(const std::string& path,
                                      ResultFormat format = ResultFormat::csv);

/// Relative dataset paths are resolved against `base_dir`. Missing seeds
/// default to 0.
ExperimentConfig parse_experiment_config(const nlohmann::json& j,
                                         const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::string& path);

ConsistencyConfig parse_consistency_config(const nlohmann::json& j);
ConsistencyConfig load_consistency_config(const std::string& path);

inline constexpr std::string_view kConsistencyHeader = "n,eps,k,p,median_err,p90_err,seconds";
void write_consistency_csv(std::ostream& out, std::span<const ConsistencyRow> rows);

nlohmann::json read_json_file(const std::string& path);

}  // namespace hohl
