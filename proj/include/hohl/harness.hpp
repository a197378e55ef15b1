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

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hohl/geometry.hpp"
#include "hohl/graph.hpp"
#include "hohl/kernels.hpp"
#include "hohl/ssl.hpp"

namespace hohl {

enum class LambdaScheme { CC, SC, QC, VQC };
enum class PowerScheme { CP, IP };

/// CC: 1, SC: l, QC: l^2, VQC(j): (1, j^2, (j+1)^2) cut to q. CP: p = 1,
/// IP: p = l. VQC needs j >= 1 and q in {2, 3}.
std::pair<std::vector<double>, std::vector<int>> expand_scheme(LambdaScheme lambda,
                                                               PowerScheme power, std::size_t q,
                                                               std::optional<int> j = std::nullopt);

LambdaScheme lambda_scheme_from_string(const std::string& s);
PowerScheme power_scheme_from_string(const std::string& s);
std::string to_string(LambdaScheme s);
std::string to_string(PowerScheme s);

/// One solver configuration reported as one row per rate.
struct MethodSpec {
  std::string tag;  // "IP-QC", "Laplace", "FL(2)", ...
  std::size_t q = 1;
  int j = 0;        // VQC parameter, 0 otherwise
  std::vector<double> lambdas;
  std::vector<int> powers;
};

MethodSpec scheme_method(LambdaScheme lambda, PowerScheme power, std::size_t q,
                         std::optional<int> j = std::nullopt);
/// q = 1, lambda = 1, p = 1.
MethodSpec laplace_method();
/// q = 1, lambda = 1, p = s.
MethodSpec fractional_method(int s);
/// Parses "Laplace" or "FL(s)".
MethodSpec baseline_from_string(const std::string& s);

struct GraphSpec {
  enum class Type { eps, knn };
  Type type = Type::eps;
  /// eps^(l) for eps graphs, k^(l) for kNN graphs; strictly decreasing.
  std::vector<double> scales;
};

struct ExperimentConfig {
  std::string experiment = "q";
  std::string dataset_name;
  std::string dataset_path;
  std::string dataset_format = "csv";
  GraphSpec graph;
  Kernel kernel = Kernel::gaussian();
  std::vector<MethodSpec> methods;
  std::vector<LabelBudget> rates;
  std::size_t trials = 100;
  std::uint64_t master_seed = 0;
  EvalMode eval_mode = EvalMode::unlabeled_only;
  LaplacianMode laplacian_mode = LaplacianMode::raw;
  SamplingMode sampling = SamplingMode::stratified;
  SolverKind solver = SolverKind::automatic;
  bool record_timing = true;

  void validate() const;
};

struct TrialResult {
  std::string experiment;
  std::string dataset;
  double rate = 0.0;        // fraction, or count per class
  std::string method;
  std::size_t q = 1;
  int j = 0;
  double mean_acc = 0.0;    // percent
  double std_acc = 0.0;     // population standard deviation, percent
  std::size_t trials = 0;   // successful trials
  std::uint64_t master_seed = 0;
  double seconds = 0.0;
  std::size_t failed = 0;   // not serialized to CSV

  bool operator==(const TrialResult&) const = default;
};

/// The q Laplacians of a graph specification (first q scales).
std::vector<std::shared_ptr<const Laplacian>> build_levels(const PointCloud& cloud,
                                                           const GraphSpec& graph,
                                                           const Kernel& kernel, std::size_t q,
                                                           LaplacianMode mode,
                                                           std::ostream* log = nullptr);

/// Runs every (rate, method) pair. Trial t at rate index r samples labels
/// with derive_seed(master_seed, r, t), so every method sees the same label
/// sets and the output does not depend on the thread count. Solver
/// failures are excluded and counted; more than 10% failures throw.
std::vector<TrialResult> run_experiment(const ExperimentConfig& config, const PointCloud& cloud,
                                        std::ostream* log = nullptr);
/// Loads config.dataset_path first.
std::vector<TrialResult> run_experiment(const ExperimentConfig& config,
                                        std::ostream* log = nullptr);

/// Labels a dataset once with a multiscale model: returns per-point scores
/// (n x C) given a label set.
ConstrainedSolution solve_model(const MultiscaleModel& model, const LabelSet& labels,
                                SolverKind solver = SolverKind::automatic,
                                const LinearOperator* prepared = nullptr);

}  // namespace hohl
