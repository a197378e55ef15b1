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

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hohl/graph.hpp"
#include "hohl/solvers.hpp"

namespace hohl {

struct MultiscaleLevel {
  double lambda = 1.0;
  int power = 1;
  std::shared_ptr<const Laplacian> laplacian;
};

/// Quadratic form v^T [sum_l lambda_l L_l^(p_l)] v.
class MultiscaleModel {
 public:
  MultiscaleModel() = default;
  explicit MultiscaleModel(std::vector<MultiscaleLevel> levels);

  const std::vector<MultiscaleLevel>& levels() const { return levels_; }
  std::size_t q() const { return levels_.size(); }
  std::size_t size() const { return n_; }

  /// Matrix-free operator.
  LinearOperator op() const;
  /// The same operator assembled densely (GEMM for the powers).
  Eigen::MatrixXd dense() const;
  /// Matrix-free operator with the dense matrix attached.
  LinearOperator dense_op() const;

 private:
  std::vector<MultiscaleLevel> levels_;
  std::size_t n_ = 0;
};

MultiscaleModel assemble_model(std::span<const std::shared_ptr<const Laplacian>> laplacians,
                               std::span<const double> lambdas, std::span<const int> powers);

/// Dense L^p, with p >= 1.
Eigen::MatrixXd dense_power(const Laplacian& laplacian, int p);
Eigen::MatrixXd dense_matrix(const SparseSymMatrix& m);

struct LabelSet {
  std::vector<Index> indices;  // sorted, distinct
  std::vector<int> labels;     // class of each index
  int classes = 0;

  /// |indices| x classes, row-major.
  std::vector<double> one_hot() const;
};

LabelSet make_label_set(std::vector<Index> indices, std::span<const int> all_labels, int classes);

/// Argmax per row of an n x C row-major matrix; ties go to the lowest class.
std::vector<int> predict(std::span<const double> scores, std::size_t classes);

enum class EvalMode { unlabeled_only, all };

/// Percentage of pred == truth over the evaluated rows.
double accuracy(std::span<const int> pred, std::span<const int> truth,
                std::span<const Index> labeled, EvalMode mode = EvalMode::unlabeled_only);

/// How many points to label: a fraction of the data or a count per class.
struct LabelBudget {
  enum class Kind { fraction, per_class };
  Kind kind = Kind::fraction;
  double value = 0.1;

  static LabelBudget fraction(double f) { return {Kind::fraction, f}; }
  static LabelBudget per_class(std::size_t count) {
    return {Kind::per_class, static_cast<double>(count)};
  }
};

/// stratified: each class c gets max(1, round(rate n_c)) labels.
/// uniform: round(rate n) labels uniformly without replacement, then
/// repaired so that every class appears.
enum class SamplingMode { stratified, uniform };

LabelSet sample_labels(std::span<const int> labels, int classes, const LabelBudget& budget,
                       std::uint64_t seed, SamplingMode mode = SamplingMode::stratified);

std::string to_string(EvalMode mode);
std::string to_string(SamplingMode mode);
EvalMode eval_mode_from_string(const std::string& s);
SamplingMode sampling_mode_from_string(const std::string& s);

}  // namespace hohl
