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

#include "hohl/ssl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hohl {

MultiscaleModel::MultiscaleModel(std::vector<MultiscaleLevel> levels)
    : levels_(std::move(levels)) {
  require(!levels_.empty(), "MultiscaleModel: at least one level is required");
  for (const auto& level : levels_) {
    require(level.laplacian != nullptr, "MultiscaleModel: level without a Laplacian");
    require(level.lambda > 0.0 && std::isfinite(level.lambda),
            "MultiscaleModel: lambda must be positive");
    require(level.power >= 1, "MultiscaleModel: powers must be positive integers");
  }
  n_ = levels_.front().laplacian->size();
  for (const auto& level : levels_) {
    require(level.laplacian->size() == n_, "MultiscaleModel: Laplacian dimensions differ");
  }
}

LinearOperator MultiscaleModel::op() const {
  LinearOperator out;
  out.n = n_;
  out.apply = [levels = levels_, n = n_](std::span<const double> x, std::span<double> y) {
    std::fill(y.begin(), y.end(), 0.0);
    std::vector<double> a(n), b(n);
    for (const auto& level : levels) {
      std::copy(x.begin(), x.end(), a.begin());
      for (int s = 0; s < level.power; ++s) {
        level.laplacian->apply(a, b);
        a.swap(b);
      }
      for (std::size_t i = 0; i < n; ++i) y[i] += level.lambda * a[i];
    }
  };
  return out;
}

Eigen::MatrixXd dense_matrix(const SparseSymMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto cols = m.row_cols(i);
    const auto vals = m.row_vals(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(cols[k])) = vals[k];
    }
  }
  return a;
}

Eigen::MatrixXd dense_power(const Laplacian& laplacian, int p) {
  require(p >= 1, "dense_power: power must be a positive integer");
  const Eigen::MatrixXd l = dense_matrix(laplacian.matrix());
  Eigen::MatrixXd out = l;
  for (int s = 1; s < p; ++s) out = (l * out).eval();
  return 0.5 * (out + out.transpose());
}

Eigen::MatrixXd MultiscaleModel::dense() const {
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& level : levels_) a += level.lambda * dense_power(*level.laplacian, level.power);
  return a;
}

LinearOperator MultiscaleModel::dense_op() const {
  return as_operator(std::make_shared<const Eigen::MatrixXd>(dense()));
}

MultiscaleModel assemble_model(std::span<const std::shared_ptr<const Laplacian>> laplacians,
                               std::span<const double> lambdas, std::span<const int> powers) {
  require(!laplacians.empty(), "assemble_model: need at least one level");
  require(laplacians.size() == lambdas.size() && lambdas.size() == powers.size(),
          "assemble_model: laplacians, lambdas and powers must have equal length");
  std::vector<MultiscaleLevel> levels;
  for (std::size_t l = 0; l < laplacians.size(); ++l) {
    levels.push_back({lambdas[l], powers[l], laplacians[l]});
  }
  return MultiscaleModel(std::move(levels));
}

std::vector<double> LabelSet::one_hot() const {
  std::vector<double> y(indices.size() * static_cast<std::size_t>(classes), 0.0);
  for (std::size_t m = 0; m < indices.size(); ++m) {
    y[m * static_cast<std::size_t>(classes) + static_cast<std::size_t>(labels[m])] = 1.0;
  }
  return y;
}

LabelSet make_label_set(std::vector<Index> indices, std::span<const int> all_labels,
                        int classes) {
  require(classes >= 1, "make_label_set: classes must be positive");
  std::sort(indices.begin(), indices.end());
  require(std::adjacent_find(indices.begin(), indices.end()) == indices.end(),
          "make_label_set: duplicate indices");
  LabelSet set;
  set.classes = classes;
  for (Index i : indices) {
    require(i < all_labels.size(), "make_label_set: index out of range");
    require(all_labels[i] >= 0 && all_labels[i] < classes, "make_label_set: label out of range");
    set.labels.push_back(all_labels[i]);
  }
  set.indices = std::move(indices);
  return set;
}

std::vector<int> predict(std::span<const double> scores, std::size_t classes) {
  require(classes >= 1 && scores.size() % classes == 0,
          "predict: score matrix shape does not match the class count");
  const std::size_t n = scores.size() / classes;
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = 0;
    for (std::size_t c = 0; c < classes; ++c) {
      const double v = scores[i * classes + c];
      require(std::isfinite(v), "predict: non-finite score");
      if (v > scores[i * classes + best]) best = c;
    }
    out[i] = static_cast<int>(best);
  }
  return out;
}

double accuracy(std::span<const int> pred, std::span<const int> truth,
                std::span<const Index> labeled, EvalMode mode) {
  require(pred.size() == truth.size(), "accuracy: prediction and truth lengths differ");
  std::vector<char> skip(pred.size(), 0);
  if (mode == EvalMode::unlabeled_only) {
    for (Index i : labeled) {
      require(i < pred.size(), "accuracy: labeled index out of range");
      skip[i] = 1;
    }
  }
  std::size_t total = 0, right = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (skip[i]) continue;
    ++total;
    if (pred[i] == truth[i]) ++right;
  }
  if (total == 0) throw InvalidArgument("accuracy: evaluation set is empty");
  return 100.0 * static_cast<double>(right) / static_cast<double>(total);
}

namespace {

/// First `count` entries of a seeded partial Fisher-Yates shuffle.
std::vector<Index> choose(std::vector<Index> pool, std::size_t count, Rng& rng) {
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t j = k + static_cast<std::size_t>(rng.below(pool.size() - k));
    std::swap(pool[k], pool[j]);
  }
  pool.resize(count);
  return pool;
}

}  // namespace

LabelSet sample_labels(std::span<const int> labels, int classes, const LabelBudget& budget,
                       std::uint64_t seed, SamplingMode mode) {
  require(classes >= 2, "sample_labels: need at least two classes");
  const std::size_t n = labels.size();
  std::vector<std::vector<Index>> by_class(static_cast<std::size_t>(classes));
  for (std::size_t i = 0; i < n; ++i) {
    require(labels[i] >= 0 && labels[i] < classes, "sample_labels: label out of range");
    by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  for (const auto& members : by_class) {
    require(!members.empty(), "sample_labels: a class has no points");
  }
  Rng rng(seed);
  std::vector<Index> chosen;

  if (budget.kind == LabelBudget::Kind::per_class) {
    require(budget.value >= 1.0 && std::floor(budget.value) == budget.value,
            "sample_labels: per-class count must be a positive integer");
    const auto count = static_cast<std::size_t>(budget.value);
    for (const auto& members : by_class) {
      require(count <= members.size(), "sample_labels: per-class count exceeds class size");
      const auto pick = choose(members, count, rng);
      chosen.insert(chosen.end(), pick.begin(), pick.end());
    }
    return make_label_set(std::move(chosen), labels, classes);
  }

  const double rate = budget.value;
  require(rate > 0.0 && rate <= 1.0, "sample_labels: fraction must be in (0, 1]");
  if (mode == SamplingMode::stratified) {
    for (const auto& members : by_class) {
      const auto want = static_cast<std::size_t>(
          std::llround(rate * static_cast<double>(members.size())));
      const std::size_t count = std::clamp<std::size_t>(want, 1, members.size());
      const auto pick = choose(members, count, rng);
      chosen.insert(chosen.end(), pick.begin(), pick.end());
    }
    return make_label_set(std::move(chosen), labels, classes);
  }

  const auto total = static_cast<std::size_t>(std::llround(rate * static_cast<double>(n)));
  require(total >= static_cast<std::size_t>(classes),
          "sample_labels: label budget is below the class count");
  std::vector<Index> all(n);
  std::iota(all.begin(), all.end(), Index{0});
  chosen = choose(all, total, rng);
  std::vector<std::size_t> count(static_cast<std::size_t>(classes), 0);
  for (Index i : chosen) ++count[static_cast<std::size_t>(labels[i])];
  for (int c = 0; c < classes; ++c) {
    if (count[static_cast<std::size_t>(c)] > 0) continue;
    const auto& members = by_class[static_cast<std::size_t>(c)];
    const Index add = members[rng.below(members.size())];
    std::vector<std::size_t> donors;
    for (std::size_t m = 0; m < chosen.size(); ++m) {
      if (count[static_cast<std::size_t>(labels[chosen[m]])] > 1) donors.push_back(m);
    }
    const std::size_t slot = donors[rng.below(donors.size())];
    --count[static_cast<std::size_t>(labels[chosen[slot]])];
    chosen[slot] = add;
    ++count[static_cast<std::size_t>(c)];
  }
  return make_label_set(std::move(chosen), labels, classes);
}

std::string to_string(EvalMode mode) {
  return mode == EvalMode::all ? "all" : "unlabeled_only";
}

std::string to_string(SamplingMode mode) {
  return mode == SamplingMode::uniform ? "uniform" : "stratified";
}

EvalMode eval_mode_from_string(const std::string& s) {
  if (s == "unlabeled_only" || s == "unlabeled") return EvalMode::unlabeled_only;
  if (s == "all") return EvalMode::all;
  throw InvalidArgument("unknown eval_mode '" + s + "'");
}

SamplingMode sampling_mode_from_string(const std::string& s) {
  if (s == "stratified") return SamplingMode::stratified;
  if (s == "uniform") return SamplingMode::uniform;
  throw InvalidArgument("unknown sampling mode '" + s + "'");
}

}  // namespace hohl
