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

#include <doctest.h>

#include <memory>
#include <set>

#include "hohl/harness.hpp"
#include "hohl/ssl.hpp"
#include "support.hpp"

using namespace hohl;
using hohl::testing::line_cloud;
using hohl::testing::rel_diff;

namespace {

std::shared_ptr<const Laplacian> toy_path() {
  const PointCloud c = line_cloud({0.0, 0.5, 1.2});
  return std::make_shared<const Laplacian>(laplacian(build_eps_graph(c, 1.0, Kernel::indicator())));
}

// two well separated blobs per class on a line, plus the graph levels
struct Blobs {
  PointCloud cloud;
  std::vector<std::shared_ptr<const Laplacian>> levels;
};

Blobs make_blobs(Rng& rng, std::size_t per_class, int classes) {
  std::vector<double> coords;
  std::vector<int> labels;
  for (int c = 0; c < classes; ++c) {
    for (std::size_t m = 0; m < per_class; ++m) {
      coords.push_back(3.0 * c + rng.uniform());
      coords.push_back(rng.uniform());
      labels.push_back(c);
    }
  }
  Blobs b{PointCloud(std::move(coords), 2, std::move(labels)), {}};
  for (double eps : {1.0, 0.5, 0.25}) {
    b.levels.push_back(std::make_shared<const Laplacian>(
        laplacian(build_eps_graph(b.cloud, eps, Kernel::gaussian()))));
  }
  return b;
}

}  // namespace

TEST_CASE("assembled models") {
  const auto l = toy_path();
  const std::vector<std::shared_ptr<const Laplacian>> one{l};
  const std::vector<double> lam1{1.0};
  const std::vector<int> pow1{1};
  const MultiscaleModel single = assemble_model(one, lam1, pow1);
  Rng rng(1);
  for (int probe = 0; probe < 5; ++probe) {
    const auto v = hohl::testing::random_vector(rng, 3);
    CHECK(single.op()(v) == l->apply(v));
  }

  const std::vector<std::shared_ptr<const Laplacian>> two{l, l};
  const std::vector<double> lam{1.0, 1.0};
  const std::vector<int> pows{1, 2};
  const MultiscaleModel m = assemble_model(two, lam, pows);
  const std::vector<double> e0{1.0, 0.0, 0.0};
  CHECK(m.op()(e0) == std::vector<double>{3.0, -4.0, 1.0});
  CHECK(m.dense_op()(e0) == std::vector<double>{3.0, -4.0, 1.0});

  const std::vector<double> lam2{2.0, 2.0};
  const MultiscaleModel doubled = assemble_model(two, lam2, pows);
  CHECK(doubled.op()(e0) == std::vector<double>{6.0, -8.0, 2.0});

  const std::vector<double> bad_lambda{1.0, 0.0};
  CHECK_THROWS_AS(assemble_model(two, bad_lambda, pows), InvalidArgument);
  const std::vector<int> bad_power{1, 0};
  CHECK_THROWS_AS(assemble_model(two, lam, bad_power), InvalidArgument);
  CHECK_THROWS_AS(assemble_model(two, lam1, pow1), InvalidArgument);
  const PointCloud four = line_cloud({0.0, 0.5, 1.0, 1.5});
  const std::vector<std::shared_ptr<const Laplacian>> mixed{
      l, std::make_shared<const Laplacian>(laplacian(build_eps_graph(four, 1.0, Kernel::indicator())))};
  CHECK_THROWS_AS(assemble_model(mixed, lam, pows), InvalidArgument);
}

TEST_CASE("dense and matrix-free models agree") {
  Rng rng(2);
  const Blobs b = make_blobs(rng, 20, 2);
  const std::vector<double> lam{1.0, 4.0, 9.0};
  const std::vector<int> pows{1, 2, 3};
  const MultiscaleModel m = assemble_model(b.levels, lam, pows);
  const LinearOperator a = m.op(), d = m.dense_op();
  for (int probe = 0; probe < 5; ++probe) {
    const auto v = hohl::testing::random_vector(rng, 40);
    CHECK(rel_diff(a(v), d(v)) <= 1e-11);
  }
}

TEST_CASE("predict") {
  CHECK(predict(std::vector<double>{0.2, 0.7, 0.1}, 3) == std::vector<int>{1});
  CHECK(predict(std::vector<double>{0.5, 0.5}, 2) == std::vector<int>{0});
  CHECK(predict(std::vector<double>{0.1, 0.9, 0.6, 0.4}, 2) == std::vector<int>{1, 0});
  CHECK_THROWS_AS(predict(std::vector<double>{0.2, 0.7, 0.1}, 2), InvalidArgument);
}

TEST_CASE("accuracy") {
  const std::vector<int> truth{0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 1, 1};
  const std::vector<Index> labeled{0, 1};
  CHECK(accuracy(truth, truth, labeled) == 100.0);
  std::vector<int> wrong(truth);
  for (std::size_t i = 2; i < wrong.size(); ++i) wrong[i] = 1 - wrong[i];
  CHECK(accuracy(wrong, truth, labeled) == 0.0);
  std::vector<int> half(truth);
  for (std::size_t i = 2; i < 7; ++i) half[i] = 1 - half[i];
  CHECK(accuracy(half, truth, labeled) == 50.0);
  CHECK(accuracy(half, truth, labeled, EvalMode::all) == doctest::Approx(700.0 / 12.0));
  std::vector<Index> everything(12);
  for (Index i = 0; i < 12; ++i) everything[i] = i;
  CHECK_THROWS_AS(accuracy(truth, truth, everything), InvalidArgument);
  CHECK(eval_mode_from_string(to_string(EvalMode::all)) == EvalMode::all);
  CHECK(eval_mode_from_string("unlabeled_only") == EvalMode::unlabeled_only);
}

TEST_CASE("label sampling") {
  std::vector<int> labels;
  for (int i = 0; i < 90; ++i) labels.push_back(i % 3);
  const LabelSet one = sample_labels(labels, 3, LabelBudget::per_class(1), 5);
  CHECK(one.indices.size() == 3);
  CHECK(std::set<int>(one.labels.begin(), one.labels.end()).size() == 3);

  const LabelSet all = sample_labels(labels, 3, LabelBudget::fraction(1.0), 5);
  CHECK(all.indices.size() == 90);

  for (SamplingMode mode : {SamplingMode::stratified, SamplingMode::uniform}) {
    const LabelSet a = sample_labels(labels, 3, LabelBudget::fraction(0.2), 9, mode);
    const LabelSet b = sample_labels(labels, 3, LabelBudget::fraction(0.2), 9, mode);
    CHECK(a.indices == b.indices);
    CHECK(a.indices.size() == 18);
    CHECK(std::is_sorted(a.indices.begin(), a.indices.end()));
    CHECK(std::set<int>(a.labels.begin(), a.labels.end()).size() == 3);
    const LabelSet c = sample_labels(labels, 3, LabelBudget::fraction(0.2), 10, mode);
    CHECK(a.indices != c.indices);
  }
  CHECK_THROWS_AS(sample_labels(labels, 3, LabelBudget::fraction(0.01), 1, SamplingMode::uniform),
                  InvalidArgument);
  CHECK_THROWS_AS(sample_labels(labels, 3, LabelBudget::per_class(31), 1), InvalidArgument);
  CHECK_THROWS_AS(sample_labels(labels, 3, LabelBudget::fraction(0.0), 1), InvalidArgument);
}

TEST_CASE("property: uniform sampling always covers every class") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    // one large class and two tiny ones make repairs frequent
    std::vector<int> labels(60, 0);
    labels[rng.below(60)] = 1;
    Index j = rng.below(60);
    while (labels[j] != 0) j = rng.below(60);
    labels[j] = 2;
    const LabelSet s = sample_labels(labels, 3, LabelBudget::fraction(0.05), trial,
                                     SamplingMode::uniform);
    REQUIRE(s.indices.size() == 3);
    REQUIRE(std::set<int>(s.labels.begin(), s.labels.end()).size() == 3);
    REQUIRE(std::adjacent_find(s.indices.begin(), s.indices.end()) == s.indices.end());
  }
}

TEST_CASE("one-hot encoding") {
  const std::vector<int> all{2, 0, 1, 2};
  const LabelSet s = make_label_set({3, 1}, all, 3);
  CHECK(s.indices == std::vector<Index>{1, 3});
  CHECK(s.one_hot() == std::vector<double>{1, 0, 0, 0, 0, 1});
  CHECK_THROWS_AS(make_label_set({1, 1}, all, 3), InvalidArgument);
}

TEST_CASE("property: solver invariances") {
  Rng rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const Blobs b = make_blobs(rng, 25, 3);
    const auto& truth = b.cloud.labels();
    const LabelSet labels = sample_labels(truth, 3, LabelBudget::per_class(2), trial);
    const std::vector<double> lam{1.0, 4.0, 9.0};
    const std::vector<int> pows{1, 2, 3};
    const MultiscaleModel m = assemble_model(b.levels, lam, pows);
    const auto base = solve_model(m, labels);
    const auto pred = predict(base.values, 3);

    // constraint exactness
    const auto onehot = labels.one_hot();
    for (std::size_t r = 0; r < labels.indices.size(); ++r) {
      for (std::size_t c = 0; c < 3; ++c) {
        REQUIRE(base.values[labels.indices[r] * 3 + c] == onehot[r * 3 + c]);
      }
      REQUIRE(pred[labels.indices[r]] == labels.labels[r]);
    }

    // uniform rescaling of lambda
    const std::vector<double> scaled{7.0, 28.0, 63.0};
    const auto s = solve_model(assemble_model(b.levels, scaled, pows), labels);
    CHECK(predict(s.values, 3) == pred);
    CHECK(rel_diff(s.values, base.values) <= 1e-8);

    // class permutation 0 -> 2 -> 1 -> 0
    const int perm[3] = {2, 0, 1};
    std::vector<int> permuted(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) permuted[i] = perm[truth[i]];
    const LabelSet pl = make_label_set(labels.indices, permuted, 3);
    const auto pp = predict(solve_model(m, pl).values, 3);
    for (std::size_t i = 0; i < pred.size(); ++i) REQUIRE(pp[i] == perm[pred[i]]);
  }
}
