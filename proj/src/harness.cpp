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

#include "hohl/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <tuple>

#include "hohl/io.hpp"

namespace hohl {

std::pair<std::vector<double>, std::vector<int>> expand_scheme(LambdaScheme lambda,
                                                               PowerScheme power, std::size_t q,
                                                               std::optional<int> j) {
  require(q >= 1, "expand_scheme: q must be >= 1");
  std::vector<double> lambdas(q);
  std::vector<int> powers(q);
  if (lambda == LambdaScheme::VQC) {
    require(j.has_value() && *j >= 1, "expand_scheme: VQC needs j >= 1");
    require(q == 2 || q == 3, "expand_scheme: VQC is defined for q = 2 or 3");
    const double jj = *j;
    const double vqc[3] = {1.0, jj * jj, (jj + 1.0) * (jj + 1.0)};
    for (std::size_t l = 0; l < q; ++l) lambdas[l] = vqc[l];
  } else {
    for (std::size_t l = 0; l < q; ++l) {
      const double level = static_cast<double>(l + 1);
      lambdas[l] = lambda == LambdaScheme::CC ? 1.0 : lambda == LambdaScheme::SC ? level
                                                                                 : level * level;
    }
  }
  for (std::size_t l = 0; l < q; ++l) {
    powers[l] = power == PowerScheme::CP ? 1 : static_cast<int>(l + 1);
  }
  return {lambdas, powers};
}

LambdaScheme lambda_scheme_from_string(const std::string& s) {
  if (s == "CC") return LambdaScheme::CC;
  if (s == "SC") return LambdaScheme::SC;
  if (s == "QC") return LambdaScheme::QC;
  if (s == "VQC") return LambdaScheme::VQC;
  throw InvalidArgument("unknown lambda scheme '" + s + "'");
}

PowerScheme power_scheme_from_string(const std::string& s) {
  if (s == "CP") return PowerScheme::CP;
  if (s == "IP") return PowerScheme::IP;
  throw InvalidArgument("unknown power scheme '" + s + "'");
}

std::string to_string(LambdaScheme s) {
  switch (s) {
    case LambdaScheme::CC: return "CC";
    case LambdaScheme::SC: return "SC";
    case LambdaScheme::QC: return "QC";
    case LambdaScheme::VQC: return "VQC";
  }
  return "?";
}

std::string to_string(PowerScheme s) { return s == PowerScheme::CP ? "CP" : "IP"; }

MethodSpec scheme_method(LambdaScheme lambda, PowerScheme power, std::size_t q,
                         std::optional<int> j) {
  MethodSpec m;
  m.tag = to_string(power) + "-" + to_string(lambda);
  m.q = q;
  m.j = lambda == LambdaScheme::VQC ? j.value_or(0) : 0;
  std::tie(m.lambdas, m.powers) = expand_scheme(lambda, power, q, j);
  return m;
}

MethodSpec laplace_method() { return MethodSpec{"Laplace", 1, 0, {1.0}, {1}}; }

MethodSpec fractional_method(int s) {
  require(s >= 1, "FL(s): s must be a positive integer");
  return MethodSpec{"FL(" + std::to_string(s) + ")", 1, 0, {1.0}, {s}};
}

MethodSpec baseline_from_string(const std::string& s) {
  if (s == "Laplace" || s == "laplace") return laplace_method();
  if (s.size() > 4 && (s.rfind("FL(", 0) == 0) && s.back() == ')') {
    const std::string inner = s.substr(3, s.size() - 4);
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(inner, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == inner.size() && used > 0) return fractional_method(v);
  }
  throw InvalidArgument("unknown baseline '" + s + "'");
}

void ExperimentConfig::validate() const {
  require(!graph.scales.empty(), "config: graph.scales is empty");
  for (std::size_t l = 1; l < graph.scales.size(); ++l) {
    require(graph.scales[l] < graph.scales[l - 1], "config: graph scales must strictly decrease");
  }
  for (double s : graph.scales) require(s > 0.0, "config: graph scales must be positive");
  if (graph.type == GraphSpec::Type::knn) {
    for (double s : graph.scales) {
      require(std::floor(s) == s, "config: kNN scales must be integers");
    }
    require(laplacian_mode == LaplacianMode::raw,
            "config: normalized Laplacians need an eps graph");
  }
  require(!methods.empty(), "config: no methods");
  for (const auto& m : methods) {
    require(m.q >= 1 && m.q <= graph.scales.size(),
            "config: method " + m.tag + " needs more scales than provided");
    require(m.lambdas.size() == m.q && m.powers.size() == m.q,
            "config: method " + m.tag + " has inconsistent lambdas/powers");
  }
  require(!rates.empty(), "config: rates is empty");
  require(trials >= 1, "config: trials must be >= 1");
  for (const auto& r : rates) {
    if (r.kind == LabelBudget::Kind::fraction) {
      require(r.value > 0.0 && r.value <= 1.0, "config: rate fractions must be in (0, 1]");
      require(!(r.value == 1.0 && eval_mode == EvalMode::unlabeled_only),
              "config: rate 1.0 leaves no unlabeled points to evaluate");
    }
  }
}

std::vector<std::shared_ptr<const Laplacian>> build_levels(const PointCloud& cloud,
                                                           const GraphSpec& graph,
                                                           const Kernel& kernel, std::size_t q,
                                                           LaplacianMode mode,
                                                           std::ostream* log) {
  require(q >= 1 && q <= graph.scales.size(), "build_levels: q exceeds the number of scales");
  std::vector<std::shared_ptr<const Laplacian>> levels;
  for (std::size_t l = 0; l < q; ++l) {
    const double scale = graph.scales[l];
    SparseSymMatrix w = graph.type == GraphSpec::Type::eps
                            ? build_eps_graph(cloud, scale, kernel)
                            : build_knn_graph(cloud, static_cast<std::size_t>(scale));
    const std::size_t comps = component_count(connected_components(w));
    if (log && comps > 1) {
      *log << "warning: level " << (l + 1) << " (scale " << scale << ") has " << comps
           << " connected components, " << w.edge_count() << " edges\n";
    }
    std::optional<LaplacianScale> s;
    if (mode == LaplacianMode::normalized) {
      const Kernel finite = kernel.compact() ? kernel : Kernel::truncated_gaussian();
      s = LaplacianScale{sigma_eta(finite, cloud.dim()).value, cloud.size(), scale, cloud.dim()};
    }
    levels.push_back(std::make_shared<const Laplacian>(laplacian(w, mode, s)));
  }
  return levels;
}

ConstrainedSolution solve_model(const MultiscaleModel& model, const LabelSet& labels,
                                SolverKind solver, const LinearOperator* prepared) {
  ConstrainedSolveOptions options;
  options.kind = solver;
  const std::vector<double> y = labels.one_hot();
  if (prepared) {
    return solve_constrained_quadratic(*prepared, labels.indices, y,
                                       static_cast<std::size_t>(labels.classes), options);
  }
  const LinearOperator op = model.op();
  return solve_constrained_quadratic(op, labels.indices, y,
                                     static_cast<std::size_t>(labels.classes), options);
}

namespace {

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

/// Dense powers L_l^p, computed on first use and shared across methods.
class PowerCache {
 public:
  explicit PowerCache(const std::vector<std::shared_ptr<const Laplacian>>& levels)
      : levels_(levels) {}

  const Eigen::MatrixXd& get(std::size_t level, int power) {
    const auto key = std::make_pair(level, power);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    if (power == 1) {
      return cache_.emplace(key, dense_matrix(levels_[level]->matrix())).first->second;
    }
    const Eigen::MatrixXd& base = get(level, 1);
    const Eigen::MatrixXd& prev = get(level, power - 1);
    Eigen::MatrixXd next = base * prev;
    next = 0.5 * (next + next.transpose()).eval();
    return cache_.emplace(key, std::move(next)).first->second;
  }

 private:
  const std::vector<std::shared_ptr<const Laplacian>>& levels_;
  std::map<std::pair<std::size_t, int>, Eigen::MatrixXd> cache_;
};

}  // namespace

std::vector<TrialResult> run_experiment(const ExperimentConfig& config, const PointCloud& cloud,
                                        std::ostream* log) {
  config.validate();
  require(cloud.has_labels(), "run_experiment: dataset has no labels");
  std::size_t q_max = 0;
  for (const auto& m : config.methods) q_max = std::max(q_max, m.q);
  const auto levels =
      build_levels(cloud, config.graph, config.kernel, q_max, config.laplacian_mode, log);
  const std::size_t n = cloud.size();
  const int classes = cloud.num_classes();
  const bool direct = config.solver == SolverKind::dense ||
                      (config.solver == SolverKind::automatic && n <= 4000);
  PowerCache powers(levels);

  std::vector<TrialResult> out;
  for (std::size_t r = 0; r < config.rates.size(); ++r) {
    const LabelBudget& budget = config.rates[r];
    std::vector<LabelSet> label_sets(config.trials);
    parallel_for(0, config.trials, [&](std::size_t t) {
      label_sets[t] = sample_labels(cloud.labels(), classes, budget,
                                    derive_seed(config.master_seed, r, t), config.sampling);
    });
    for (const auto& method : config.methods) {
      const auto start = std::chrono::steady_clock::now();
      std::vector<std::shared_ptr<const Laplacian>> used(levels.begin(),
                                                         levels.begin() + static_cast<long>(method.q));
      const MultiscaleModel model = assemble_model(used, method.lambdas, method.powers);
      LinearOperator op;
      if (direct) {
        auto dense = std::make_shared<Eigen::MatrixXd>(Eigen::MatrixXd::Zero(
            static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
        for (std::size_t l = 0; l < method.q; ++l) {
          *dense += method.lambdas[l] * powers.get(l, method.powers[l]);
        }
        op = as_operator(std::shared_ptr<const Eigen::MatrixXd>(std::move(dense)));
      } else {
        op = model.op();
      }
      const SolverKind kind = direct ? SolverKind::dense : SolverKind::cg;

      std::vector<double> acc(config.trials, 0.0);
      std::vector<char> ok(config.trials, 0);
      std::vector<std::string> failure(config.trials);
      parallel_for(0, config.trials, [&](std::size_t t) {
        try {
          const ConstrainedSolution sol = solve_model(model, label_sets[t], kind, &op);
          const std::vector<int> pred =
              predict(sol.values, static_cast<std::size_t>(classes));
          acc[t] = accuracy(pred, cloud.labels(), label_sets[t].indices, config.eval_mode);
          ok[t] = 1;
        } catch (const SolverError& e) {
          failure[t] = e.what();
        }
      });

      TrialResult row;
      row.experiment = config.experiment;
      row.dataset = config.dataset_name;
      row.rate = budget.value;
      row.method = method.tag;
      row.q = method.q;
      row.j = method.j;
      row.master_seed = config.master_seed;
      double sum = 0.0;
      for (std::size_t t = 0; t < config.trials; ++t) {
        if (ok[t]) {
          sum += acc[t];
          ++row.trials;
        } else {
          ++row.failed;
          if (log) *log << "warning: " << method.tag << " trial " << t << ": " << failure[t] << '\n';
        }
      }
      if (10 * row.failed > config.trials) {
        throw SolverError(method.tag + ": " + std::to_string(row.failed) + " of " +
                          std::to_string(config.trials) + " trials failed");
      }
      row.mean_acc = sum / static_cast<double>(row.trials);
      double ss = 0.0;
      for (std::size_t t = 0; t < config.trials; ++t) {
        if (ok[t]) ss += (acc[t] - row.mean_acc) * (acc[t] - row.mean_acc);
      }
      row.std_acc = std::sqrt(ss / static_cast<double>(row.trials));
      row.seconds = config.record_timing ? elapsed(start) : 0.0;
      out.push_back(row);
    }
  }
  return out;
}

std::vector<TrialResult> run_experiment(const ExperimentConfig& config, std::ostream* log) {
  const PointCloud cloud = load_dataset(config.dataset_path);
  return run_experiment(config, cloud, log);
}

}  // namespace hohl
