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

#include "hohl/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>

#include "hohl/common.hpp"
#include "hohl/consistency.hpp"
#include "hohl/graph.hpp"
#include "hohl/harness.hpp"
#include "hohl/io.hpp"
#include "hohl/kernels.hpp"
#include "hohl/ssl.hpp"

namespace hohl::cli {

namespace {

nlohmann::json estimate_json(const Estimate& e) {
  return {{"value", e.value}, {"std_err", e.std_err}};
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  return f;
}

struct ConstantsArgs {
  std::string kernel = "indicator";
  std::size_t d = 1;
  std::size_t k = 1;
  double p = 2.0;
  std::size_t mc = 1'000'000;
  std::uint64_t seed = 0;
};

int cmd_constants(const ConstantsArgs& a, std::ostream& out) {
  const Kernel kernel = Kernel::from_name(a.kernel);
  const KernelConstants c = sigma_kp_constants(kernel, a.d, a.k, a.p, a.mc, a.seed);
  nlohmann::json j = {{"kernel", kernel.name()},
                      {"d", c.d},
                      {"k", c.k},
                      {"p", c.p},
                      {"mc_samples", c.mc_samples},
                      {"seed", a.seed},
                      {"sigma_eta", estimate_json(c.sigma_eta)},
                      {"sigma_kp", estimate_json(c.sigma_kp)},
                      {"sigma_kp1", estimate_json(c.sigma_kp1)},
                      {"sigma_kp2", estimate_json(c.sigma_kp2)},
                      {"sigma_k", estimate_json(c.sigma_k)},
                      {"ratio_kp_kp1", estimate_json(c.ratio_kp_kp1)}};
  if (a.k >= 2) {
    const RatioBounds b = gamma_ratio_bounds(kernel, a.d, a.k, a.p);
    j["ratio_bounds"] = {{"lower", b.ratio_lower}, {"upper", b.ratio_upper}};
  }
  out << j.dump(2) << '\n';
  return kExitOk;
}

struct GraphArgs {
  std::string dataset;
  std::string out;
  double eps = 0.0;
  std::size_t knn = 0;
  std::string kernel = "gaussian";
  bool laplacian = false;
};

int cmd_graph(const GraphArgs& a, std::ostream& out) {
  const PointCloud cloud = load_dataset(a.dataset);
  require((a.eps > 0.0) != (a.knn > 0), "graph: give exactly one of --eps and --knn");
  const SparseSymMatrix w = a.knn > 0 ? build_knn_graph(cloud, a.knn)
                                      : build_eps_graph(cloud, a.eps, Kernel::from_name(a.kernel));
  auto f = open_out(a.out);
  if (a.laplacian) {
    laplacian(w).matrix().write(f);
  } else {
    w.write(f);
  }
  const auto comps = connected_components(w);
  out << "n=" << w.size() << " edges=" << w.edge_count()
      << " components=" << component_count(comps) << '\n';
  return kExitOk;
}

struct SolveArgs {
  std::string dataset;
  std::string config;
  std::string out;
};

// The model config uses the bench schema without the dataset; the first
// method and the first rate are used, and labels are those of trial 0.
int cmd_solve(const SolveArgs& a, std::ostream& out) {
  nlohmann::json j = read_json_file(a.config);
  require(!j.contains("dataset"), "solve: the dataset comes from --dataset, not the config");
  j["dataset"] = std::filesystem::absolute(a.dataset).string();
  const ExperimentConfig config = parse_experiment_config(j);
  const PointCloud cloud = load_dataset(config.dataset_path, config.dataset_format);
  require(cloud.has_labels(), "solve: the dataset needs a label column");
  const MethodSpec& method = config.methods.front();

  const auto levels =
      build_levels(cloud, config.graph, config.kernel, method.q, config.laplacian_mode);
  const MultiscaleModel model = assemble_model(levels, method.lambdas, method.powers);
  const int classes = static_cast<int>(cloud.num_classes());
  const LabelSet labels = sample_labels(cloud.labels(), classes, config.rates.front(),
                                        derive_seed(config.master_seed, 0, 0), config.sampling);
  const ConstrainedSolution sol = solve_model(model, labels, config.solver);
  const auto pred = predict(sol.values, sol.classes);

  std::vector<char> is_labeled(cloud.size(), 0);
  for (Index i : labels.indices) is_labeled[i] = 1;
  auto f = open_out(a.out);
  f << "index,label,predicted,labeled\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    f << i << ',' << cloud.labels()[i] << ',' << pred[i] << ',' << int(is_labeled[i]) << '\n';
  }
  const double acc = accuracy(pred, cloud.labels(), labels.indices, config.eval_mode);
  out << method.tag << " labeled=" << labels.indices.size() << " accuracy=" << format_double(acc)
      << '\n';
  return kExitOk;
}

struct BenchArgs {
  std::string config;
  std::string out;
  std::size_t trials = 0;
  std::string format = "csv";
  bool quiet = false;
};

int cmd_bench(const BenchArgs& a, std::ostream& err) {
  ExperimentConfig config = load_experiment_config(a.config);
  if (a.trials > 0) config.trials = a.trials;
  const ResultFormat format = result_format_from_string(a.format);
  const auto results = run_experiment(config, a.quiet ? nullptr : &err);
  write_results(a.out, results, format);
  return kExitOk;
}

struct ConsistencyArgs {
  std::string config;
  std::string out;
  std::string check = "pointwise";
};

int cmd_consistency(const ConsistencyArgs& a) {
  const ConsistencyConfig config = load_consistency_config(a.config);
  auto f = open_out(a.out);
  if (a.check == "pointwise") {
    const auto rows = pointwise_consistency_experiment(config);
    write_consistency_csv(f, rows);
  } else {
    const auto rows = limiting_energy_check(config);
    f << "n,eps,discrete,limit,rel_gap\n";
    for (const auto& r : rows) {
      f << r.n << ',' << format_double(r.eps) << ',' << format_double(r.discrete) << ','
        << format_double(r.limit) << ',' << format_double(r.rel_gap) << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Higher-order hypergraph learning and consistency experiments", "hohl"};
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: HOHL_THREADS or 1)")
      ->check(CLI::PositiveNumber);

  ConstantsArgs ca;
  auto* constants = app.add_subcommand("constants", "Kernel constants as JSON");
  constants->add_option("--kernel", ca.kernel, "indicator, gaussian or truncated_gaussian")
      ->capture_default_str();
  constants->add_option("--d", ca.d, "Dimension")->capture_default_str()->check(CLI::PositiveNumber);
  constants->add_option("--k", ca.k, "Hyperedge order")->capture_default_str()->check(CLI::PositiveNumber);
  constants->add_option("--p", ca.p, "Exponent")->capture_default_str();
  constants->add_option("--mc", ca.mc, "Monte-Carlo samples")->capture_default_str();
  constants->add_option("--seed", ca.seed, "Seed")->capture_default_str();

  GraphArgs ga;
  auto* graph = app.add_subcommand("graph", "Build a weight graph and write it as a triplet list");
  graph->add_option("--dataset", ga.dataset, "Dataset CSV")->required();
  graph->add_option("--out", ga.out, "Output file")->required();
  auto* eps_opt = graph->add_option("--eps", ga.eps, "Radius of the eps-graph");
  auto* knn_opt = graph->add_option("--knn", ga.knn, "Neighbour count of the self-tuning kNN graph");
  eps_opt->excludes(knn_opt);
  graph->add_option("--kernel", ga.kernel, "Kernel of the eps-graph")->capture_default_str();
  graph->add_flag("--laplacian", ga.laplacian, "Write the raw Laplacian instead of the weights");

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "One semi-supervised solve");
  solve->add_option("--dataset", sa.dataset, "Dataset CSV with labels")->required();
  solve->add_option("--config", sa.config, "Model JSON")->required();
  solve->add_option("--out", sa.out, "Predicted labels CSV")->required();

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Run a benchmark experiment");
  bench->add_option("--config", ba.config, "Experiment JSON")->required();
  bench->add_option("--out", ba.out, "Results file")->required();
  bench->add_option("--trials", ba.trials, "Override the trial count")->check(CLI::PositiveNumber);
  bench->add_option("--format", ba.format, "csv or json")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv", "json"}));
  bench->add_flag("--quiet", ba.quiet, "No progress output");

  ConsistencyArgs sc;
  auto* consistency = app.add_subcommand("consistency", "Discrete-to-continuum checks");
  consistency->add_option("--config", sc.config, "Consistency JSON")->required();
  consistency->add_option("--out", sc.out, "Output CSV")->required();
  consistency->add_option("--check", sc.check, "pointwise or energy")
      ->capture_default_str()
      ->check(CLI::IsMember({"pointwise", "energy"}));

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  const std::size_t saved_threads = num_threads();
  if (threads > 0) set_num_threads(threads);
  int code = kExitOk;
  try {
    if (constants->parsed()) {
      code = cmd_constants(ca, out);
    } else if (graph->parsed()) {
      code = cmd_graph(ga, out);
    } else if (solve->parsed()) {
      code = cmd_solve(sa, out);
    } else if (bench->parsed()) {
      code = cmd_bench(ba, err);
    } else {
      code = cmd_consistency(sc);
    }
  } catch (const std::exception& e) {
    err << "hohl: error: " << e.what() << '\n';
    code = kExitRuntime;
  }
  set_num_threads(saved_threads);
  return code;
}

}  // namespace hohl::cli
