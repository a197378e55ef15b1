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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "hohl/consistency.hpp"
#include "hohl/harness.hpp"
#include "hohl/hypergraph.hpp"
#include "hohl/io.hpp"
#include "hohl/kernels.hpp"
#include "hohl/solvers.hpp"
#include "hohl/ssl.hpp"

namespace py = pybind11;
using namespace hohl;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

PointCloud to_cloud(const Array& x) {
  if (x.ndim() != 2) throw py::value_error("points must be a 2-d array");
  const auto n = static_cast<std::size_t>(x.shape(0));
  const auto d = static_cast<std::size_t>(x.shape(1));
  return PointCloud(std::vector<double>(x.data(), x.data() + n * d), d);
}

std::vector<double> to_vector(const Array& v) {
  if (v.ndim() != 1) throw py::value_error("expected a 1-d array");
  return std::vector<double>(v.data(), v.data() + v.shape(0));
}

py::array_t<double> to_array(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::array_t<double> to_matrix(const std::vector<double>& v, std::size_t rows, std::size_t cols) {
  py::array_t<double> out({static_cast<py::ssize_t>(rows), static_cast<py::ssize_t>(cols)});
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

// (rows, cols, values) triplets of the full symmetric pattern
py::tuple to_triplets(const SparseSymMatrix& w) {
  std::vector<std::int64_t> rows, cols;
  std::vector<double> vals;
  for (Index i = 0; i < w.size(); ++i) {
    const auto c = w.row_cols(i);
    const auto v = w.row_vals(i);
    for (std::size_t m = 0; m < c.size(); ++m) {
      rows.push_back(static_cast<std::int64_t>(i));
      cols.push_back(c[m]);
      vals.push_back(v[m]);
    }
  }
  return py::make_tuple(py::array_t<std::int64_t>(static_cast<py::ssize_t>(rows.size()), rows.data()),
                        py::array_t<std::int64_t>(static_cast<py::ssize_t>(cols.size()), cols.data()),
                        to_array(vals), w.size());
}

py::dict estimate(const Estimate& e) {
  py::dict d;
  d["value"] = e.value;
  d["std_err"] = e.std_err;
  return d;
}

py::dict result_dict(const TrialResult& r) {
  py::dict d;
  d["experiment"] = r.experiment;
  d["dataset"] = r.dataset;
  d["rate"] = r.rate;
  d["method"] = r.method;
  d["q"] = r.q;
  d["j"] = r.j;
  d["mean_acc"] = r.mean_acc;
  d["std_acc"] = r.std_acc;
  d["trials"] = r.trials;
  d["master_seed"] = r.master_seed;
  d["seconds"] = r.seconds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_hohl, m) {
  m.doc() = "Higher-order hypergraph learning: graphs, kernel constants and solvers.";

  // translators run newest first, so the base class goes first
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

  m.def("set_num_threads", &set_num_threads, py::arg("n"));
  m.def("num_threads", &num_threads);

  m.def(
      "load_dataset",
      [](const std::string& path) {
        const PointCloud c = load_dataset(path);
        return py::make_tuple(to_matrix(c.coords(), c.size(), c.dim()),
                              py::array_t<int>(static_cast<py::ssize_t>(c.labels().size()),
                                               c.labels().data()));
      },
      py::arg("path"), "Points (n x d) and labels (empty without a label column).");

  m.def(
      "kernel_constants",
      [](const std::string& kernel, std::size_t d, std::size_t k, double p, std::size_t mc,
         std::uint64_t seed) {
        const KernelConstants c = sigma_kp_constants(Kernel::from_name(kernel), d, k, p, mc, seed);
        py::dict out;
        out["sigma_eta"] = estimate(c.sigma_eta);
        out["sigma_kp"] = estimate(c.sigma_kp);
        out["sigma_kp1"] = estimate(c.sigma_kp1);
        out["sigma_kp2"] = estimate(c.sigma_kp2);
        out["sigma_k"] = estimate(c.sigma_k);
        out["ratio_kp_kp1"] = estimate(c.ratio_kp_kp1);
        return out;
      },
      py::arg("kernel"), py::arg("d"), py::arg("k"), py::arg("p"),
      py::arg("mc_samples") = 1'000'000, py::arg("seed") = 0);

  m.def(
      "eps_graph",
      [](const Array& x, double eps, const std::string& kernel) {
        return to_triplets(build_eps_graph(to_cloud(x), eps, Kernel::from_name(kernel)));
      },
      py::arg("points"), py::arg("eps"), py::arg("kernel") = "gaussian",
      "Weights as (rows, cols, values, n).");
  m.def(
      "knn_graph",
      [](const Array& x, std::size_t k) { return to_triplets(build_knn_graph(to_cloud(x), k)); },
      py::arg("points"), py::arg("k"));

  m.def(
      "hypergraph_energy",
      [](const Array& u, const Array& x, std::size_t k, double eps, double p,
         const std::string& kernel) {
        return hypergraph_energy(to_vector(u), to_cloud(x), {k, eps, Kernel::from_name(kernel)}, p);
      },
      py::arg("u"), py::arg("points"), py::arg("k"), py::arg("eps"), py::arg("p"),
      py::arg("kernel") = "indicator");
  m.def(
      "kp_laplacian",
      [](const Array& u, const Array& x, std::size_t k, double eps, double p,
         const std::string& kernel) {
        return to_array(
            kp_laplacian_apply(to_vector(u), to_cloud(x), {k, eps, Kernel::from_name(kernel)}, p));
      },
      py::arg("u"), py::arg("points"), py::arg("k"), py::arg("eps"), py::arg("p"),
      py::arg("kernel") = "indicator");

  m.def(
      "expand_scheme",
      [](const std::string& lambda, const std::string& power, std::size_t q,
         std::optional<int> j) {
        return expand_scheme(lambda_scheme_from_string(lambda), power_scheme_from_string(power), q,
                             j);
      },
      py::arg("lambda_scheme"), py::arg("power_scheme"), py::arg("q"), py::arg("j") = py::none());

  m.def(
      "solve",
      [](const Array& x, const std::vector<int>& labels, const std::vector<Index>& labeled,
         const std::vector<double>& scales, const std::vector<double>& lambdas,
         const std::vector<int>& powers, const std::string& kernel) {
        const PointCloud cloud = to_cloud(x);
        if (labels.size() != cloud.size()) throw py::value_error("labels must have one entry per point");
        GraphSpec g;
        g.scales = scales;
        const auto levels = build_levels(cloud, g, Kernel::from_name(kernel), lambdas.size(),
                                         LaplacianMode::raw);
        const MultiscaleModel model = assemble_model(levels, lambdas, powers);
        int classes = 0;
        for (int y : labels) classes = std::max(classes, y + 1);
        std::vector<Index> sorted(labeled);
        std::sort(sorted.begin(), sorted.end());
        const LabelSet set = make_label_set(sorted, labels, classes);
        ConstrainedSolution sol;
        {
          py::gil_scoped_release release;
          sol = solve_model(model, set);
        }
        return to_matrix(sol.values, cloud.size(), static_cast<std::size_t>(classes));
      },
      py::arg("points"), py::arg("labels"), py::arg("labeled"), py::arg("scales"),
      py::arg("lambdas"), py::arg("powers"), py::arg("kernel") = "gaussian",
      "Scores (n x C) of the multiscale model with eps-graph levels.");

  m.def(
      "run_experiment",
      [](const std::string& config_path, std::optional<std::size_t> trials) {
        ExperimentConfig c = load_experiment_config(config_path);
        if (trials) c.trials = *trials;
        std::vector<TrialResult> rows;
        {
          py::gil_scoped_release release;
          rows = run_experiment(c);
        }
        py::list out;
        for (const auto& r : rows) out.append(result_dict(r));
        return out;
      },
      py::arg("config"), py::arg("trials") = py::none());

  m.def(
      "pointwise_consistency",
      [](const std::string& config_path) {
        const ConsistencyConfig c = load_consistency_config(config_path);
        std::vector<ConsistencyRow> rows;
        {
          py::gil_scoped_release release;
          rows = pointwise_consistency_experiment(c);
        }
        py::list out;
        for (const auto& r : rows) {
          py::dict d;
          d["n"] = r.n;
          d["eps"] = r.eps;
          d["median_err"] = r.median_err;
          d["p90_err"] = r.p90_err;
          d["evaluated"] = r.evaluated;
          out.append(d);
        }
        return out;
      },
      py::arg("config"));
}
