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

#include "hohl/io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace hohl {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                             : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool try_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

template <typename T>
bool try_integer(std::string_view s, T& out) {
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

double parse_double(std::string_view s) {
  double v = 0.0;
  if (!try_double(trim(s), v)) throw InvalidArgument("not a number: '" + std::string(s) + "'");
  return v;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

PointCloud parse_dataset_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  bool has_label = false;
  std::vector<double> coords;
  std::vector<int> labels;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (first) {
      first = false;
      bool numeric = true;
      double tmp = 0.0;
      for (auto c : cells) numeric = numeric && try_double(c, tmp);
      columns = cells.size();
      if (!numeric) {
        has_label = cells.back() == "label";
        if (has_label && columns < 2) throw ParseError("header has no feature columns", line_no);
        continue;
      }
    }
    if (cells.size() != columns) {
      throw ParseError("expected " + std::to_string(columns) + " columns, found " +
                           std::to_string(cells.size()),
                       line_no);
    }
    const std::size_t features = has_label ? columns - 1 : columns;
    for (std::size_t c = 0; c < features; ++c) {
      double v = 0.0;
      if (!try_double(cells[c], v) || !std::isfinite(v)) {
        throw ParseError("column " + std::to_string(c + 1) + ": not a finite number '" +
                             std::string(cells[c]) + "'",
                         line_no);
      }
      coords.push_back(v);
    }
    if (has_label) {
      int y = 0;
      if (!try_integer(cells.back(), y) || y < 0) {
        throw ParseError("label must be a non-negative integer, got '" +
                             std::string(cells.back()) + "'",
                         line_no);
      }
      labels.push_back(y);
    }
  }
  if (coords.empty()) throw ParseError("no data rows", line_no);
  const std::size_t d = has_label ? columns - 1 : columns;
  return PointCloud(std::move(coords), d, std::move(labels));
}

PointCloud load_dataset(const std::string& path, const std::string& format) {
  require(format == "csv", "load_dataset: unsupported format '" + format + "'");
  auto in = open_input(path);
  try {
    return parse_dataset_csv(in);
  } catch (const ParseError& e) {
    throw ParseError(e.detail(), e.line(), path);
  }
}

ResultFormat result_format_from_string(const std::string& s) {
  if (s == "csv") return ResultFormat::csv;
  if (s == "json") return ResultFormat::json;
  throw InvalidArgument("unknown result format '" + s + "'");
}

void write_results_csv(std::ostream& out, std::span<const TrialResult> results) {
  out << kResultsHeader << '\n';
  for (const auto& r : results) {
    for (const auto* s : {&r.experiment, &r.dataset, &r.method}) {
      require(s->find_first_of(",\"\n") == std::string::npos,
              "write_results: text fields must not contain commas, quotes or newlines");
    }
    out << r.experiment << ',' << r.dataset << ',' << format_double(r.rate) << ',' << r.method
        << ',' << r.q << ',' << r.j << ',' << format_double(r.mean_acc) << ','
        << format_double(r.std_acc) << ',' << r.trials << ',' << r.master_seed << ','
        << format_double(r.seconds) << '\n';
  }
}

void write_results_json(std::ostream& out, std::span<const TrialResult> results) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : results) {
    arr.push_back({{"experiment", r.experiment},
                   {"dataset", r.dataset},
                   {"rate", r.rate},
                   {"method", r.method},
                   {"q", r.q},
                   {"j", r.j},
                   {"mean_acc", r.mean_acc},
                   {"std_acc", r.std_acc},
                   {"trials", r.trials},
                   {"master_seed", r.master_seed},
                   {"seconds", r.seconds}});
  }
  out << arr.dump(2) << '\n';
}

void write_results(const std::string& path, std::span<const TrialResult> results,
                   ResultFormat format) {
  auto out = open_output(path);
  if (format == ResultFormat::csv) {
    write_results_csv(out, results);
  } else {
    write_results_json(out, results);
  }
  if (!out) throw Error("write failed for '" + path + "'");
}

std::vector<TrialResult> read_results_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || trim(line) != kResultsHeader) {
    throw ParseError("missing or unexpected results header", line_no);
  }
  std::vector<TrialResult> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto c = split(line);
    if (c.size() != 11) throw ParseError("expected 11 columns", line_no);
    TrialResult r;
    r.experiment = std::string(c[0]);
    r.dataset = std::string(c[1]);
    r.method = std::string(c[3]);
    bool ok = try_double(c[2], r.rate) && try_integer(c[4], r.q) && try_integer(c[5], r.j) &&
              try_double(c[6], r.mean_acc) && try_double(c[7], r.std_acc) &&
              try_integer(c[8], r.trials) && try_integer(c[9], r.master_seed) &&
              try_double(c[10], r.seconds);
    if (!ok) throw ParseError("malformed results row", line_no);
    out.push_back(r);
  }
  return out;
}

std::vector<TrialResult> read_results_json(std::istream& in) {
  const nlohmann::json arr = nlohmann::json::parse(in);
  require(arr.is_array(), "results JSON must be an array");
  std::vector<TrialResult> out;
  for (const auto& j : arr) {
    TrialResult r;
    r.experiment = j.at("experiment").get<std::string>();
    r.dataset = j.at("dataset").get<std::string>();
    r.rate = j.at("rate").get<double>();
    r.method = j.at("method").get<std::string>();
    r.q = j.at("q").get<std::size_t>();
    r.j = j.at("j").get<int>();
    r.mean_acc = j.at("mean_acc").get<double>();
    r.std_acc = j.at("std_acc").get<double>();
    r.trials = j.at("trials").get<std::size_t>();
    r.master_seed = j.at("master_seed").get<std::uint64_t>();
    r.seconds = j.at("seconds").get<double>();
    out.push_back(r);
  }
  return out;
}

std::vector<TrialResult> read_results(const std::string& path, ResultFormat format) {
  auto in = open_input(path);
  return format == ResultFormat::csv ? read_results_csv(in) : read_results_json(in);
}

nlohmann::json read_json_file(const std::string& path) {
  auto in = open_input(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(path + ": invalid JSON: " + e.what());
  }
}

namespace {

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> known,
                    const std::string& where) {
  require(j.is_object(), where + " must be a JSON object");
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, value] : j.items()) {
    require(allowed.count(key) == 1, where + ": unknown key '" + key + "'");
  }
}

Kernel parse_kernel(const nlohmann::json& j) {
  if (j.is_string()) return Kernel::from_name(j.get<std::string>());
  reject_unknown(j, {"name", "cutoff"}, "kernel");
  const std::string name = j.at("name").get<std::string>();
  if (j.contains("cutoff")) {
    require(name == "truncated_gaussian" || name == "truncated",
            "kernel: cutoff applies to truncated_gaussian only");
    return Kernel::truncated_gaussian(j.at("cutoff").get<double>());
  }
  return Kernel::from_name(name);
}

LabelBudget parse_rate(const nlohmann::json& j) {
  if (j.is_number()) return LabelBudget::fraction(j.get<double>());
  reject_unknown(j, {"fraction", "per_class"}, "rate");
  if (j.contains("per_class")) {
    const auto m = j.at("per_class").get<std::int64_t>();
    require(m >= 1, "rate: per_class must be >= 1");
    return LabelBudget::per_class(static_cast<std::size_t>(m));
  }
  return LabelBudget::fraction(j.at("fraction").get<double>());
}

SolverKind parse_solver(const std::string& s) {
  if (s == "auto" || s == "automatic") return SolverKind::automatic;
  if (s == "dense") return SolverKind::dense;
  if (s == "cg") return SolverKind::cg;
  throw InvalidArgument("unknown solver '" + s + "'");
}

LaplacianMode parse_laplacian_mode(const std::string& s) {
  if (s == "raw") return LaplacianMode::raw;
  if (s == "normalized") return LaplacianMode::normalized;
  throw InvalidArgument("unknown laplacian_mode '" + s + "'");
}

}  // namespace

ExperimentConfig parse_experiment_config(const nlohmann::json& j,
                                         const std::filesystem::path& base_dir) {
  try {
    reject_unknown(j,
                   {"description", "experiment", "dataset", "graph", "kernel", "q", "schemes",
                    "scheme", "baselines", "rates", "trials", "master_seed", "eval_mode",
                    "laplacian_mode", "sampling", "solver", "record_timing"},
                   "config");
    ExperimentConfig c;
    c.experiment = j.value("experiment", "q");

    const auto& ds = j.at("dataset");
    std::string path;
    if (ds.is_string()) {
      path = ds.get<std::string>();
    } else {
      reject_unknown(ds, {"path", "name", "format"}, "dataset");
      path = ds.at("path").get<std::string>();
      c.dataset_name = ds.value("name", "");
      c.dataset_format = ds.value("format", "csv");
    }
    std::filesystem::path p(path);
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    c.dataset_path = p.lexically_normal().string();
    if (c.dataset_name.empty()) c.dataset_name = std::filesystem::path(path).stem().string();

    const auto& g = j.at("graph");
    reject_unknown(g, {"type", "scales"}, "graph");
    const std::string type = g.value("type", "eps");
    if (type == "eps") {
      c.graph.type = GraphSpec::Type::eps;
    } else if (type == "knn") {
      c.graph.type = GraphSpec::Type::knn;
    } else {
      throw InvalidArgument("graph: unknown type '" + type + "'");
    }
    c.graph.scales = g.at("scales").get<std::vector<double>>();

    if (j.contains("kernel")) c.kernel = parse_kernel(j.at("kernel"));

    std::vector<std::size_t> qs;
    if (!j.contains("q")) {
      qs.push_back(c.graph.scales.size());
    } else if (j.at("q").is_array()) {
      qs = j.at("q").get<std::vector<std::size_t>>();
    } else {
      qs.push_back(j.at("q").get<std::size_t>());
    }

    std::vector<nlohmann::json> schemes;
    if (j.contains("scheme")) schemes.push_back(j.at("scheme"));
    if (j.contains("schemes")) {
      for (const auto& s : j.at("schemes")) schemes.push_back(s);
    }
    for (const auto& s : schemes) {
      reject_unknown(s, {"lambda", "power", "j"}, "scheme");
      const LambdaScheme lam = lambda_scheme_from_string(s.at("lambda").get<std::string>());
      const PowerScheme pow = power_scheme_from_string(s.at("power").get<std::string>());
      std::vector<std::optional<int>> js{std::nullopt};
      if (s.contains("j")) {
        js.clear();
        if (s.at("j").is_array()) {
          for (int v : s.at("j").get<std::vector<int>>()) js.emplace_back(v);
        } else {
          js.emplace_back(s.at("j").get<int>());
        }
      }
      for (std::size_t q : qs) {
        for (const auto& jj : js) c.methods.push_back(scheme_method(lam, pow, q, jj));
      }
    }
    if (j.contains("baselines")) {
      for (const auto& b : j.at("baselines")) {
        c.methods.push_back(baseline_from_string(b.get<std::string>()));
      }
    }

    for (const auto& r : j.at("rates")) c.rates.push_back(parse_rate(r));
    if (j.contains("trials")) {
      const auto t = j.at("trials").get<std::int64_t>();
      require(t >= 1, "config: trials must be >= 1");
      c.trials = static_cast<std::size_t>(t);
    }
    c.master_seed = j.value("master_seed", std::uint64_t{0});
    if (j.contains("eval_mode")) c.eval_mode = eval_mode_from_string(j.at("eval_mode"));
    if (j.contains("laplacian_mode")) {
      c.laplacian_mode = parse_laplacian_mode(j.at("laplacian_mode"));
    }
    if (j.contains("sampling")) c.sampling = sampling_mode_from_string(j.at("sampling"));
    if (j.contains("solver")) c.solver = parse_solver(j.at("solver"));
    c.record_timing = j.value("record_timing", true);
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
}

ExperimentConfig load_experiment_config(const std::string& path) {
  const auto j = read_json_file(path);
  return parse_experiment_config(j, std::filesystem::path(path).parent_path());
}

ConsistencyConfig parse_consistency_config(const nlohmann::json& j) {
  try {
    reject_unknown(j,
                   {"description", "d", "domain", "density", "field", "kernel", "k", "p",
                    "n_list", "eps", "seed", "mc_samples", "max_eval", "repeats", "record_timing"},
                   "consistency config");
    ConsistencyConfig c;
    c.problem.d = j.value("d", std::size_t{2});
    const std::string domain = j.value("domain", "torus");
    if (domain == "torus") {
      c.problem.domain = Domain::torus;
    } else if (domain == "cube") {
      c.problem.domain = Domain::cube;
    } else {
      throw InvalidArgument("consistency config: unknown domain '" + domain + "'");
    }
    c.problem.density = density_from_string(j.value("density", "uniform"));
    c.problem.field = field_from_string(j.value("field", "sine"));
    if (j.contains("kernel")) c.kernel = parse_kernel(j.at("kernel"));
    c.k = j.value("k", std::size_t{1});
    c.p = j.value("p", 2.0);
    if (j.contains("n_list")) c.n_list = j.at("n_list").get<std::vector<std::size_t>>();
    if (j.contains("eps")) {
      const auto& e = j.at("eps");
      reject_unknown(e, {"coefficient", "exponent"}, "eps");
      c.eps.coefficient = e.value("coefficient", 1.0);
      c.eps.exponent = e.value("exponent", -1.0 / 6.0);
    }
    c.seed = j.value("seed", std::uint64_t{0});
    c.mc_samples = j.value("mc_samples", std::size_t{1'000'000});
    c.max_eval = j.value("max_eval", std::size_t{0});
    c.repeats = j.value("repeats", std::size_t{1});
    c.record_timing = j.value("record_timing", true);
    require(c.problem.d >= 1, "consistency config: d must be >= 1");
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("consistency config: ") + e.what());
  }
}

ConsistencyConfig load_consistency_config(const std::string& path) {
  return parse_consistency_config(read_json_file(path));
}

void write_consistency_csv(std::ostream& out, std::span<const ConsistencyRow> rows) {
  out << kConsistencyHeader << '\n';
  for (const auto& r : rows) {
    out << r.n << ',' << format_double(r.eps) << ',' << r.k << ',' << format_double(r.p) << ','
        << format_double(r.median_err) << ',' << format_double(r.p90_err) << ','
        << format_double(r.seconds) << '\n';
  }
}

}  // namespace hohl
