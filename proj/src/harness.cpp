/*
 * Copyright 2026 The gofbayes Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "gofbayes/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "gofbayes/statistics.hpp"

namespace gofbayes {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Splits on commas at parenthesis depth zero, so "a(1,2), b" -> {a(1,2), b}.
std::vector<std::string> split_top_level(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  const std::string last = trim(cur);
  if (!last.empty()) out.push_back(last);
  return out;
}

double parse_double(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + s + "'");
  }
}

std::uint64_t parse_count(const std::string& s, const std::string& key) {
  const double v = parse_double(s, key);
  if (v < 0.0 || v != std::floor(v) || v > 9e18) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + s +
                      "'");
  }
  return static_cast<std::uint64_t>(v);
}

std::pair<double, double> parse_param_pair(const std::string& s,
                                           const std::string& key) {
  const std::string t = trim(s);
  if (t.size() < 5 || t.front() != '(' || t.back() != ')') {
    throw ConfigError(key + ": expected (a,b), got '" + s + "'");
  }
  const auto parts = split_top_level(t.substr(1, t.size() - 2));
  if (parts.size() != 2) {
    throw ConfigError(key + ": expected two values in '" + s + "'");
  }
  return {parse_double(parts[0], key), parse_double(parts[1], key)};
}

MethodSpec parse_method_spec(const std::string& text, ModelFamily model) {
  MethodSpec spec;
  std::string name = trim(text);
  std::string args;
  const auto open = name.find('(');
  if (open != std::string::npos) {
    if (name.back() != ')') {
      throw ConfigError("methods: unbalanced parentheses in '" + text + "'");
    }
    args = name.substr(open + 1, name.size() - open - 2);
    name = trim(name.substr(0, open));
  }
  try {
    spec.method = method_from_string(name);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("methods: ") + e.what());
  }
  for (const auto& kv : split_top_level(args)) {
    if (kv.empty()) continue;
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("methods: expected key=value, got '" + kv + "'");
    }
    const std::string key = trim(kv.substr(0, eq));
    const std::string value = trim(kv.substr(eq + 1));
    if (key == "N") {
      spec.n_replicates = parse_count(value, "methods.N");
    } else if (key == "mode") {
      if (value == "approx") {
        spec.mode = BayesMode::approximate();
      } else if (value == "exact") {
        spec.mode = BayesMode::exact(spec.mode.inner_n);
      } else {
        throw ConfigError("methods.mode: expected approx or exact, got '" +
                          value + "'");
      }
    } else if (key == "inner_N") {
      const auto inner = parse_count(value, "methods.inner_N");
      spec.mode.inner_n = inner;
      if (spec.mode.kind == BayesMode::Kind::kExact && inner < 1) {
        throw ConfigError("methods.inner_N: must be >= 1");
      }
    } else if (key == "n_outer") {
      spec.n_outer = parse_count(value, "methods.n_outer");
    } else if (key == "theta0") {
      const auto [a, b] = parse_param_pair(value, "methods.theta0");
      try {
        if (model == ModelFamily::kGamma) {
          spec.theta0 = ModelParams(GammaParams(a, b));
        } else {
          spec.theta0 = ModelParams(GpdParams(a, b));
        }
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("methods.theta0: ") + e.what());
      }
    } else if (key == "sd_gamma") {
      spec.mh.sd_gamma = parse_double(value, "methods.sd_gamma");
    } else if (key == "sd_log_sigma") {
      spec.mh.sd_log_sigma = parse_double(value, "methods.sd_log_sigma");
    } else if (key == "burn_in") {
      spec.mh.burn_in = parse_count(value, "methods.burn_in");
    } else if (key == "thin") {
      spec.mh.thin = parse_count(value, "methods.thin");
    } else {
      throw ConfigError("methods: unknown key '" + key + "'");
    }
  }
  return spec;
}

std::string format_method_spec(const MethodSpec& spec) {
  std::ostringstream os;
  os << to_string(spec.method) << "(N=" << spec.n_replicates;
  switch (spec.method) {
    case Method::kBayes:
      os << ", mode="
         << (spec.mode.kind == BayesMode::Kind::kExact ? "exact" : "approx");
      if (spec.mode.kind == BayesMode::Kind::kExact) {
        os << ", inner_N=" << spec.mode.inner_n;
      }
      break;
    case Method::kPpp:
      os << ", n_outer=" << spec.n_outer;
      break;
    case Method::kExact:
      if (spec.theta0.has_value()) {
        char buf[80];
        if (const auto* g = std::get_if<GammaParams>(&*spec.theta0)) {
          std::snprintf(buf, sizeof(buf), ", theta0=(%.10g,%.10g)", g->alpha,
                        g->lambda);
        } else {
          const auto& p = std::get<GpdParams>(*spec.theta0);
          std::snprintf(buf, sizeof(buf), ", theta0=(%.10g,%.10g)", p.gamma,
                        p.sigma);
        }
        os << buf;
      }
      break;
    default:
      break;
  }
  if (spec.method == Method::kPpp || spec.method == Method::kBayes) {
    char buf[120];
    std::snprintf(buf, sizeof(buf),
                  ", sd_gamma=%.10g, sd_log_sigma=%.10g, burn_in=%zu, thin=%zu",
                  spec.mh.sd_gamma, spec.mh.sd_log_sigma, spec.mh.burn_in,
                  spec.mh.thin);
    os << buf;
  }
  os << ")";
  return os.str();
}

TestRecord run_one_method(const ExperimentConfig& cfg, const MethodSpec& spec,
                          std::span<const double> sample, Rng& rng) {
  try {
    TestResult r{};
    switch (spec.method) {
      case Method::kExact:
        r = exact_test(sample, *spec.theta0, cfg.model, spec.n_replicates,
                       rng);
        break;
      case Method::kPlugin:
        r = plugin_naive_test(sample, cfg.model, spec.n_replicates, rng);
        break;
      case Method::kParBoot:
        r = parametric_bootstrap_test(sample, cfg.model, spec.n_replicates,
                                      rng);
        break;
      case Method::kPpp:
        r = ppp_test(sample, cfg.model, spec.n_outer, spec.n_replicates, rng,
                     spec.mh);
        break;
      case Method::kBayes:
        r = bayes_predictive_test(sample, cfg.model, spec.n_replicates,
                                  spec.mode, rng, spec.mh);
        break;
    }
    return {r.p_value, r.observed_stat, r.n_failed};
  } catch (const TestFailure&) {
    return {std::nullopt, std::nullopt, 0};
  }
}

std::vector<MethodSummary> compute_summaries(const ExperimentResult& result) {
  std::vector<MethodSummary> out;
  for (std::size_t m = 0; m < result.method_names.size(); ++m) {
    const auto ps = result.p_values(m);
    MethodSummary s;
    s.method = result.method_names[m];
    for (const auto& p : ps) {
      if (!p.has_value()) ++s.n_missing;
    }
    const bool any = s.n_missing < ps.size();
    for (double level : result.config.levels) {
      s.rejection_rates.push_back(any ? rejection_rate(ps, level) : kNaN);
    }
    if (ps.size() - s.n_missing >= 10) {
      s.ks_from_uniform = uniformity_check(ps).ks_distance;
    } else {
      s.ks_from_uniform = kNaN;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string result_base(const std::string& path) {
  if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") {
    return path.substr(0, path.size() - 4);
  }
  return path;
}

std::string format_cell(const std::optional<double>& v, const char* fmt) {
  if (!v.has_value()) return "NA";
  char buf[48];
  std::snprintf(buf, sizeof(buf), fmt, *v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  cells.push_back(trim(cur));
  return cells;
}

std::optional<double> parse_cell(const std::string& cell,
                                 const std::string& context) {
  if (cell == "NA") return std::nullopt;
  try {
    std::size_t pos = 0;
    const double v = std::stod(cell, &pos);
    if (pos != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(context + ": non-numeric cell '" + cell + "'");
  }
}

}  // namespace

std::vector<std::optional<double>> ExperimentResult::p_values(
    std::size_t method_index) const {
  std::vector<std::optional<double>> out;
  out.reserve(records.size());
  for (const auto& rep : records) out.push_back(rep[method_index].p_value);
  return out;
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.repetitions < 1) throw ConfigError("repetitions: must be >= 1");
  if (cfg.sample_size < 2) throw ConfigError("sample_size: must be >= 2");
  if (cfg.levels.empty()) throw ConfigError("levels: must not be empty");
  for (double l : cfg.levels) {
    if (!(l > 0.0) || !(l < 1.0)) {
      throw ConfigError("levels: must lie strictly in (0,1)");
    }
  }
  if (cfg.methods.empty()) throw ConfigError("methods: must not be empty");
  for (const auto& spec : cfg.methods) {
    if (spec.n_replicates < 1) throw ConfigError("methods.N: must be >= 1");
    if (spec.method == Method::kPpp && spec.n_outer < 1) {
      throw ConfigError("methods.n_outer: must be >= 1");
    }
    if (spec.method == Method::kExact) {
      if (!spec.theta0.has_value()) {
        throw ConfigError("methods.theta0: required for the exact method");
      }
      const bool match =
          (cfg.model == ModelFamily::kGamma)
              ? std::holds_alternative<GammaParams>(*spec.theta0)
              : std::holds_alternative<GpdParams>(*spec.theta0);
      if (!match) {
        throw ConfigError("methods.theta0: parameter type does not match model");
      }
    }
    if (!(spec.mh.sd_gamma > 0.0) || !(spec.mh.sd_log_sigma > 0.0) ||
        spec.mh.thin < 1) {
      throw ConfigError("methods: invalid MH settings");
    }
  }
  if (cfg.output_path.empty()) throw ConfigError("output_path: must not be empty");
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int workers) {
  validate_config(cfg);
  const auto t0 = std::chrono::steady_clock::now();

  ExperimentResult result;
  result.config = cfg;
  for (const auto& spec : cfg.methods) {
    result.method_names.emplace_back(to_string(spec.method));
  }
  result.records.assign(cfg.repetitions,
                        std::vector<TestRecord>(cfg.methods.size()));

  parallel_for(cfg.repetitions, workers, [&](std::size_t rep) {
    Rng sample_rng(derive_stream_key(cfg.seed, rep, 0));
    const auto sample = alt_sample(cfg.sampling, cfg.sample_size, sample_rng);
    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
      Rng method_rng(derive_stream_key(cfg.seed, rep, m + 1));
      result.records[rep][m] =
          run_one_method(cfg, cfg.methods[m], sample, method_rng);
    }
  });

  result.summaries = compute_summaries(result);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return result;
}

double rejection_rate(std::span<const std::optional<double>> p_values,
                      double level) {
  if (!(level > 0.0) || !(level < 1.0)) {
    throw ConfigError("level: must lie strictly in (0,1)");
  }
  std::size_t reject = 0;
  std::size_t present = 0;
  for (const auto& p : p_values) {
    if (!p.has_value()) continue;
    ++present;
    if (*p <= level) ++reject;
  }
  if (present == 0) {
    throw ConfigError("rejection_rate: all p-values are missing");
  }
  return static_cast<double>(reject) / static_cast<double>(present);
}

std::vector<std::pair<double, double>> coverage_curve(
    std::span<const std::optional<double>> p_values,
    std::span<const double> grid) {
  if (grid.empty()) throw ConfigError("grid: must not be empty");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid[i] < grid[i + 1])) {
      throw ConfigError("grid: must be strictly increasing");
    }
  }
  std::vector<double> present;
  for (const auto& p : p_values) {
    if (p.has_value()) present.push_back(*p);
  }
  if (present.empty()) {
    throw ConfigError("coverage_curve: all p-values are missing");
  }
  std::sort(present.begin(), present.end());
  std::vector<std::pair<double, double>> out;
  out.reserve(grid.size());
  const double n = static_cast<double>(present.size());
  for (double level : grid) {
    const auto it =
        std::upper_bound(present.begin(), present.end(), level);
    out.emplace_back(level,
                     static_cast<double>(it - present.begin()) / n);
  }
  return out;
}

UniformityCheck uniformity_check(
    std::span<const std::optional<double>> p_values) {
  std::vector<double> present;
  for (const auto& p : p_values) {
    if (p.has_value()) present.push_back(*p);
  }
  if (present.size() < 10) {
    throw std::domain_error("uniformity_check: need at least 10 p-values");
  }
  const double d = ks_distance(present);
  const double critical = 1.628 / std::sqrt(static_cast<double>(present.size()));
  return {d, d < critical};
}

std::vector<std::size_t> p_value_histogram(
    std::span<const std::optional<double>> p_values, std::size_t bins) {
  if (bins < 1) throw ConfigError("bins: must be >= 1");
  std::vector<std::size_t> counts(bins, 0);
  for (const auto& p : p_values) {
    if (!p.has_value()) continue;
    const auto b = std::min<std::size_t>(
        static_cast<std::size_t>(*p * static_cast<double>(bins)), bins - 1);
    ++counts[b];
  }
  return counts;
}

void write_result(const ExperimentResult& result, const std::string& path) {
  const std::string base = result_base(path);
  {
    std::ofstream out(base + ".csv");
    if (!out) throw ConfigError("cannot write '" + base + ".csv'");
    out << "rep,method,p_value,observed_stat,n_failed\n";
    for (std::size_t rep = 0; rep < result.records.size(); ++rep) {
      for (std::size_t m = 0; m < result.method_names.size(); ++m) {
        const auto& rec = result.records[rep][m];
        out << rep << ',' << result.method_names[m] << ','
            << format_cell(rec.p_value, "%.6f") << ','
            << format_cell(rec.observed_stat, "%.9g") << ',' << rec.n_failed
            << '\n';
      }
    }
  }
  {
    std::ofstream out(base + ".summary.csv");
    if (!out) throw ConfigError("cannot write '" + base + ".summary.csv'");
    out << "method,level,rejection_rate,ks_distance,n_missing\n";
    for (const auto& s : result.summaries) {
      for (std::size_t li = 0; li < result.config.levels.size(); ++li) {
        const double rate = s.rejection_rates[li];
        out << s.method << ',' << format_cell(result.config.levels[li], "%.6g")
            << ','
            << (std::isnan(rate) ? "NA" : format_cell(rate, "%.6f")) << ','
            << (std::isnan(s.ks_from_uniform)
                    ? "NA"
                    : format_cell(s.ks_from_uniform, "%.6f"))
            << ',' << s.n_missing << '\n';
      }
    }
  }
  {
    std::ofstream out(base + ".config.txt");
    if (!out) throw ConfigError("cannot write '" + base + ".config.txt'");
    out << config_echo(result.config);
  }
}

ExperimentResult read_result(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  ExperimentResult result;

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw ConfigError(path + ": empty file");
  }
  ++line_no;
  if (trim(line) != "rep,method,p_value,observed_stat,n_failed") {
    throw ConfigError(path + ":1: unexpected header '" + trim(line) + "'");
  }

  std::vector<std::vector<TestRecord>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string context = path + ":" + std::to_string(line_no);
    const auto cells = split_csv_line(line);
    if (cells.size() != 5) {
      throw ConfigError(context + ": expected 5 cells, got " +
                        std::to_string(cells.size()));
    }
    const auto rep_v = parse_cell(cells[0], context);
    if (!rep_v.has_value() || *rep_v < 0 || *rep_v != std::floor(*rep_v)) {
      throw ConfigError(context + ": bad repetition index '" + cells[0] + "'");
    }
    const auto rep = static_cast<std::size_t>(*rep_v);
    const std::string& method = cells[1];
    TestRecord rec;
    rec.p_value = parse_cell(cells[2], context);
    rec.observed_stat = parse_cell(cells[3], context);
    const auto failed = parse_cell(cells[4], context);
    if (!failed.has_value() || *failed < 0) {
      throw ConfigError(context + ": bad n_failed '" + cells[4] + "'");
    }
    rec.n_failed = static_cast<std::size_t>(*failed);

    if (rep >= rows.size()) rows.resize(rep + 1);
    if (rep == 0) {
      result.method_names.push_back(method);
    } else {
      const std::size_t m = rows[rep].size();
      if (m >= result.method_names.size() ||
          result.method_names[m] != method) {
        throw ConfigError(context + ": method order differs from first rep");
      }
    }
    rows[rep].push_back(rec);
  }
  if (rows.empty()) throw ConfigError(path + ": no data rows");
  for (std::size_t rep = 0; rep < rows.size(); ++rep) {
    if (rows[rep].size() != result.method_names.size()) {
      throw ConfigError(path + ": repetition " + std::to_string(rep) +
                        " has an incomplete method set");
    }
  }
  result.records = std::move(rows);

  // Restore the config echo when the sibling file exists.
  const std::string echo_path = result_base(path) + ".config.txt";
  if (std::ifstream echo(echo_path); echo) {
    std::ostringstream buf;
    buf << echo.rdbuf();
    result.config = parse_config_text(buf.str());
  } else {
    result.config.repetitions = result.records.size();
  }
  result.summaries = compute_summaries(result);
  return result;
}

std::string config_echo(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "model = " << to_string(cfg.model) << "\n";
  os << "sampling = " << sampling_name(cfg.sampling) << "\n";
  os << "sample_size = " << cfg.sample_size << "\n";
  os << "repetitions = " << cfg.repetitions << "\n";
  os << "seed = " << cfg.seed << "\n";
  os << "levels = ";
  for (std::size_t i = 0; i < cfg.levels.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", cfg.levels[i]);
    os << (i == 0 ? "" : ", ") << buf;
  }
  os << "\n";
  os << "output_path = " << cfg.output_path << "\n";
  os << "methods = ";
  for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
    os << (i == 0 ? "" : ", ") << format_method_spec(cfg.methods[i]);
  }
  os << "\n";
  return os.str();
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  cfg.methods.clear();
  std::istringstream in(text);
  std::string line;
  std::string methods_value;
  bool saw_methods = false;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "model") {
      try {
        cfg.model = family_from_string(value);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("model: ") + e.what());
      }
    } else if (key == "sampling") {
      try {
        cfg.sampling = parse_sampling(value);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("sampling: ") + e.what());
      }
    } else if (key == "sample_size") {
      cfg.sample_size = parse_count(value, "sample_size");
    } else if (key == "repetitions") {
      cfg.repetitions = parse_count(value, "repetitions");
    } else if (key == "seed") {
      cfg.seed = parse_count(value, "seed");
    } else if (key == "levels") {
      cfg.levels.clear();
      for (const auto& tok : split_top_level(value)) {
        cfg.levels.push_back(parse_double(tok, "levels"));
      }
    } else if (key == "output_path") {
      cfg.output_path = value;
    } else if (key == "methods") {
      methods_value = value;
      saw_methods = true;
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  if (saw_methods) {
    for (const auto& tok : split_top_level(methods_value)) {
      cfg.methods.push_back(parse_method_spec(tok, cfg.model));
    }
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  std::size_t n_workers;
  if (workers <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    n_workers = hw == 0 ? 1 : hw;
  } else {
    n_workers = static_cast<std::size_t>(workers);
  }
  n_workers = std::min(n_workers, count);
  if (n_workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (std::size_t w = 0; w < n_workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace gofbayes
