// Copyright 2026 The genbound Authors
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

#ifndef GENBOUND_CLI_HPP
#define GENBOUND_CLI_HPP

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "genbound/bounds.hpp"
#include "genbound/errors.hpp"
#include "genbound/format.hpp"
#include "genbound/oracle.hpp"
#include "genbound/parallel.hpp"
#include "genbound/sgld.hpp"

namespace genbound {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvariantFailed = 1,
  kExitConfig = 2,
  kExitOverflow = 3,
  kExitDivergence = 4,
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat key = value text with [section] headers. '#' starts a comment. Every
// key must be read by the command, so typos surface as config errors.
class ConfigFile {
 public:
  static ConfigFile parse(std::istream& is, const std::string& origin = "config") {
    ConfigFile cfg;
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const auto text = trim(line);
      if (text.empty()) continue;
      auto where = [&] { return origin + ":" + std::to_string(lineno) + ": "; };
      if (text.front() == '[') {
        if (text.back() != ']' || text.size() < 3) throw ConfigError(where() + "malformed section header");
        section = std::string(trim(text.substr(1, text.size() - 2)));
        continue;
      }
      const auto eq = text.find('=');
      if (eq == std::string_view::npos) throw ConfigError(where() + "expected key = value");
      const std::string key(trim(text.substr(0, eq)));
      if (key.empty()) throw ConfigError(where() + "empty key");
      const std::string full = section.empty() ? key : section + "." + key;
      if (!cfg.values_.emplace(full, std::string(trim(text.substr(eq + 1)))).second)
        throw ConfigError(where() + "duplicate key '" + full + "'");
    }
    return cfg;
  }

  static ConfigFile load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse(in, path);
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  const std::string& raw(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing key '" + key + "'");
    used_.insert(key);
    return it->second;
  }

  std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt) const {
    if (!has(key) && fallback) return *fallback;
    return raw(key);
  }

  double real(const std::string& key, std::optional<double> fallback = std::nullopt) const {
    if (!has(key) && fallback) return *fallback;
    const auto v = parse_double(raw(key));
    if (!v) throw ConfigError("key '" + key + "' is not a number");
    return *v;
  }

  std::uint64_t u64(const std::string& key, std::optional<std::uint64_t> fallback = std::nullopt) const {
    if (!has(key) && fallback) return *fallback;
    const auto v = parse_u64(raw(key));
    if (!v) throw ConfigError("key '" + key + "' is not a non-negative integer");
    return *v;
  }

  std::size_t count(const std::string& key, std::optional<std::size_t> fallback = std::nullopt) const {
    return static_cast<std::size_t>(u64(key, fallback ? std::optional<std::uint64_t>(*fallback) : std::nullopt));
  }

  std::vector<double> reals(const std::string& key) const { return split_reals(key, raw(key)); }

  // Rows separated by ';', entries by whitespace or ','.
  std::vector<std::vector<double>> matrix(const std::string& key) const {
    std::vector<std::vector<double>> rows;
    std::string_view rest = raw(key);
    while (true) {
      const auto semi = rest.find(';');
      rows.push_back(split_reals(key, rest.substr(0, semi)));
      if (semi == std::string_view::npos) break;
      rest.remove_prefix(semi + 1);
    }
    return rows;
  }

  void reject_unused() const {
    for (const auto& [key, value] : values_)
      if (!used_.count(key)) throw ConfigError("unknown key '" + key + "'");
  }

 private:
  static std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
  }

  static std::vector<double> split_reals(const std::string& key, std::string_view s) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
      const auto start = s.find_first_not_of(" \t,", pos);
      if (start == std::string_view::npos) break;
      auto end = s.find_first_of(" \t,", start);
      if (end == std::string_view::npos) end = s.size();
      const auto v = parse_double(s.substr(start, end - start));
      if (!v) throw ConfigError("key '" + key + "' has a non-numeric entry");
      out.push_back(*v);
      pos = end;
    }
    if (out.empty()) throw ConfigError("key '" + key + "' is empty");
    return out;
  }

  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

// ---------------------------------------------------------------------------
// oracle

inline DiscreteProblem load_discrete_problem(const ConfigFile& cfg) {
  DiscreteProblem p;
  p.z_pmf = cfg.reals("problem.z_pmf");
  p.n = cfg.count("problem.n");
  p.a = cfg.real("problem.a", 0.0);
  p.b = cfg.real("problem.b", 1.0);
  p.loss_table = cfg.matrix("problem.loss");
  p.w_count = p.loss_table.size();
  const auto kernel = cfg.text("problem.kernel");
  if (kernel == "gibbs") {
    const double beta = cfg.real("problem.beta");
    if (!(beta >= 0.0)) throw ConfigError("beta must be non-negative");
    validate_pmf(p.z_pmf);
    if (p.n < 1) throw ConfigError("problem needs n >= 1");
    for (const auto& row : p.loss_table)
      if (row.size() != p.z_pmf.size()) throw ConfigError("loss row needs one entry per sample value");
    // Guard before building the kernel, whose size is |Z|^n rows.
    detail::checked_states(p.z_pmf.size(), p.n, p.w_count);
    p.algo_kernel = gibbs_kernel(p.loss_table, p.z_pmf.size(), p.n, beta);
  } else if (kernel == "table") {
    p.algo_kernel = cfg.matrix("problem.kernel_table");
  } else {
    throw ConfigError("problem.kernel must be 'gibbs' or 'table'");
  }
  p.validate();
  return p;
}

inline bool write_oracle_report(std::ostream& os, const OracleSummary& s) {
  const auto inv = check_invariants(s);
  bool all = true;
  for (const auto& r : inv) all = all && r.passed;
  os << "# genbound-oracle-report v1\n";
  os << "expected_gen = " << format_double(s.gap.gen) << '\n';
  os << "expected_emp_gen = " << format_double(s.gap.emp_gen) << '\n';
  os << "prop1 = " << format_double(s.prop1) << '\n';
  os << "prop3 = " << format_double(s.prop3) << '\n';
  auto per_m = [&os](const char* name, const std::vector<double>& v) {
    for (std::size_t k = 0; k < v.size(); ++k)
      os << name << "_m" << (k + 1) << " = " << format_double(v[k]) << '\n';
  };
  per_m("prop2", s.prop2);
  per_m("prop4", s.prop4);
  per_m("prop4_mi_form", s.prop4_mi_form);
  per_m("negrea25", s.negrea25);
  per_m("prop5", s.prop5);
  auto chain = [&os](const char* name, const std::vector<double>& v) {
    os << name << " =";
    for (double x : v) os << ' ' << format_double(x);
    os << '\n';
  };
  chain("chain_randomized", s.chain_randomized);
  chain("chain_standard", s.chain_standard);
  for (const auto& r : inv)
    os << "invariant " << r.name << ' ' << (r.passed ? "PASS" : "FAIL") << " slack=" << format_double(r.slack)
       << '\n';
  os << "overall = " << (all ? "PASS" : "FAIL") << '\n';
  return all;
}

// ---------------------------------------------------------------------------
// sgld

struct SgldExperiment {
  SgldProblem problem;
  SgldConfig sgld;
  EstimatorSettings settings;
};

inline SgldExperiment load_sgld_experiment(const ConfigFile& cfg) {
  SgldExperiment ex;
  const auto kind = cfg.text("problem.kind");
  const std::size_t n = cfg.count("problem.n");
  const std::size_t population = cfg.count("problem.population", 100000);
  const std::uint64_t population_seed = cfg.u64("problem.population_seed", 0);
  const double spread = cfg.real("problem.spread", 1.0);
  if (n < 1) throw ConfigError("problem.n must be >= 1");
  if (!(spread > 0.0)) throw ConfigError("problem.spread must be positive");
  if (kind == "classification") {
    const double radius = cfg.real("problem.radius");
    if (!(radius > 0.0)) throw ConfigError("problem.radius must be positive");
    ex.problem = classification_problem(n, cfg.reals("problem.center"), spread, radius, population, population_seed);
  } else if (kind == "mean_estimation") {
    const double width = cfg.real("problem.width", 1.0);
    ex.problem = mean_estimation_problem(n, cfg.reals("problem.center"), spread, width, population, population_seed);
  } else {
    throw ConfigError("problem.kind must be 'classification' or 'mean_estimation'");
  }
  ex.sgld.dim = cfg.reals("problem.center").size();

  ex.sgld.t_max = cfg.count("sgld.t_max");
  ex.sgld.batch_size = cfg.count("sgld.batch_size");
  ex.sgld.theta0_scale = cfg.real("sgld.theta0_scale", 1.0);
  const double eta0 = cfg.real("sgld.eta0");
  const double sigma0 = cfg.real("sgld.sigma0");
  const std::size_t every = cfg.count("sgld.eta_decay_every", 0);
  if (!(eta0 >= 0.0)) throw ConfigError("sgld.eta0 must be non-negative");
  if (!(sigma0 > 0.0)) throw ConfigError("sgld.sigma0 must be positive");
  ex.sgld.eta = every == 0 ? constant_schedule(eta0) : step_decay_schedule(eta0, every);
  ex.sgld.sigma = constant_schedule(sigma0);

  ex.settings.n_outer = cfg.count("estimator.n_outer", 64);
  ex.settings.n_inner = cfg.count("estimator.n_inner", 8);
  ex.settings.seed = cfg.u64("estimator.seed", 0);
  ex.settings.gap_every = cfg.count("estimator.gap_every", 20);
  const auto pi = cfg.text("estimator.pi_source", std::string("likelihood"));
  if (pi == "likelihood")
    ex.settings.pi_source = PiSource::kLikelihoodRatio;
  else if (pi == "oracle")
    ex.settings.pi_source = PiSource::kOracleBits;
  else
    throw ConfigError("estimator.pi_source must be 'likelihood' or 'oracle'");
  return ex;
}

inline void write_iteration_csv(std::ostream& os, const BoundSuite& suite, const EstimatorSettings& s) {
  os << "# genbound-csv v1 kind=iterations seed=" << s.seed << " n_outer=" << s.n_outer
     << " n_inner=" << s.n_inner << " n_outer_used=" << suite.n_outer_used << '\n';
  os << "t,eta,sigma,mean_f,mean_g,mean_min,mean_sq_pi_error,bound_f,bound_g,bound_min,bound_lipschitz,"
        "bound_negrea31,gen_gap_estimate,gen_gap_stderr\n";
  for (const auto& r : suite.rows) {
    os << r.t;
    for (double v : {r.eta, r.sigma, r.mean_f, r.mean_g, r.mean_min, r.mean_sq_pi_error, r.bound_f, r.bound_g,
                     r.bound_min, r.bound_lipschitz, r.bound_negrea31, r.gen_gap, r.gen_gap_stderr})
      os << ',' << format_double(v);
    os << '\n';
  }
}

inline void write_summary_csv(std::ostream& os, const BoundSuite& suite) {
  os << "# genbound-csv v1 kind=bounds trajectories=" << suite.n_trajectories << " diverged=" << suite.n_diverged
     << " emp_gen_gap=" << format_double(suite.emp_gen_gap.value)
     << " emp_gen_gap_stderr=" << format_double(suite.emp_gen_gap.stderr) << '\n';
  os << "bound,value,stderr,n_outer,n_inner,seed,gen_gap,gen_gap_stderr\n";
  for (const auto& r : suite.reports)
    os << r.name << ',' << format_double(r.value) << ',' << format_double(r.stderr) << ',' << r.n_outer << ','
       << r.n_inner << ',' << r.seed << ',' << format_double(r.gen_gap) << ',' << format_double(r.gen_gap_stderr)
       << '\n';
}

// "run.csv" -> "run.summary.csv"
inline std::string summary_path(const std::string& out) {
  const auto slash = out.find_last_of('/');
  const auto dot = out.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return out + ".summary.csv";
  return out.substr(0, dot) + ".summary" + out.substr(dot);
}

inline bool divergence_exceeded(const BoundSuite& suite) {
  return suite.n_diverged * 10 > suite.n_trajectories;
}

// ---------------------------------------------------------------------------
// crossover

struct CrossoverSettings {
  double pi = 0.5;
  int u = 1;
  double c_min = 0.0;
  double c_max = 6.0;
  std::size_t steps = 601;
};

inline CrossoverSettings load_crossover(const ConfigFile& cfg) {
  CrossoverSettings s;
  s.pi = cfg.real("crossover.pi", 0.5);
  const auto u = cfg.u64("crossover.u", 1);
  if (u > 1) throw ConfigError("crossover.u must be 0 or 1");
  s.u = static_cast<int>(u);
  s.c_min = cfg.real("crossover.c_min", 0.0);
  s.c_max = cfg.real("crossover.c_max", 6.0);
  s.steps = cfg.count("crossover.steps", 601);
  if (!(s.pi >= 0.0 && s.pi <= 1.0)) throw ConfigError("crossover.pi must be in [0, 1]");
  return s;
}

inline void write_crossover_csv(std::ostream& os, const CrossoverSettings& s) {
  const auto root = crossover_root(s.pi, s.u);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  os << "# genbound-csv v1 kind=crossover pi=" << format_double(s.pi) << " u=" << s.u
     << " root_c=" << format_double(root.value_or(nan))
     << " root_r=" << format_double(root ? std::sqrt(2.0 * *root) : nan) << '\n';
  os << "c,r,f,g,f_minus_g\n";
  for (const auto& p : crossover_scan(s.pi, s.u, s.c_min, s.c_max, s.steps))
    os << format_double(p.c) << ',' << format_double(p.r) << ',' << format_double(p.f) << ','
       << format_double(p.g) << ',' << format_double(p.f - p.g) << '\n';
}

// ---------------------------------------------------------------------------
// entry point

struct CliOptions {
  std::string command;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
};

inline std::size_t resolve_workers(const std::optional<std::size_t>& flag) {
  if (flag) {
    if (*flag < 1) throw ConfigError("--workers must be >= 1");
    return *flag;
  }
  if (const char* env = std::getenv("GENBOUND_WORKERS"); env && *env) {
    const auto v = parse_u64(env);
    if (!v || *v < 1) throw ConfigError("GENBOUND_WORKERS must be a positive integer");
    return static_cast<std::size_t>(*v);
  }
  return default_workers();
}

class OutputFile {
 public:
  // Empty path means the provided fallback stream.
  OutputFile(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (path.empty()) return;
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw ConfigError("cannot open output file '" + path + "'");
    os_ = &file_;
  }
  std::ostream& stream() { return *os_; }
  void close() {
    os_->flush();
    if (file_.is_open()) {
      file_.close();
      if (file_.fail()) throw std::runtime_error("write failed");
    }
  }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

inline int cmd_oracle(const ConfigFile& cfg, const CliOptions& opt, std::ostream& out, std::ostream& err) {
  const auto problem = load_discrete_problem(cfg);
  cfg.reject_unused();
  const auto summary = summarize(problem);
  OutputFile file(opt.out, out);
  const bool ok = write_oracle_report(file.stream(), summary);
  file.close();
  if (!ok) err << "genbound: oracle invariant failed\n";
  return ok ? kExitOk : kExitInvariantFailed;
}

// Writes the per-iteration CSV to --out and the bound summary next to it.
inline int cmd_sgld(const ConfigFile& cfg, const CliOptions& opt, std::ostream& out, std::ostream& err) {
  auto ex = load_sgld_experiment(cfg);
  cfg.reject_unused();
  if (opt.seed) ex.settings.seed = *opt.seed;
  ex.settings.workers = resolve_workers(opt.workers);
  const auto suite = run_bound_suite(ex.problem, ex.sgld, ex.settings);
  {
    OutputFile file(opt.out, out);
    write_iteration_csv(file.stream(), suite, ex.settings);
    file.close();
  }
  {
    OutputFile file(opt.out.empty() ? std::string() : summary_path(opt.out), out);
    write_summary_csv(file.stream(), suite);
    file.close();
  }
  if (divergence_exceeded(suite)) {
    err << "genbound: " << suite.n_diverged << " of " << suite.n_trajectories << " trajectories diverged\n";
    return kExitDivergence;
  }
  return kExitOk;
}

inline int cmd_crossover(const ConfigFile& cfg, const CliOptions& opt, std::ostream& out, std::ostream&) {
  const auto s = load_crossover(cfg);
  cfg.reject_unused();
  OutputFile file(opt.out, out);
  write_crossover_csv(file.stream(), s);
  file.close();
  return kExitOk;
}

inline int run_command(const CliOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const auto cfg = ConfigFile::load(opt.config);
    resolve_workers(opt.workers);
    if (opt.command == "oracle") return cmd_oracle(cfg, opt, out, err);
    if (opt.command == "sgld") return cmd_sgld(cfg, opt, out, err);
    if (opt.command == "crossover") return cmd_crossover(cfg, opt, out, err);
    err << "genbound: unknown command '" << opt.command << "'\n";
    return kExitConfig;
  } catch (const EnumerationOverflow& e) {
    err << "genbound: " << e.what() << '\n';
    return kExitOverflow;
  } catch (const ConfigError& e) {
    err << "genbound: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const UsageError& e) {
    err << "genbound: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DistributionError& e) {
    err << "genbound: config error: " << e.what() << '\n';
    return kExitConfig;
  }
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Information-theoretic generalization bounds: exact oracle and SGLD estimates", "genbound"};
  app.require_subcommand(1);
  CliOptions opt;
  std::uint64_t seed = 0;
  std::size_t workers = 0;
  const std::pair<const char*, const char*> commands[] = {
      {"oracle", "Exact bounds and invariants for a finite problem"},
      {"sgld", "Monte Carlo SGLD bounds and generalization gap (CSV)"},
      {"crossover", "Scan of the two per-step divergence bounds and their crossing (CSV)"},
  };
  for (const auto& [name, description] : commands) {
    auto* sub = app.add_subcommand(name, description);
    sub->add_option("--config", opt.config, "Config file")->required();
    sub->add_option("--out", opt.out, "Output path (default: stdout)");
    sub->add_option("--seed", seed, "Master seed, overrides the config");
    sub->add_option("--workers", workers, "Worker threads (default: $GENBOUND_WORKERS or all cores)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "genbound: " << e.what() << '\n';
    return kExitConfig;
  }
  for (auto* sub : app.get_subcommands()) {
    opt.command = sub->get_name();
    if (sub->count("--seed")) opt.seed = seed;
    if (sub->count("--workers")) opt.workers = workers;
  }
  return run_command(opt, out, err);
}

}  // namespace genbound

#endif  // GENBOUND_CLI_HPP
