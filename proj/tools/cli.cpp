// Copyright 2026 The faulty-grover Authors
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

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <tuple>
#include <cstring>
#include <limits>
#include <variant>

#include <CLI11.hpp>

#include "fgrover/evolution.hpp"
#include "fgrover/parallel.hpp"
#include "fgrover/progress.hpp"

namespace fgrover::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kTimestampPrefix = "# timestamp: ";

// ---------------------------------------------------------------------------
// Tables

using Cell = std::variant<std::monostate, double, std::uint64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string render_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "";
        else if constexpr (std::is_same_v<T, double>) return format_number(v);
        else if constexpr (std::is_same_v<T, std::uint64_t>) return std::to_string(v);
        else return v;
      },
      cell);
}

ordered_json cell_json(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
        else return v;
      },
      cell);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string render(const ExperimentConfig& config, const Table& table, const ordered_json& summary) {
  if (config.format == "json") {
    ordered_json doc;
    doc["header"] = {{"timestamp", utc_timestamp()}};
    doc["version"] = kVersion;
    doc["seed"] = config.seed;
    doc["config"] = config.to_json();
    doc["config_hash"] = config.hash();
    ordered_json rows = ordered_json::array();
    for (const auto& row : table.rows) {
      ordered_json obj;
      for (std::size_t c = 0; c < table.columns.size(); ++c) obj[table.columns[c]] = cell_json(row[c]);
      rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    doc["summary"] = summary;
    return doc.dump(2) + "\n";
  }
  std::ostringstream os;
  os << kTimestampPrefix << utc_timestamp() << "\n";
  os << "# fgrover " << kVersion << " " << config.command << " seed=" << config.seed
     << " config_hash=" << config.hash() << "\n";
  os << "# config: " << config.to_json().dump() << "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << render_cell(row[c]);
    os << "\n";
  }
  os << "# summary: " << summary.dump() << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Validation helpers

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

bool is_fault_command(const std::string& command) {
  return command == "verify" || command == "bound-report";
}

QueryAlgorithm build_algorithm(const ExperimentConfig& config, std::size_t n, std::uint64_t seed) {
  if (config.algorithm == "grover") return build_grover(n, config.t_max);
  if (config.algorithm == "repeated-grover") return build_repeated_grover(n, config.t_max, config.max_dim);
  return build_random_algorithm(RegisterDims(n, config.m), config.t_max, RandomStream(seed, 0),
                                config.max_dim);
}

std::size_t algorithm_dim(const ExperimentConfig& config, std::size_t n) {
  if (config.algorithm == "grover") return n;
  if (config.algorithm == "random") return n * config.m;
  std::size_t d = n;
  for (std::size_t r = 1; r < std::max<std::size_t>(config.t_max, 1); ++r) {
    if (d > config.max_dim) break;
    d *= n;
  }
  return d;
}

std::uint64_t p_stream_id(double p) {
  std::uint64_t bits = 0;
  static_assert(sizeof bits == sizeof p);
  std::memcpy(&bits, &p, sizeof bits);
  return bits;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

nlohmann::json ExperimentConfig::to_json() const {
  return {{"command", command},   {"n", n},
          {"m", m},               {"p", p},
          {"t-max", t_max},       {"trials", trials},
          {"seed", seed},         {"threshold", threshold},
          {"max-dim", max_dim},   {"algorithm", algorithm},
          {"format", format}};
}

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_json().dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig default_config(const std::string& command) {
  ExperimentConfig c;
  c.command = command;
  if (command == "verify") {
    c.n = {4};
    c.m = 2;
    c.p = {0.1, 0.3, 0.5, 0.9};
    c.t_max = 10;
    c.trials = 20;
    c.algorithm = "random";
  } else if (command == "grover-sweep") {
    c.n = {64};
    c.p = {0.5};
    c.t_max = 16;
    c.trials = 10000;
  } else if (command == "walk") {
    c.n = {64, 256};
    c.p = {0.5};
    c.trials = 200;
  } else if (command == "bound-report") {
    c.n = {8};
    c.p = {0.5};
    c.t_max = 4;
    c.format = "json";
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }
  return c;
}

ExperimentConfig merge_config(ExperimentConfig base, const nlohmann::json& j) {
  require(j.is_object(), "config file must hold a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "command") {
        require(value.get<std::string>() == base.command, "config file is for another command");
      } else if (key == "n") {
        base.n = value.is_array() ? value.get<std::vector<std::size_t>>()
                                  : std::vector<std::size_t>{value.get<std::size_t>()};
      } else if (key == "m") {
        base.m = value.get<std::size_t>();
      } else if (key == "p") {
        base.p = value.is_array() ? value.get<std::vector<double>>()
                                  : std::vector<double>{value.get<double>()};
      } else if (key == "t-max") {
        base.t_max = value.get<std::size_t>();
      } else if (key == "trials") {
        base.trials = value.get<std::size_t>();
      } else if (key == "seed") {
        base.seed = value.get<std::uint64_t>();
      } else if (key == "threshold") {
        base.threshold = value.get<double>();
      } else if (key == "max-dim") {
        base.max_dim = value.get<std::size_t>();
      } else if (key == "algorithm") {
        base.algorithm = value.get<std::string>();
      } else if (key == "out") {
        base.out = value.get<std::string>();
      } else if (key == "format") {
        base.format = value.get<std::string>();
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return base;
}

void validate(const ExperimentConfig& c) {
  require(c.format == "csv" || c.format == "json", "--format must be csv or json");
  require(!c.n.empty(), "--n is required");
  for (std::size_t n : c.n) require(n >= 2, "--n must be >= 2 (got " + std::to_string(n) + ")");
  require(c.m >= 1, "--m must be >= 1");
  require(c.max_dim >= 2, "--max-dim must be >= 2");
  require(!c.p.empty(), "--p is required");
  for (double p : c.p) {
    if (is_fault_command(c.command)) {
      require(p > 0.0 && p < 1.0, "--p must lie in (0, 1) for " + c.command);
    } else {
      require(p >= 0.0 && p <= 1.0, "--p must lie in [0, 1]");
    }
  }
  require(c.algorithm == "grover" || c.algorithm == "random" || c.algorithm == "repeated-grover",
          "--algorithm must be grover, random or repeated-grover");

  if (c.command == "verify" || c.command == "bound-report") {
    require(c.n.size() == 1, c.command + " takes a single --n");
    if (c.algorithm != "random") require(c.m == 1, "--m must be 1 for Grover algorithms");
    if (c.algorithm == "repeated-grover") require(c.t_max >= 1, "repeated-grover needs --t-max >= 1");
    require(algorithm_dim(c, c.n.front()) <= c.max_dim,
            "algorithm dimension exceeds --max-dim " + std::to_string(c.max_dim));
    if (c.command == "verify") require(c.trials >= 1, "--trials (seed grid size) must be >= 1");
  } else if (c.command == "grover-sweep" || c.command == "walk") {
    require(c.m == 1, "--m must be 1 for Grover experiments");
    require(c.algorithm == "grover", c.command + " runs Grover's algorithm only");
    require(c.trials >= 1, "--trials must be >= 1");
    if (c.command == "walk") {
      for (std::size_t n : c.n) {
        require(c.threshold > 1.0 / static_cast<double>(n) && c.threshold < 1.0,
                "--threshold must lie in (1/n, 1)");
      }
    }
  } else {
    throw ConfigError("unknown command '" + c.command + "'");
  }
}

// ---------------------------------------------------------------------------
// verify

CommandResult run_verify(const ExperimentConfig& config) {
  const std::size_t n = config.n.front();
  const std::size_t big_t = config.t_max;
  const std::string hash = config.hash();

  struct Row {
    std::uint64_t seed;
    std::size_t k;
    double p;
    std::size_t t;
    double h;
    Cell increment;
    Cell bound;
    Cell margin;
    double residue_min_eig;
    double psi_norm;
  };
  struct InstanceResult {
    std::vector<Row> rows;
    std::vector<std::string> failures;
    double min_margin = std::numeric_limits<double>::infinity();
    double min_residue = std::numeric_limits<double>::infinity();
    double max_claim_error = 0.0;
    double max_h = 0.0;
    std::size_t lemma_f_applicable = 0;
  };

  std::vector<InstanceResult> results(config.trials);
  parallel_for(config.trials, [&](std::size_t i) {
    const std::uint64_t seed = config.seed + i;
    const QueryAlgorithm alg = build_algorithm(config, n, seed);
    InstanceResult& res = results[i];
    auto fail = [&](std::ostringstream& os) { res.failures.push_back(os.str()); };

    for (double p : config.p) {
      const auto null_sim = evolve_exact(alg, FaultyOracleSpec(alg.dims(), 0, p), config.max_dim);
      for (std::size_t k = 1; k <= n; ++k) {
        const FaultyOracleSpec spec(alg.dims(), k, p);
        const auto tracking = track_states(alg, spec);
        const auto sim = evolve_exact(alg, spec, config.max_dim);
        const auto progress = progress_measure(tracking, sim);
        const std::string where = "seed=" + std::to_string(seed) + " k=" + std::to_string(k) +
                                  " p=" + format_number(p);

        if (progress.h.front() != 0.0) {
          std::ostringstream os;
          os << where << ": H_0 = " << progress.h.front() << " != 0";
          fail(os);
        }
        for (std::size_t t = 0; t <= big_t; ++t) {
          // Pure-plus-leak rewriting of the channel on the tracked vector.
          if (t < big_t) {
            const auto dec = lemma_decompose(tracking.psi[t], spec);
            const auto channel = apply_faulty_channel(DensityMatrix::pure(tracking.psi[t]), spec);
            const double err = (channel.entries() - dec.reconstruct()).cwiseAbs().maxCoeff();
            res.max_claim_error = std::max(res.max_claim_error, err);
            if (err > 1e-10) {
              std::ostringstream os;
              os << where << " t=" << t << ": decomposition error " << err;
              fail(os);
            }
            if ((dec.phi_tilde.amplitudes() - tracking.psi_tilde[t + 1].amplitudes()).cwiseAbs().maxCoeff() >
                1e-12) {
              std::ostringstream os;
              os << where << " t=" << t << ": tracking recursion disagrees with decomposition";
              fail(os);
            }
          }
          const double rmin = progress.residue_min_eig[t];
          res.min_residue = std::min(res.min_residue, rmin);
          if (rmin < -kLemmaTolerance) {
            std::ostringstream os;
            os << where << " t=" << t << ": residue eigenvalue " << rmin;
            fail(os);
          }
          const double trace_gap = std::abs(progress.residue_trace[t] - (1.0 - progress.psi_norm_sq[t]));
          if (trace_gap > kLemmaTolerance) {
            std::ostringstream os;
            os << where << " t=" << t << ": residue trace off by " << trace_gap;
            fail(os);
          }
          res.max_h = std::max(res.max_h, progress.h[t]);
          Row row{seed, k, p, t, progress.h[t], {}, {}, {}, rmin, std::sqrt(progress.psi_norm_sq[t])};
          if (t < big_t) {
            const double margin = progress.bounds[t] - progress.increments[t];
            row.increment = progress.increments[t];
            row.bound = progress.bounds[t];
            row.margin = margin;
            res.min_margin = std::min(res.min_margin, margin);
            if (margin < -kLemmaTolerance) {
              std::ostringstream os;
              os << where << " t=" << t << ": increment exceeds bound by " << -margin;
              fail(os);
            }
          }
          res.rows.push_back(std::move(row));
        }
        const auto final_report =
            final_bound_check(progress, trace_distance(sim.final_state(), null_sim.final_state()));
        if (final_report.status != BoundStatus::kNotApplicable) ++res.lemma_f_applicable;
        if (!final_report.ok()) {
          std::ostringstream os;
          os << where << ": final bound " << to_string(final_report.status)
             << " chain=" << final_report.chain_holds << " identity=" << final_report.identity_holds;
          fail(os);
        }
      }
      const auto theorem = aggregate_theorem_check(alg, p, config.max_dim);
      if (!theorem.ok()) {
        std::ostringstream os;
        os << "seed=" << seed << " p=" << format_number(p) << ": aggregate check failed (weight sum "
           << theorem.null_weight_sum << ", sum H " << theorem.sum_h << ", budget " << theorem.budget << ")";
        fail(os);
      }
    }
  });

  std::vector<Row> rows;
  std::vector<std::string> failures;
  double min_margin = std::numeric_limits<double>::infinity();
  double min_residue = std::numeric_limits<double>::infinity();
  double max_claim_error = 0.0;
  double max_h = 0.0;
  std::size_t applicable = 0;
  for (auto& r : results) {
    rows.insert(rows.end(), r.rows.begin(), r.rows.end());
    failures.insert(failures.end(), r.failures.begin(), r.failures.end());
    min_margin = std::min(min_margin, r.min_margin);
    min_residue = std::min(min_residue, r.min_residue);
    max_claim_error = std::max(max_claim_error, r.max_claim_error);
    max_h = std::max(max_h, r.max_h);
    applicable += r.lemma_f_applicable;
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.p, a.k, a.t, a.seed) < std::tie(b.p, b.k, b.t, b.seed);
  });

  Table table{{"seed", "k", "p", "t", "H", "increment", "bound", "margin", "residue_min_eig",
               "psi_norm", "config_hash"},
              {}};
  for (const auto& r : rows) {
    table.rows.push_back({r.seed, std::uint64_t{r.k}, r.p, std::uint64_t{r.t}, r.h, r.increment,
                          r.bound, r.margin, r.residue_min_eig, r.psi_norm, hash});
  }

  ordered_json summary;
  summary["passed"] = failures.empty();
  summary["rows"] = rows.size();
  summary["violations"] = failures.size();
  summary["min_margin"] = big_t > 0 ? ordered_json(min_margin) : ordered_json(nullptr);
  summary["min_residue_eig"] = min_residue;
  summary["max_decomposition_error"] = max_claim_error;
  summary["max_H"] = max_h;
  summary["final_bound_applicable"] = applicable;
  ordered_json first = ordered_json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(failures.size(), 20); ++i) first.push_back(failures[i]);
  summary["first_violations"] = std::move(first);

  CommandResult result;
  result.exit_code = failures.empty() ? kPass : kAssertionFailure;
  result.payload = render(config, table, summary);
  result.message = failures.empty() ? "verify: all checks passed over " + std::to_string(rows.size()) + " rows"
                                    : "verify: " + std::to_string(failures.size()) + " violations; first: " + failures.front();
  return result;
}

// ---------------------------------------------------------------------------
// grover-sweep

CommandResult run_grover_sweep(const ExperimentConfig& config) {
  const std::string hash = config.hash();
  Table table{{"n", "p", "T", "trials", "success_mean", "success_stderr", "seed", "config_hash"}, {}};
  ordered_json summary = ordered_json::array();
  for (std::size_t n : config.n) {
    const RegisterDims dims(n, 1);
    for (double p : config.p) {
      const auto spec = FaultyOracleSpec::with_limits(dims, 1, p);
      std::vector<Estimate> curve;
      std::string method;
      if (dims.d() <= config.max_dim) {
        method = "exact";
        const auto sim = evolve_exact(build_grover(n, config.t_max), spec, config.max_dim);
        for (const auto& rho : sim.rho_post) curve.push_back({success_probability(rho, 1), 0.0, 0});
      } else {
        method = "trajectories";
        curve = grover_success_curve(n, spec, config.t_max, config.trials,
                                     RandomStream(config.seed, n).split(p_stream_id(p)));
      }
      double best = 0.0;
      std::size_t best_t = 0;
      for (std::size_t t = 0; t < curve.size(); ++t) {
        table.rows.push_back({std::uint64_t{n}, p, std::uint64_t{t}, std::uint64_t{curve[t].trials},
                              curve[t].mean, curve[t].std_error, config.seed, hash});
        if (curve[t].mean > best) {
          best = curve[t].mean;
          best_t = t;
        }
      }
      summary.push_back({{"n", n}, {"p", p}, {"method", method}, {"best_T", best_t}, {"best_success", best}});
    }
  }
  CommandResult result;
  result.payload = render(config, table, ordered_json{{"curves", summary}});
  result.message = "grover-sweep: " + std::to_string(table.rows.size()) + " rows";
  return result;
}

// ---------------------------------------------------------------------------
// walk

CommandResult run_walk(const ExperimentConfig& config) {
  const std::string hash = config.hash();
  Table table{{"n", "p", "trial", "hitting_T", "seed", "config_hash"}, {}};
  ordered_json summary = ordered_json::array();
  std::vector<std::vector<Cell>> median_rows;
  for (std::size_t n : config.n) {
    const std::size_t max_t = config.t_max > 0 ? config.t_max : 100 * n;
    for (double p : config.p) {
      const auto hits = walk_hitting_time(n, p, config.threshold, max_t, config.trials,
                                          RandomStream(config.seed, n).split(p_stream_id(p)));
      std::size_t misses = 0;
      for (std::size_t i = 0; i < hits.size(); ++i) {
        table.rows.push_back({std::uint64_t{n}, p, std::uint64_t{i}, std::uint64_t{hits[i]}, config.seed, hash});
        if (hits[i] == max_t) ++misses;
      }
      const double med = median(hits);
      median_rows.push_back({std::uint64_t{n}, p, std::string("median"), med, config.seed, hash});
      summary.push_back({{"n", n},
                         {"p", p},
                         {"median_hitting_T", med},
                         {"max_t", max_t},
                         {"non_hits", misses},
                         {"noiseless_T", noiseless_hitting_time(n, config.threshold)}});
    }
  }
  table.rows.insert(table.rows.end(), median_rows.begin(), median_rows.end());
  CommandResult result;
  result.payload = render(config, table, ordered_json{{"threshold", config.threshold}, {"medians", summary}});
  result.message = "walk: " + std::to_string(table.rows.size()) + " rows";
  return result;
}

// ---------------------------------------------------------------------------
// bound-report

CommandResult run_bound_report(const ExperimentConfig& config) {
  const std::size_t n = config.n.front();
  const std::string hash = config.hash();
  const QueryAlgorithm alg = build_algorithm(config, n, config.seed);
  Table table{{"p", "k", "H_T", "distinguishability", "seed", "config_hash"}, {}};
  ordered_json per_p = ordered_json::array();
  bool all_ok = true;
  for (double p : config.p) {
    const auto report = aggregate_theorem_check(alg, p, config.max_dim);
    for (std::size_t k = 1; k <= n; ++k) {
      table.rows.push_back({p, std::uint64_t{k}, report.h_final[k - 1], report.distinguishability[k - 1],
                            config.seed, hash});
    }
    all_ok = all_ok && report.ok();
    per_p.push_back({{"p", p},
                     {"T", report.query_count},
                     {"sum_H", report.sum_h},
                     {"budget", report.budget},
                     {"null_weight_sum", report.null_weight_sum},
                     {"threshold", report.threshold},
                     {"hypothesis_all_k", report.correct_for_all_k},
                     {"identity_holds", report.identity_holds},
                     {"budget_holds", report.budget_holds},
                     {"lower_bound_holds", report.lower_bound_holds}});
  }
  CommandResult result;
  result.exit_code = all_ok ? kPass : kAssertionFailure;
  result.payload =
      render(config, table, ordered_json{{"algorithm", alg.name()}, {"passed", all_ok}, {"reports", per_p}});
  result.message = all_ok ? "bound-report: aggregate bounds hold" : "bound-report: aggregate bound violated";
  return result;
}

CommandResult run_command(const ExperimentConfig& config) {
  validate(config);
  if (config.command == "verify") return run_verify(config);
  if (config.command == "grover-sweep") return run_grover_sweep(config);
  if (config.command == "walk") return run_walk(config);
  return run_bound_report(config);
}

// ---------------------------------------------------------------------------
// Formatting

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  const auto fmt = std::abs(x) < 1e-4 ? std::chars_format::scientific : std::chars_format::fixed;
  const auto res = std::to_chars(buf, buf + sizeof buf, x, fmt);
  return {buf, res.ptr};
}

std::string strip_timestamp(const std::string& payload) {
  if (!payload.empty() && payload.front() == '{') {
    auto doc = ordered_json::parse(payload);
    doc.erase("header");
    return doc.dump(2) + "\n";
  }
  std::istringstream in(payload);
  std::ostringstream out;
  for (std::string line; std::getline(in, line);) {
    if (line.rfind(kTimestampPrefix, 0) == 0) continue;
    out << line << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Entry point

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Faulty-oracle Grover simulator and lower-bound verifier", "fgrover"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  struct Flags {
    std::vector<std::size_t> n;
    std::size_t m = 0;
    std::vector<double> p;
    std::size_t t_max = 0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    double threshold = 0.0;
    std::size_t max_dim = 0;
    std::string algorithm;
    std::string out;
    std::string format;
    std::string config_file;
  } flags;

  struct Sub {
    CLI::App* app;
    std::vector<std::pair<std::string, CLI::Option*>> options;
  };
  std::vector<Sub> subs;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"verify", "Check every lemma numerically over a grid of random algorithms"},
      {"grover-sweep", "Success probability of faulty Grover versus iteration count"},
      {"walk", "Hitting times of the faulty-Grover random walk"},
      {"bound-report", "Per-k progress, the query budget and the lower-bound threshold"}};
  for (const auto& [name, help] : commands) {
    Sub sub{app.add_subcommand(name, help), {}};
    auto add = [&](const std::string& key, CLI::Option* opt) { sub.options.emplace_back(key, opt); };
    add("n", sub.app->add_option("--n", flags.n, "Query register dimension (repeatable)"));
    add("m", sub.app->add_option("--m", flags.m, "Ancilla dimension"));
    add("p", sub.app->add_option("--p", flags.p, "Fault probability (repeatable)"));
    add("t-max", sub.app->add_option("--t-max", flags.t_max, "Number of queries / largest T"));
    add("trials", sub.app->add_option("--trials", flags.trials, "Trials (verify: seed grid size)"));
    add("seed", sub.app->add_option("--seed", flags.seed, "Base seed (default 42)"));
    add("threshold", sub.app->add_option("--threshold", flags.threshold, "Hitting-time threshold"));
    add("max-dim", sub.app->add_option("--max-dim", flags.max_dim, "Dense evolution size cap"));
    add("algorithm", sub.app->add_option("--algorithm", flags.algorithm, "grover | random | repeated-grover"));
    add("out", sub.app->add_option("--out", flags.out, "Output path (default stdout)"));
    add("format", sub.app->add_option("--format", flags.format, "csv | json"));
    add("config", sub.app->add_option("--config", flags.config_file, "JSON config file"));
    subs.push_back(std::move(sub));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsageError;
  }

  try {
    const Sub* chosen = nullptr;
    for (const auto& sub : subs) {
      if (sub.app->parsed()) chosen = &sub;
    }
    ExperimentConfig config = default_config(chosen->app->get_name());
    auto given = [&](const std::string& key) {
      for (const auto& [k, opt] : chosen->options) {
        if (k == key) return opt->count() > 0;
      }
      return false;
    };
    if (given("config")) {
      std::ifstream in(flags.config_file);
      if (!in) throw ConfigError("cannot read config file " + flags.config_file);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
      }
      config = merge_config(std::move(config), j);
    }
    nlohmann::json overrides = nlohmann::json::object();
    if (given("n")) overrides["n"] = flags.n;
    if (given("m")) overrides["m"] = flags.m;
    if (given("p")) overrides["p"] = flags.p;
    if (given("t-max")) overrides["t-max"] = flags.t_max;
    if (given("trials")) overrides["trials"] = flags.trials;
    if (given("seed")) overrides["seed"] = flags.seed;
    if (given("threshold")) overrides["threshold"] = flags.threshold;
    if (given("max-dim")) overrides["max-dim"] = flags.max_dim;
    if (given("algorithm")) overrides["algorithm"] = flags.algorithm;
    if (given("out")) overrides["out"] = flags.out;
    if (given("format")) overrides["format"] = flags.format;
    config = merge_config(std::move(config), overrides);

    const CommandResult result = run_command(config);
    if (config.out.empty()) {
      out << result.payload;
    } else {
      std::ofstream file(config.out, std::ios::binary);
      if (!file) throw ConfigError("cannot write " + config.out);
      file << result.payload;
    }
    err << result.message << "\n";
    return result.exit_code;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kAssertionFailure;
  }
}

}  // namespace fgrover::cli
