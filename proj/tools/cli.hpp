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

#pragma once

// Batch experiment runner behind the `fgrover` executable.
//
// Subcommands: verify | grover-sweep | walk | bound-report. Every payload
// starts with an isolated timestamp header; everything after it depends only
// on the configuration.

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace fgrover::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultSeed = 42;

enum ExitCode : int { kPass = 0, kAssertionFailure = 1, kUsageError = 2 };

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  std::string command;
  std::vector<std::size_t> n;
  std::size_t m = 1;
  std::vector<double> p;
  std::size_t t_max = 0;
  std::size_t trials = 0;
  std::uint64_t seed = kDefaultSeed;
  double threshold = 0.5;
  std::size_t max_dim = 256;
  std::string algorithm = "grover";
  std::string out;
  std::string format = "csv";

  /// Config echo; omits the output path.
  [[nodiscard]] nlohmann::json to_json() const;
  /// FNV-1a 64 of the compact config echo, as 16 hex digits.
  [[nodiscard]] std::string hash() const;
};

ExperimentConfig default_config(const std::string& command);

/// Overrides `base` with the keys present in `j` (same names as the flags,
/// e.g. "t-max", "max-dim"). Unknown keys are a ConfigError.
ExperimentConfig merge_config(ExperimentConfig base, const nlohmann::json& j);

/// Throws ConfigError on the first out-of-range field.
void validate(const ExperimentConfig& config);

struct CommandResult {
  int exit_code = kPass;
  std::string payload;
  std::string message;
};

CommandResult run_verify(const ExperimentConfig& config);
CommandResult run_grover_sweep(const ExperimentConfig& config);
CommandResult run_walk(const ExperimentConfig& config);
CommandResult run_bound_report(const ExperimentConfig& config);

/// Validates, then dispatches on config.command.
CommandResult run_command(const ExperimentConfig& config);

/// Removes the timestamp header from a payload (CSV or JSON).
std::string strip_timestamp(const std::string& payload);

/// '.' decimal, no grouping, scientific below 1e-4 in magnitude, shortest
/// round-trip digits.
std::string format_number(double x);

/// Full command-line entry point; returns the process exit code.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace fgrover::cli
