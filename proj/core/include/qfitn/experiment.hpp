// Copyright 2026 The qfitn Authors
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

// Experiment orchestration: run configs, baselines, N sweeps and result files.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qfitn/channels.hpp"
#include "qfitn/optimize.hpp"

namespace qfitn::cli {

/// Invalid configuration; `field` is the dotted path of the offending entry
/// (or "file:line" for syntax errors).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct Baselines {
  bool control_free_plus = false;
  bool classical_nF1 = false;
  bool near_inverse_control = false;
};

struct RunConfig {
  std::string preset = "bit_flip";
  double p = 0.1;
  double theta0 = 1.0;
  std::vector<int> n_values{2};
  opt::ControlMode mode = opt::ControlMode::arbitrary_cptp;
  int ancilla_dim = 1;
  /// Ansatz shape for variational modes; 0 qubits means "derived from the dimension".
  int ansatz_qubits = 0;
  opt::RunSettings settings;
  Baselines baselines;
  double near_inverse_eps = 0.01;
  std::filesystem::path out_dir = "qfi_out";
  bool verify = false;
  std::uint64_t seed = 1;
  bool warm_start = true;
  int starts = 1;  ///< seeded restarts for the first (or every cold) N
  int jobs = 1;    ///< concurrent N points when warm start is off
  std::optional<std::filesystem::path> resume;

  /// Throws ConfigError.
  void validate() const;
};

/// "5", "2..10", "10,20,50" or "2..4,8"; ascending, duplicates removed.
std::vector<int> parse_n_list(std::string_view text);

/// Keys absent from `j` keep the values already in `into`. Unknown keys are errors.
void config_from_json(const nlohmann::json& j, RunConfig& into);
/// Parses a config file on top of the defaults; call validate() after any overrides.
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& c);

/// Input |+> on the system, identity controls, no ancilla.
double baseline_control_free(const ParamChannel& channel, double theta0, int n_queries);
/// N F^(1) with F^(1) optimized over inputs on system (x) ancilla.
double baseline_classical(const ParamChannel& channel, double theta0, int n_queries, int ancilla_dim);
/// Input |+>, every control the unitary U_Z(theta0 + eps)^dagger, no ancilla.
double baseline_near_inverse(const ParamChannel& channel, double theta0, int n_queries, double eps);

/// QFI of a fixed strategy (tnet contraction + SLD).
double strategy_qfi(const ChannelPair& channel, const opt::Strategy& s);

struct ResultRow {
  int n = 0;
  std::string mode;
  int ancilla_dim = 1;
  double qfi = 0.0;
  double qfi_per_n = 0.0;
  double qfi_per_n2 = 0.0;
  std::optional<double> control_free_plus;
  std::optional<double> classical_nF1;
  std::optional<double> near_inverse_control;
  int iterations = 0;
  double seconds = 0.0;

  bool operator==(const ResultRow&) const = default;
};

std::string csv_header();
std::string emit_csv(const std::vector<ResultRow>& rows);
/// Inverse of emit_csv; throws std::invalid_argument on malformed input.
std::vector<ResultRow> parse_csv(std::string_view text);

struct VerifyResult {
  int checks = 0;
  double max_error = 0.0;
};

/// Compares the tnet output state, its derivative, f1 and f2 (with X the SLD)
/// against the dense comb contraction. Throws NumericalError above `tol`.
VerifyResult verify_against_oracle(const ChannelPair& channel, const opt::Strategy& s, double tol = 1e-10);

struct SweepPoint {
  ResultRow row;
  opt::OptimizationReport report;
  int chosen_start = 0;
  std::optional<VerifyResult> check;  ///< oracle check of the final strategy (verify mode)
};

struct ExperimentResult {
  std::vector<SweepPoint> points;
  bool interrupted = false;
  std::optional<SweepPoint> partial;  ///< the point that was running at interrupt
};

struct ExperimentHooks {
  std::ostream* log = nullptr;
  /// When false, nothing is written to out_dir.
  bool write_files = true;
};

/// Multi-start run of one N. Without `warm`, start 0 is the zero-angle cold
/// start and later starts draw random angles. With `warm`, every start
/// extends the warm strategy; start 0 copies the last control into the new
/// slots and later starts fill them with seeded random controls (identical
/// modes have no new slots and run start 0 only). In variational modes,
/// starts within 1e-3 (relative) of the best QFI are ranked by |Tr U| / D of
/// the first ansatz unitary.
opt::OptimizationReport best_of_starts(const ParamChannel& channel, const RunConfig& config, int n_queries,
                                       int& chosen_start, const opt::RunHooks& hooks = {},
                                       const opt::Strategy* warm = nullptr);

/// Runs the sweep, writing results.csv, report.json and per-N checkpoints to
/// out_dir after every completed point. Stops early (interrupted = true)
/// when opt::stop_flag() is raised.
ExperimentResult run_experiment(const RunConfig& config, const ExperimentHooks& hooks = {});

nlohmann::json to_json(const ExperimentResult& r, const RunConfig& config);

std::filesystem::path checkpoint_path(const std::filesystem::path& out_dir, int n_queries);

}  // namespace qfitn::cli
