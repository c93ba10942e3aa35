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

// qfi_tn: optimize sequential metrology strategies over a sweep of query counts.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 1 other runtime errors (I/O), 130 interrupted (partial results written).

#include <csignal>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qfitn/experiment.hpp"
#include "qfitn/linalg.hpp"
#include "qfitn/optimize.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInterrupted = 130;

extern "C" void on_sigint(int) { qfitn::opt::stop_flag().store(true); }

}  // namespace

int main(int argc, char** argv) {
  using namespace qfitn;

  CLI::App app{"Optimize control-enhanced sequential strategies for channel parameter estimation"};
  app.set_version_flag("--version", "qfi_tn 0.1.0");

  std::string config_path, preset, n_list, mode, out, resume, backend;
  std::optional<int> ancilla, checkpoint_every, starts, jobs, max_iters;
  std::optional<std::uint64_t> seed;
  std::optional<double> p, theta0;
  std::optional<bool> warm_start;
  std::vector<std::string> baselines;
  bool verify = false;
  bool quiet = false;

  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--preset", preset, "channel preset")
      ->check(CLI::IsMember({"bit_flip", "amplitude_damping", "dephasing_direction"}));
  app.add_option("--p", p, "noise strength");
  app.add_option("--theta0", theta0, "true parameter value");
  app.add_option("--N", n_list, "query counts, e.g. 5, 2..10 or 10,20,50");
  app.add_option("--mode", mode, "arbitrary_cptp | identical_cptp | variational_local | variational_global");
  app.add_option("--ancilla", ancilla, "ancilla dimension (1 = no ancilla)");
  app.add_option("--seed", seed, "run seed");
  app.add_flag("--warm-start,!--no-warm-start", warm_start, "start each N from the previous optimum");
  app.add_flag("--verify", verify, "cross-check N <= 4 results against the dense contraction");
  app.add_option("--out", out, "output directory");
  app.add_option("--checkpoint-every", checkpoint_every, "outer iterations between checkpoints");
  app.add_option("--resume", resume, "continue from a checkpoint file")->check(CLI::ExistingFile);
  app.add_option("--baseline", baselines, "control_free_plus | classical_nF1 | near_inverse_control")
      ->check(CLI::IsMember({"control_free_plus", "classical_nF1", "near_inverse_control"}));
  app.add_option("--starts", starts, "seeded restarts for cold-started N");
  app.add_option("--jobs", jobs, "concurrent N points (without warm start)");
  app.add_option("--max-iters", max_iters, "outer iteration cap");
  app.add_option("--sdp-backend", backend, "interior | splitting");
  app.add_flag("--quiet", quiet, "no per-N progress lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    cli::RunConfig config;
    if (!config_path.empty()) config = cli::load_config(config_path);
    if (!preset.empty()) config.preset = preset;
    if (p) config.p = *p;
    if (theta0) config.theta0 = *theta0;
    if (!n_list.empty()) {
      try {
        config.n_values = cli::parse_n_list(n_list);
      } catch (const std::invalid_argument& e) {
        throw cli::ConfigError("--N", e.what());
      }
    }
    if (!mode.empty()) {
      try {
        config.mode = opt::parse_mode(mode);
      } catch (const std::invalid_argument& e) {
        throw cli::ConfigError("--mode", e.what());
      }
    }
    if (ancilla) config.ancilla_dim = *ancilla;
    if (seed) config.seed = config.settings.seed = *seed;
    if (warm_start) config.warm_start = *warm_start;
    if (verify) config.verify = true;
    if (!out.empty()) config.out_dir = out;
    if (checkpoint_every) config.settings.checkpoint_every = *checkpoint_every;
    if (!resume.empty()) config.resume = resume;
    for (const auto& b : baselines) {
      if (b == "control_free_plus") config.baselines.control_free_plus = true;
      if (b == "classical_nF1") config.baselines.classical_nF1 = true;
      if (b == "near_inverse_control") config.baselines.near_inverse_control = true;
    }
    if (starts) config.starts = *starts;
    if (jobs) config.jobs = *jobs;
    if (max_iters) config.settings.max_outer_iters = *max_iters;
    if (!backend.empty()) config.settings.sdp_backend = backend;
    config.validate();

    std::signal(SIGINT, on_sigint);
    cli::ExperimentHooks hooks;
    if (!quiet) hooks.log = &std::cerr;
    const cli::ExperimentResult result = cli::run_experiment(config, hooks);
    if (result.interrupted) {
      std::cerr << "interrupted; partial results in " << config.out_dir.string() << "\n";
      return kExitInterrupted;
    }
    if (!quiet) std::cerr << "results in " << config.out_dir.string() << "\n";
    return 0;
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
