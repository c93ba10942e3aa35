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


// Alternating optimization of sequential strategies {X, rho0, C_1..C_{N-1}}.
//
// Each sub-problem is solved with the others held fixed: X by the SLD of the
// current output, rho0 by the top eigenvector of its linear coefficient, and
// the controls by the SDP (CPTP modes) or by Adagrad on ansatz angles
// (variational modes).

#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qfitn/ansatz.hpp"
#include "qfitn/channels.hpp"
#include "qfitn/qfi.hpp"
#include "qfitn/random.hpp"
#include "qfitn/sdp.hpp"
#include "qfitn/tnet.hpp"

namespace qfitn::opt {

enum class ControlMode { arbitrary_cptp, identical_cptp, variational_local, variational_global };

const char* to_string(ControlMode m);
/// Throws std::invalid_argument for unknown names.
ControlMode parse_mode(std::string_view name);
bool is_identical(ControlMode m);
bool is_variational(ControlMode m);

struct Strategy {
  int n_queries = 1;
  int ancilla_dim = 1;
  ControlMode mode = ControlMode::arbitrary_cptp;
  Mat rho0;
  /// arbitrary_cptp: N-1 Choi operators; identical_cptp: one shared operator.
  std::vector<Mat> controls;
  /// variational_local: N-1 parameter sets; variational_global: one.
  std::vector<AnsatzParams> ansatz;

  /// Choi operator of control i (1-based), built from the ansatz when variational.
  Mat control_choi(int i) const;
  /// Throws std::invalid_argument when shapes or counts are inconsistent.
  void validate(int system_dim) const;
};

struct Perturbation {
  bool enabled = false;
  double eps0 = 1e-3;
  double decay = 0.95;
};

struct RunSettings {
  int max_outer_iters = 200;
  double rel_tol = 1e-7;
  int stall_window = 3;  ///< consecutive small relative changes needed to stop
  std::uint64_t seed = 1;
  Perturbation perturbation;
  sdp::SdpOptions sdp;
  std::string sdp_backend = "interior";
  double learning_rate = 0.1;
  double adagrad_eps = 1e-8;
  double line_search_tol = 1e-6;
  int local_steps = 5;
  int global_steps = 1;
  int identical_picks = 1;  ///< random control picks per outer iteration
  int ansatz_layers = 0;    ///< 0 = 1 layer for one qubit, 3 layers otherwise
  bool x_between_controls = false;
  bool step_guard = true;  ///< backtrack Adagrad steps that lower the objective
  int gradient_check_every = 50;
  double support_cutoff = kSupportCutoff;
  int checkpoint_every = 25;

  /// Throws std::invalid_argument when a tolerance or count is not positive.
  void validate() const;
};

/// Everything needed to continue a run where it stopped.
struct Checkpoint {
  static constexpr int kFormatVersion = 1;
  Strategy strategy;
  RunSettings settings;
  int iteration = 0;
  std::vector<double> qfi_trace;
  std::vector<RVec> adagrad;  ///< per-site accumulators (one entry for global mode)
  std::string rng_state;
};

struct OptimizationReport {
  std::vector<double> qfi_trace;  ///< entry 0 is the initial strategy
  Strategy final_strategy;
  double final_qfi = 0.0;        ///< Tr(rho L^2) from a fresh SLD
  double final_objective = 0.0;  ///< 2 f1 - f2 with X = L
  std::string status;            ///< converged | max_iters | interrupted
  int iterations = 0;
  double wall_time = 0.0;
  RunSettings settings;
  double support_cutoff_used = kSupportCutoff;

  int sdp_solves = 0;
  int sdp_unconverged = 0;
  double max_sdp_gap = 0.0;
  int rejected_updates = 0;
  std::vector<int> discontinuity_iterations;
  int local_visits = 0;
  int descent_violations = 0;
  double max_gradient_check_error = 0.0;
  int gradient_checks = 0;
};

/// Adagrad on a cost (descent direction -grad).
struct Adagrad {
  double learning_rate = 0.1;
  double eps = 1e-8;
  RVec accumulator;

  void step(RVec& phi, const RVec& cost_grad);
};

/// X <- SLD of the current output; returns the SLD result.
SldResult update_X(tnet::MpoChain& chain, double cutoff = kSupportCutoff);

/// rho0 <- top eigenvector of 2 f1\rho0 - f2\rho0 (as a linear coefficient).
Mat update_input_state(tnet::MpoChain& chain);

struct ControlUpdate {
  Mat choi;
  bool accepted = false;
  double before = 0.0;
  double after = 0.0;
  double lambda = 0.0;  ///< mixing parameter (identical mode)
  int site = 0;
  sdp::SdpSolution solution;
};

/// Solves the SDP for control i against the current coefficient and installs
/// the optimum unless it would lower the objective by more than 1e-9.
ControlUpdate update_control_arbitrary(tnet::MpoChain& chain, int i, const sdp::SdpBackend& backend,
                                       const sdp::SdpOptions& opts);

/// One random-site update of a shared control: SDP at a uniformly drawn
/// site, then a bounded line search over C(l) = sin^2(l pi) C~ + cos^2(l pi) C,
/// l in [0, 1/2], evaluated with the matrix-power fast path.
ControlUpdate update_control_identical(tnet::MpoChain& chain, const Mat& current, Rng& rng,
                                       const sdp::SdpBackend& backend, const sdp::SdpOptions& opts,
                                       double line_search_tol = 1e-6);

/// sin^2(l pi) c_new + cos^2(l pi) c_old.
Mat mix_controls(const Mat& c_old, const Mat& c_new, double l);

/// Brent's bounded minimization; returns (x*, f(x*)).
std::pair<double, double> bounded_scalar_minimize(const std::function<double(double)>& f, double lo, double hi,
                                                  double tol = 1e-6);

/// Gradient of Tr[Choi(U(phi)) G] in phi by central differences.
RVec local_gradient(const AnsatzParams& params, const Mat& coefficient, double h = kGradientStep);

/// `steps` Adagrad steps on phi_i against the fixed coefficient of site i;
/// installs the result. With `guard`, a step that raises the cost is halved
/// until it does not (at most 20 times, then skipped). Returns true when the
/// local cost did not increase overall.
bool update_variational_local(tnet::MpoChain& chain, int i, AnsatzParams& params, Adagrad& adagrad, int steps,
                              bool guard = false);

/// Summed-coefficient gradient of the shared angles over all sites.
RVec global_gradient(tnet::MpoChain& chain, const AnsatzParams& params);

/// Adagrad steps on the shared angles; installs the result. With `guard`, a
/// step that lowers the full objective 2 f1 - f2 is halved until it does not
/// (at most 20 times, then undone).
void update_variational_global(tnet::MpoChain& chain, AnsatzParams& params, Adagrad& adagrad, int steps,
                               bool guard = false);

/// Central-difference gradient of the full contraction 2 f1 - f2 with respect
/// to the angles of site i (i = 0 means the shared angles of every site).
RVec full_objective_gradient(tnet::MpoChain& chain, const AnsatzParams& params, int site,
                             double h = kGradientStep);

int default_layers(int n_qubits);

/// Random pure rho0, random CPTP controls (Haar Stinespring) and zero
/// angles, or angles drawn uniformly from [-pi, pi) when `random_angles`.
Strategy initial_strategy(int system_dim, int n_queries, int ancilla_dim, ControlMode mode, Rng& rng,
                          int ansatz_layers = 0, bool random_angles = false);

/// Strategy for N+1 queries: the last control (or shared control) is repeated.
Strategy warm_start_extend(const Strategy& s);

/// Builds a chain holding the strategy's rho0 and controls.
tnet::MpoChain make_chain(const ChannelPair& channel, const Strategy& s);

/// Set by signal handlers; run() stops at the next iteration boundary.
std::atomic<bool>& stop_flag();

struct RunHooks {
  /// Called every settings.checkpoint_every iterations and at termination.
  std::function<void(const Checkpoint&)> on_checkpoint;
  /// Continue from a saved state instead of starting at iteration 0.
  const Checkpoint* resume = nullptr;
};

OptimizationReport run(const ParamChannel& channel, double theta0, const Strategy& initial,
                       const RunSettings& settings, const RunHooks& hooks = {});

/// Cold start from initial_strategy seeded with settings.seed.
OptimizationReport run(const ParamChannel& channel, double theta0, int n_queries, ControlMode mode,
                       int ancilla_dim, const RunSettings& settings, const RunHooks& hooks = {});

}  // namespace qfitn::opt
