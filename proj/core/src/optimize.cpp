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


#include "qfitn/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include <boost/math/tools/minima.hpp>

namespace qfitn::opt {

const char* to_string(ControlMode m) {
  switch (m) {
    case ControlMode::arbitrary_cptp:
      return "arbitrary_cptp";
    case ControlMode::identical_cptp:
      return "identical_cptp";
    case ControlMode::variational_local:
      return "variational_local";
    case ControlMode::variational_global:
      return "variational_global";
  }
  return "unknown";
}

ControlMode parse_mode(std::string_view name) {
  for (auto m : {ControlMode::arbitrary_cptp, ControlMode::identical_cptp, ControlMode::variational_local,
                 ControlMode::variational_global})
    if (name == to_string(m)) return m;
  throw std::invalid_argument("unknown control mode '" + std::string(name) +
                              "' (expected arbitrary_cptp, identical_cptp, variational_local or variational_global)");
}

bool is_identical(ControlMode m) { return m == ControlMode::identical_cptp || m == ControlMode::variational_global; }

bool is_variational(ControlMode m) {
  return m == ControlMode::variational_local || m == ControlMode::variational_global;
}

Mat Strategy::control_choi(int i) const {
  if (i < 1 || i > n_queries - 1) throw std::out_of_range("Strategy::control_choi: index out of range");
  const int slot = is_identical(mode) ? 0 : i - 1;
  if (is_variational(mode)) return choi_of_unitary(ansatz_unitary(ansatz.at(slot))).mat;
  return controls.at(slot);
}

void Strategy::validate(int system_dim) const {
  if (n_queries < 1) throw std::invalid_argument("Strategy: N must be >= 1");
  if (ancilla_dim < 1) throw std::invalid_argument("Strategy: ancilla_dim must be >= 1");
  const int dim = system_dim * ancilla_dim;
  if (rho0.rows() != dim || rho0.cols() != dim)
    throw std::invalid_argument("Strategy: rho0 must be " + std::to_string(dim) + "x" + std::to_string(dim));
  const std::size_t expected = is_identical(mode) ? 1 : static_cast<std::size_t>(n_queries - 1);
  if (is_variational(mode)) {
    if (ansatz.size() != expected && !(is_identical(mode) && n_queries == 1 && ansatz.empty()))
      throw std::invalid_argument("Strategy: expected " + std::to_string(expected) + " ansatz parameter sets");
    for (const auto& p : ansatz) {
      p.validate();
      if ((1 << p.n_qubits) != dim) throw std::invalid_argument("Strategy: ansatz qubit count does not match D");
    }
  } else {
    if (controls.size() != expected && !(is_identical(mode) && n_queries == 1 && controls.empty()))
      throw std::invalid_argument("Strategy: expected " + std::to_string(expected) + " control operators");
    for (const auto& c : controls)
      if (c.rows() != dim * dim || c.cols() != dim * dim)
        throw std::invalid_argument("Strategy: control Choi operators must be D^2 x D^2");
  }
}

void RunSettings::validate() const {
  if (max_outer_iters < 0) throw std::invalid_argument("settings: max_outer_iters must be >= 0");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("settings: rel_tol must be > 0");
  if (stall_window < 1) throw std::invalid_argument("settings: stall_window must be >= 1");
  if (!(sdp.tol > 0.0) || sdp.max_iters < 1 || !(sdp.rho > 0.0))
    throw std::invalid_argument("settings: sdp tolerances must be > 0");
  if (!(learning_rate > 0.0) || !(adagrad_eps > 0.0))
    throw std::invalid_argument("settings: learning_rate and adagrad_eps must be > 0");
  if (!(line_search_tol > 0.0)) throw std::invalid_argument("settings: line_search_tol must be > 0");
  if (local_steps < 1 || global_steps < 1 || identical_picks < 1)
    throw std::invalid_argument("settings: step and pick counts must be >= 1");
  if (ansatz_layers < 0) throw std::invalid_argument("settings: ansatz_layers must be >= 0");
  if (gradient_check_every < 0 || checkpoint_every < 0)
    throw std::invalid_argument("settings: check intervals must be >= 0");
  if (!(support_cutoff > 0.0)) throw std::invalid_argument("settings: support_cutoff must be > 0");
  if (perturbation.enabled &&
      !(perturbation.eps0 > 0.0 && perturbation.eps0 <= 1.0 && perturbation.decay > 0.0 && perturbation.decay <= 1.0))
    throw std::invalid_argument("settings: perturbation needs eps0 in (0, 1] and decay in (0, 1]");
}

void Adagrad::step(RVec& phi, const RVec& cost_grad) {
  if (accumulator.size() != phi.size()) accumulator = RVec::Zero(phi.size());
  accumulator += cost_grad.cwiseAbs2();
  phi -= (learning_rate * cost_grad.array() / (accumulator.array().sqrt() + eps)).matrix();
}

SldResult update_X(tnet::MpoChain& chain, double cutoff) {
  SldResult s = sld(chain.output_state(), chain.output_derivative(), cutoff);
  chain.set_observable(s.L);
  return s;
}

Mat update_input_state(tnet::MpoChain& chain) {
  const Mat g = hermitian_part(chain.objective_coefficient(tnet::Site::input()));
  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  const Vec top = es.eigenvectors().col(g.rows() - 1);
  Mat rho0 = top * top.adjoint();
  chain.set_input_state(rho0);
  return rho0;
}

ControlUpdate update_control_arbitrary(tnet::MpoChain& chain, int i, const sdp::SdpBackend& backend,
                                       const sdp::SdpOptions& opts) {
  const int dim = chain.dim();
  const Mat a = hermitian_part(chain.objective_coefficient(tnet::Site::control(i)));
  ControlUpdate u;
  u.site = i;
  u.before = trace_product(chain.control(i), a).real();
  u.solution = sdp::solve_cptp_linear(a, dim, dim, opts, &backend);
  u.after = u.solution.primal_value;
  u.accepted = u.after >= u.before - 1e-9;
  if (u.accepted) {
    u.choi = u.solution.C_star.mat;
    chain.set_control(i, u.choi);
  } else {
    u.choi = chain.control(i);
    u.after = u.before;
  }
  return u;
}

Mat mix_controls(const Mat& c_old, const Mat& c_new, double l) {
  if (l == 0.0) return c_old;
  if (l == 0.5) return c_new;
  const double s = std::sin(l * M_PI);
  const double c = std::cos(l * M_PI);
  return s * s * c_new + c * c * c_old;
}

std::pair<double, double> bounded_scalar_minimize(const std::function<double(double)>& f, double lo, double hi,
                                                  double tol) {
  if (!(lo < hi)) throw std::invalid_argument("bounded_scalar_minimize: need lo < hi");
  if (!(tol > 0.0)) throw std::invalid_argument("bounded_scalar_minimize: tol must be > 0");
  const int bits = std::clamp(static_cast<int>(std::ceil(std::log2(1.0 / tol))) + 2, 4,
                              std::numeric_limits<double>::digits / 2);
  std::uintmax_t max_iter = 500;
  const auto r = boost::math::tools::brent_find_minima(f, lo, hi, bits, max_iter);
  return {r.first, r.second};
}

ControlUpdate update_control_identical(tnet::MpoChain& chain, const Mat& current, Rng& rng,
                                       const sdp::SdpBackend& backend, const sdp::SdpOptions& opts,
                                       double line_search_tol) {
  ControlUpdate u;
  u.choi = current;
  const int n = chain.n_queries();
  if (n < 2) return u;
  std::uniform_int_distribution<int> pick(1, n - 1);
  u.site = pick(rng);

  const int dim = chain.dim();
  const Mat a = hermitian_part(chain.objective_coefficient(tnet::Site::control(u.site)));
  u.solution = sdp::solve_cptp_linear(a, dim, dim, opts, &backend);
  const Mat& target = u.solution.C_star.mat;

  const Mat rho0 = chain.input_state();
  const Mat x = chain.observable();
  auto value = [&](const Mat& c) {
    const auto [f1, f2] = tnet::identical_f1_f2(chain.channel(), c, rho0, x, n, chain.ancilla_dim());
    return 2.0 * f1 - f2;
  };
  u.before = value(current);
  const auto [l_star, f_star] =
      bounded_scalar_minimize([&](double l) { return -value(mix_controls(current, target, l)); }, 0.0, 0.5,
                              line_search_tol);
  double best_l = l_star;
  double best = -f_star;
  const double at_end = value(target);
  if (at_end > best) {
    best = at_end;
    best_l = 0.5;
  }
  if (best > u.before) {
    u.accepted = true;
    u.lambda = best_l;
    u.after = best;
    u.choi = mix_controls(current, target, best_l);
    chain.set_all_controls(u.choi);
  } else {
    u.after = u.before;
  }
  return u;
}

namespace {

constexpr int kMaxStepHalvings = 20;

Vec unitary_vec(const AnsatzParams& params) {
  const Mat u = ansatz_unitary(params);
  const auto d = u.rows();
  Vec v(d * d);
  for (Eigen::Index o = 0; o < d; ++o)
    for (Eigen::Index i = 0; i < d; ++i) v(o * d + i) = u(o, i);
  return v;
}

// Tr[Choi(U(phi)) G] = <<U| G |U>>.
double linear_value(const AnsatzParams& params, const Mat& g) {
  const Vec v = unitary_vec(params);
  return (v.adjoint() * g * v)(0, 0).real();
}

Mat ansatz_choi(const AnsatzParams& params) {
  const Vec v = unitary_vec(params);
  return v * v.adjoint();
}

}  // namespace

RVec local_gradient(const AnsatzParams& params, const Mat& coefficient, double h) {
  AnsatzParams probe = params;
  return grad_objective(
      params.phi,
      [&](const RVec& phi) {
        probe.phi = phi;
        return linear_value(probe, coefficient);
      },
      h);
}

bool update_variational_local(tnet::MpoChain& chain, int i, AnsatzParams& params, Adagrad& adagrad, int steps,
                              bool guard) {
  const Mat g = hermitian_part(chain.objective_coefficient(tnet::Site::control(i)));
  const double start = -linear_value(params, g);
  double cost = start;
  AnsatzParams trial = params;
  for (int k = 0; k < steps; ++k) {
    const RVec grad = -local_gradient(params, g);
    trial.phi = params.phi;
    adagrad.step(trial.phi, grad);
    const RVec delta = trial.phi - params.phi;
    double next = -linear_value(trial, g);
    for (int h = 0; guard && next > cost && h < kMaxStepHalvings; ++h) {
      trial.phi = params.phi + std::ldexp(1.0, -(h + 1)) * delta;
      next = -linear_value(trial, g);
    }
    if (guard && next > cost) continue;
    params.phi = trial.phi;
    cost = next;
  }
  chain.set_control(i, ansatz_choi(params));
  return cost <= start + 1e-12 * std::max(1.0, std::abs(start));
}

RVec global_gradient(tnet::MpoChain& chain, const AnsatzParams& params) {
  const int dim = chain.dim();
  Mat total = Mat::Zero(dim * dim, dim * dim);
  for (int i = 1; i < chain.n_queries(); ++i) total += chain.objective_coefficient(tnet::Site::control(i));
  return local_gradient(params, hermitian_part(total));
}

void update_variational_global(tnet::MpoChain& chain, AnsatzParams& params, Adagrad& adagrad, int steps,
                               bool guard) {
  if (chain.n_queries() < 2) return;
  for (int k = 0; k < steps; ++k) {
    const RVec grad = -global_gradient(chain, params);
    const double before = chain.objective();
    const RVec saved = params.phi;
    adagrad.step(params.phi, grad);
    const RVec delta = params.phi - saved;
    chain.set_all_controls(ansatz_choi(params));
    if (!guard) continue;
    int h = 0;
    while (chain.objective() < before && h < kMaxStepHalvings) {
      ++h;
      params.phi = saved + std::ldexp(1.0, -h) * delta;
      chain.set_all_controls(ansatz_choi(params));
    }
    if (chain.objective() < before) {
      params.phi = saved;
      chain.set_all_controls(ansatz_choi(params));
    }
  }
}

RVec full_objective_gradient(tnet::MpoChain& chain, const AnsatzParams& params, int site, double h) {
  std::vector<Mat> saved;
  for (int i = 1; i < chain.n_queries(); ++i) saved.push_back(chain.control(i));
  AnsatzParams probe = params;
  auto install = [&](const Mat& c) {
    if (site == 0)
      chain.set_all_controls(c);
    else
      chain.set_control(site, c);
  };
  const RVec grad = grad_objective(
      params.phi,
      [&](const RVec& phi) {
        probe.phi = phi;
        install(ansatz_choi(probe));
        return chain.objective();
      },
      h);
  for (int i = 1; i < chain.n_queries(); ++i) chain.set_control(i, saved[i - 1]);
  return grad;
}

int default_layers(int n_qubits) { return n_qubits == 1 ? 1 : 3; }

Strategy initial_strategy(int system_dim, int n_queries, int ancilla_dim, ControlMode mode, Rng& rng,
                          int ansatz_layers, bool random_angles) {
  if (n_queries < 1) throw std::invalid_argument("initial_strategy: N must be >= 1");
  Strategy s;
  s.n_queries = n_queries;
  s.ancilla_dim = ancilla_dim;
  s.mode = mode;
  const int dim = system_dim * ancilla_dim;
  const Vec psi = random_pure_state(dim, rng);
  s.rho0 = psi * psi.adjoint();
  const int count = is_identical(mode) ? 1 : n_queries - 1;
  if (is_variational(mode)) {
    const int n = qubits_for_dim(dim);
    const int layers = ansatz_layers > 0 ? ansatz_layers : default_layers(n);
    s.ansatz.assign(count, AnsatzParams::zeros(n, layers));
    if (random_angles) {
      std::uniform_real_distribution<double> angle(-M_PI, M_PI);
      for (auto& p : s.ansatz)
        for (Eigen::Index k = 0; k < p.phi.size(); ++k) p.phi(k) = angle(rng);
    }
  } else {
    for (int k = 0; k < count; ++k) s.controls.push_back(random_cptp_choi(dim, dim, rng));
  }
  return s;
}

Strategy warm_start_extend(const Strategy& s) {
  Strategy out = s;
  out.n_queries = s.n_queries + 1;
  if (is_identical(s.mode)) return out;
  const int dim = static_cast<int>(s.rho0.rows());
  if (is_variational(s.mode)) {
    if (s.ansatz.empty()) {
      const int n = qubits_for_dim(dim);
      out.ansatz.push_back(AnsatzParams::zeros(n, default_layers(n)));
    } else {
      out.ansatz.push_back(s.ansatz.back());
    }
  } else {
    out.controls.push_back(s.controls.empty() ? max_entangled_projector(dim) : s.controls.back());
  }
  return out;
}

tnet::MpoChain make_chain(const ChannelPair& channel, const Strategy& s) {
  tnet::MpoChain chain(channel, s.n_queries, s.ancilla_dim);
  chain.set_input_state(s.rho0);
  if (s.n_queries > 1) {
    if (is_identical(s.mode)) {
      chain.set_all_controls(s.control_choi(1));
    } else {
      for (int i = 1; i < s.n_queries; ++i) chain.set_control(i, s.control_choi(i));
    }
  }
  return chain;
}

std::atomic<bool>& stop_flag() {
  static std::atomic<bool> flag{false};
  return flag;
}

namespace {

constexpr std::uint64_t kPickStream = 0x9E3779B97F4A7C15ULL;

void check_finite(double v, int iteration) {
  if (!std::isfinite(v))
    throw NumericalError("non-finite objective at outer iteration " + std::to_string(iteration));
}

}  // namespace

OptimizationReport run(const ParamChannel& channel, double theta0, const Strategy& initial,
                       const RunSettings& settings, const RunHooks& hooks) {
  settings.validate();
  const auto t_start = std::chrono::steady_clock::now();
  const Strategy& origin = hooks.resume ? hooks.resume->strategy : initial;
  origin.validate(channel.dim());
  Strategy s = origin;
  const int n = s.n_queries;

  const auto backend = sdp::make_backend(settings.sdp_backend);
  Rng rng(settings.seed ^ kPickStream);
  if (hooks.resume && !hooks.resume->rng_state.empty()) {
    std::istringstream in(hooks.resume->rng_state);
    in >> rng;
  }

  const ChannelPair base = channel.pair_at(theta0);
  tnet::MpoChain chain = make_chain(base, s);

  std::vector<Adagrad> adagrad;
  if (is_variational(s.mode)) {
    adagrad.assign(s.ansatz.size(), Adagrad{settings.learning_rate, settings.adagrad_eps, {}});
    if (hooks.resume)
      for (std::size_t k = 0; k < adagrad.size() && k < hooks.resume->adagrad.size(); ++k)
        adagrad[k].accumulator = hooks.resume->adagrad[k];
  }

  OptimizationReport report;
  report.settings = settings;
  report.support_cutoff_used = settings.support_cutoff;
  std::vector<double>& trace = report.qfi_trace;
  int iteration = 0;
  if (hooks.resume) {
    trace = hooks.resume->qfi_trace;
    iteration = hooks.resume->iteration;
  }

  auto sync_strategy = [&] {
    s.rho0 = chain.input_state();
    if (s.mode == ControlMode::arbitrary_cptp)
      for (int i = 1; i < n; ++i) s.controls[i - 1] = chain.control(i);
  };
  auto make_checkpoint = [&] {
    sync_strategy();
    Checkpoint c;
    c.strategy = s;
    c.settings = settings;
    c.iteration = iteration;
    c.qfi_trace = trace;
    for (const auto& a : adagrad) c.adagrad.push_back(a.accumulator);
    std::ostringstream out;
    out << rng;
    c.rng_state = out.str();
    return c;
  };
  auto record_sdp = [&](const ControlUpdate& u) {
    ++report.sdp_solves;
    if (u.solution.status != sdp::SdpStatus::converged) ++report.sdp_unconverged;
    report.max_sdp_gap = std::max(report.max_sdp_gap, u.solution.gap);
    if (!u.accepted) ++report.rejected_updates;
  };

  SldResult current = update_X(chain, settings.support_cutoff);
  check_finite(current.qfi, iteration);
  if (trace.empty()) trace.push_back(current.qfi);

  report.status = "max_iters";
  int small_changes = 0;
  while (iteration < settings.max_outer_iters) {
    if (stop_flag().load()) {
      report.status = "interrupted";
      break;
    }
    ++iteration;
    if (settings.perturbation.enabled) {
      const double eps = settings.perturbation.eps0 * std::pow(settings.perturbation.decay, iteration - 1);
      chain.set_channel(mix_with_depolarizing(channel, eps).pair_at(theta0));
    }

    update_input_state(chain);
    switch (s.mode) {
      case ControlMode::arbitrary_cptp:
        for (int i = 1; i < n; ++i) {
          record_sdp(update_control_arbitrary(chain, i, *backend, settings.sdp));
          if (settings.x_between_controls && i + 1 < n) update_X(chain, settings.support_cutoff);
        }
        break;
      case ControlMode::identical_cptp:
        for (int p = 0; p < settings.identical_picks && n > 1; ++p) {
          const ControlUpdate u = update_control_identical(chain, s.controls[0], rng, *backend, settings.sdp,
                                                           settings.line_search_tol);
          record_sdp(u);
          if (u.accepted) s.controls[0] = u.choi;
          if (settings.x_between_controls) update_X(chain, settings.support_cutoff);
        }
        break;
      case ControlMode::variational_local:
        for (int i = 1; i < n; ++i) {
          ++report.local_visits;
          if (!update_variational_local(chain, i, s.ansatz[i - 1], adagrad[i - 1], settings.local_steps,
                                        settings.step_guard))
            ++report.descent_violations;
          if (settings.x_between_controls && i + 1 < n) update_X(chain, settings.support_cutoff);
        }
        break;
      case ControlMode::variational_global:
        update_variational_global(chain, s.ansatz[0], adagrad[0], settings.global_steps, settings.step_guard);
        break;
    }
    if (settings.perturbation.enabled) chain.set_channel(base);

    current = update_X(chain, settings.support_cutoff);
    check_finite(current.qfi, iteration);
    const double prev = trace.back();
    const double q = current.qfi;
    trace.push_back(q);

    const double jump = std::abs(q - prev);
    if ((iteration > 10 && jump > 0.5 * std::abs(prev)) || q < 0.5 * prev)
      report.discontinuity_iterations.push_back(iteration);

    if (is_variational(s.mode) && n > 1 && settings.gradient_check_every > 0 &&
        iteration % settings.gradient_check_every == 0) {
      const int site = s.mode == ControlMode::variational_global ? 0 : 1 + (iteration / settings.gradient_check_every - 1) % (n - 1);
      const AnsatzParams& p = site == 0 ? s.ansatz[0] : s.ansatz[site - 1];
      const RVec fast = site == 0 ? global_gradient(chain, p)
                                  : local_gradient(p, hermitian_part(chain.objective_coefficient(tnet::Site::control(site))));
      const RVec full = full_objective_gradient(chain, p, site);
      const double err = (fast - full).cwiseAbs().maxCoeff() / std::max(1.0, full.cwiseAbs().maxCoeff());
      report.max_gradient_check_error = std::max(report.max_gradient_check_error, err);
      ++report.gradient_checks;
    }

    if (jump <= settings.rel_tol * std::abs(q))
      ++small_changes;
    else
      small_changes = 0;

    if (hooks.on_checkpoint && settings.checkpoint_every > 0 && iteration % settings.checkpoint_every == 0)
      hooks.on_checkpoint(make_checkpoint());

    if (small_changes >= settings.stall_window) {
      report.status = "converged";
      break;
    }
  }

  report.final_qfi = current.qfi;
  report.final_objective = chain.objective();
  if (std::abs(report.final_objective - report.final_qfi) > 1e-8 * std::max(1.0, std::abs(report.final_qfi)))
    throw NumericalError("final QFI check failed: 2 f1 - f2 = " + std::to_string(report.final_objective) +
                         " but Tr(rho L^2) = " + std::to_string(report.final_qfi));
  report.iterations = iteration;
  sync_strategy();
  report.final_strategy = s;
  if (hooks.on_checkpoint) hooks.on_checkpoint(make_checkpoint());
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

OptimizationReport run(const ParamChannel& channel, double theta0, int n_queries, ControlMode mode,
                       int ancilla_dim, const RunSettings& settings, const RunHooks& hooks) {
  Rng rng(settings.seed);
  const Strategy initial = initial_strategy(channel.dim(), n_queries, ancilla_dim, mode, rng, settings.ansatz_layers);
  return run(channel, theta0, initial, settings, hooks);
}

}  // namespace qfitn::opt
