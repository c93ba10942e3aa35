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

#include "qfitn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <thread>

#include "qfitn/ansatz.hpp"
#include "qfitn/comb.hpp"
#include "qfitn/qfi.hpp"
#include "qfitn/serialize.hpp"
#include "qfitn/tnet.hpp"

namespace qfitn::cli {

using nlohmann::json;

namespace {

int parse_int(std::string_view text, std::string_view whole) {
  int v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw std::invalid_argument("bad N list '" + std::string(whole) + "': '" + std::string(text) + "' is not an integer");
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

Mat plus_state(int d) {
  const Vec psi = Vec::Constant(d, cplx(1.0 / std::sqrt(static_cast<double>(d)), 0.0));
  return psi * psi.adjoint();
}

opt::Strategy fixed_unitary_strategy(int d, int n_queries, const Mat& unitary) {
  opt::Strategy s;
  s.n_queries = n_queries;
  s.ancilla_dim = 1;
  s.mode = opt::ControlMode::identical_cptp;
  s.rho0 = plus_state(d);
  s.controls = {choi_of_unitary(unitary).mat};
  return s;
}

const char* const kBaselineNames[] = {"control_free_plus", "classical_nF1", "near_inverse_control"};

}  // namespace

std::vector<int> parse_n_list(std::string_view text) {
  std::vector<int> out;
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    if (item.empty()) throw std::invalid_argument("bad N list '" + std::string(text) + "': empty entry");
    const auto dots = item.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(parse_int(item, text));
    } else {
      const int lo = parse_int(trim(item.substr(0, dots)), text);
      const int hi = parse_int(trim(item.substr(dots + 2)), text);
      if (hi < lo) throw std::invalid_argument("bad N list '" + std::string(text) + "': empty range");
      for (int n = lo; n <= hi; ++n) out.push_back(n);
    }
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.front() < 1) throw std::invalid_argument("bad N list '" + std::string(text) + "': N must be >= 1");
  return out;
}

void RunConfig::validate() const {
  const auto& names = preset_names();
  if (std::find(names.begin(), names.end(), preset) == names.end())
    throw ConfigError("preset", "unknown preset '" + preset + "'");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p", "must lie in [0, 1]");
  try {
    (void)make_preset(preset, p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("p", e.what());
  }
  if (!std::isfinite(theta0)) throw ConfigError("theta0", "must be finite");
  if (n_values.empty()) throw ConfigError("N", "no query counts given");
  for (int n : n_values)
    if (n < 1) throw ConfigError("N", "query counts must be >= 1");
  if (!std::is_sorted(n_values.begin(), n_values.end()) ||
      std::adjacent_find(n_values.begin(), n_values.end()) != n_values.end())
    throw ConfigError("N", "query counts must be strictly ascending");
  if (ancilla_dim < 1) throw ConfigError("ancilla_dim", "must be >= 1");
  if (ansatz_qubits != 0) {
    if (!opt::is_variational(mode)) throw ConfigError("ansatz", "only valid for variational modes");
    const int dim = make_preset(preset, p).dim() * ancilla_dim;
    int expected = 0;
    try {
      expected = qubits_for_dim(dim);
    } catch (const std::exception& e) {
      throw ConfigError("ansatz.qubits", e.what());
    }
    if (ansatz_qubits != expected)
      throw ConfigError("ansatz.qubits", "system and ancilla span " + std::to_string(expected) + " qubits, not " +
                                             std::to_string(ansatz_qubits));
  }
  if (opt::is_variational(mode)) {
    try {
      (void)qubits_for_dim(make_preset(preset, p).dim() * ancilla_dim);
    } catch (const std::exception& e) {
      throw ConfigError("ancilla_dim", e.what());
    }
  }
  if (!std::isfinite(near_inverse_eps)) throw ConfigError("near_inverse_eps", "must be finite");
  if (starts < 1) throw ConfigError("starts", "must be >= 1");
  if (jobs < 1) throw ConfigError("jobs", "must be >= 1");
  if (out_dir.empty()) throw ConfigError("out", "must not be empty");
  try {
    settings.validate();
    (void)sdp::make_backend(settings.sdp_backend);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("settings", e.what());
  }
}

void config_from_json(const json& j, RunConfig& c) {
  try {
    io::ObjectReader r(j, "config");
    r.get("preset", c.preset);
    r.get("p", c.p);
    r.get("theta0", c.theta0);
    if (r.has("N")) {
      const json& n = r.at("N");
      if (n.is_number_integer()) {
        c.n_values = {n.get<int>()};
      } else if (n.is_string()) {
        try {
          c.n_values = parse_n_list(n.get<std::string>());
        } catch (const std::invalid_argument& e) {
          throw ConfigError("config.N", e.what());
        }
      } else if (n.is_array()) {
        c.n_values.clear();
        for (std::size_t k = 0; k < n.size(); ++k) {
          if (!n[k].is_number_integer())
            throw ConfigError("config.N[" + std::to_string(k) + "]", "expected an integer");
          c.n_values.push_back(n[k].get<int>());
        }
        std::sort(c.n_values.begin(), c.n_values.end());
        c.n_values.erase(std::unique(c.n_values.begin(), c.n_values.end()), c.n_values.end());
      } else {
        throw ConfigError("config.N", "expected an integer, a list or a range string");
      }
    }
    std::string mode;
    if (r.get("mode", mode)) {
      try {
        c.mode = opt::parse_mode(mode);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("config.mode", e.what());
      }
    }
    r.get("ancilla_dim", c.ancilla_dim);
    if (r.has("settings")) {
      const json& s = r.at("settings");
      if (s.is_object() && s.contains("seed"))
        throw ConfigError("config.settings.seed", "set the run seed with the top-level 'seed' key");
      io::settings_from_json(s, r.child("settings"), c.settings);
    }
    if (r.has("ansatz")) {
      io::ObjectReader a(r.at("ansatz"), r.child("ansatz"));
      a.get("qubits", c.ansatz_qubits);
      a.get("layers", c.settings.ansatz_layers);
      a.finish();
    }
    if (r.has("baselines")) {
      const json& b = r.at("baselines");
      if (!b.is_array()) throw ConfigError("config.baselines", "expected a list of baseline names");
      c.baselines = {};
      for (std::size_t k = 0; k < b.size(); ++k) {
        const std::string path = "config.baselines[" + std::to_string(k) + "]";
        if (!b[k].is_string()) throw ConfigError(path, "expected a string");
        const std::string name = b[k].get<std::string>();
        if (name == kBaselineNames[0])
          c.baselines.control_free_plus = true;
        else if (name == kBaselineNames[1])
          c.baselines.classical_nF1 = true;
        else if (name == kBaselineNames[2])
          c.baselines.near_inverse_control = true;
        else
          throw ConfigError(path, "unknown baseline '" + name +
                                      "' (expected control_free_plus, classical_nF1 or near_inverse_control)");
      }
    }
    r.get("near_inverse_eps", c.near_inverse_eps);
    std::string out;
    if (r.get("out", out)) c.out_dir = out;
    r.get("verify", c.verify);
    r.get("seed", c.seed);
    r.get("warm_start", c.warm_start);
    r.get("starts", c.starts);
    r.get("jobs", c.jobs);
    std::string resume;
    if (r.get("resume", resume)) c.resume = resume;
    r.finish();
  } catch (const io::FormatError& e) {
    throw ConfigError(e.path(), std::string(e.what()).substr(e.path().size() + 2));
  }
  c.settings.seed = c.seed;
}

RunConfig load_config(const std::filesystem::path& path) {
  json j;
  try {
    j = io::read_json_file(path);
  } catch (const io::FormatError& e) {
    throw ConfigError(e.path(), std::string(e.what()).substr(e.path().size() + 2));
  }
  RunConfig c;
  config_from_json(j, c);
  return c;
}

json to_json(const RunConfig& c) {
  json settings = io::to_json(c.settings);
  settings.erase("seed");
  json baselines = json::array();
  if (c.baselines.control_free_plus) baselines.push_back(kBaselineNames[0]);
  if (c.baselines.classical_nF1) baselines.push_back(kBaselineNames[1]);
  if (c.baselines.near_inverse_control) baselines.push_back(kBaselineNames[2]);
  json j = {
      {"preset", c.preset},
      {"p", c.p},
      {"theta0", c.theta0},
      {"N", c.n_values},
      {"mode", opt::to_string(c.mode)},
      {"ancilla_dim", c.ancilla_dim},
      {"settings", settings},
      {"baselines", baselines},
      {"near_inverse_eps", c.near_inverse_eps},
      {"out", c.out_dir.string()},
      {"verify", c.verify},
      {"seed", c.seed},
      {"warm_start", c.warm_start},
      {"starts", c.starts},
      {"jobs", c.jobs},
  };
  if (c.ansatz_qubits != 0) j["ansatz"] = {{"qubits", c.ansatz_qubits}};
  if (c.resume) j["resume"] = c.resume->string();
  return j;
}

double strategy_qfi(const ChannelPair& channel, const opt::Strategy& s) {
  tnet::MpoChain chain = opt::make_chain(channel, s);
  return sld(chain.output_state(), chain.output_derivative()).qfi;
}

double baseline_control_free(const ParamChannel& channel, double theta0, int n_queries) {
  const int d = channel.dim();
  return strategy_qfi(channel.pair_at(theta0), fixed_unitary_strategy(d, n_queries, identity(d)));
}

double baseline_classical(const ParamChannel& channel, double theta0, int n_queries, int ancilla_dim) {
  return n_queries * qfi_single_channel_opt(channel, theta0, ancilla_dim);
}

double baseline_near_inverse(const ParamChannel& channel, double theta0, int n_queries, double eps) {
  if (channel.dim() != 2) throw DimensionError("baseline_near_inverse: needs a qubit channel");
  const Mat u = phase_unitary(theta0 + eps).adjoint();
  return strategy_qfi(channel.pair_at(theta0), fixed_unitary_strategy(2, n_queries, u));
}

std::string csv_header() {
  return "N,mode,ancilla_dim,qfi,qfi_per_N,qfi_per_N2,baseline_control_free_plus,baseline_classical_nF1,"
         "baseline_near_inverse_control,iterations,seconds";
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

double parse_double(const std::string& cell, int line) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (cell.empty() || end != begin + cell.size())
    throw std::invalid_argument("csv line " + std::to_string(line) + ": '" + cell + "' is not a number");
  return v;
}

std::optional<double> parse_optional(const std::string& cell, int line) {
  if (cell.empty()) return std::nullopt;
  return parse_double(cell, line);
}

int parse_csv_int(const std::string& cell, int line) {
  try {
    return parse_int(cell, cell);
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("csv line " + std::to_string(line) + ": '" + cell + "' is not an integer");
  }
}

}  // namespace

std::string emit_csv(const std::vector<ResultRow>& rows) {
  std::string out = csv_header() + "\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + "," + r.mode + "," + std::to_string(r.ancilla_dim) + "," + fmt(r.qfi) + "," +
           fmt(r.qfi_per_n) + "," + fmt(r.qfi_per_n2) + "," + fmt(r.control_free_plus) + "," + fmt(r.classical_nF1) +
           "," + fmt(r.near_inverse_control) + "," + std::to_string(r.iterations) + "," + fmt(r.seconds) + "\n";
  }
  return out;
}

std::vector<ResultRow> parse_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || trim(line) != csv_header())
    throw std::invalid_argument("csv: missing or unexpected header");
  std::vector<ResultRow> rows;
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::string_view rest = trim(line);
    while (true) {
      const auto comma = rest.find(',');
      cells.emplace_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cells.size() != 11)
      throw std::invalid_argument("csv line " + std::to_string(number) + ": expected 11 columns, got " +
                                  std::to_string(cells.size()));
    ResultRow r;
    r.n = parse_csv_int(cells[0], number);
    r.mode = cells[1];
    r.ancilla_dim = parse_csv_int(cells[2], number);
    r.qfi = parse_double(cells[3], number);
    r.qfi_per_n = parse_double(cells[4], number);
    r.qfi_per_n2 = parse_double(cells[5], number);
    r.control_free_plus = parse_optional(cells[6], number);
    r.classical_nF1 = parse_optional(cells[7], number);
    r.near_inverse_control = parse_optional(cells[8], number);
    r.iterations = parse_csv_int(cells[9], number);
    r.seconds = parse_double(cells[10], number);
    rows.push_back(std::move(r));
  }
  return rows;
}

VerifyResult verify_against_oracle(const ChannelPair& channel, const opt::Strategy& s, double tol) {
  tnet::MpoChain chain = opt::make_chain(channel, s);
  std::vector<Mat> controls;
  for (int i = 1; i < s.n_queries; ++i) controls.push_back(s.control_choi(i));
  const comb::DenseOutput dense =
      comb::dense_strategy_output(channel.choi, channel.dchoi, controls, s.rho0, s.n_queries, s.ancilla_dim);

  VerifyResult v;
  auto check = [&](double err, const char* what) {
    ++v.checks;
    v.max_error = std::max(v.max_error, err);
    if (!(err <= tol))
      throw NumericalError(std::string("oracle check failed for ") + what + " at N = " +
                           std::to_string(s.n_queries) + ": error " + fmt(err) + " > " + fmt(tol));
  };
  const Mat rho = chain.output_state();
  const Mat rho_dot = chain.output_derivative();
  check((rho - dense.state).cwiseAbs().maxCoeff(), "output state");
  check((rho_dot - dense.derivative).cwiseAbs().maxCoeff(), "output derivative");

  const Mat l = sld(dense.state, dense.derivative).L;
  chain.set_observable(l);
  const double f1 = trace_product(dense.derivative, l).real();
  const double f2 = trace_product(dense.state, l * l).real();
  check(std::abs(chain.f1() - f1) / std::max(1.0, std::abs(f1)), "f1");
  check(std::abs(chain.f2() - f2) / std::max(1.0, std::abs(f2)), "f2");
  return v;
}

std::filesystem::path checkpoint_path(const std::filesystem::path& out_dir, int n_queries) {
  return out_dir / ("checkpoint_N" + std::to_string(n_queries) + ".json");
}

opt::OptimizationReport best_of_starts(const ParamChannel& channel, const RunConfig& config, int n_queries,
                                       int& chosen_start, const opt::RunHooks& hooks, const opt::Strategy* warm) {
  std::optional<opt::OptimizationReport> best;
  chosen_start = 0;
  auto rotation = [&](const opt::OptimizationReport& r) {
    const Mat u = ansatz_unitary(r.final_strategy.ansatz.front());
    return std::abs(u.trace()) / static_cast<double>(u.rows());
  };
  int starts = config.starts;
  opt::Strategy extended;
  if (warm) {
    extended = *warm;
    while (extended.n_queries < n_queries) extended = opt::warm_start_extend(extended);
    if (opt::is_identical(config.mode) || warm->n_queries == n_queries) starts = 1;
  }
  for (int k = 0; k < starts; ++k) {
    opt::RunSettings settings = config.settings;
    settings.seed = config.seed + static_cast<std::uint64_t>(k);
    Rng rng(settings.seed);
    opt::Strategy initial = opt::initial_strategy(channel.dim(), n_queries, config.ancilla_dim, config.mode, rng,
                                                  settings.ansatz_layers, k > 0);
    if (warm) {
      // Keep the warm prefix; start 0 keeps the copied controls as well.
      const std::size_t prefix = k == 0 ? initial.controls.size() + initial.ansatz.size()
                                        : static_cast<std::size_t>(warm->n_queries - 1);
      for (std::size_t i = 0; i < initial.controls.size(); ++i)
        if (i < prefix) initial.controls[i] = extended.controls[i];
      for (std::size_t i = 0; i < initial.ansatz.size(); ++i)
        if (i < prefix) initial.ansatz[i] = extended.ansatz[i];
      initial.rho0 = extended.rho0;
    }
    opt::OptimizationReport r = opt::run(channel, config.theta0, initial, settings, hooks);
    if (r.status == "interrupted") {
      chosen_start = k;
      return r;
    }
    bool take = !best;
    if (best) {
      const double scale = std::max({1.0, std::abs(r.final_qfi), std::abs(best->final_qfi)});
      if (opt::is_variational(config.mode) && std::abs(r.final_qfi - best->final_qfi) <= 1e-3 * scale)
        take = rotation(r) > rotation(*best);
      else
        take = r.final_qfi > best->final_qfi;
    }
    if (take) {
      best = std::move(r);
      chosen_start = k;
    }
  }
  return *best;
}

namespace {

json to_json(const ResultRow& r) {
  json j = {{"N", r.n},
            {"mode", r.mode},
            {"ancilla_dim", r.ancilla_dim},
            {"qfi", r.qfi},
            {"qfi_per_N", r.qfi_per_n},
            {"qfi_per_N2", r.qfi_per_n2},
            {"iterations", r.iterations},
            {"seconds", r.seconds}};
  if (r.control_free_plus) j["baseline_control_free_plus"] = *r.control_free_plus;
  if (r.classical_nF1) j["baseline_classical_nF1"] = *r.classical_nF1;
  if (r.near_inverse_control) j["baseline_near_inverse_control"] = *r.near_inverse_control;
  return j;
}

json to_json(const SweepPoint& p) {
  json j = to_json(p.row);
  j["status"] = p.report.status;
  j["chosen_start"] = p.chosen_start;
  if (p.check) j["oracle_check"] = {{"checks", p.check->checks}, {"max_error", p.check->max_error}};
  j["report"] = io::to_json(p.report);
  return j;
}

class Sweep {
 public:
  Sweep(const RunConfig& config, const ExperimentHooks& hooks)
      : config_(config), hooks_(hooks), channel_(make_preset(config.preset, config.p)),
        pair_(channel_.pair_at(config.theta0)) {}

  ExperimentResult run() {
    if (hooks_.write_files) std::filesystem::create_directories(config_.out_dir);
    if (config_.resume) {
      try {
        resume_ = io::load_checkpoint(*config_.resume);
      } catch (const io::FormatError& e) {
        throw ConfigError("resume", e.what());
      }
      const int n = resume_->strategy.n_queries;
      if (std::find(config_.n_values.begin(), config_.n_values.end(), n) == config_.n_values.end())
        throw ConfigError("resume", "checkpoint is for N = " + std::to_string(n) + ", which is not in the N list");
      if (resume_->strategy.mode != config_.mode || resume_->strategy.ancilla_dim != config_.ancilla_dim)
        throw ConfigError("resume", "checkpoint mode or ancilla dimension differs from the configuration");
    }
    if (config_.baselines.classical_nF1) f1_ = qfi_single_channel_opt(channel_, config_.theta0, config_.ancilla_dim);

    if (config_.warm_start || config_.jobs <= 1 || config_.n_values.size() <= 1)
      run_serial();
    else
      run_pool();
    return result_;
  }

 private:
  std::vector<int> pending() const {
    std::vector<int> out;
    for (int n : config_.n_values)
      if (!resume_ || n >= resume_->strategy.n_queries) out.push_back(n);
    return out;
  }

  opt::RunHooks hooks_for(int n) {
    opt::RunHooks h;
    if (hooks_.write_files)
      h.on_checkpoint = [this, n](const opt::Checkpoint& c) {
        std::lock_guard lock(io_mutex_);
        io::save_checkpoint(checkpoint_path(config_.out_dir, n), c);
      };
    if (resume_ && resume_->strategy.n_queries == n) h.resume = &*resume_;
    return h;
  }

  SweepPoint optimize(int n, const std::optional<opt::Strategy>& warm) {
    SweepPoint point;
    const opt::RunHooks h = hooks_for(n);
    if (h.resume) {
      opt::RunSettings settings = config_.settings;
      settings.seed = config_.seed;
      point.report = opt::run(channel_, config_.theta0, opt::Strategy{}, settings, h);
    } else {
      point.report = best_of_starts(channel_, config_, n, point.chosen_start, h, warm ? &*warm : nullptr);
    }
    finish_point(point, n);
    return point;
  }

  void finish_point(SweepPoint& p, int n) {
    const auto& r = p.report;
    ResultRow& row = p.row;
    row.n = n;
    row.mode = opt::to_string(config_.mode);
    row.ancilla_dim = config_.ancilla_dim;
    row.qfi = r.final_qfi;
    row.qfi_per_n = r.final_qfi / n;
    row.qfi_per_n2 = r.final_qfi / (static_cast<double>(n) * n);
    row.iterations = r.iterations;
    row.seconds = r.wall_time;
    if (r.status == "interrupted") return;
    if (config_.baselines.control_free_plus) row.control_free_plus = baseline_control_free(channel_, config_.theta0, n);
    if (config_.baselines.classical_nF1) row.classical_nF1 = n * f1_;
    if (config_.baselines.near_inverse_control)
      row.near_inverse_control = baseline_near_inverse(channel_, config_.theta0, n, config_.near_inverse_eps);
    if (config_.verify && n <= kVerifyMaxQueries) p.check = verify_against_oracle(pair_, r.final_strategy);
  }

  void log_point(const SweepPoint& p) {
    if (!hooks_.log) return;
    char buf[160];
    std::snprintf(buf, sizeof buf, "N=%d qfi=%.10g qfi/N=%.6f iterations=%d %s %.2fs", p.row.n, p.row.qfi,
                  p.row.qfi_per_n, p.row.iterations, p.report.status.c_str(), p.row.seconds);
    *hooks_.log << buf;
    if (p.check) *hooks_.log << " oracle max error " << fmt(p.check->max_error);
    *hooks_.log << std::endl;
  }

  void record(SweepPoint point) {
    std::lock_guard lock(io_mutex_);
    log_point(point);
    if (point.report.status == "interrupted") {
      result_.interrupted = true;
      result_.partial = std::move(point);
    } else {
      result_.points.push_back(std::move(point));
      std::sort(result_.points.begin(), result_.points.end(),
                [](const SweepPoint& a, const SweepPoint& b) { return a.row.n < b.row.n; });
    }
    flush();
  }

  void flush() {
    if (!hooks_.write_files) return;
    std::vector<ResultRow> rows;
    for (const auto& p : result_.points) rows.push_back(p.row);
    io::write_atomic(config_.out_dir / "results.csv", emit_csv(rows));
    io::write_atomic(config_.out_dir / "report.json", to_json(result_, config_).dump(1) + "\n");
  }

  void run_serial() {
    std::optional<opt::Strategy> warm;
    for (int n : pending()) {
      if (opt::stop_flag().load()) {
        result_.interrupted = true;
        break;
      }
      SweepPoint point = optimize(n, config_.warm_start ? warm : std::nullopt);
      const bool stopped = point.report.status == "interrupted";
      warm = point.report.final_strategy;
      record(std::move(point));
      if (stopped) break;
    }
    flush();
  }

  void run_pool() {
    const std::vector<int> ns = pending();
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
      while (!opt::stop_flag().load()) {
        const std::size_t k = next.fetch_add(1);
        if (k >= ns.size()) return;
        try {
          record(optimize(ns[k], std::nullopt));
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          opt::stop_flag().store(true);
          return;
        }
      }
    };
    const int threads = std::min<int>(config_.jobs, static_cast<int>(ns.size()));
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    if (opt::stop_flag().load()) result_.interrupted = true;
    std::lock_guard lock(io_mutex_);
    flush();
  }

  static constexpr int kVerifyMaxQueries = 4;

  const RunConfig& config_;
  const ExperimentHooks& hooks_;
  ParamChannel channel_;
  ChannelPair pair_;
  std::optional<opt::Checkpoint> resume_;
  double f1_ = 0.0;
  std::mutex io_mutex_;
  ExperimentResult result_;
};

}  // namespace

ExperimentResult run_experiment(const RunConfig& config, const ExperimentHooks& hooks) {
  config.validate();
  return Sweep(config, hooks).run();
}

json to_json(const ExperimentResult& r, const RunConfig& config) {
  json points = json::array();
  for (const auto& p : r.points) points.push_back(to_json(p));
  json j = {{"config", to_json(config)}, {"points", points}, {"interrupted", r.interrupted}};
  if (r.partial) j["partial"] = to_json(*r.partial);
  return j;
}

}  // namespace qfitn::cli
