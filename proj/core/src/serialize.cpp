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

#include "qfitn/serialize.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <system_error>

namespace qfitn::io {

ObjectReader::ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
  if (!j_.is_object()) throw FormatError(path_, std::string("expected an object, got ") + j_.type_name());
}

const json& ObjectReader::at(const std::string& key) {
  if (!has(key)) throw FormatError(child(key), "missing");
  if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) seen_.push_back(key);
  return j_.at(key);
}

void ObjectReader::finish() const {
  for (const auto& [key, value] : j_.items())
    if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) throw FormatError(child(key), "unknown key");
}

namespace {

std::string index_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const json& expect_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw FormatError(path, std::string("expected an array, got ") + j.type_name());
  return j;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw FormatError(path, std::string("expected a number, got ") + j.type_name());
  return j.get<double>();
}

}  // namespace

json to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const json& j, const std::string& path) {
  expect_array(j, path);
  const auto rows = j.size();
  if (rows == 0) throw FormatError(path, "empty matrix");
  const auto cols = expect_array(j[0], index_path(path, 0)).size();
  Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rp = index_path(path, r);
    const json& row = expect_array(j[r], rp);
    if (row.size() != cols) throw FormatError(rp, "ragged matrix row");
    for (std::size_t c = 0; c < cols; ++c) {
      const std::string cp = index_path(rp, c);
      const json& entry = expect_array(row[c], cp);
      if (entry.size() != 2) throw FormatError(cp, "expected an [re, im] pair");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          cplx(number(entry[0], cp + "[0]"), number(entry[1], cp + "[1]"));
    }
  }
  return m;
}

json to_json(const RVec& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

RVec rvec_from_json(const json& j, const std::string& path) {
  expect_array(j, path);
  RVec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v(static_cast<Eigen::Index>(k)) = number(j[k], index_path(path, k));
  return v;
}

json to_json(const AnsatzParams& p) {
  return {{"n_qubits", p.n_qubits}, {"n_layers", p.n_layers}, {"phi", to_json(p.phi)}};
}

AnsatzParams ansatz_from_json(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  AnsatzParams p;
  r.get("n_qubits", p.n_qubits);
  r.get("n_layers", p.n_layers);
  p.phi = rvec_from_json(r.at("phi"), r.child("phi"));
  r.finish();
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(path, e.what());
  }
  return p;
}

json to_json(const opt::Strategy& s) {
  json controls = json::array();
  for (const auto& c : s.controls) controls.push_back(to_json(c));
  json ansatz = json::array();
  for (const auto& a : s.ansatz) ansatz.push_back(to_json(a));
  return {{"n_queries", s.n_queries}, {"ancilla_dim", s.ancilla_dim}, {"mode", opt::to_string(s.mode)},
          {"rho0", to_json(s.rho0)},  {"controls", controls},           {"ansatz", ansatz}};
}

opt::Strategy strategy_from_json(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  opt::Strategy s;
  r.get("n_queries", s.n_queries);
  r.get("ancilla_dim", s.ancilla_dim);
  std::string mode;
  if (r.get("mode", mode)) {
    try {
      s.mode = opt::parse_mode(mode);
    } catch (const std::invalid_argument& e) {
      throw FormatError(r.child("mode"), e.what());
    }
  }
  s.rho0 = mat_from_json(r.at("rho0"), r.child("rho0"));
  const json& controls = expect_array(r.at("controls"), r.child("controls"));
  for (std::size_t k = 0; k < controls.size(); ++k)
    s.controls.push_back(mat_from_json(controls[k], index_path(r.child("controls"), k)));
  const json& ansatz = expect_array(r.at("ansatz"), r.child("ansatz"));
  for (std::size_t k = 0; k < ansatz.size(); ++k)
    s.ansatz.push_back(ansatz_from_json(ansatz[k], index_path(r.child("ansatz"), k)));
  r.finish();
  return s;
}

json to_json(const opt::RunSettings& s) {
  return {
      {"max_outer_iters", s.max_outer_iters},
      {"rel_tol", s.rel_tol},
      {"stall_window", s.stall_window},
      {"seed", s.seed},
      {"perturbation", {{"enabled", s.perturbation.enabled}, {"eps0", s.perturbation.eps0},
                        {"decay", s.perturbation.decay}}},
      {"sdp", {{"tol", s.sdp.tol}, {"max_iters", s.sdp.max_iters}, {"rho", s.sdp.rho}, {"ppt", s.sdp.ppt}}},
      {"sdp_backend", s.sdp_backend},
      {"learning_rate", s.learning_rate},
      {"adagrad_eps", s.adagrad_eps},
      {"line_search_tol", s.line_search_tol},
      {"local_steps", s.local_steps},
      {"global_steps", s.global_steps},
      {"identical_picks", s.identical_picks},
      {"ansatz_layers", s.ansatz_layers},
      {"x_between_controls", s.x_between_controls},
      {"step_guard", s.step_guard},
      {"gradient_check_every", s.gradient_check_every},
      {"support_cutoff", s.support_cutoff},
      {"checkpoint_every", s.checkpoint_every},
  };
}

void settings_from_json(const json& j, const std::string& path, opt::RunSettings& s) {
  ObjectReader r(j, path);
  r.get("max_outer_iters", s.max_outer_iters);
  r.get("rel_tol", s.rel_tol);
  r.get("stall_window", s.stall_window);
  r.get("seed", s.seed);
  if (r.has("perturbation")) {
    ObjectReader p(r.at("perturbation"), r.child("perturbation"));
    p.get("enabled", s.perturbation.enabled);
    p.get("eps0", s.perturbation.eps0);
    p.get("decay", s.perturbation.decay);
    p.finish();
  }
  if (r.has("sdp")) {
    ObjectReader p(r.at("sdp"), r.child("sdp"));
    p.get("tol", s.sdp.tol);
    p.get("max_iters", s.sdp.max_iters);
    p.get("rho", s.sdp.rho);
    p.get("ppt", s.sdp.ppt);
    p.finish();
  }
  r.get("sdp_backend", s.sdp_backend);
  r.get("learning_rate", s.learning_rate);
  r.get("adagrad_eps", s.adagrad_eps);
  r.get("line_search_tol", s.line_search_tol);
  r.get("local_steps", s.local_steps);
  r.get("global_steps", s.global_steps);
  r.get("identical_picks", s.identical_picks);
  r.get("ansatz_layers", s.ansatz_layers);
  r.get("x_between_controls", s.x_between_controls);
  r.get("step_guard", s.step_guard);
  r.get("gradient_check_every", s.gradient_check_every);
  r.get("support_cutoff", s.support_cutoff);
  r.get("checkpoint_every", s.checkpoint_every);
  r.finish();
}

json to_json(const opt::OptimizationReport& r) {
  return {
      {"qfi_trace", r.qfi_trace},
      {"final_qfi", r.final_qfi},
      {"final_objective", r.final_objective},
      {"status", r.status},
      {"iterations", r.iterations},
      {"wall_time", r.wall_time},
      {"support_cutoff_used", r.support_cutoff_used},
      {"sdp", {{"solves", r.sdp_solves}, {"unconverged", r.sdp_unconverged}, {"max_gap", r.max_sdp_gap}}},
      {"rejected_updates", r.rejected_updates},
      {"discontinuity_iterations", r.discontinuity_iterations},
      {"local_visits", r.local_visits},
      {"descent_violations", r.descent_violations},
      {"gradient_checks", {{"count", r.gradient_checks}, {"max_error", r.max_gradient_check_error}}},
      {"settings", to_json(r.settings)},
      {"final_strategy", to_json(r.final_strategy)},
  };
}

json to_json(const opt::Checkpoint& c) {
  json adagrad = json::array();
  for (const auto& a : c.adagrad) adagrad.push_back(to_json(a));
  return {
      {"format_version", opt::Checkpoint::kFormatVersion},
      {"iteration", c.iteration},
      {"qfi_trace", c.qfi_trace},
      {"adagrad", adagrad},
      {"rng_state", c.rng_state},
      {"settings", to_json(c.settings)},
      {"strategy", to_json(c.strategy)},
  };
}

opt::Checkpoint checkpoint_from_json(const json& j) {
  ObjectReader r(j, "checkpoint");
  int version = 0;
  if (!r.get("format_version", version)) throw FormatError(r.child("format_version"), "missing");
  if (version != opt::Checkpoint::kFormatVersion)
    throw FormatError(r.child("format_version"), "unsupported version " + std::to_string(version) +
                                                     " (expected " +
                                                     std::to_string(opt::Checkpoint::kFormatVersion) + ")");
  opt::Checkpoint c;
  r.get("iteration", c.iteration);
  const json& trace = expect_array(r.at("qfi_trace"), r.child("qfi_trace"));
  for (std::size_t k = 0; k < trace.size(); ++k) c.qfi_trace.push_back(number(trace[k], index_path(r.child("qfi_trace"), k)));
  const json& adagrad = expect_array(r.at("adagrad"), r.child("adagrad"));
  for (std::size_t k = 0; k < adagrad.size(); ++k)
    c.adagrad.push_back(rvec_from_json(adagrad[k], index_path(r.child("adagrad"), k)));
  r.get("rng_state", c.rng_state);
  settings_from_json(r.at("settings"), r.child("settings"), c.settings);
  c.strategy = strategy_from_json(r.at("strategy"), r.child("strategy"));
  r.finish();
  return c;
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

void save_checkpoint(const std::filesystem::path& path, const opt::Checkpoint& c) {
  write_atomic(path, to_json(c).dump(1) + "\n");
}

opt::Checkpoint load_checkpoint(const std::filesystem::path& path) { return checkpoint_from_json(read_json_file(path)); }

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path.string(), "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw FormatError(path.string() + ":" + std::to_string(line), "syntax error: " + std::string(e.what()));
  }
}

}  // namespace qfitn::io
