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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "qfitn/experiment.hpp"
#include "qfitn/random.hpp"
#include "qfitn/serialize.hpp"

using namespace qfitn;
using namespace qfitn::cli;
using nlohmann::json;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("qfitn_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("N lists") {
  CHECK(parse_n_list("5") == std::vector<int>{5});
  CHECK(parse_n_list("2..5") == std::vector<int>{2, 3, 4, 5});
  CHECK(parse_n_list("20, 10,50") == std::vector<int>{10, 20, 50});
  CHECK(parse_n_list("2..4,3,8") == std::vector<int>{2, 3, 4, 8});
  CHECK_THROWS_AS(parse_n_list(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_n_list("5..2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_n_list("0,3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_n_list("3,x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_n_list("3,,4"), std::invalid_argument);
}

TEST_CASE("CSV emit and parse are inverse") {
  std::vector<ResultRow> rows(3);
  rows[0] = {2, "arbitrary_cptp", 1, 3.5967946336033663, 1.7983973168016831, 0.1, 3.3, std::nullopt, 0.1 + 0.2,
             200, 0.060000642999999999};
  rows[1] = {10, "identical_cptp", 2, 1e-300, 1e300, 5e-324, std::nullopt, 12.0, std::nullopt, 0, 1.0 / 3.0};
  rows[2] = {100, "variational_global", 1, 859.123456789, 8.59123456789, 0.0859123456789, 1.0, 2.0, 3.0, 57, 0.0};
  const std::string text = emit_csv(rows);
  CHECK(text.rfind(csv_header() + "\n", 0) == 0);
  CHECK(parse_csv(text) == rows);
  CHECK(emit_csv(parse_csv(text)) == text);
  CHECK(parse_csv(csv_header() + "\n").empty());
  CHECK_THROWS_AS(parse_csv("N,qfi\n1,2\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_csv(csv_header() + "\n1,a,1,2\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_csv(csv_header() + "\n1,a,1,x,1,1,,,,3,4\n"), std::invalid_argument);
}

TEST_CASE("config parsing: defaults, strict keys, field paths") {
  RunConfig c;
  config_from_json(json::parse(R"({"preset": "amplitude_damping", "N": "2..4", "mode": "identical_cptp",
                                    "ancilla_dim": 2, "baselines": ["classical_nF1"], "seed": 9,
                                    "settings": {"max_outer_iters": 7, "sdp": {"ppt": true}}})"),
                   c);
  CHECK(c.preset == "amplitude_damping");
  CHECK(c.n_values == std::vector<int>{2, 3, 4});
  CHECK(c.mode == opt::ControlMode::identical_cptp);
  CHECK(c.ancilla_dim == 2);
  CHECK(c.baselines.classical_nF1);
  CHECK_FALSE(c.baselines.control_free_plus);
  CHECK(c.seed == 9);
  CHECK(c.settings.seed == 9);
  CHECK(c.settings.max_outer_iters == 7);
  CHECK(c.settings.sdp.ppt);
  CHECK(c.p == 0.1);
  CHECK_NOTHROW(c.validate());

  auto field_of = [](const char* text) {
    RunConfig r;
    try {
      config_from_json(json::parse(text), r);
      r.validate();
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  CHECK(field_of(R"({"preset": "bit_flip", "Nmax": 4})") == "config.Nmax");
  CHECK(field_of(R"({"settings": {"sdp": {"tolerance": 1}}})") == "config.settings.sdp.tolerance");
  CHECK(field_of(R"({"N": [3, "x"]})") == "config.N[1]");
  CHECK(field_of(R"({"mode": "best"})") == "config.mode");
  CHECK(field_of(R"({"baselines": ["qec"]})") == "config.baselines[0]");
  CHECK(field_of(R"({"settings": {"seed": 3}})") == "config.settings.seed");
  CHECK(field_of(R"({"preset": "depolarizing"})") == "preset");
  CHECK(field_of(R"({"p": 2.0})") == "p");
  CHECK(field_of(R"({"ancilla_dim": 3, "mode": "variational_local"})") == "ancilla_dim");
  CHECK(field_of(R"({"ansatz": {"qubits": 1}})") == "ansatz");
  CHECK(field_of(R"({"ansatz": {"qubits": 1}, "mode": "variational_global", "ancilla_dim": 2})") == "ansatz.qubits");
  CHECK(field_of(R"({"settings": {"sdp_backend": "simplex"}})") == "settings");
  CHECK(field_of(R"({"verify": 1})") == "config.verify");
  CHECK(field_of(R"({"N": "3", "starts": 2})") == "<none>");
}

TEST_CASE("config echo reproduces the configuration") {
  RunConfig c;
  c.preset = "dephasing_direction";
  c.n_values = {5, 10};
  c.mode = opt::ControlMode::variational_global;
  c.ancilla_dim = 2;
  c.ansatz_qubits = 2;
  c.settings.ansatz_layers = 2;
  c.baselines.near_inverse_control = true;
  c.seed = 77;
  c.starts = 3;
  RunConfig d;
  config_from_json(json::parse(to_json(c).dump()), d);
  CHECK(to_json(d) == to_json(c));
  CHECK(d.settings.seed == 77);
  CHECK(d.settings.ansatz_layers == 2);
}

TEST_CASE("config files: syntax errors carry a line number") {
  const auto dir = temp_dir("cfg");
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "c.json");
    f << "{\n  \"preset\": \"bit_flip\",\n  \"N\": [2, 3\n}\n";
  }
  try {
    (void)load_config(dir / "c.json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == (dir / "c.json").string() + ":4");
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("baselines") {
  const ParamChannel noiseless = preset_bit_flip(0.0);
  for (int n : {1, 3, 7}) {
    CHECK(baseline_control_free(noiseless, 1.0, n) == doctest::Approx(double(n * n)).epsilon(1e-10));
    // Controls commuting with the signal leave the phase accumulation intact.
    CHECK(baseline_near_inverse(noiseless, 1.0, n, 0.01) == doctest::Approx(double(n * n)).epsilon(1e-10));
  }
  const ParamChannel ch = preset_bit_flip(0.1);
  const double f1 = baseline_classical(ch, 1.0, 1, 1);
  CHECK(baseline_classical(ch, 1.0, 5, 1) == doctest::Approx(5 * f1));
  CHECK(baseline_control_free(ch, 1.0, 1) <= f1 + 1e-9);
  double prev = 0.0;
  for (int n : {5, 10, 20, 40}) {
    const double v = baseline_near_inverse(ch, 1.0, n, 0.01);
    CHECK(v / n > prev);
    CHECK(v / n < 9.0);
    prev = v / n;
  }
}

TEST_CASE("oracle verification of random strategies") {
  Rng rng(101);
  const ChannelPair pair = preset_amplitude_damping(0.1).pair_at(1.0);
  for (int a : {1, 2})
    for (int n : {2, 3}) {
      const opt::Strategy s = opt::initial_strategy(2, n, a, opt::ControlMode::arbitrary_cptp, rng);
      const VerifyResult v = verify_against_oracle(pair, s);
      CHECK(v.checks == 4);
      CHECK(v.max_error < 1e-10);
    }
  const opt::Strategy s = opt::initial_strategy(2, 2, 1, opt::ControlMode::arbitrary_cptp, rng);
  CHECK_THROWS_AS(verify_against_oracle(pair, s, -1.0), NumericalError);
}

TEST_CASE("a small sweep writes consistent, reproducible outputs") {
  const auto dir = temp_dir("sweep");
  RunConfig c;
  c.preset = "bit_flip";
  c.n_values = {2, 3, 4};
  c.mode = opt::ControlMode::identical_cptp;
  c.settings.max_outer_iters = 15;
  c.baselines = {true, true, true};
  c.verify = true;
  c.out_dir = dir;
  const ExperimentResult r = run_experiment(c);
  REQUIRE(r.points.size() == 3);
  CHECK_FALSE(r.interrupted);
  const auto rows = parse_csv(read_file(dir / "results.csv"));
  REQUIRE(rows.size() == 3);
  const ChannelPair pair = preset_bit_flip(0.1).pair_at(1.0);
  for (std::size_t k = 0; k < 3; ++k) {
    const SweepPoint& p = r.points[k];
    CHECK(rows[k] == p.row);
    CHECK(p.row.n == c.n_values[k]);
    REQUIRE(p.check.has_value());
    CHECK(p.check->max_error < 1e-10);
    // Reported QFI is the re-verified value of the final strategy.
    CHECK(p.row.qfi == doctest::Approx(strategy_qfi(pair, p.report.final_strategy)).epsilon(1e-10));
    CHECK(p.row.qfi_per_n == p.row.qfi / p.row.n);
    CHECK(p.row.control_free_plus.has_value());
    CHECK(std::filesystem::exists(checkpoint_path(dir, p.row.n)));
  }
  const json report = io::read_json_file(dir / "report.json");
  CHECK(report.at("points").size() == 3);
  RunConfig echoed;
  config_from_json(report.at("config"), echoed);
  CHECK(to_json(echoed) == to_json(c));

  // Same config, same numbers.
  RunConfig again = c;
  again.out_dir = dir / "again";
  const ExperimentResult r2 = run_experiment(again);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(r2.points[k].row.qfi == r.points[k].row.qfi);
    CHECK(r2.points[k].report.qfi_trace == r.points[k].report.qfi_trace);
  }

  // Resuming from the N = 3 checkpoint skips N = 2.
  RunConfig resumed = c;
  resumed.out_dir = dir / "resumed";
  resumed.resume = checkpoint_path(dir, 3);
  const ExperimentResult r3 = run_experiment(resumed);
  REQUIRE(r3.points.size() == 2);
  CHECK(r3.points[0].row.n == 3);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cold sweeps can run concurrently") {
  const auto dir = temp_dir("pool");
  RunConfig c;
  c.n_values = {2, 3, 4, 5};
  c.mode = opt::ControlMode::arbitrary_cptp;
  c.settings.max_outer_iters = 5;
  c.warm_start = false;
  c.jobs = 2;
  c.out_dir = dir;
  const ExperimentResult r = run_experiment(c);
  REQUIRE(r.points.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) CHECK(r.points[k].row.n == c.n_values[k]);
  c.jobs = 1;
  c.out_dir = dir / "serial";
  const ExperimentResult s = run_experiment(c);
  for (std::size_t k = 0; k < 4; ++k) CHECK(s.points[k].row.qfi == r.points[k].row.qfi);
  std::filesystem::remove_all(dir);
}

TEST_CASE("variational multi-start never does worse than the zero-angle start") {
  RunConfig c;
  c.n_values = {4};
  c.mode = opt::ControlMode::variational_global;
  c.settings.max_outer_iters = 40;
  c.starts = 3;
  int chosen = -1;
  const opt::OptimizationReport r = best_of_starts(preset_bit_flip(0.1), c, 4, chosen);
  CHECK(chosen >= 0);
  CHECK(chosen < 3);
  RunConfig one = c;
  one.starts = 1;
  int first = -1;
  const opt::OptimizationReport zero = best_of_starts(preset_bit_flip(0.1), one, 4, first);
  CHECK(first == 0);
  // Ties within 1e-3 may go to a less rotated start.
  CHECK(r.final_qfi >= zero.final_qfi * (1 - 1e-3) - 1e-12);
}

TEST_CASE("warm multi-start keeps the warm prefix and beats the plain extension") {
  const ParamChannel ch = preset_amplitude_damping(0.1);
  RunConfig c;
  c.preset = "amplitude_damping";
  c.mode = opt::ControlMode::arbitrary_cptp;
  c.ancilla_dim = 2;
  c.settings.max_outer_iters = 15;
  int chosen = -1;
  const opt::OptimizationReport base = best_of_starts(ch, c, 3, chosen);
  const opt::Strategy& warm = base.final_strategy;

  int plain_start = -1;
  const opt::OptimizationReport plain = best_of_starts(ch, c, 6, plain_start, {}, &warm);
  CHECK(plain_start == 0);
  // Start 0 is exactly the warm extension.
  opt::Strategy extended = warm;
  while (extended.n_queries < 6) extended = opt::warm_start_extend(extended);
  const opt::OptimizationReport direct = opt::run(ch, c.theta0, extended, c.settings);
  CHECK(plain.final_qfi == direct.final_qfi);

  c.starts = 3;
  const opt::OptimizationReport multi = best_of_starts(ch, c, 6, chosen, {}, &warm);
  CHECK(multi.final_qfi >= plain.final_qfi);
  CHECK(multi.final_strategy.n_queries == 6);

  // Identical modes have nothing to redraw and run a single start.
  c.mode = opt::ControlMode::identical_cptp;
  const opt::OptimizationReport ident = best_of_starts(ch, c, 3, chosen);
  const opt::OptimizationReport ident_warm = best_of_starts(ch, c, 6, chosen, {}, &ident.final_strategy);
  CHECK(chosen == 0);
  CHECK(ident_warm.final_strategy.controls.size() == 1);
}
