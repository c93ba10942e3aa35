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

#include <memory>
#include <string>

#include "doctest.h"
#include "helpers.hpp"
#include "qfitn/random.hpp"
#include "qfitn/sdp.hpp"

using namespace qfitn;
using namespace qfitn::sdp;
using testing::max_abs;

namespace {

void check_certificate(const SdpSolution& s, const Mat& a, int d_out, int d_in, bool ppt, double tol) {
  CHECK(s.status == SdpStatus::converged);
  CHECK(s.gap <= tol);
  CHECK(s.gap >= -1e-9);
  CHECK(feasibility_defect(s.C_star.mat, d_out, d_in, ppt) < 1e-9);
  const Mat w = ppt ? s.dual_W : Mat();
  CHECK(dual_slack(a, s.dual_Lambda, w, d_out, d_in) > -1e-9);
  CHECK(std::abs(s.primal_value - trace_product(s.C_star.mat, a).real()) < 1e-9 * std::max(1.0, std::abs(s.primal_value)));
  CHECK(std::abs(s.dual_Lambda.trace().real() - s.primal_value - s.gap) < 1e-9 * std::max(1.0, std::abs(s.primal_value)));
}

const char* const kBackends[] = {"splitting", "interior"};

}  // namespace

TEST_CASE("analytic instance |0><0| (x) I has value 2") {
  Mat p0 = Mat::Zero(2, 2);
  p0(0, 0) = 1.0;
  const Mat a = kron(p0, identity(2));
  for (const char* name : kBackends) {
    CAPTURE(name);
    const auto backend = make_backend(name);
    const SdpSolution s = solve_cptp_linear(a, 2, 2, {}, backend.get());
    CHECK(std::abs(s.primal_value - 2.0) < 1e-7);
    check_certificate(s, a, 2, 2, false, 1e-7);
  }
}

TEST_CASE("fidelity with a unitary: d^2 for CPTP, d for PPT") {
  Rng rng(61);
  for (int d : {2, 3}) {
    const Mat u = random_unitary(d, rng);
    Vec vu(d * d);
    for (int o = 0; o < d; ++o)
      for (int i = 0; i < d; ++i) vu(o * d + i) = u(o, i);
    const Mat a = vu * vu.adjoint();
    for (const char* name : kBackends) {
      CAPTURE(name);
      const auto backend = make_backend(name);
      const SdpSolution s = solve_cptp_linear(a, d, d, {}, backend.get());
      CHECK(std::abs(s.primal_value - d * d) < 1e-6);
      check_certificate(s, a, d, d, false, 1e-7);
      // Entanglement-breaking channels reach entanglement fidelity at most 1/d.
      const SdpSolution q = solve_cptp_ppt_linear(a, d, d, {}, backend.get());
      CHECK(std::abs(q.primal_value - d) < 1e-6);
      check_certificate(q, a, d, d, true, 1e-7);
    }
  }
}

TEST_CASE("optimum dominates random feasible channels and both backends agree") {
  Rng rng(62);
  for (int k = 0; k < 8; ++k) {
    const int d_out = 2, d_in = k % 2 ? 2 : 3;
    const Mat a = random_hermitian(d_out * d_in, rng);
    const auto split = make_backend("splitting");
    const auto ip = make_backend("interior");
    const SdpSolution s1 = solve_cptp_linear(a, d_out, d_in, {}, split.get());
    const SdpSolution s2 = solve_cptp_linear(a, d_out, d_in, {}, ip.get());
    check_certificate(s1, a, d_out, d_in, false, 1e-7);
    check_certificate(s2, a, d_out, d_in, false, 1e-7);
    CHECK(std::abs(s1.primal_value - s2.primal_value) < 2e-7);
    for (int j = 0; j < 50; ++j) {
      const Mat c = random_cptp_choi(d_out, d_in, rng, 2 + j % 3);
      CHECK(trace_product(c, a).real() <= s2.primal_value + 1e-9);
    }
    const SdpSolution p = solve_cptp_ppt_linear(a, d_out, d_in, {}, ip.get());
    check_certificate(p, a, d_out, d_in, true, 1e-7);
    CHECK(p.primal_value <= s2.primal_value + 1e-7);
  }
}

TEST_CASE("solutions scale with the objective") {
  Rng rng(63);
  const Mat a = random_hermitian(4, rng);
  const auto ip = make_backend("interior");
  const double base = solve_cptp_linear(a, 2, 2, {}, ip.get()).primal_value;
  for (double s : {1e-3, 10.0, 1e4}) {
    const SdpSolution r = solve_cptp_linear(s * a, 2, 2, {}, ip.get());
    CHECK(r.gap <= 1e-7);
    CHECK(std::abs(r.primal_value - s * base) < 1e-7 * (1.0 + s));
  }
  // Shifting by a multiple of the identity shifts the value by c * d_in.
  const SdpSolution shifted = solve_cptp_linear(a + 3.0 * Mat::Identity(4, 4), 2, 2, {}, ip.get());
  CHECK(std::abs(shifted.primal_value - (base + 6.0)) < 1e-6);
}

TEST_CASE("zero objective returns a feasible channel") {
  const SdpSolution s = solve_cptp_linear(Mat::Zero(4, 4), 2, 2);
  CHECK(s.primal_value == doctest::Approx(0.0));
  CHECK(feasibility_defect(s.C_star.mat, 2, 2, false) < 1e-12);
}

TEST_CASE("input validation") {
  Mat bad = Mat::Zero(4, 4);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(solve_cptp_linear(bad, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(solve_cptp_linear(Mat::Zero(5, 5), 2, 2), DimensionError);
  Mat inf = Mat::Zero(4, 4);
  inf(0, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(solve_cptp_linear(inf, 2, 2), NumericalError);
  CHECK_THROWS_AS(make_backend("simplex"), std::invalid_argument);
  CHECK(make_backend("interior")->name() == "interior");
}
