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

#include <cmath>

#include <Eigen/Dense>

#include "doctest.h"
#include "helpers.hpp"
#include "qfitn/channels.hpp"
#include "qfitn/qfi.hpp"
#include "qfitn/random.hpp"

using namespace qfitn;
using testing::max_abs;

namespace {

// Full-rank SLD by solving (rho (x) I + I (x) rho^T) vec(L) = 2 vec(rho_dot)
// with row-major vec.
Mat sld_by_linear_solve(const Mat& rho, const Mat& rho_dot) {
  const int d = static_cast<int>(rho.rows());
  const Mat op = kron(rho, Mat::Identity(d, d)) + kron(Mat::Identity(d, d), rho.transpose());
  Vec rhs(d * d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) rhs(r * d + c) = 2.0 * rho_dot(r, c);
  const Vec v = op.fullPivLu().solve(rhs);
  Mat l(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) l(r, c) = v(r * d + c);
  return l;
}

Mat traceless_hermitian(int d, Rng& rng) {
  Mat h = random_hermitian(d, rng);
  h -= (h.trace() / static_cast<double>(d)) * Mat::Identity(d, d);
  return h;
}

}  // namespace

TEST_CASE("SLD of a full-rank state matches the Lyapunov linear solve") {
  Rng rng(51);
  for (int k = 0; k < 20; ++k) {
    const int d = 2 + k % 3;
    const Mat rho = random_density_matrix(d, rng);
    const Mat rho_dot = traceless_hermitian(d, rng);
    const SldResult r = sld(rho, rho_dot);
    CHECK(max_abs(r.L - sld_by_linear_solve(rho, rho_dot)) < 1e-8 * std::max(1.0, max_abs(r.L)));
    CHECK(max_abs(rho * r.L + r.L * rho - 2.0 * rho_dot) < 1e-9);
    CHECK(std::abs(r.qfi - trace_product(rho, r.L * r.L).real()) < 1e-9 * std::max(1.0, r.qfi));
    CHECK(std::abs(variational_objective(rho, rho_dot, r.L) - r.qfi) < 1e-9 * std::max(1.0, r.qfi));
  }
}

TEST_CASE("pure-state QFI equals 4 (<dpsi|dpsi> - |<psi|dpsi>|^2)") {
  Rng rng(52);
  for (int k = 0; k < 10; ++k) {
    const Vec psi = random_pure_state(3, rng);
    const Mat h = random_hermitian(3, rng);
    const Vec dpsi = -kI * h * psi;
    const Mat rho = psi * psi.adjoint();
    const Mat rho_dot = dpsi * psi.adjoint() + psi * dpsi.adjoint();
    const double expected = 4.0 * (dpsi.squaredNorm() - std::norm(psi.dot(dpsi)));
    const SldResult r = sld(rho, rho_dot);
    CHECK(std::abs(r.qfi - expected) < 1e-10);
    CHECK(max_abs(rho * r.L + r.L * rho - 2.0 * rho_dot) < 1e-10);
  }
}

TEST_CASE("variational objective never exceeds the QFI") {
  Rng rng(53);
  const Mat rho = random_density_matrix(3, rng);
  const Mat rho_dot = traceless_hermitian(3, rng);
  const double f = sld(rho, rho_dot).qfi;
  for (int k = 0; k < 50; ++k) CHECK(variational_objective(rho, rho_dot, random_hermitian(3, rng)) <= f + 1e-10);
}

TEST_CASE("SLD rejects invalid inputs") {
  Mat rho = Mat::Identity(2, 2) / 2.0;
  rho(0, 1) = 0.3;  // not Hermitian
  CHECK_THROWS_AS(sld(rho, Mat::Zero(2, 2)), std::invalid_argument);
  Mat neg = Mat::Zero(2, 2);
  neg(0, 0) = 1.1;
  neg(1, 1) = -0.1;
  CHECK_THROWS_AS(sld(neg, Mat::Zero(2, 2)), NumericalError);
}

TEST_CASE("single-channel QFI: noiseless phase, and a Bloch-sphere scan oracle") {
  CHECK(std::abs(qfi_single_channel_opt(preset_bit_flip(0.0), 1.0, 1) - 1.0) < 1e-9);
  const ParamChannel ch = preset_bit_flip(0.1);
  const ChannelPair pair = ch.pair_at(1.0);
  const double f1 = qfi_single_channel_opt(ch, 1.0, 1);
  double scan = 0.0;
  for (int i = 0; i <= 60; ++i)
    for (int j = 0; j < 60; ++j) {
      const double t = M_PI * i / 60, ph = 2 * M_PI * j / 60;
      Vec psi(2);
      psi << std::cos(t / 2), std::exp(kI * ph) * std::sin(t / 2);
      const Mat in = psi * psi.adjoint();
      scan = std::max(scan, sld(testing::apply_choi_loops(pair.choi, in, 2, 2),
                                testing::apply_choi_loops(pair.dchoi, in, 2, 2))
                                .qfi);
    }
  CHECK(f1 >= scan - 1e-9);
  CHECK(f1 <= scan + 1e-2);
  CHECK(f1 <= 1.0 + 1e-12);
  // An ancilla cannot hurt.
  CHECK(qfi_single_channel_opt(ch, 1.0, 2) >= f1 - 1e-9);
}
