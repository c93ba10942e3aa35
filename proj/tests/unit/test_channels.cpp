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

#include "doctest.h"
#include "helpers.hpp"
#include "qfitn/channels.hpp"
#include "qfitn/random.hpp"

using namespace qfitn;
using testing::max_abs;

TEST_CASE("presets are CPTP with consistent Kraus and Choi forms") {
  Rng rng(21);
  for (const auto& name : preset_names()) {
    for (double p : {0.0, 0.1, 0.5}) {
      const ParamChannel ch = make_preset(name, p);
      CHECK(ch.dim() == 2);
      for (double theta : {0.0, 1.0, -2.3}) {
        const ChoiOperator c = ch.choi_at(theta);
        CHECK(c.d_out == 2);
        CHECK(c.d_in == 2);
        CHECK(c.channel_defect() < 1e-12);
        const auto kraus = ch.kraus_at(theta);
        const Mat rho = random_density_matrix(2, rng);
        CHECK(max_abs(testing::apply_choi_loops(c.mat, rho, 2, 2) - testing::apply_kraus(kraus, rho)) < 1e-13);
        const Mat oracle = testing::choi_by_action([&](const Mat& x) { return testing::apply_kraus(kraus, x); }, 2, 2);
        CHECK(max_abs(oracle - c.mat) < 1e-14);
      }
    }
  }
}

TEST_CASE("Choi derivative matches central differences") {
  for (const auto& name : preset_names()) {
    const ParamChannel ch = make_preset(name, 0.1);
    for (double theta : {0.2, 1.0}) {
      const double h = 1e-6;
      const Mat fd = (ch.choi_at(theta + h).mat - ch.choi_at(theta - h).mat) / (2 * h);
      CHECK(max_abs(fd - ch.dchoi_at(theta)) < 1e-8);
      const ChannelPair pair = ch.pair_at(theta);
      CHECK(max_abs(pair.choi - ch.choi_at(theta).mat) == 0.0);
      CHECK(std::abs(pair.dchoi.trace()) < 1e-12);  // trace preservation differentiates to zero
    }
  }
}

TEST_CASE("noiseless bit flip is the phase unitary") {
  const ParamChannel ch = preset_bit_flip(0.0);
  const Mat u = phase_unitary(0.7);
  const Mat vec_u = Eigen::Map<const Vec>(Mat(u.transpose()).data(), 4);  // row-major vec: |U>> = sum U_oi |o>|i>
  CHECK(max_abs(ch.choi_at(0.7).mat - vec_u * vec_u.adjoint()) < 1e-14);
}

TEST_CASE("bit flip Kraus order is noise then signal") {
  const double p = 0.2, theta = 0.9;
  const auto k = preset_bit_flip(p).kraus_at(theta);
  CHECK(max_abs(k[1] - std::sqrt(p) * phase_unitary(theta) * pauli_x()) < 1e-15);
}

TEST_CASE("depolarizing admixture acts at the Choi level") {
  const ParamChannel base = preset_amplitude_damping(0.1);
  const double eps = 0.25;
  const ParamChannel mixed = mix_with_depolarizing(base, eps);
  const Mat expected = (1 - eps) * base.choi_at(0.4).mat + eps * Mat::Identity(4, 4) / 2.0;
  CHECK(max_abs(mixed.choi_at(0.4).mat - expected) < 1e-14);
  CHECK(max_abs(mixed.dchoi_at(0.4) - (1 - eps) * base.dchoi_at(0.4)) < 1e-14);
  CHECK(mixed.choi_at(0.4).channel_defect() < 1e-12);
  // Mixing twice composes the weights.
  const ParamChannel twice = mix_with_depolarizing(mixed, eps);
  CHECK(std::abs(twice.depolarizing_weight() - (1 - (1 - eps) * (1 - eps))) < 1e-15);
}

TEST_CASE("Choi from Kraus of a general map") {
  Rng rng(22);
  std::vector<Mat> kraus{ginibre(3, 3, rng), ginibre(3, 3, rng)};
  const ChoiOperator c = choi_from_kraus(kraus);
  CHECK(c.d_out == 3);
  CHECK(c.d_in == 3);
  const Mat oracle = testing::choi_by_action([&](const Mat& x) { return testing::apply_kraus(kraus, x); }, 3, 3);
  CHECK(max_abs(c.mat - oracle) < 1e-13);
  CHECK_THROWS_AS(choi_from_kraus({ginibre(3, 2, rng)}), DimensionError);
  CHECK_THROWS_AS(choi_from_kraus({ginibre(2, 2, rng), ginibre(3, 3, rng)}), DimensionError);
}

TEST_CASE("invalid arguments") {
  CHECK_THROWS_AS(make_preset("nope", 0.1), std::invalid_argument);
  CHECK_THROWS_AS(preset_bit_flip(1.5), std::invalid_argument);
  CHECK_THROWS_AS(mix_with_depolarizing(preset_bit_flip(0.1), -0.1), std::invalid_argument);
}
