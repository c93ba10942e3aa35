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

#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "qfitn/channels.hpp"
#include "qfitn/comb.hpp"
#include "qfitn/random.hpp"

using namespace qfitn;
using namespace qfitn::comb;
using testing::max_abs;

TEST_CASE("link product of two channels is the Choi operator of their composition") {
  Rng rng(31);
  const Mat ja = random_cptp_choi(3, 2, rng);  // H1 (2) -> H2 (3)
  const Mat jb = random_cptp_choi(2, 3, rng);  // H2 (3) -> H3 (2)
  const LabeledOperator a(ja, {{2, 3}, {1, 2}});
  const LabeledOperator b(jb, {{3, 2}, {2, 3}});
  const LabeledOperator ab = link_product(a, b);
  REQUIRE(ab.labels() == std::vector<int>{1, 3});
  const std::vector<int> order{3, 1};
  const Mat got = reorder(ab, order).mat;
  const Mat oracle = testing::choi_by_action(
      [&](const Mat& x) { return testing::apply_choi_loops(jb, testing::apply_choi_loops(ja, x, 3, 2), 2, 3); }, 2, 2);
  CHECK(max_abs(got - oracle) < 1e-13);
  // Commutativity up to factor order.
  CHECK(max_abs(reorder(link_product(b, a), order).mat - got) < 1e-13);
}

TEST_CASE("link product with a state applies the channel") {
  Rng rng(32);
  const Mat j = random_cptp_choi(2, 2, rng);
  const Mat rho = random_density_matrix(2, rng);
  const LabeledOperator out = link_product(LabeledOperator(rho, {{1, 2}}), LabeledOperator(j, {{2, 2}, {1, 2}}));
  REQUIRE(out.labels() == std::vector<int>{2});
  CHECK(max_abs(out.mat - testing::apply_choi_loops(j, rho, 2, 2)) < 1e-14);
}

TEST_CASE("link product without shared labels is a tensor product") {
  Rng rng(33);
  const Mat x = random_hermitian(2, rng), y = random_hermitian(3, rng);
  const LabeledOperator a(x, {{1, 2}}), b(y, {{5, 3}});
  CHECK(max_abs(link_product(a, b).mat - kron(x, y)) < 1e-15);
  CHECK(max_abs(tensor(a, b).mat - kron(x, y)) == 0.0);
}

TEST_CASE("partial trace, transpose and reorder") {
  Rng rng(34);
  const Mat x = random_hermitian(2, rng), y = random_hermitian(3, rng), z = random_hermitian(2, rng);
  const LabeledOperator op(kron(kron(x, y), z), {{1, 2}, {2, 3}, {3, 2}});
  const std::vector<int> drop{2};
  const LabeledOperator t = partial_trace(op, drop);
  CHECK(t.labels() == std::vector<int>{1, 3});
  CHECK(max_abs(t.mat - y.trace() * kron(x, z)) < 1e-13);

  const LabeledOperator pt = partial_transpose(op, 2);
  CHECK(max_abs(pt.mat - kron(kron(x, y.transpose()), z)) < 1e-15);
  CHECK(max_abs(partial_transpose(pt, 2).mat - op.mat) == 0.0);

  const std::vector<int> order{3, 1, 2};
  const LabeledOperator r = reorder(op, order);
  CHECK(max_abs(r.mat - kron(kron(z, x), y)) < 1e-15);
  const std::vector<int> back{1, 2, 3};
  CHECK(max_abs(reorder(r, back).mat - op.mat) == 0.0);
}

TEST_CASE("labelled operator validation") {
  CHECK_THROWS_AS(LabeledOperator(Mat::Identity(4, 4), {{1, 2}, {1, 2}}), DimensionError);
  CHECK_THROWS_AS(LabeledOperator(Mat::Identity(3, 3), {{1, 2}}), DimensionError);
  const LabeledOperator a(Mat::Identity(2, 2), {{1, 2}});
  const LabeledOperator b(Mat::Identity(3, 3), {{1, 3}});
  CHECK_THROWS_AS(link_product(a, b), DimensionError);
  const std::vector<int> missing{7};
  CHECK_THROWS_AS(partial_trace(a, missing), std::invalid_argument);
}

namespace {

// Sequential evolution written with Kraus operators on (system (x) ancilla).
Mat evolve(const std::vector<Mat>& kraus, const std::vector<Mat>& controls, const Mat& rho0, int n, int a) {
  const int dim = 2 * a;
  const auto ek = testing::extend_kraus(kraus, a);
  Mat rho = testing::apply_kraus(ek, rho0);
  for (int k = 1; k < n; ++k) {
    rho = testing::apply_choi_loops(controls[k - 1], rho, dim, dim);
    rho = testing::apply_kraus(ek, rho);
  }
  return rho;
}

}  // namespace

TEST_CASE("dense strategy output matches Kraus evolution and finite differences") {
  Rng rng(35);
  for (int a : {1, 2}) {
    for (int n : {1, 2, 3}) {
      const ParamChannel ch = preset_amplitude_damping(0.1);
      const double theta = 1.0, h = 1e-6;
      std::vector<Mat> controls;
      for (int k = 1; k < n; ++k) controls.push_back(random_cptp_choi(2 * a, 2 * a, rng));
      const Mat rho0 = random_density_matrix(2 * a, rng);
      const ChannelPair pair = ch.pair_at(theta);
      const DenseOutput out = dense_strategy_output(pair.choi, pair.dchoi, controls, rho0, n, a);
      CHECK(max_abs(out.state - evolve(ch.kraus_at(theta), controls, rho0, n, a)) < 1e-13);
      const Mat fd = (evolve(ch.kraus_at(theta + h), controls, rho0, n, a) -
                      evolve(ch.kraus_at(theta - h), controls, rho0, n, a)) /
                     (2 * h);
      CHECK(max_abs(out.derivative - fd) < 1e-8);
    }
  }
}

TEST_CASE("dense mode refuses large N") {
  const ChannelPair pair = preset_bit_flip(0.1).pair_at(1.0);
  std::vector<Mat> controls(kMaxDenseQueries, max_entangled_projector(2));
  CHECK_THROWS_AS(
      dense_strategy_output(pair.choi, pair.dchoi, controls, Mat::Identity(2, 2) / 2.0, kMaxDenseQueries + 1, 1),
      std::invalid_argument);
}
