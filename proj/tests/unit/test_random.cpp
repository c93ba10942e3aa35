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
#include "qfitn/linalg.hpp"
#include "qfitn/random.hpp"

using namespace qfitn;
using testing::max_abs;

TEST_CASE("random objects satisfy their defining constraints") {
  Rng rng(11);
  for (int d : {2, 3, 4}) {
    const Mat u = random_unitary(d, rng);
    CHECK(max_abs(u * u.adjoint() - identity(d)) < 1e-12);
    const Vec psi = random_pure_state(d, rng);
    CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
    const Mat rho = random_density_matrix(d, rng);
    CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
    CHECK(min_eigenvalue(rho) > -1e-12);
    CHECK(is_hermitian(random_hermitian(d, rng), 1e-14));
    for (int rank : {0, 1, 2}) {
      const Mat c = random_cptp_choi(d, 2, rng, rank);
      CHECK(min_eigenvalue(c) > -1e-12);
      CHECK(max_abs(trace_first(c, d, 2) - identity(2)) < 1e-12);
    }
  }
  CHECK_THROWS_AS(random_cptp_choi(2, 3, rng, 1), std::invalid_argument);
}

TEST_CASE("seeded generators are reproducible") {
  Rng a(42), b(42);
  CHECK(max_abs(random_unitary(3, a) - random_unitary(3, b)) == 0.0);
  CHECK(max_abs(random_cptp_choi(2, 2, a) - random_cptp_choi(2, 2, b)) == 0.0);
}
