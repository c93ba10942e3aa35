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

TEST_CASE("kron matches index formula") {
  Rng rng(1);
  const Mat a = ginibre(2, 3, rng);
  const Mat b = ginibre(3, 2, rng);
  const Mat k = kron(a, b);
  REQUIRE(k.rows() == 6);
  REQUIRE(k.cols() == 6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int r = 0; r < 3; ++r)
        for (int s = 0; s < 2; ++s) CHECK(std::abs(k(i * 3 + r, j * 2 + s) - a(i, j) * b(r, s)) < 1e-15);
}

TEST_CASE("partial traces and transpose agree with explicit loops") {
  Rng rng(2);
  const int d1 = 3, d2 = 2;
  const Mat m = ginibre(d1 * d2, d1 * d2, rng);
  Mat t1 = Mat::Zero(d2, d2), t2 = Mat::Zero(d1, d1);
  for (int a = 0; a < d1; ++a)
    for (int b = 0; b < d2; ++b)
      for (int c = 0; c < d2; ++c) t1(b, c) += m(a * d2 + b, a * d2 + c);
  for (int a = 0; a < d1; ++a)
    for (int c = 0; c < d1; ++c)
      for (int b = 0; b < d2; ++b) t2(a, c) += m(a * d2 + b, c * d2 + b);
  CHECK(max_abs(trace_first(m, d1, d2) - t1) < 1e-14);
  CHECK(max_abs(trace_second(m, d1, d2) - t2) < 1e-14);

  const Mat pt = transpose_second(m, d1, d2);
  for (int a = 0; a < d1; ++a)
    for (int b = 0; b < d2; ++b)
      for (int c = 0; c < d1; ++c)
        for (int e = 0; e < d2; ++e) CHECK(pt(a * d2 + b, c * d2 + e) == m(a * d2 + e, c * d2 + b));
  CHECK(max_abs(transpose_second(pt, d1, d2) - m) == 0.0);
}

TEST_CASE("trace_product equals trace of product") {
  Rng rng(3);
  const Mat a = ginibre(5, 5, rng), b = ginibre(5, 5, rng);
  CHECK(std::abs(trace_product(a, b) - (a * b).trace()) < 1e-12);
}

TEST_CASE("Pauli algebra and rotations") {
  const Mat x = pauli_x(), y = pauli_y(), z = pauli_z();
  CHECK(max_abs(x * y - kI * z) < 1e-15);
  CHECK(max_abs(x * x - identity(2)) < 1e-15);
  for (double t : {0.0, 0.3, 2.0}) {
    CHECK(max_abs(rz(t) * rz(t).adjoint() - identity(2)) < 1e-15);
    CHECK(max_abs(ry(t) * ry(t).adjoint() - identity(2)) < 1e-15);
    CHECK(std::abs(rz(t)(0, 0) - std::exp(-kI * t / 2.0)) < 1e-15);
  }
}

TEST_CASE("maximally entangled projector") {
  const Mat phi = max_entangled_projector(3);
  CHECK(std::abs(phi.trace() - 3.0) < 1e-15);
  CHECK(max_abs(phi * phi - 3.0 * phi) < 1e-14);
  CHECK(max_abs(trace_first(phi, 3, 3) - identity(3)) < 1e-15);
}

TEST_CASE("psd projection properties") {
  Rng rng(4);
  for (int k = 0; k < 10; ++k) {
    const Mat h = random_hermitian(6, rng);
    const Mat p = psd_projection(h);
    CHECK(min_eigenvalue(p) > -1e-12);
    CHECK(max_abs(psd_projection(p) - p) < 1e-12);
    // The residual is negative semidefinite and orthogonal to the projection.
    const Mat r = h - p;
    CHECK(max_eigenvalue(r) < 1e-12);
    CHECK(std::abs(trace_product(r, p)) < 1e-10);
  }
  const Mat rho = random_density_matrix(4, rng);
  CHECK(max_abs(psd_projection(rho) - rho) < 1e-13);
}

TEST_CASE("inverse square root on the support") {
  Rng rng(5);
  const Mat g = ginibre(4, 2, rng);
  const Mat m = g * g.adjoint();  // rank 2
  const Mat s = inverse_sqrt_psd(m);
  const Mat proj = s * m * s;
  CHECK(max_abs(proj * proj - proj) < 1e-10);
  CHECK(std::abs(proj.trace() - 2.0) < 1e-10);
}

TEST_CASE("hermiticity helpers and exact_sqrt") {
  Rng rng(6);
  const Mat a = ginibre(3, 3, rng);
  CHECK(is_hermitian(hermitian_part(a), 1e-15));
  CHECK_FALSE(is_hermitian(a, 1e-6));
  CHECK(hermiticity_defect(hermitian_part(a)) < 1e-15);
  CHECK(exact_sqrt(16, "t") == 4);
  CHECK_THROWS_AS(exact_sqrt(15, "t"), DimensionError);
}
