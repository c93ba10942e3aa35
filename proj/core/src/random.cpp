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

#include "qfitn/random.hpp"

#include <cmath>
#include <stdexcept>

namespace qfitn {

Mat ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = cplx(re, im) / std::sqrt(2.0);
    }
  return m;
}

Mat random_unitary(int d, Rng& rng) {
  const Mat z = ginibre(d, d, rng);
  Eigen::HouseholderQR<Mat> qr(z);
  Mat q = qr.householderQ() * Mat::Identity(d, d);
  const Mat r = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

Vec random_pure_state(int d, Rng& rng) {
  Vec v = ginibre(d, 1, rng).col(0);
  return v / v.norm();
}

Mat random_density_matrix(int d, Rng& rng) {
  const Mat g = ginibre(d, d, rng);
  Mat rho = g * g.adjoint();
  return rho / rho.trace().real();
}

Mat random_hermitian(int d, Rng& rng) {
  const Mat g = ginibre(d, d, rng);
  return (g + g.adjoint()) / std::sqrt(2.0);
}

Mat random_cptp_choi(int d_out, int d_in, Rng& rng, int kraus_rank) {
  const int k = kraus_rank > 0 ? kraus_rank : d_out * d_in;
  if (k * d_out < d_in)
    throw std::invalid_argument("random_cptp_choi: Kraus rank too small for a trace-preserving map");
  // Columns of a Haar unitary on C^{k d_out} give an isometry V: C^{d_in} -> C^k (x) C^{d_out}.
  const Mat u = random_unitary(k * d_out, rng);
  Mat choi = Mat::Zero(d_out * d_in, d_out * d_in);
  for (int a = 0; a < k; ++a) {
    const Mat kraus = u.block(a * d_out, 0, d_out, d_in);
    Vec v(d_out * d_in);
    for (int o = 0; o < d_out; ++o)
      for (int i = 0; i < d_in; ++i) v(o * d_in + i) = kraus(o, i);
    choi += v * v.adjoint();
  }
  return choi;
}

}  // namespace qfitn
