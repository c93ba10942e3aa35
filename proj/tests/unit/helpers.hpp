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

// Shared oracles for the unit suites. These are written directly from the
// definitions (Kraus sums, explicit index loops) and do not call the code
// under test.

#pragma once

#include <vector>

#include "qfitn/linalg.hpp"

namespace qfitn::testing {

inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// sum_k K rho K^dagger
inline Mat apply_kraus(const std::vector<Mat>& kraus, const Mat& rho) {
  Mat out = Mat::Zero(kraus.front().rows(), kraus.front().rows());
  for (const auto& k : kraus) out += k * rho * k.adjoint();
  return out;
}

/// Kraus operators of (E (x) id_a).
inline std::vector<Mat> extend_kraus(const std::vector<Mat>& kraus, int a) {
  std::vector<Mat> out;
  for (const auto& k : kraus) out.push_back(kron(k, Mat::Identity(a, a)));
  return out;
}

/// Choi operator sum_{ij} E(|i><j|) (x) |i><j| from an explicit channel action.
template <class F>
Mat choi_by_action(F&& apply, int d_in, int d_out) {
  Mat out = Mat::Zero(d_out * d_in, d_out * d_in);
  for (int i = 0; i < d_in; ++i)
    for (int j = 0; j < d_in; ++j) {
      Mat e = Mat::Zero(d_in, d_in);
      e(i, j) = 1.0;
      const Mat img = apply(e);
      for (int o = 0; o < d_out; ++o)
        for (int p = 0; p < d_out; ++p) out(o * d_in + i, p * d_in + j) = img(o, p);
    }
  return out;
}

/// Channel action read off a Choi operator by explicit index sums:
/// E(rho)[o, p] = sum_{i,j} J[(o,i),(p,j)] rho[i, j].
inline Mat apply_choi_loops(const Mat& choi, const Mat& rho, int d_out, int d_in) {
  Mat out = Mat::Zero(d_out, d_out);
  for (int o = 0; o < d_out; ++o)
    for (int p = 0; p < d_out; ++p)
      for (int i = 0; i < d_in; ++i)
        for (int j = 0; j < d_in; ++j) out(o, p) += choi(o * d_in + i, p * d_in + j) * rho(i, j);
  return out;
}

}  // namespace qfitn::testing
