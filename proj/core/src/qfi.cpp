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


#include "qfitn/qfi.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qfitn/random.hpp"
#include "qfitn/tnet.hpp"

namespace qfitn {

namespace {

void require_hermitian(const Mat& m, const char* what) {
  if (m.rows() != m.cols()) throw DimensionError(std::string("sld: ") + what + " is not square");
  const double tol = 1e-8 * std::max(1.0, m.norm());
  if (hermiticity_defect(m) > tol) throw std::invalid_argument(std::string("sld: ") + what + " is not Hermitian");
}

}  // namespace

SldResult sld(const Mat& rho, const Mat& rho_dot, double cutoff) {
  require_hermitian(rho, "rho");
  require_hermitian(rho_dot, "rho_dot");
  if (rho.rows() != rho_dot.rows()) throw DimensionError("sld: rho and rho_dot differ in dimension");
  if (!rho.allFinite() || !rho_dot.allFinite()) throw NumericalError("sld: non-finite input");

  const Mat r = hermitian_part(rho);
  Eigen::SelfAdjointEigenSolver<Mat> es(r);
  const RVec& lam = es.eigenvalues();
  if (lam(0) < -1e-8) throw NumericalError("sld: rho has eigenvalue " + std::to_string(lam(0)));
  const Mat& v = es.eigenvectors();

  const Mat dr = v.adjoint() * hermitian_part(rho_dot) * v;
  const auto n = r.rows();
  Mat l = Mat::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) {
      const double s = std::max(lam(j), 0.0) + std::max(lam(k), 0.0);
      if (s > cutoff) l(j, k) = 2.0 * dr(j, k) / s;
    }
  SldResult out;
  out.L = hermitian_part(v * l * v.adjoint());
  out.qfi = trace_product(r, out.L * out.L).real();
  out.support_cutoff_used = cutoff;
  return out;
}

double variational_objective(const Mat& rho, const Mat& rho_dot, const Mat& x) {
  return 2.0 * trace_product(rho_dot, x).real() - trace_product(rho, x * x).real();
}

double qfi_single_channel_opt(const ChannelPair& channel, int ancilla_dim, const SingleChannelOptions& opts) {
  const int d = channel.d;
  const int dim = d * ancilla_dim;
  Rng rng(opts.seed);
  double best = 0.0;
  for (int start = 0; start < std::max(1, opts.restarts); ++start) {
    Vec psi;
    if (start == 0) {
      psi = Vec::Zero(dim);
      for (int s = 0; s < d; ++s) psi(s * ancilla_dim) = 1.0 / std::sqrt(static_cast<double>(d));
    } else {
      psi = random_pure_state(dim, rng);
    }
    Mat rho0 = psi * psi.adjoint();
    double prev = -1.0;
    double value = 0.0;
    for (int it = 0; it < opts.max_iters; ++it) {
      const Mat rho = tnet::apply_channel(channel.choi, rho0, d, ancilla_dim);
      const Mat drho = tnet::apply_channel(channel.dchoi, rho0, d, ancilla_dim);
      const SldResult s = sld(rho, drho);
      value = s.qfi;
      if (it > 0 && std::abs(value - prev) <= opts.rel_tol * std::max(1.0, std::abs(value))) break;
      prev = value;
      const Mat g = 2.0 * tnet::apply_channel_adjoint(channel.dchoi, s.L, d, ancilla_dim) -
                    tnet::apply_channel_adjoint(channel.choi, s.L * s.L, d, ancilla_dim);
      Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(g));
      const Vec top = es.eigenvectors().col(dim - 1);
      rho0 = top * top.adjoint();
    }
    best = std::max(best, value);
  }
  return best;
}

double qfi_single_channel_opt(const ParamChannel& channel, double theta, int ancilla_dim,
                              const SingleChannelOptions& opts) {
  return qfi_single_channel_opt(channel.pair_at(theta), ancilla_dim, opts);
}

}  // namespace qfitn
