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

#include "qfitn/linalg.hpp"

#include <cmath>
#include <limits>

namespace qfitn {

Mat identity(int d) { return Mat::Identity(d, d); }

Mat pauli_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Mat pauli_y() {
  Mat m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

Mat pauli_z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Mat rz(double t) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = std::exp(-kI * (t / 2));
  m(1, 1) = std::exp(kI * (t / 2));
  return m;
}

Mat ry(double t) {
  const double c = std::cos(t / 2);
  const double s = std::sin(t / 2);
  Mat m(2, 2);
  m << c, -s, s, c;
  return m;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

cplx trace_product(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols())
    throw DimensionError("trace_product: shape mismatch");
  return a.transpose().cwiseProduct(b).sum();
}

Mat max_entangled_projector(int d) {
  Vec v = Vec::Zero(d * d);
  for (int j = 0; j < d; ++j) v(j * d + j) = 1.0;
  return v * v.adjoint();
}

Mat trace_first(const Mat& m, int d1, int d2) {
  if (m.rows() != d1 * d2 || m.cols() != d1 * d2)
    throw DimensionError("trace_first: operator is not (d1*d2)-square");
  Mat out = Mat::Zero(d2, d2);
  for (int a = 0; a < d1; ++a) out += m.block(a * d2, a * d2, d2, d2);
  return out;
}

Mat trace_second(const Mat& m, int d1, int d2) {
  if (m.rows() != d1 * d2 || m.cols() != d1 * d2)
    throw DimensionError("trace_second: operator is not (d1*d2)-square");
  Mat out(d1, d1);
  for (int a = 0; a < d1; ++a)
    for (int b = 0; b < d1; ++b) out(a, b) = m.block(a * d2, b * d2, d2, d2).trace();
  return out;
}

Mat transpose_second(const Mat& m, int d1, int d2) {
  if (m.rows() != d1 * d2 || m.cols() != d1 * d2)
    throw DimensionError("transpose_second: operator is not (d1*d2)-square");
  Mat out(m.rows(), m.cols());
  for (int a = 0; a < d1; ++a)
    for (int b = 0; b < d1; ++b)
      out.block(a * d2, b * d2, d2, d2) = m.block(a * d2, b * d2, d2, d2).transpose();
  return out;
}

Mat hermitian_part(const Mat& m) { return (m + m.adjoint()) / 2.0; }

double hermiticity_defect(const Mat& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).norm();
}

bool is_hermitian(const Mat& m, double tol) { return hermiticity_defect(m) <= tol; }

double min_eigenvalue(const Mat& hermitian) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_eigenvalue(const Mat& hermitian) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

Mat psd_projection(const Mat& hermitian) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian);
  const RVec clipped = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().adjoint();
}

Mat inverse_sqrt_psd(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  RVec w = es.eigenvalues();
  const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < w.size(); ++i)
    w(i) = w(i) > 1e-14 * scale ? 1.0 / std::sqrt(w(i)) : 0.0;
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

int exact_sqrt(long long n, const std::string& what) {
  const auto r = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(n))));
  if (r * r != n) throw DimensionError(what + ": dimension " + std::to_string(n) + " is not a square");
  return static_cast<int>(r);
}

}  // namespace qfitn
