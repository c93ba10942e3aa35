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

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qfitn {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

/// Raised when operand shapes do not line up.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for non-finite values or violated numerical preconditions.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Mat identity(int d);
Mat pauli_x();
Mat pauli_y();
Mat pauli_z();

/// e^{-i t sigma_z / 2}
Mat rz(double t);
/// e^{-i t sigma_y / 2}
Mat ry(double t);

Mat kron(const Mat& a, const Mat& b);

/// Tr(a b) without forming the product.
cplx trace_product(const Mat& a, const Mat& b);

/// Unnormalized maximally entangled projector |I>><<I| on C^d (x) C^d.
Mat max_entangled_projector(int d);

/// Partial trace over the first factor of a (d1*d2)-dimensional operator.
Mat trace_first(const Mat& m, int d1, int d2);
/// Partial trace over the second factor.
Mat trace_second(const Mat& m, int d1, int d2);
/// Partial transpose on the second factor.
Mat transpose_second(const Mat& m, int d1, int d2);

Mat hermitian_part(const Mat& m);
double hermiticity_defect(const Mat& m);
bool is_hermitian(const Mat& m, double tol);

double min_eigenvalue(const Mat& hermitian);
double max_eigenvalue(const Mat& hermitian);

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clipped).
Mat psd_projection(const Mat& hermitian);

/// Hermitian matrix function of a PSD argument: m^{-1/2} on the support.
Mat inverse_sqrt_psd(const Mat& m);

/// Dimension helper: exact integer square root, throws if not a square.
int exact_sqrt(long long n, const std::string& what);

}  // namespace qfitn
