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


// Symmetric logarithmic derivative and quantum Fisher information.

#pragma once

#include <cstdint>

#include "qfitn/channels.hpp"
#include "qfitn/linalg.hpp"

namespace qfitn {

inline constexpr double kSupportCutoff = 1e-12;

struct SldResult {
  Mat L;
  double qfi = 0.0;
  double support_cutoff_used = kSupportCutoff;
};

/// Solves rho L + L rho = 2 rho_dot in the eigenbasis of rho. Pairs (j, k)
/// with lambda_j + lambda_k <= cutoff get L_jk = 0.
///
/// Throws std::invalid_argument for non-Hermitian inputs and NumericalError
/// when rho has an eigenvalue below -1e-8.
SldResult sld(const Mat& rho, const Mat& rho_dot, double cutoff = kSupportCutoff);

/// 2 Tr(rho_dot X) - Tr(rho X^2); its supremum over Hermitian X is the QFI.
double variational_objective(const Mat& rho, const Mat& rho_dot, const Mat& x);

struct SingleChannelOptions {
  int restarts = 8;
  int max_iters = 500;
  double rel_tol = 1e-12;
  std::uint64_t seed = 7;
};

/// F^(1): the single-query QFI maximized over pure inputs on system (x)
/// ancilla by alternating SLD and input-state updates from several seeded
/// starts (the first start is |+> (x) |0>).
double qfi_single_channel_opt(const ChannelPair& channel, int ancilla_dim, const SingleChannelOptions& opts = {});
double qfi_single_channel_opt(const ParamChannel& channel, double theta, int ancilla_dim,
                              const SingleChannelOptions& opts = {});

}  // namespace qfitn
