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


// Control sub-problem: maximize Tr[C A] over Choi operators C on out (x) in
// with C >= 0 and Tr_out C = I_in, optionally also C^{T_in} >= 0 (PPT).
//
// Dual: minimize Tr(Lambda) s.t. I_out (x) Lambda - A - W^{T_in} >= 0 with
// W >= 0 (W = 0 without the PPT constraint). Every solve returns a feasible
// primal C, a feasible dual (Lambda, W) and the certified gap between them.

#pragma once

#include <memory>
#include <string>

#include "qfitn/channels.hpp"
#include "qfitn/linalg.hpp"

namespace qfitn::sdp {

enum class SdpStatus { converged, max_iters };

const char* to_string(SdpStatus s);

struct SdpOptions {
  double tol = 1e-7;      ///< absolute bound on residuals and duality gap
  int max_iters = 20000;  ///< iteration cap (splitting steps or interior-point steps)
  double rho = 1.0;       ///< initial splitting penalty
  bool ppt = false;
};

struct SdpSolution {
  ChoiOperator C_star;
  double primal_value = 0.0;
  Mat dual_Lambda;
  Mat dual_W;  ///< PPT multiplier; empty without the PPT constraint
  double gap = 0.0;
  int iterations = 0;
  SdpStatus status = SdpStatus::max_iters;
};

/// Seam for swapping the numerical method without touching callers.
class SdpBackend {
 public:
  virtual ~SdpBackend() = default;
  virtual std::string name() const = 0;
  /// `a` must already be Hermitian and of size (d_out*d_in)^2.
  virtual SdpSolution solve(const Mat& a, int d_out, int d_in, const SdpOptions& opts) const = 0;
};

/// First-order operator splitting (ADMM): PSD projection by eigenvalue
/// clipping alternated with the affine projection onto Tr_out C = I, with
/// residual balancing of the penalty.
class SplittingBackend final : public SdpBackend {
 public:
  std::string name() const override { return "splitting"; }
  SdpSolution solve(const Mat& a, int d_out, int d_in, const SdpOptions& opts) const override;
};

/// Primal-dual interior point (HKM direction, Mehrotra predictor-corrector).
/// Converges in a few tens of iterations to gaps near machine precision
/// relative to ||A||; the PPT variant carries C^{T_in} as a second block
/// coupled by equality constraints, which is much slower. When the double
/// precision certificate misses opts.tol the solve is repeated in long double.
class InteriorPointBackend final : public SdpBackend {
 public:
  std::string name() const override { return "interior"; }
  SdpSolution solve(const Mat& a, int d_out, int d_in, const SdpOptions& opts) const override;
};

std::unique_ptr<SdpBackend> make_backend(const std::string& name);

/// Validates A and dispatches to `backend` (splitting when null).
SdpSolution solve_cptp_linear(const Mat& a, int d_out, int d_in, const SdpOptions& opts = {},
                              const SdpBackend* backend = nullptr);
/// Same with the PPT constraint added (opts.ppt is forced on).
SdpSolution solve_cptp_ppt_linear(const Mat& a, int d_out, int d_in, const SdpOptions& opts = {},
                                  const SdpBackend* backend = nullptr);

/// Largest violation of C >= 0, Tr_out C = I (and C^{T_in} >= 0 when ppt).
double feasibility_defect(const Mat& c, int d_out, int d_in, bool ppt);
/// Smallest eigenvalue of I (x) Lambda - A - W^{T_in}.
double dual_slack(const Mat& a, const Mat& lambda, const Mat& w, int d_out, int d_in);

}  // namespace qfitn::sdp
