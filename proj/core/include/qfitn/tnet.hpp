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

// Matrix-product-operator contraction of sequential metrology strategies.
//
// The network for a strategy with N queries is a chain of 2N+1 sites in
// circuit-time order:
//
//   rho0 -- E -- C_1 -- E -- C_2 -- ... -- C_{N-1} -- E -- X
//
// Two networks share the chain: f2 uses E at every channel site and X^2 at
// the end; f1 replaces the channel sites by the bond-dimension-2 derivative
// MPO M_1 ... M_N and ends in X. Channels act on the d-dimensional system
// only; the ancilla wire is an index identification and is never stored as
// a tensor. States, controls and X live on D = d * ancilla_dim with the
// system index most significant.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qfitn/channels.hpp"
#include "qfitn/linalg.hpp"

namespace qfitn::tnet {

/// One site of a bond-dimension MPO over channel tensors: blocks(r, c) maps
/// bond value c on the earlier-time side to bond value r on the later side.
/// Empty blocks are zero.
struct MpoSite {
  int rows = 1;
  int cols = 1;
  std::vector<std::optional<Mat>> blocks;

  const std::optional<Mat>& block(int r, int c) const { return blocks[r * cols + c]; }
};

/// Derivative MPO of E^{(x)N}: M_1 = (dE; E), bulk [[E, dE], [0, E]], M_N = (E, dE).
/// For N = 1 the single site is dE.
std::vector<MpoSite> build_derivative_mpo(const Mat& choi, const Mat& dchoi, int n_queries);

/// Dense operator obtained by contracting the bond indices of an MPO. Tensor
/// factors are ordered site N first, each factor a (out (x) in) Choi block.
Mat contract_mpo_dense(std::span<const MpoSite> sites);

/// (E (x) id_a)(S) for a state-like operator S on (sys (x) anc).
Mat apply_channel(const Mat& choi, const Mat& state, int d, int ancilla_dim);
/// Heisenberg-picture adjoint: Tr[Y (E (x) id)(S)] = Tr[apply_channel_adjoint(E, Y) S].
Mat apply_channel_adjoint(const Mat& choi, const Mat& op, int d, int ancilla_dim);
/// C(S) for a control Choi matrix on D_out (x) D_in.
Mat apply_control(const Mat& choi, const Mat& state);
Mat apply_control_adjoint(const Mat& choi, const Mat& op);

/// Counts elementary site applications (one per nonzero block and bond value).
struct OpCounter {
  std::uint64_t tensor_multiplies = 0;
};

enum class Network { f1, f2 };

struct Site {
  enum class Kind { input, control, observable };
  Kind kind = Kind::input;
  int index = 0;  ///< control number 1..N-1 when kind == control

  static Site input() { return {Kind::input, 0}; }
  static Site control(int i) { return {Kind::control, i}; }
  static Site observable() { return {Kind::observable, 0}; }
};

/// The f1/f2 tensor chain with cached left (forward) and right (backward)
/// partial contractions. Setters invalidate only the caches that depend on
/// the changed tensor, so a left-to-right sweep of single-site updates costs
/// O(N) site applications in total.
///
/// Single writer: queries extend the caches and are therefore non-const.
class MpoChain {
 public:
  MpoChain(const ChannelPair& channel, int n_queries, int ancilla_dim);

  int n_queries() const { return n_; }
  int system_dim() const { return d_; }
  int ancilla_dim() const { return a_; }
  int dim() const { return d_ * a_; }

  void set_channel(const ChannelPair& channel);
  void set_input_state(const Mat& rho0);
  /// i in 1..N-1; `choi` on D_out (x) D_in.
  void set_control(int i, const Mat& choi);
  void set_all_controls(const Mat& choi);
  void set_observable(const Mat& x);

  const ChannelPair& channel() const { return channel_; }
  const Mat& input_state() const { return rho0_; }
  const Mat& control(int i) const;
  const Mat& observable() const { return x_; }

  /// Tr[(dE^{(x)N}/dtheta * (x)C_i (x) rho0) X]
  double f1();
  /// Tr[(E^{(x)N} * (x)C_i (x) rho0) X^2]
  double f2();
  double objective() { return 2.0 * f1() - f2(); }

  Mat output_state();
  Mat output_derivative();

  /// The network with `site` removed, as a matrix env such that the full
  /// contraction equals Tr[T env^T] for the removed tensor T (T = X^2 for the
  /// observable site of f2).
  Mat environment(Network which, Site site);
  /// env^T, i.e. the matrix G with contraction = Tr[T G].
  Mat linear_coefficient(Network which, Site site);
  /// 2 * coefficient(f1) - coefficient(f2).
  Mat objective_coefficient(Site site);

  OpCounter& counter() { return counter_; }
  const OpCounter& counter() const { return counter_; }

  /// Drop all cached contractions (forces recomputation; used by tests and timing).
  void invalidate();

 private:
  using BondVec = std::vector<Mat>;

  struct Chain {
    std::vector<MpoSite> channel_sites;
    std::vector<BondVec> fwd;  // fwd[s]: bond vector after slots 0..s
    std::vector<BondVec> bwd;  // bwd[s]: Heisenberg bond vector before slot s
  };

  int last_slot() const { return 2 * n_; }
  void rebuild_sites();
  void ensure_fwd(int slot);
  void ensure_bwd(int slot);
  BondVec forward_slot(const Chain& c, int slot, const BondVec& in);
  BondVec backward_slot(const Chain& c, int slot, const BondVec& in);
  double contract(Network which);
  Chain& chain(Network which) { return which == Network::f1 ? f1_ : f2_; }
  void check_operator(const Mat& m, const char* what) const;

  ChannelPair channel_;
  int n_;
  int d_;
  int a_;
  Mat rho0_;
  std::vector<Mat> controls_;
  Mat x_;
  Chain f1_;
  Chain f2_;
  int fwd_valid_ = -1;  // fwd[0..fwd_valid_] up to date
  int bwd_valid_;       // bwd[bwd_valid_..2N] up to date
  OpCounter counter_;
};

/// f1 and f2 for identical controls C_i = C via matrix powers of reshaped
/// transfer matrices: (E C)^{N-1} for f2 and the bond-augmented [M (C (x) I)]^{N-2}
/// for f1. Transfer matrices act on vectorized (sys, anc) operators.
std::pair<double, double> identical_f1_f2(const ChannelPair& channel, const Mat& control, const Mat& rho0,
                                          const Mat& x, int n_queries, int ancilla_dim);

/// Transfer (superoperator) matrix of E (x) id_a on row-major vectorized operators.
Mat channel_transfer(const Mat& choi, int d, int ancilla_dim);
/// Transfer matrix of a control channel on D.
Mat control_transfer(const Mat& choi);

/// Imaginary part tolerated on f1/f2 before the contraction is considered broken.
inline constexpr double kImagTolerance = 1e-8;

}  // namespace qfitn::tnet
