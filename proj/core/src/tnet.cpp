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

#include "qfitn/tnet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qfitn::tnet {

std::vector<MpoSite> build_derivative_mpo(const Mat& choi, const Mat& dchoi, int n_queries) {
  if (n_queries < 1) throw std::invalid_argument("build_derivative_mpo: N must be >= 1");
  if (choi.rows() != dchoi.rows() || choi.cols() != dchoi.cols())
    throw DimensionError("build_derivative_mpo: E and dE differ in shape");
  if (n_queries == 1) return {MpoSite{1, 1, {dchoi}}};

  // Bond value 0 carries the derivative branch, value 1 the plain branch.
  std::vector<MpoSite> sites;
  sites.reserve(n_queries);
  sites.push_back(MpoSite{2, 1, {dchoi, choi}});
  for (int i = 2; i < n_queries; ++i) sites.push_back(MpoSite{2, 2, {choi, dchoi, std::nullopt, choi}});
  sites.push_back(MpoSite{1, 2, {choi, dchoi}});
  return sites;
}

Mat contract_mpo_dense(std::span<const MpoSite> sites) {
  if (sites.empty()) throw std::invalid_argument("contract_mpo_dense: empty MPO");
  std::vector<Mat> bond(sites.front().cols, Mat::Ones(1, 1));
  for (const auto& site : sites) {
    if (static_cast<int>(bond.size()) != site.cols) throw DimensionError("contract_mpo_dense: bond mismatch");
    std::vector<Mat> next(site.rows);
    for (int r = 0; r < site.rows; ++r) {
      for (int c = 0; c < site.cols; ++c) {
        const auto& blk = site.block(r, c);
        if (!blk) continue;
        Mat term = kron(*blk, bond[c]);
        if (next[r].size() == 0)
          next[r] = std::move(term);
        else
          next[r] += term;
      }
      if (next[r].size() == 0) {
        const auto n = sites.front().blocks.front()->rows() * bond[0].rows();
        next[r] = Mat::Zero(n, n);
      }
    }
    bond = std::move(next);
  }
  if (bond.size() != 1) throw DimensionError("contract_mpo_dense: open bond at the chain end");
  return bond.front();
}

Mat apply_channel(const Mat& choi, const Mat& state, int d, int ancilla_dim) {
  const int a = ancilla_dim;
  const int n = d * a;
  if (state.rows() != n || state.cols() != n || choi.rows() != d * d)
    throw DimensionError("apply_channel: shape mismatch");
  Mat out = Mat::Zero(n, n);
  // out[(i,x),(k,y)] = sum_{j,l} E[(i,j),(k,l)] S[(j,x),(l,y)]
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j)
        for (int l = 0; l < d; ++l) {
          const cplx e = choi(i * d + j, k * d + l);
          if (e == cplx(0)) continue;
          out.block(i * a, k * a, a, a) += e * state.block(j * a, l * a, a, a);
        }
  return out;
}

Mat apply_channel_adjoint(const Mat& choi, const Mat& op, int d, int ancilla_dim) {
  const int a = ancilla_dim;
  const int n = d * a;
  if (op.rows() != n || op.cols() != n || choi.rows() != d * d)
    throw DimensionError("apply_channel_adjoint: shape mismatch");
  Mat out = Mat::Zero(n, n);
  // G[(l,y),(j,x)] = sum_{i,k} E[(i,j),(k,l)] Y[(k,y),(i,x)]
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j)
        for (int l = 0; l < d; ++l) {
          const cplx e = choi(i * d + j, k * d + l);
          if (e == cplx(0)) continue;
          out.block(l * a, j * a, a, a) += e * op.block(k * a, i * a, a, a);
        }
  return out;
}

Mat apply_control(const Mat& choi, const Mat& state) {
  const auto n = state.rows();
  if (state.cols() != n || choi.rows() != n * n || choi.cols() != n * n)
    throw DimensionError("apply_control: shape mismatch");
  Mat out(n, n);
  // out[o,o'] = sum_{i,i'} C[(o,i),(o',i')] S[i,i'] = Tr[C_block(o,o') S^T]
  for (Eigen::Index o = 0; o < n; ++o)
    for (Eigen::Index p = 0; p < n; ++p) out(o, p) = choi.block(o * n, p * n, n, n).cwiseProduct(state).sum();
  return out;
}

Mat apply_control_adjoint(const Mat& choi, const Mat& op) {
  const auto n = op.rows();
  if (op.cols() != n || choi.rows() != n * n || choi.cols() != n * n)
    throw DimensionError("apply_control_adjoint: shape mismatch");
  // G[i',i] = sum_{o,o'} C[(o,i),(o',i')] Y[o',o]
  Mat out = Mat::Zero(n, n);
  for (Eigen::Index o = 0; o < n; ++o)
    for (Eigen::Index p = 0; p < n; ++p) {
      const cplx y = op(p, o);
      if (y == cplx(0)) continue;
      out += y * choi.block(o * n, p * n, n, n).transpose();
    }
  return out;
}

// ---------------------------------------------------------------------------
// MpoChain

MpoChain::MpoChain(const ChannelPair& channel, int n_queries, int ancilla_dim)
    : channel_(channel), n_(n_queries), d_(channel.d), a_(ancilla_dim) {
  if (n_ < 1) throw std::invalid_argument("MpoChain: N must be >= 1");
  if (a_ < 1) throw DimensionError("MpoChain: ancilla dimension must be >= 1");
  if (d_ < 1 || channel.choi.rows() != d_ * d_ || channel.dchoi.rows() != d_ * d_)
    throw DimensionError("MpoChain: channel Choi matrices must be d^2 x d^2");
  const int dim = d_ * a_;
  rho0_ = Mat::Identity(dim, dim) / static_cast<double>(dim);
  controls_.assign(n_ - 1, max_entangled_projector(dim));
  x_ = Mat::Zero(dim, dim);
  for (Chain* c : {&f1_, &f2_}) {
    c->fwd.assign(2 * n_, {});
    c->bwd.assign(2 * n_ + 1, {});
  }
  bwd_valid_ = last_slot() + 1;
  rebuild_sites();
}

void MpoChain::rebuild_sites() {
  f1_.channel_sites = build_derivative_mpo(channel_.choi, channel_.dchoi, n_);
  f2_.channel_sites.assign(n_, MpoSite{1, 1, {channel_.choi}});
}

void MpoChain::check_operator(const Mat& m, const char* what) const {
  if (m.rows() != dim() || m.cols() != dim())
    throw DimensionError(std::string("MpoChain::") + what + ": expected a " + std::to_string(dim()) + "x" +
                         std::to_string(dim()) + " operator");
}

void MpoChain::set_channel(const ChannelPair& channel) {
  if (channel.d != d_ || channel.choi.rows() != d_ * d_ || channel.dchoi.rows() != d_ * d_)
    throw DimensionError("MpoChain::set_channel: dimension change");
  channel_ = channel;
  rebuild_sites();
  invalidate();
}

void MpoChain::set_input_state(const Mat& rho0) {
  check_operator(rho0, "set_input_state");
  rho0_ = rho0;
  fwd_valid_ = -1;
}

void MpoChain::set_control(int i, const Mat& choi) {
  if (i < 1 || i > n_ - 1) throw std::out_of_range("MpoChain::set_control: control index out of range");
  if (choi.rows() != dim() * dim() || choi.cols() != dim() * dim())
    throw DimensionError("MpoChain::set_control: control Choi must be D^2 x D^2");
  controls_[i - 1] = choi;
  fwd_valid_ = std::min(fwd_valid_, 2 * i - 1);
  bwd_valid_ = std::max(bwd_valid_, 2 * i + 1);
}

void MpoChain::set_all_controls(const Mat& choi) {
  for (int i = 1; i < n_; ++i) set_control(i, choi);
}

void MpoChain::set_observable(const Mat& x) {
  check_operator(x, "set_observable");
  x_ = x;
  bwd_valid_ = last_slot() + 1;
}

const Mat& MpoChain::control(int i) const {
  if (i < 1 || i > n_ - 1) throw std::out_of_range("MpoChain::control: control index out of range");
  return controls_[i - 1];
}

void MpoChain::invalidate() {
  fwd_valid_ = -1;
  bwd_valid_ = last_slot() + 1;
}

MpoChain::BondVec MpoChain::forward_slot(const Chain& c, int slot, const BondVec& in) {
  if (slot % 2 == 0) {
    const Mat& ctrl = controls_[slot / 2 - 1];
    BondVec out;
    out.reserve(in.size());
    for (const auto& s : in) {
      out.push_back(apply_control(ctrl, s));
      ++counter_.tensor_multiplies;
    }
    return out;
  }
  const MpoSite& site = c.channel_sites[(slot - 1) / 2];
  if (static_cast<int>(in.size()) != site.cols) throw DimensionError("MpoChain: bond mismatch (forward)");
  BondVec out(site.rows, Mat::Zero(dim(), dim()));
  for (int r = 0; r < site.rows; ++r)
    for (int col = 0; col < site.cols; ++col)
      if (const auto& blk = site.block(r, col)) {
        out[r] += apply_channel(*blk, in[col], d_, a_);
        ++counter_.tensor_multiplies;
      }
  return out;
}

MpoChain::BondVec MpoChain::backward_slot(const Chain& c, int slot, const BondVec& in) {
  if (slot % 2 == 0) {
    const Mat& ctrl = controls_[slot / 2 - 1];
    BondVec out;
    out.reserve(in.size());
    for (const auto& y : in) {
      out.push_back(apply_control_adjoint(ctrl, y));
      ++counter_.tensor_multiplies;
    }
    return out;
  }
  const MpoSite& site = c.channel_sites[(slot - 1) / 2];
  if (static_cast<int>(in.size()) != site.rows) throw DimensionError("MpoChain: bond mismatch (backward)");
  BondVec out(site.cols, Mat::Zero(dim(), dim()));
  for (int r = 0; r < site.rows; ++r)
    for (int col = 0; col < site.cols; ++col)
      if (const auto& blk = site.block(r, col)) {
        out[col] += apply_channel_adjoint(*blk, in[r], d_, a_);
        ++counter_.tensor_multiplies;
      }
  return out;
}

void MpoChain::ensure_fwd(int slot) {
  if (fwd_valid_ < 0) {
    f1_.fwd[0] = {rho0_};
    f2_.fwd[0] = {rho0_};
    fwd_valid_ = 0;
  }
  for (int s = fwd_valid_ + 1; s <= slot; ++s) {
    f1_.fwd[s] = forward_slot(f1_, s, f1_.fwd[s - 1]);
    f2_.fwd[s] = forward_slot(f2_, s, f2_.fwd[s - 1]);
    fwd_valid_ = s;
  }
}

void MpoChain::ensure_bwd(int slot) {
  const int end = last_slot();
  if (bwd_valid_ > end) {
    f1_.bwd[end] = {x_};
    f2_.bwd[end] = {x_ * x_};
    bwd_valid_ = end;
  }
  for (int s = bwd_valid_ - 1; s >= slot; --s) {
    f1_.bwd[s] = backward_slot(f1_, s, f1_.bwd[s + 1]);
    f2_.bwd[s] = backward_slot(f2_, s, f2_.bwd[s + 1]);
    bwd_valid_ = s;
  }
}

namespace {

double checked_real(cplx v, const char* what) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw NumericalError(std::string(what) + ": non-finite contraction value");
  if (std::abs(v.imag()) > kImagTolerance * std::max(1.0, std::abs(v.real())))
    throw NumericalError(std::string(what) + ": contraction has imaginary part " + std::to_string(v.imag()));
  return v.real();
}

}  // namespace

double MpoChain::contract(Network which) {
  ensure_bwd(std::min(bwd_valid_, last_slot()));
  const int split = std::max(0, bwd_valid_ - 1);
  ensure_fwd(split);
  const Chain& c = chain(which);
  cplx acc = 0;
  const auto& left = c.fwd[split];
  const auto& right = c.bwd[split + 1];
  for (std::size_t g = 0; g < left.size(); ++g) acc += trace_product(right[g], left[g]);
  return checked_real(acc, which == Network::f1 ? "f1" : "f2");
}

double MpoChain::f1() { return contract(Network::f1); }
double MpoChain::f2() { return contract(Network::f2); }

Mat MpoChain::output_state() {
  ensure_fwd(last_slot() - 1);
  return f2_.fwd[last_slot() - 1].front();
}

Mat MpoChain::output_derivative() {
  ensure_fwd(last_slot() - 1);
  return f1_.fwd[last_slot() - 1].front();
}

Mat MpoChain::linear_coefficient(Network which, Site site) {
  const Chain& c = chain(which);
  switch (site.kind) {
    case Site::Kind::input:
      ensure_bwd(1);
      return c.bwd[1].front();
    case Site::Kind::observable:
      ensure_fwd(last_slot() - 1);
      return c.fwd[last_slot() - 1].front();
    case Site::Kind::control: {
      const int i = site.index;
      if (i < 1 || i > n_ - 1) throw std::out_of_range("MpoChain: control index out of range");
      ensure_bwd(2 * i + 1);
      ensure_fwd(2 * i - 1);
      const auto& left = c.fwd[2 * i - 1];
      const auto& right = c.bwd[2 * i + 1];
      Mat g = Mat::Zero(dim() * dim(), dim() * dim());
      for (std::size_t b = 0; b < left.size(); ++b) g += kron(right[b], left[b].transpose());
      return g;
    }
  }
  throw std::invalid_argument("MpoChain: invalid site");
}

Mat MpoChain::environment(Network which, Site site) { return linear_coefficient(which, site).transpose(); }

Mat MpoChain::objective_coefficient(Site site) {
  return 2.0 * linear_coefficient(Network::f1, site) - linear_coefficient(Network::f2, site);
}

// ---------------------------------------------------------------------------
// Identical controls via transfer-matrix powers

Mat channel_transfer(const Mat& choi, int d, int ancilla_dim) {
  const int a = ancilla_dim;
  const int n = d * a;
  Mat t = Mat::Zero(n * n, n * n);
  // T[((i,x),(k,y)), ((j,x),(l,y))] = E[(i,j),(k,l)]
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j)
        for (int l = 0; l < d; ++l) {
          const cplx e = choi(i * d + j, k * d + l);
          if (e == cplx(0)) continue;
          for (int x = 0; x < a; ++x)
            for (int y = 0; y < a; ++y)
              t((i * a + x) * n + (k * a + y), (j * a + x) * n + (l * a + y)) = e;
        }
  return t;
}

Mat control_transfer(const Mat& choi) {
  const int n = exact_sqrt(choi.rows(), "control_transfer");
  Mat t(n * n, n * n);
  for (int o = 0; o < n; ++o)
    for (int p = 0; p < n; ++p)
      for (int i = 0; i < n; ++i)
        for (int q = 0; q < n; ++q) t(o * n + p, i * n + q) = choi(o * n + i, p * n + q);
  return t;
}

namespace {

Mat matrix_power(Mat base, int exponent) {
  Mat result = Mat::Identity(base.rows(), base.cols());
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

Vec vec_rows(const Mat& m) {
  Vec v(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) v(r * m.cols() + c) = m(r, c);
  return v;
}

// Tr[Y unvec(v)] for row-major v.
cplx trace_against(const Mat& y, const Vec& v) {
  const auto n = y.rows();
  cplx acc = 0;
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) acc += y(c, r) * v(r * n + c);
  return acc;
}

}  // namespace

std::pair<double, double> identical_f1_f2(const ChannelPair& channel, const Mat& control, const Mat& rho0,
                                          const Mat& x, int n_queries, int ancilla_dim) {
  if (n_queries < 1) throw std::invalid_argument("identical_f1_f2: N must be >= 1");
  const int d = channel.d;
  const int n = d * ancilla_dim;
  if (rho0.rows() != n || x.rows() != n || control.rows() != n * n)
    throw DimensionError("identical_f1_f2: shape mismatch");

  const Mat te = channel_transfer(channel.choi, d, ancilla_dim);
  const Mat tde = channel_transfer(channel.dchoi, d, ancilla_dim);
  const Vec v0 = vec_rows(rho0);

  if (n_queries == 1) {
    const double f1 = checked_real(trace_against(x, tde * v0), "f1");
    const double f2 = checked_real(trace_against(x * x, te * v0), "f2");
    return {f1, f2};
  }

  const Mat tc = control_transfer(control);
  const Mat ec = te * tc;
  const Mat dec = tde * tc;

  // f2: rho = (E C)^{N-1} E rho0
  const Vec rho = matrix_power(ec, n_queries - 1) * (te * v0);
  const double f2 = checked_real(trace_against(x * x, rho), "f2");

  // f1: bond-augmented transfer [[EC, dEC], [0, EC]] over (derivative, plain).
  const auto m = ec.rows();
  Mat bulk = Mat::Zero(2 * m, 2 * m);
  bulk.topLeftCorner(m, m) = ec;
  bulk.topRightCorner(m, m) = dec;
  bulk.bottomRightCorner(m, m) = ec;
  Vec u(2 * m);
  u.head(m) = tde * v0;
  u.tail(m) = te * v0;
  u = matrix_power(bulk, n_queries - 2) * u;
  const Vec w = ec * u.head(m) + dec * u.tail(m);
  const double f1 = checked_real(trace_against(x, w), "f1");
  return {f1, f2};
}

}  // namespace qfitn::tnet
