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

#include "qfitn/comb.hpp"

#include <algorithm>
#include <string>

namespace qfitn::comb {

namespace {

std::vector<long long> strides_of(const std::vector<Subsystem>& systems) {
  std::vector<long long> st(systems.size(), 1);
  for (int k = static_cast<int>(systems.size()) - 2; k >= 0; --k)
    st[k] = st[k + 1] * systems[k + 1].dim;
  return st;
}

// Flat offsets into an operator for every digit combination of the factors at
// `positions`, enumerated in mixed radix with the first position most significant.
std::vector<long long> offsets_of(const std::vector<Subsystem>& systems, const std::vector<int>& positions) {
  const auto st = strides_of(systems);
  std::vector<long long> offs{0};
  for (int p : positions) {
    std::vector<long long> next;
    next.reserve(offs.size() * systems[p].dim);
    for (long long base : offs)
      for (int digit = 0; digit < systems[p].dim; ++digit) next.push_back(base + digit * st[p]);
    offs = std::move(next);
  }
  return offs;
}

std::vector<Subsystem> pick(const std::vector<Subsystem>& systems, const std::vector<int>& positions) {
  std::vector<Subsystem> out;
  out.reserve(positions.size());
  for (int p : positions) out.push_back(systems[p]);
  return out;
}

}  // namespace

LabeledOperator::LabeledOperator(Mat m, std::vector<Subsystem> s) : mat(std::move(m)), systems(std::move(s)) {
  for (std::size_t i = 0; i < systems.size(); ++i) {
    if (systems[i].dim < 1) throw DimensionError("LabeledOperator: non-positive factor dimension");
    for (std::size_t j = i + 1; j < systems.size(); ++j)
      if (systems[i].label == systems[j].label)
        throw DimensionError("LabeledOperator: duplicate label " + std::to_string(systems[i].label));
  }
  if (mat.rows() != dim() || mat.cols() != dim())
    throw DimensionError("LabeledOperator: matrix size " + std::to_string(mat.rows()) +
                         " does not match product of factor dimensions " + std::to_string(dim()));
}

long long LabeledOperator::dim() const {
  long long d = 1;
  for (const auto& s : systems) d *= s.dim;
  return d;
}

int LabeledOperator::position(int label) const {
  for (std::size_t i = 0; i < systems.size(); ++i)
    if (systems[i].label == label) return static_cast<int>(i);
  return -1;
}

std::vector<int> LabeledOperator::labels() const {
  std::vector<int> out;
  for (const auto& s : systems) out.push_back(s.label);
  return out;
}

LabeledOperator link_product(const LabeledOperator& a, const LabeledOperator& b) {
  std::vector<int> a_shared, b_shared, a_only, b_only;
  for (int i = 0; i < static_cast<int>(a.systems.size()); ++i) {
    const int j = b.position(a.systems[i].label);
    if (j < 0) {
      a_only.push_back(i);
      continue;
    }
    if (a.systems[i].dim != b.systems[j].dim)
      throw DimensionError("link_product: shared label " + std::to_string(a.systems[i].label) +
                           " has mismatched dimensions");
    a_shared.push_back(i);
    b_shared.push_back(j);
  }
  for (int j = 0; j < static_cast<int>(b.systems.size()); ++j)
    if (a.position(b.systems[j].label) < 0) b_only.push_back(j);

  const auto a_sh = offsets_of(a.systems, a_shared);
  const auto b_sh = offsets_of(b.systems, b_shared);
  const auto a_ex = offsets_of(a.systems, a_only);
  const auto b_ex = offsets_of(b.systems, b_only);
  const auto na = static_cast<long long>(a_ex.size());
  const auto nb = static_cast<long long>(b_ex.size());
  const auto ns = static_cast<long long>(a_sh.size());

  // (A*B)[(y,x),(y',x')] = sum_{t,s} A[(t,y),(s,y')] B[(x,t),(x',s)]
  Mat out = Mat::Zero(na * nb, na * nb);
  for (long long y = 0; y < na; ++y)
    for (long long x = 0; x < nb; ++x)
      for (long long y2 = 0; y2 < na; ++y2)
        for (long long x2 = 0; x2 < nb; ++x2) {
          cplx acc = 0;
          for (long long t = 0; t < ns; ++t)
            for (long long s = 0; s < ns; ++s)
              acc += a.mat(a_sh[t] + a_ex[y], a_sh[s] + a_ex[y2]) * b.mat(b_ex[x] + b_sh[t], b_ex[x2] + b_sh[s]);
          out(y * nb + x, y2 * nb + x2) = acc;
        }

  std::vector<Subsystem> systems = pick(a.systems, a_only);
  for (const auto& s : pick(b.systems, b_only)) systems.push_back(s);
  return {std::move(out), std::move(systems)};
}

LabeledOperator partial_trace(const LabeledOperator& a, std::span<const int> labels) {
  std::vector<int> traced, kept;
  for (int label : labels) {
    const int p = a.position(label);
    if (p < 0) throw std::invalid_argument("partial_trace: unknown label " + std::to_string(label));
    traced.push_back(p);
  }
  for (int i = 0; i < static_cast<int>(a.systems.size()); ++i)
    if (std::find(traced.begin(), traced.end(), i) == traced.end()) kept.push_back(i);
  const auto tr = offsets_of(a.systems, traced);
  const auto kp = offsets_of(a.systems, kept);
  const auto n = static_cast<long long>(kp.size());
  Mat out = Mat::Zero(n, n);
  for (long long r = 0; r < n; ++r)
    for (long long c = 0; c < n; ++c) {
      cplx acc = 0;
      for (long long t : tr) acc += a.mat(kp[r] + t, kp[c] + t);
      out(r, c) = acc;
    }
  return {std::move(out), pick(a.systems, kept)};
}

LabeledOperator partial_transpose(const LabeledOperator& a, int label) {
  const int p = a.position(label);
  if (p < 0) throw std::invalid_argument("partial_transpose: unknown label " + std::to_string(label));
  const long long st = strides_of(a.systems)[p];
  const long long d = a.systems[p].dim;
  const long long n = a.dim();
  Mat out(n, n);
  for (long long r = 0; r < n; ++r) {
    const long long dr = (r / st) % d;
    for (long long c = 0; c < n; ++c) {
      const long long dc = (c / st) % d;
      out(r, c) = a.mat(r + (dc - dr) * st, c + (dr - dc) * st);
    }
  }
  return {std::move(out), a.systems};
}

LabeledOperator reorder(const LabeledOperator& a, std::span<const int> order) {
  if (order.size() != a.systems.size())
    throw std::invalid_argument("reorder: label list does not match operator factors");
  std::vector<int> positions;
  for (int label : order) {
    const int p = a.position(label);
    if (p < 0) throw std::invalid_argument("reorder: unknown label " + std::to_string(label));
    positions.push_back(p);
  }
  const auto offs = offsets_of(a.systems, positions);
  const auto n = static_cast<long long>(offs.size());
  Mat out(n, n);
  for (long long r = 0; r < n; ++r)
    for (long long c = 0; c < n; ++c) out(r, c) = a.mat(offs[r], offs[c]);
  return {std::move(out), pick(a.systems, positions)};
}

LabeledOperator tensor(const LabeledOperator& a, const LabeledOperator& b) {
  std::vector<Subsystem> systems = a.systems;
  systems.insert(systems.end(), b.systems.begin(), b.systems.end());
  return {kron(a.mat, b.mat), std::move(systems)};
}

namespace {

// Channel k (1-based) maps (H_{2k-1}, A_{2k-1}) -> (H_{2k}, A_{2k}); the
// ancilla wire is an explicit identity channel.
LabeledOperator channel_site(const Mat& choi, int d, int ancilla_dim, int k) {
  LabeledOperator e(choi, {{system_label(2 * k), d}, {system_label(2 * k - 1), d}});
  if (ancilla_dim == 1) return e;
  LabeledOperator id(max_entangled_projector(ancilla_dim),
                     {{ancilla_label(2 * k), ancilla_dim}, {ancilla_label(2 * k - 1), ancilla_dim}});
  const std::vector<int> order{system_label(2 * k), ancilla_label(2 * k), system_label(2 * k - 1),
                               ancilla_label(2 * k - 1)};
  return reorder(tensor(e, id), order);
}

std::vector<Subsystem> wire(int index, int d, int ancilla_dim) {
  std::vector<Subsystem> s{{system_label(index), d}};
  if (ancilla_dim > 1) s.push_back({ancilla_label(index), ancilla_dim});
  return s;
}

LabeledOperator control_site(const Mat& choi, int d, int ancilla_dim, int k) {
  auto systems = wire(2 * k + 1, d, ancilla_dim);
  for (const auto& s : wire(2 * k, d, ancilla_dim)) systems.push_back(s);
  return {choi, std::move(systems)};
}

}  // namespace

DenseOutput dense_strategy_output(const Mat& choi, const Mat& dchoi, std::span<const Mat> controls,
                                  const Mat& rho0, int n_queries, int ancilla_dim) {
  if (n_queries < 1) throw std::invalid_argument("dense_strategy_output: need at least one query");
  if (n_queries > kMaxDenseQueries)
    throw std::invalid_argument("dense_strategy_output: N = " + std::to_string(n_queries) +
                                " exceeds the dense-mode limit of " + std::to_string(kMaxDenseQueries));
  if (ancilla_dim < 1) throw DimensionError("dense_strategy_output: ancilla dimension must be >= 1");
  if (static_cast<int>(controls.size()) != n_queries - 1)
    throw DimensionError("dense_strategy_output: expected N-1 controls");
  const int d = exact_sqrt(choi.rows(), "dense_strategy_output");
  if (dchoi.rows() != choi.rows()) throw DimensionError("dense_strategy_output: derivative shape mismatch");

  std::vector<LabeledOperator> ctrl;
  for (int k = 1; k < n_queries; ++k) ctrl.push_back(control_site(controls[k - 1], d, ancilla_dim, k));

  // Run the comb with the channel at position `marked` (1-based) replaced by dE; 0 = none.
  auto compose = [&](int marked) {
    LabeledOperator state(rho0, wire(1, d, ancilla_dim));
    for (int k = 1; k <= n_queries; ++k) {
      state = link_product(state, channel_site(k == marked ? dchoi : choi, d, ancilla_dim, k));
      if (k < n_queries) state = link_product(state, ctrl[k - 1]);
    }
    return state.mat;
  };

  DenseOutput out;
  out.state = compose(0);
  out.derivative = Mat::Zero(out.state.rows(), out.state.cols());
  for (int i = 1; i <= n_queries; ++i) out.derivative += compose(i);
  return out;
}

}  // namespace qfitn::comb
