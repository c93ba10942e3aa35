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

// Dense Choi-operator algebra over labelled tensor factors. Everything here
// materializes full matrices, so it only scales to a handful of queries; it
// is the reference the tensor-network engine is checked against.

#pragma once

#include <span>
#include <vector>

#include "qfitn/linalg.hpp"

namespace qfitn::comb {

/// Wire labels. System wires follow the sequential-strategy numbering
/// H_1 ... H_2N (channel k maps H_{2k-1} -> H_{2k}, control k maps
/// H_{2k} -> H_{2k+1}); ancilla wires carry the same index offset by
/// kAncillaOffset.
inline constexpr int kAncillaOffset = 1000;
constexpr int system_label(int i) { return i; }
constexpr int ancilla_label(int i) { return kAncillaOffset + i; }

struct Subsystem {
  int label = 0;
  int dim = 1;
  friend bool operator==(const Subsystem&, const Subsystem&) = default;
};

/// Operator on the tensor product of labelled factors, first factor most significant.
struct LabeledOperator {
  Mat mat;
  std::vector<Subsystem> systems;

  LabeledOperator() = default;
  LabeledOperator(Mat m, std::vector<Subsystem> s);

  long long dim() const;
  /// Position of `label` in `systems`, or -1.
  int position(int label) const;
  std::vector<int> labels() const;
};

/// A * B = Tr_{A cap B}[(I (x) A^{T_{A cap B}})(B (x) I)]. The result carries
/// the unshared labels of A (in A's order) followed by those of B.
LabeledOperator link_product(const LabeledOperator& a, const LabeledOperator& b);

LabeledOperator partial_trace(const LabeledOperator& a, std::span<const int> labels);
LabeledOperator partial_transpose(const LabeledOperator& a, int label);

/// Permute tensor factors so that they appear in `order`.
LabeledOperator reorder(const LabeledOperator& a, std::span<const int> order);

/// a (x) b with a's factors first; labels must be disjoint.
LabeledOperator tensor(const LabeledOperator& a, const LabeledOperator& b);

struct DenseOutput {
  Mat state;       ///< rho_theta on (system (x) ancilla)
  Mat derivative;  ///< d rho_theta / d theta
};

inline constexpr int kMaxDenseQueries = 6;

/// Output state and its derivative of the sequential strategy
/// E o C_{N-1} o ... o C_1 o E (rho0), computed by explicit link products
/// with E replaced by E (x) id_ancilla. The derivative is the sum over the N
/// positions where E is replaced by dE. `controls` are Choi matrices on
/// (sys, anc)_out (x) (sys, anc)_in; `rho0` lives on (sys, anc).
DenseOutput dense_strategy_output(const Mat& choi, const Mat& dchoi, std::span<const Mat> controls,
                                  const Mat& rho0, int n_queries, int ancilla_dim);

}  // namespace qfitn::comb
