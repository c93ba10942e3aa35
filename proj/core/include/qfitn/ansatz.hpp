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


// Layered variational unitary used as a control operation.
//
// Each layer applies a ZYZ rotation U3(a, b, c) = Rz(c) Ry(b) Rz(a) to every
// qubit, then a chain of CNOTs with control q and target q + 1. Qubit 0 is the
// most significant tensor factor (the system qubit when an ancilla is present).

#pragma once

#include <functional>
#include <vector>

#include "qfitn/channels.hpp"
#include "qfitn/linalg.hpp"

namespace qfitn {

struct AnsatzParams {
  int n_qubits = 1;
  int n_layers = 1;
  RVec phi;  ///< phi[3 * (layer * n_qubits + qubit) + k], k = 0, 1, 2 for (a, b, c)

  static AnsatzParams zeros(int n_qubits, int n_layers);
  int size() const { return 3 * n_qubits * n_layers; }
  /// Throws std::invalid_argument when phi has the wrong length.
  void validate() const;
};

struct Gate {
  enum class Kind { u3, cnot };
  Kind kind = Kind::u3;
  int layer = 0;
  int qubit = 0;   ///< rotated qubit, or CNOT control
  int target = 0;  ///< CNOT target
  double a = 0.0, b = 0.0, c = 0.0;
};

/// Gates in application order; l * (2n - 1) of them.
std::vector<Gate> build_circuit(const AnsatzParams& params);

/// Rz(c) Ry(b) Rz(a).
Mat u3(double a, double b, double c);

/// U = V_l ... V_1 on 2^n dimensions.
Mat ansatz_unitary(const AnsatzParams& params);

/// Choi operator (U (x) I)|I>><<I|(U (x) I)^dagger. Throws std::invalid_argument
/// when U is not unitary within 1e-10.
ChoiOperator choi_of_unitary(const Mat& u);

using ScalarObjective = std::function<double(const RVec&)>;

inline constexpr double kGradientStep = 1e-5;

/// Central finite-difference gradient, one component at a time.
RVec grad_objective(const RVec& phi, const ScalarObjective& objective, double h = kGradientStep);

/// Number of qubits for a register of dimension dim (must be a power of two).
int qubits_for_dim(int dim);

}  // namespace qfitn
