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


#include "qfitn/ansatz.hpp"

#include <stdexcept>
#include <string>

namespace qfitn {

AnsatzParams AnsatzParams::zeros(int n_qubits, int n_layers) {
  if (n_qubits < 1 || n_layers < 1) throw std::invalid_argument("AnsatzParams: need n >= 1 and l >= 1");
  return {n_qubits, n_layers, RVec::Zero(3 * n_qubits * n_layers)};
}

void AnsatzParams::validate() const {
  if (n_qubits < 1 || n_layers < 1) throw std::invalid_argument("AnsatzParams: need n >= 1 and l >= 1");
  if (phi.size() != size())
    throw std::invalid_argument("AnsatzParams: phi has " + std::to_string(phi.size()) + " entries, expected " +
                                std::to_string(size()));
}

std::vector<Gate> build_circuit(const AnsatzParams& params) {
  params.validate();
  const int n = params.n_qubits;
  std::vector<Gate> gates;
  gates.reserve(params.n_layers * (2 * n - 1));
  for (int l = 0; l < params.n_layers; ++l) {
    for (int q = 0; q < n; ++q) {
      const int base = 3 * (l * n + q);
      gates.push_back({Gate::Kind::u3, l, q, q, params.phi(base), params.phi(base + 1), params.phi(base + 2)});
    }
    for (int q = 0; q + 1 < n; ++q) gates.push_back({Gate::Kind::cnot, l, q, q + 1});
  }
  return gates;
}

Mat u3(double a, double b, double c) { return rz(c) * ry(b) * rz(a); }

namespace {

Mat embed_single(const Mat& g, int qubit, int n) {
  Mat out = Mat::Identity(1, 1);
  for (int q = 0; q < n; ++q) out = kron(out, q == qubit ? g : identity(2));
  return out;
}

Mat cnot_matrix(int control, int target, int n) {
  const int dim = 1 << n;
  Mat out = Mat::Zero(dim, dim);
  for (int s = 0; s < dim; ++s) {
    const int cbit = (s >> (n - 1 - control)) & 1;
    const int flipped = cbit ? s ^ (1 << (n - 1 - target)) : s;
    out(flipped, s) = 1.0;
  }
  return out;
}

}  // namespace

Mat ansatz_unitary(const AnsatzParams& params) {
  const int n = params.n_qubits;
  Mat u = identity(1 << n);
  for (const Gate& g : build_circuit(params)) {
    const Mat m = g.kind == Gate::Kind::u3 ? embed_single(u3(g.a, g.b, g.c), g.qubit, n)
                                           : cnot_matrix(g.qubit, g.target, n);
    u = m * u;
  }
  return u;
}

ChoiOperator choi_of_unitary(const Mat& u) {
  if (u.rows() != u.cols()) throw DimensionError("choi_of_unitary: U must be square");
  const auto d = u.rows();
  if ((u.adjoint() * u - Mat::Identity(d, d)).norm() > 1e-10)
    throw std::invalid_argument("choi_of_unitary: U is not unitary");
  Vec v(d * d);
  for (Eigen::Index o = 0; o < d; ++o)
    for (Eigen::Index i = 0; i < d; ++i) v(o * d + i) = u(o, i);
  return {v * v.adjoint(), static_cast<int>(d), static_cast<int>(d)};
}

RVec grad_objective(const RVec& phi, const ScalarObjective& objective, double h) {
  RVec grad(phi.size());
  RVec probe = phi;
  for (Eigen::Index k = 0; k < phi.size(); ++k) {
    probe(k) = phi(k) + h;
    const double up = objective(probe);
    probe(k) = phi(k) - h;
    const double down = objective(probe);
    probe(k) = phi(k);
    grad(k) = (up - down) / (2.0 * h);
  }
  return grad;
}

int qubits_for_dim(int dim) {
  int n = 0;
  while ((1 << n) < dim) ++n;
  if ((1 << n) != dim || n == 0) throw DimensionError("qubits_for_dim: dimension is not a power of two >= 2");
  return n;
}

}  // namespace qfitn
