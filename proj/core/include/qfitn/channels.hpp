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

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "qfitn/linalg.hpp"

namespace qfitn {

/// Choi operator of a linear map, indexed (out (x) in) with the output
/// factor most significant: mat((o, i), (o', i')). A quantum state is a
/// Choi operator with d_in = 1.
struct ChoiOperator {
  Mat mat;
  int d_out = 0;
  int d_in = 0;

  /// Tr_out(mat), the d_in x d_in matrix that equals I for trace-preserving maps.
  Mat trace_out() const;
  /// Largest violation among hermiticity, positivity and Tr_out = I.
  double channel_defect() const;
};

/// A channel and its theta-derivative at a fixed parameter value, both as
/// Choi matrices on (out (x) in) of a d-dimensional system.
struct ChannelPair {
  Mat choi;
  Mat dchoi;
  int d = 0;
};

/// Sum_i (K_i (x) I)|I>><<I|(K_i (x) I)^dagger with |I>> = sum_j |j>|j>.
ChoiOperator choi_from_kraus(const std::vector<Mat>& kraus);

/// Product-rule derivative of choi_from_kraus given dK_i/dtheta.
Mat choi_derivative(const std::vector<Mat>& kraus, const std::vector<Mat>& dkraus);

/// Theta-parametrized channel in Kraus form with analytic derivatives. An
/// optional depolarizing admixture is applied at the Choi level:
/// E -> (1 - eps) E + eps I/d.
class ParamChannel {
 public:
  using KrausFn = std::function<std::vector<Mat>(double)>;

  ParamChannel(std::string name, int d, KrausFn kraus, KrausFn dkraus,
               double depolarizing = 0.0);

  const std::string& name() const { return name_; }
  int dim() const { return d_; }
  double depolarizing_weight() const { return depolarizing_; }

  std::vector<Mat> kraus_at(double theta) const { return kraus_(theta); }
  std::vector<Mat> dkraus_at(double theta) const { return dkraus_(theta); }

  ChoiOperator choi_at(double theta) const;
  Mat dchoi_at(double theta) const;
  ChannelPair pair_at(double theta) const;

 private:
  friend ParamChannel mix_with_depolarizing(const ParamChannel&, double);

  std::string name_;
  int d_;
  KrausFn kraus_;
  KrausFn dkraus_;
  double depolarizing_;
};

/// Signal after bit flip noise: K_i = U_Z(theta) {sqrt(1-p) I, sqrt(p) X}.
ParamChannel preset_bit_flip(double p);
/// Signal after amplitude damping noise.
ParamChannel preset_amplitude_damping(double p);
/// Dephasing along cos(theta) Z + sin(theta) X; no signal unitary.
ParamChannel preset_dephasing_direction(double p);

/// Look up a preset by its config name: bit_flip, amplitude_damping, dephasing_direction.
ParamChannel make_preset(std::string_view name, double p);
const std::vector<std::string>& preset_names();

/// Channel whose Choi operator is (1 - eps) E_theta + eps I/d, derivative scaled by (1 - eps).
ParamChannel mix_with_depolarizing(const ParamChannel& channel, double eps);

/// Unitary U_Z(theta) = exp(-i theta Z / 2).
Mat phase_unitary(double theta);

}  // namespace qfitn
