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

#include "qfitn/channels.hpp"

#include <algorithm>
#include <cmath>

namespace qfitn {

namespace {

// Row-major vectorization: v((o, i)) = K(o, i), so that (K (x) I)|I>> = v.
Vec row_vec(const Mat& k) {
  Vec v(k.rows() * k.cols());
  for (Eigen::Index o = 0; o < k.rows(); ++o)
    for (Eigen::Index i = 0; i < k.cols(); ++i) v(o * k.cols() + i) = k(o, i);
  return v;
}

void check_kraus_shapes(const std::vector<Mat>& kraus, const char* what) {
  if (kraus.empty()) throw DimensionError(std::string(what) + ": empty Kraus set");
  const auto d = kraus.front().rows();
  for (const auto& k : kraus)
    if (k.rows() != d || k.cols() != d)
      throw DimensionError(std::string(what) + ": Kraus operators must be square and of equal dimension");
}

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument(std::string(what) + ": p must lie in [0, 1]");
}

}  // namespace

Mat ChoiOperator::trace_out() const { return trace_first(mat, d_out, d_in); }

double ChoiOperator::channel_defect() const {
  const double herm = hermiticity_defect(mat);
  const double neg = std::max(0.0, -min_eigenvalue(hermitian_part(mat)));
  const double tp = (trace_out() - Mat::Identity(d_in, d_in)).norm();
  return std::max({herm, neg, tp});
}

ChoiOperator choi_from_kraus(const std::vector<Mat>& kraus) {
  check_kraus_shapes(kraus, "choi_from_kraus");
  const int d = static_cast<int>(kraus.front().rows());
  Mat choi = Mat::Zero(d * d, d * d);
  for (const auto& k : kraus) {
    const Vec v = row_vec(k);
    choi.noalias() += v * v.adjoint();
  }
  return {choi, d, d};
}

Mat choi_derivative(const std::vector<Mat>& kraus, const std::vector<Mat>& dkraus) {
  check_kraus_shapes(kraus, "choi_derivative");
  check_kraus_shapes(dkraus, "choi_derivative");
  if (kraus.size() != dkraus.size() || kraus.front().rows() != dkraus.front().rows())
    throw DimensionError("choi_derivative: Kraus and derivative lists differ in length or dimension");
  const auto d = kraus.front().rows();
  Mat out = Mat::Zero(d * d, d * d);
  for (std::size_t j = 0; j < kraus.size(); ++j) {
    const Vec v = row_vec(kraus[j]);
    const Vec dv = row_vec(dkraus[j]);
    out.noalias() += dv * v.adjoint() + v * dv.adjoint();
  }
  return out;
}

ParamChannel::ParamChannel(std::string name, int d, KrausFn kraus, KrausFn dkraus,
                           double depolarizing)
    : name_(std::move(name)),
      d_(d),
      kraus_(std::move(kraus)),
      dkraus_(std::move(dkraus)),
      depolarizing_(depolarizing) {
  if (d_ < 1) throw DimensionError("ParamChannel: dimension must be positive");
  if (!(depolarizing_ >= 0.0 && depolarizing_ <= 1.0))
    throw std::invalid_argument("ParamChannel: depolarizing weight must lie in [0, 1]");
}

ChoiOperator ParamChannel::choi_at(double theta) const {
  ChoiOperator c = choi_from_kraus(kraus_(theta));
  if (depolarizing_ > 0.0)
    c.mat = (1.0 - depolarizing_) * c.mat +
            (depolarizing_ / d_) * Mat::Identity(d_ * d_, d_ * d_);
  return c;
}

Mat ParamChannel::dchoi_at(double theta) const {
  return (1.0 - depolarizing_) * choi_derivative(kraus_(theta), dkraus_(theta));
}

ChannelPair ParamChannel::pair_at(double theta) const {
  return {choi_at(theta).mat, dchoi_at(theta), d_};
}

Mat phase_unitary(double theta) { return rz(theta); }

namespace {

// K_i^theta = U_Z(theta) K_i, dK_i = (-i Z / 2) U_Z(theta) K_i.
ParamChannel signal_after_noise(std::string name, std::vector<Mat> noise) {
  auto kraus = [noise](double theta) {
    const Mat u = phase_unitary(theta);
    std::vector<Mat> out;
    out.reserve(noise.size());
    for (const auto& k : noise) out.push_back(u * k);
    return out;
  };
  auto dkraus = [noise](double theta) {
    const Mat du = (-kI / 2.0) * pauli_z() * phase_unitary(theta);
    std::vector<Mat> out;
    out.reserve(noise.size());
    for (const auto& k : noise) out.push_back(du * k);
    return out;
  };
  return ParamChannel(std::move(name), 2, kraus, dkraus);
}

}  // namespace

ParamChannel preset_bit_flip(double p) {
  check_probability(p, "preset_bit_flip");
  return signal_after_noise("bit_flip", {std::sqrt(1.0 - p) * identity(2), std::sqrt(p) * pauli_x()});
}

ParamChannel preset_amplitude_damping(double p) {
  check_probability(p, "preset_amplitude_damping");
  Mat k1 = Mat::Zero(2, 2);
  k1(0, 0) = 1.0;
  k1(1, 1) = std::sqrt(1.0 - p);
  Mat k2 = Mat::Zero(2, 2);
  k2(0, 1) = std::sqrt(p);
  return signal_after_noise("amplitude_damping", {k1, k2});
}

ParamChannel preset_dephasing_direction(double p) {
  check_probability(p, "preset_dephasing_direction");
  auto kraus = [p](double theta) {
    return std::vector<Mat>{
        std::sqrt(1.0 - p) * identity(2),
        std::sqrt(p) * (std::cos(theta) * pauli_z() + std::sin(theta) * pauli_x())};
  };
  auto dkraus = [p](double theta) {
    return std::vector<Mat>{
        Mat::Zero(2, 2),
        std::sqrt(p) * (-std::sin(theta) * pauli_z() + std::cos(theta) * pauli_x())};
  };
  return ParamChannel("dephasing_direction", 2, kraus, dkraus);
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"bit_flip", "amplitude_damping", "dephasing_direction"};
  return names;
}

ParamChannel make_preset(std::string_view name, double p) {
  if (name == "bit_flip") return preset_bit_flip(p);
  if (name == "amplitude_damping") return preset_amplitude_damping(p);
  if (name == "dephasing_direction") return preset_dephasing_direction(p);
  throw std::invalid_argument("unknown channel preset '" + std::string(name) + "'");
}

ParamChannel mix_with_depolarizing(const ParamChannel& channel, double eps) {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::invalid_argument("mix_with_depolarizing: eps must lie in [0, 1]");
  ParamChannel out = channel;
  out.depolarizing_ = 1.0 - (1.0 - eps) * (1.0 - channel.depolarizing_);
  return out;
}

}  // namespace qfitn
