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

#include <cstdint>
#include <random>

#include "qfitn/linalg.hpp"

namespace qfitn {

using Rng = std::mt19937_64;

/// Matrix of i.i.d. standard complex Gaussians.
Mat ginibre(int rows, int cols, Rng& rng);

/// Haar-random unitary (QR of a Ginibre matrix with phase correction).
Mat random_unitary(int d, Rng& rng);

/// Haar-random unit vector.
Vec random_pure_state(int d, Rng& rng);

/// Hilbert-Schmidt random density matrix (full rank almost surely).
Mat random_density_matrix(int d, Rng& rng);

/// GUE-like random Hermitian matrix with unit-variance entries.
Mat random_hermitian(int d, Rng& rng);

/// Choi operator (out (x) in) of a random CPTP map sampled from a Haar
/// Stinespring isometry with `kraus_rank` Kraus operators (0 = d_out*d_in).
/// Throws std::invalid_argument when kraus_rank * d_out < d_in.
Mat random_cptp_choi(int d_out, int d_in, Rng& rng, int kraus_rank = 0);

}  // namespace qfitn
