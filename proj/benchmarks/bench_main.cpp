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


#include <benchmark/benchmark.h>

#include "qfitn/channels.hpp"
#include "qfitn/optimize.hpp"
#include "qfitn/random.hpp"
#include "qfitn/sdp.hpp"
#include "qfitn/tnet.hpp"

using namespace qfitn;

namespace {

// One full arbitrary-control sweep: X, rho0 and every control SDP.
void BM_Sweep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  const ChannelPair pair = preset_amplitude_damping(0.1).pair_at(1.0);
  const opt::Strategy s = opt::initial_strategy(2, n, 1, opt::ControlMode::arbitrary_cptp, rng);
  tnet::MpoChain chain = opt::make_chain(pair, s);
  const auto backend = sdp::make_backend("interior");
  for (auto _ : state) {
    opt::update_X(chain);
    opt::update_input_state(chain);
    for (int i = 1; i < n; ++i) opt::update_control_arbitrary(chain, i, *backend, {});
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_Sweep)->RangeMultiplier(2)->Range(8, 128)->Complexity(benchmark::oN)->Unit(benchmark::kMillisecond);

void BM_ContractFromScratch(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(2);
  const ChannelPair pair = preset_bit_flip(0.1).pair_at(1.0);
  tnet::MpoChain chain(pair, n, 2);
  chain.set_input_state(random_density_matrix(4, rng));
  chain.set_all_controls(random_cptp_choi(4, 4, rng));
  chain.set_observable(random_hermitian(4, rng));
  for (auto _ : state) {
    chain.invalidate();
    benchmark::DoNotOptimize(chain.objective());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_ContractFromScratch)->RangeMultiplier(2)->Range(8, 256)->Complexity(benchmark::oN);

void BM_IdenticalPowerPath(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(3);
  const ChannelPair pair = preset_bit_flip(0.1).pair_at(1.0);
  const Mat ctrl = random_cptp_choi(4, 4, rng);
  const Mat rho0 = random_density_matrix(4, rng);
  const Mat x = random_hermitian(4, rng);
  for (auto _ : state) benchmark::DoNotOptimize(tnet::identical_f1_f2(pair, ctrl, rho0, x, n, 2));
}
BENCHMARK(BM_IdenticalPowerPath)->RangeMultiplier(4)->Range(16, 4096);

void BM_ControlSdp(benchmark::State& state, const char* name, int dim) {
  Rng rng(4);
  const auto backend = sdp::make_backend(name);
  const Mat a = random_hermitian(dim * dim, rng);
  for (auto _ : state) benchmark::DoNotOptimize(sdp::solve_cptp_linear(a, dim, dim, {}, backend.get()));
}
BENCHMARK_CAPTURE(BM_ControlSdp, interior_d2, "interior", 2)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_ControlSdp, splitting_d2, "splitting", 2)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_ControlSdp, interior_d4, "interior", 4)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_ControlSdp, splitting_d4, "splitting", 4)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
