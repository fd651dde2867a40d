// Copyright 2026 The fpcool Authors
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

#include "fpcool/dynamics.hpp"
#include "fpcool/maxent.hpp"
#include "fpcool/thermometry.hpp"

using namespace fpcool;

namespace {

RefrigeratorParams preset(int regime)
{
    return regime == 0 ? RefrigeratorParams::strong_preset() : RefrigeratorParams::weak_preset();
}

void BM_Liouvillian(benchmark::State& state)
{
    const RefrigeratorParams p = preset(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(liouvillian(p));
    }
}
BENCHMARK(BM_Liouvillian)->Arg(0)->Arg(1);

// Cost per RK4 step, measured over 1000-step runs.
void BM_EvolveSteps(benchmark::State& state)
{
    const RefrigeratorParams p = preset(static_cast<int>(state.range(0)));
    const double dt = 0.005;
    for (auto _ : state) {
        benchmark::DoNotOptimize(evolve(p, 1000 * dt, dt, 1000));
    }
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_EvolveSteps)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SteadyStateDirect(benchmark::State& state)
{
    const RefrigeratorParams p = preset(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(steady_state_direct(p));
    }
}
BENCHMARK(BM_SteadyStateDirect)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MaxEntFit(benchmark::State& state)
{
    const int order = static_cast<int>(state.range(0));
    const MomentVector m = moments(mvu_estimator(1.0, 0.5), order);
    const SupportGrid grid = default_support(m);
    for (auto _ : state) {
        benchmark::DoNotOptimize(maxent_fit(m, grid));
    }
}
BENCHMARK(BM_MaxEntFit)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);

void BM_ConvergedPercentiles(benchmark::State& state)
{
    PercentileOptions o;
    o.repetitions = static_cast<int>(state.range(0));
    const EstimatorModel m = mvu_estimator(1.0, 0.9);
    for (auto _ : state) {
        benchmark::DoNotOptimize(converged_percentiles(m, o));
    }
}
BENCHMARK(BM_ConvergedPercentiles)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
