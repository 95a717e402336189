// Copyright 2026 The DRODA Authors
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

#include "droda/dual_dro.hpp"
#include "droda/expandable_props.hpp"
#include "droda/gaussian_manifold.hpp"

using namespace droda;

namespace {

const GaussianModel kModel{Eigen::Vector3d(2.0, -1.0, 0.5), 1.0};

template <bool Parallel>
void BM_Sample(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    PointCloud c = Parallel ? kernels::sample_omp(kModel, n, 1) : kernels::sample_serial(kModel, n, 1);
    benchmark::DoNotOptimize(c);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_PseudolabelSum(benchmark::State& state) {
  const PointCloud c = sample(kModel, static_cast<std::size_t>(state.range(0)), 2);
  const Vector theta = kModel.mu.normalized();
  for (auto _ : state) {
    Vector s = Parallel ? kernels::pseudolabel_sum_omp(c.features(), theta)
                        : kernels::pseudolabel_sum_serial(c.features(), theta);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_MonteCarloCount(benchmark::State& state) {
  const Sampler s = uniform_box(Vector::Zero(2), Vector::Ones(2));
  const kernels::Classifier half = [](std::span<const double> x) { return x[0] <= 0.5 ? 1u : 0u; };
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto h = Parallel ? kernels::count_omp(s, n, 3, half, 2) : kernels::count_serial(s, n, 3, half, 2);
    benchmark::DoNotOptimize(h);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_SphereRestarts(benchmark::State& state) {
  const PointCloud c = sample(kModel, static_cast<std::size_t>(state.range(0)), 4);
  DualParams params;
  params.gamma = 2.0;
  for (auto _ : state) {
    SphereResult r = minimize_over_sphere(c, params, 8, 5, Parallel ? Exec::parallel : Exec::serial);
    benchmark::DoNotOptimize(r.risk);
  }
}

}  // namespace

BENCHMARK(BM_Sample<false>)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_Sample<true>)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_PseudolabelSum<false>)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_PseudolabelSum<true>)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_MonteCarloCount<false>)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_MonteCarloCount<true>)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_SphereRestarts<false>)->Arg(200)->Arg(1000);
BENCHMARK(BM_SphereRestarts<true>)->Arg(200)->Arg(1000);

BENCHMARK_MAIN();
