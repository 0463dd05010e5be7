// Copyright 2026 The vruref Authors
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

#include "vruref/annotation.hpp"
#include "vruref/evaluation.hpp"
#include "vruref/pipeline.hpp"
#include "vruref/signature.hpp"
#include "vruref/simulator.hpp"

#include <benchmark/benchmark.h>

namespace
{

struct Fixture
{
  vruref::sim::Scenario scenario;
  vruref::Trajectory reference;
  vruref::AnnotationResult labeled;

  Fixture()
  : scenario(vruref::sim::simulate(vruref::sim::preset(1))),
    reference(vruref::build_state_trajectory(scenario.truth)),
    labeled(vruref::serial::annotate_scenario(
      scenario.scans, reference, scenario.config.vru_kind, scenario.config.mounts,
      vruref::EgoTrajectory(scenario.config.ego_pose)))
  {
  }
};

const Fixture & fixture()
{
  static const Fixture f;
  return f;
}

void BM_AnnotateSerial(benchmark::State & state)
{
  const auto & f = fixture();
  const vruref::EgoTrajectory ego(f.scenario.config.ego_pose);
  for (auto _ : state) {
    benchmark::DoNotOptimize(vruref::serial::annotate_scenario(
      f.scenario.scans, f.reference, f.scenario.config.vru_kind, f.scenario.config.mounts, ego));
  }
}
BENCHMARK(BM_AnnotateSerial)->Unit(benchmark::kMillisecond);

void BM_AnnotateParallel(benchmark::State & state)
{
  const auto & f = fixture();
  const vruref::EgoTrajectory ego(f.scenario.config.ego_pose);
  for (auto _ : state) {
    benchmark::DoNotOptimize(vruref::annotate_scenario(
      f.scenario.scans, f.reference, f.scenario.config.vru_kind, f.scenario.config.mounts, ego));
  }
}
BENCHMARK(BM_AnnotateParallel)->Unit(benchmark::kMillisecond);

void BM_AccumulateSerial(benchmark::State & state)
{
  const auto & f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(vruref::serial::accumulate(f.labeled.scans));
  }
}
BENCHMARK(BM_AccumulateSerial)->Unit(benchmark::kMillisecond);

void BM_AccumulateParallel(benchmark::State & state)
{
  const auto & f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(vruref::accumulate(f.labeled.scans));
  }
}
BENCHMARK(BM_AccumulateParallel)->Unit(benchmark::kMillisecond);

void BM_CycleStatsSerial(benchmark::State & state)
{
  const auto & f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(vruref::serial::cycle_stats_series(f.labeled.scans));
  }
}
BENCHMARK(BM_CycleStatsSerial)->Unit(benchmark::kMillisecond);

void BM_CycleStatsParallel(benchmark::State & state)
{
  const auto & f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(vruref::cycle_stats_series(f.labeled.scans));
  }
}
BENCHMARK(BM_CycleStatsParallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
