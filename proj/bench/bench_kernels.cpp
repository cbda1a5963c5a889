// Copyright 2026 The Dialoforge Authors. All Rights Reserved.
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

#include "dialoforge/dataset.hpp"
#include "dialoforge/encoding.hpp"
#include "dialoforge/error_injection.hpp"

namespace {

using namespace dialoforge;

const Ontology& hard() {
  static const Ontology o = preset_ontology("hard");
  return o;
}

GeneratorConfig config(std::size_t n) {
  GeneratorConfig cfg;
  cfg.n_dialogues = n;
  return cfg;
}

const Dataset& corpus() {
  static const Dataset ds = generate_dataset(hard(), config(4000));
  return ds;
}

void BM_GenerateSerial(benchmark::State& state) {
  const auto cfg = config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(generate_dataset_serial(hard(), cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_GenerateParallel(benchmark::State& state) {
  const auto cfg = config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(generate_dataset(hard(), cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EncodeSerial(benchmark::State& state) {
  const auto layout = StateLayout::for_ontology(hard());
  const auto& train = corpus().split(Split::kTrain);
  for (auto _ : state) benchmark::DoNotOptimize(encode_split_serial(train, hard(), layout));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(train.size()));
}

void BM_EncodeParallel(benchmark::State& state) {
  const auto layout = StateLayout::for_ontology(hard());
  const auto& train = corpus().split(Split::kTrain);
  for (auto _ : state) benchmark::DoNotOptimize(encode_split(train, hard(), layout));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(train.size()));
}

void BM_InjectSerial(benchmark::State& state) {
  const auto cfg = ErrorConfig::uniform(0.2, 1);
  for (auto _ : state) benchmark::DoNotOptimize(inject_errors_serial(corpus(), hard(), cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus().size()));
}

void BM_InjectParallel(benchmark::State& state) {
  const auto cfg = ErrorConfig::uniform(0.2, 1);
  for (auto _ : state) benchmark::DoNotOptimize(inject_errors(corpus(), hard(), cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(corpus().size()));
}

BENCHMARK(BM_GenerateSerial)->Arg(1000)->Arg(10438)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GenerateParallel)->Arg(1000)->Arg(10438)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EncodeSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EncodeParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_InjectSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InjectParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
