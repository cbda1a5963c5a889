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

#include <gtest/gtest.h>

#include <filesystem>

#include "dialoforge/dataset.hpp"
#include "dialoforge/errors.hpp"
#include "dialoforge/parallel.hpp"
#include "test_support.hpp"

namespace dialoforge {
namespace {

TEST(Dataset, SplitCounts) {
  const auto simple = split_counts(2000, {0.6, 0.2, 0.2});
  EXPECT_EQ(simple.train, 1200u);
  EXPECT_EQ(simple.val, 400u);
  EXPECT_EQ(simple.test, 400u);

  const auto hard = split_counts(10438, {8438.0 / 10438, 1000.0 / 10438, 1000.0 / 10438});
  EXPECT_EQ(hard.train, 8438u);
  EXPECT_EQ(hard.val, 1000u);
  EXPECT_EQ(hard.test, 1000u);

  const auto one = split_counts(1, {0.6, 0.2, 0.2});
  EXPECT_EQ(one.train, 1u);
  EXPECT_EQ(one.val + one.test, 0u);
}

TEST(Dataset, PresetDefaultsGiveExpectedSplits) {
  const auto o = preset_ontology("simple");
  auto cfg = GeneratorConfig::for_ontology(o);
  const auto ds = generate_dataset(o, cfg);
  EXPECT_EQ(ds.split(Split::kTrain).size(), 1200u);
  EXPECT_EQ(ds.split(Split::kVal).size(), 400u);
  EXPECT_EQ(ds.split(Split::kTest).size(), 400u);
  EXPECT_EQ(ds.ontology_hash, o.hash());
}

TEST(Dataset, IdsFollowGenerationOrder) {
  const auto o = testing::minimal_ontology();
  const auto ds = generate_dataset(o, testing::events_off(10));
  std::size_t i = 0;
  for (auto s : kSplits) {
    for (const auto& d : ds.split(s)) {
      EXPECT_EQ(d.id, dialogue_id(i));
      EXPECT_EQ(d.seed, derive_seed(0, i));
      ++i;
    }
  }
}

TEST(Dataset, ParallelMatchesSerialForAnyWorkerCount) {
  const auto o = preset_ontology("hard");
  GeneratorConfig cfg;
  cfg.n_dialogues = 400;
  cfg.seed = 17;
  const auto serial = generate_dataset_serial(o, cfg);
  for (int workers : {1, 2, 4, 7}) {
    set_worker_count(workers);
    EXPECT_EQ(generate_dataset(o, cfg), serial) << workers;
  }
  set_worker_count(0);
}

TEST(Dataset, JsonRoundTrip) {
  const auto o = preset_ontology("medium");
  GeneratorConfig cfg;
  cfg.n_dialogues = 50;
  const auto ds = generate_dataset(o, cfg);
  for (auto s : kSplits) {
    const auto text = to_jsonl(ds.split(s));
    EXPECT_EQ(dialogues_from_jsonl(text), ds.split(s));
    EXPECT_EQ(to_jsonl(dialogues_from_jsonl(text)), text);
  }
  EXPECT_EQ(generator_config_from_json(to_json(cfg)).n_dialogues, cfg.n_dialogues);
}

TEST(Dataset, WriteAndReadDirectory) {
  const auto dir = std::filesystem::temp_directory_path() / "dialoforge_dataset_test";
  std::filesystem::remove_all(dir);
  const auto o = testing::two_domain_ontology();
  GeneratorConfig cfg;
  cfg.n_dialogues = 30;
  const auto ds = generate_dataset(o, cfg);
  write_splits(dir, ds);
  const auto back = read_dataset(dir);
  for (auto s : kSplits) EXPECT_EQ(back.split(s), ds.split(s));
  std::filesystem::remove_all(dir);
}

TEST(Dataset, MalformedLineIsRejected) {
  EXPECT_ANY_THROW(dialogues_from_jsonl("{\"id\": 3}\n"));
  EXPECT_ANY_THROW(dialogues_from_jsonl("not json\n"));
}

}  // namespace
}  // namespace dialoforge
