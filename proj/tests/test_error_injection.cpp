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

#include <cmath>
#include <map>

#include "dialoforge/error_injection.hpp"
#include "dialoforge/errors.hpp"
#include "dialoforge/parallel.hpp"
#include "test_support.hpp"

namespace dialoforge {
namespace {

Dataset sample(std::string_view preset, std::size_t n, std::uint64_t seed = 0) {
  GeneratorConfig cfg;
  cfg.n_dialogues = n;
  cfg.seed = seed;
  return generate_dataset(preset_ontology(preset), cfg);
}

struct Totals {
  std::size_t intents = 0;
  std::size_t actions = 0;
  std::size_t slots = 0;
};

Totals count_labels(const Dataset& ds) {
  Totals t;
  for (const auto& split : ds.splits) {
    for (const auto& d : split) {
      for (const auto& turn : d.turns) {
        t.intents += turn.user_acts.size();
        t.actions += turn.system_acts.size();
        for (const auto& a : turn.user_acts) t.slots += a.slot.has_value();
      }
    }
  }
  return t;
}

std::size_t count_records(const std::vector<PerturbationRecord>& rs, ElementKind k) {
  return static_cast<std::size_t>(
      std::count_if(rs.begin(), rs.end(), [k](const PerturbationRecord& r) { return r.element == k; }));
}

TEST(Injection, PerturbLabelModes) {
  const std::vector<std::string> catalog = {"inform", "affirm", "negate"};
  Rng rng(1);
  EXPECT_EQ(perturb_label("inform", catalog, rng, PerturbMode::kUnk), "unk");
  for (int i = 0; i < 100; ++i) {
    const auto r = perturb_label("inform", catalog, rng, PerturbMode::kRelabel);
    EXPECT_NE(r, "inform");
    EXPECT_NE(std::find(catalog.begin(), catalog.end(), r), catalog.end());
  }
  const std::vector<std::string> one = {"inform"};
  EXPECT_THROW(perturb_label("inform", one, rng, PerturbMode::kRelabel), CatalogTooSmall);
}

TEST(Injection, RelabelIsUniformOverOtherLabels) {
  std::vector<std::string> catalog;
  for (int i = 0; i < 26; ++i) catalog.push_back("a" + std::to_string(i));
  Rng rng(2024);
  std::map<std::string, int> hits;
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) ++hits[perturb_label("a0", catalog, rng, PerturbMode::kRelabel)];
  EXPECT_EQ(hits.size(), 25u);
  EXPECT_EQ(hits.count("a0"), 0u);
  for (const auto& [label, n] : hits) EXPECT_NEAR(n / double(kDraws), 1.0 / 25, 0.01) << label;
}

TEST(Injection, ZeroProbabilityIsIdentity) {
  const auto o = preset_ontology("hard");
  const auto ds = sample("hard", 100);
  const auto r = inject_errors(ds, o, ErrorConfig::uniform(0.0, 9));
  EXPECT_EQ(r.dataset, ds);
  EXPECT_TRUE(r.records.empty());
}

TEST(Injection, UnkModeAtRateOneReplacesEveryIntent) {
  const auto o = preset_ontology("simple");
  const auto ds = sample("simple", 50);
  ErrorConfig cfg;
  cfg.p_intent = 1.0;
  cfg.mode_weights = {0.0, 1.0};
  const auto r = inject_errors(ds, o, cfg);
  for (const auto& split : r.dataset.splits) {
    for (const auto& d : split) {
      for (const auto& t : d.turns) {
        for (const auto& a : t.user_acts) EXPECT_EQ(a.kind, IntentKind::kUnk);
      }
    }
  }
  EXPECT_EQ(count_records(r.records, ElementKind::kIntent), count_labels(ds).intents);
}

TEST(Injection, RatesWithinBinomialBounds) {
  const auto o = preset_ontology("hard");
  const auto ds = sample("hard", 3500, 4);
  const auto totals = count_labels(ds);
  ASSERT_GE(totals.actions, 50000u);
  ErrorConfig cfg;
  cfg.p_intent = 0.1;
  cfg.p_action = 0.2;
  cfg.p_slot = 0.3;
  cfg.seed = 77;
  const auto r = inject_errors(ds, o, cfg);
  auto check = [](std::size_t hits, std::size_t n, double p) {
    const double sd = std::sqrt(n * p * (1 - p));
    EXPECT_LE(std::abs(double(hits) - n * p), 3 * sd) << hits << " of " << n << " at " << p;
  };
  check(count_records(r.records, ElementKind::kIntent), totals.intents, 0.1);
  check(count_records(r.records, ElementKind::kAction), totals.actions, 0.2);
  check(count_records(r.records, ElementKind::kSlot), totals.slots, 0.3);
  const double action_rate = count_records(r.records, ElementKind::kAction) / double(totals.actions);
  EXPECT_GE(action_rate, 0.19);
  EXPECT_LE(action_rate, 0.21);
}

TEST(Injection, CategoriesAreIsolated) {
  const auto o = preset_ontology("medium");
  const auto ds = sample("medium", 200);
  ErrorConfig only_actions;
  only_actions.p_action = 0.3;
  only_actions.seed = 5;
  const auto a = inject_errors(ds, o, only_actions);
  EXPECT_EQ(count_records(a.records, ElementKind::kIntent), 0u);
  EXPECT_EQ(count_records(a.records, ElementKind::kSlot), 0u);

  auto plus_intents = only_actions;
  plus_intents.p_intent = 0.5;
  const auto b = inject_errors(ds, o, plus_intents);
  std::vector<PerturbationRecord> b_actions;
  for (const auto& r : b.records) {
    if (r.element == ElementKind::kAction) b_actions.push_back(r);
  }
  EXPECT_EQ(b_actions, a.records);
}

TEST(Injection, RevertRestoresOriginalBytes) {
  const auto o = preset_ontology("hard");
  const auto ds = sample("hard", 150);
  auto r = inject_errors(ds, o, ErrorConfig::uniform(0.4, 3));
  ASSERT_FALSE(r.records.empty());
  for (const auto& rec : r.records) EXPECT_NE(rec.original, rec.replacement);
  revert_perturbations(r.dataset, r.records);
  for (auto s : kSplits) EXPECT_EQ(to_jsonl(r.dataset.split(s)), to_jsonl(ds.split(s)));
}

TEST(Injection, RevertRejectsMismatchedRecords) {
  const auto o = preset_ontology("simple");
  const auto ds = sample("simple", 20);
  auto r = inject_errors(ds, o, ErrorConfig::uniform(0.5, 3));
  ASSERT_FALSE(r.records.empty());
  auto copy = ds;
  EXPECT_THROW(revert_perturbations(copy, r.records), UnknownLabel);
}

TEST(Injection, ParallelMatchesSerial) {
  const auto o = preset_ontology("hard");
  const auto ds = sample("hard", 300);
  const auto cfg = ErrorConfig::uniform(0.25, 11);
  const auto serial = inject_errors_serial(ds, o, cfg);
  for (int workers : {1, 2, 5}) {
    set_worker_count(workers);
    const auto par = inject_errors(ds, o, cfg);
    EXPECT_EQ(par.dataset, serial.dataset);
    EXPECT_EQ(par.records, serial.records);
  }
  set_worker_count(0);
}

TEST(Injection, TrainOnlyLeavesEvaluationSplits) {
  const auto o = preset_ontology("simple");
  const auto ds = sample("simple", 100);
  auto cfg = ErrorConfig::uniform(0.5, 1);
  cfg.train_only = true;
  const auto r = inject_errors(ds, o, cfg);
  EXPECT_NE(r.dataset.split(Split::kTrain), ds.split(Split::kTrain));
  EXPECT_EQ(r.dataset.split(Split::kVal), ds.split(Split::kVal));
  EXPECT_EQ(r.dataset.split(Split::kTest), ds.split(Split::kTest));
}

TEST(Injection, RecordsRoundTripThroughJsonl) {
  const auto o = preset_ontology("medium");
  const auto r = inject_errors(sample("medium", 50), o, ErrorConfig::uniform(0.3, 8));
  const auto text = records_to_jsonl(r.records);
  EXPECT_EQ(records_from_jsonl(text), r.records);
  auto cfg = ErrorConfig::uniform(0.3, 8);
  cfg.train_only = true;
  const auto back = error_config_from_json(to_json(cfg));
  EXPECT_EQ(back.p_slot, 0.3);
  EXPECT_TRUE(back.train_only);
}

TEST(Injection, UnknownLabelsAreRejected) {
  const auto o = preset_ontology("simple");
  auto ds = sample("simple", 5);
  ds.split(Split::kTrain)[0].turns[0].system_acts[0] = "restaurant-FLY";
  EXPECT_THROW(inject_errors(ds, o, ErrorConfig::uniform(0.1, 0)), UnknownLabel);
}

TEST(Injection, ConfigValidation) {
  auto cfg = ErrorConfig::uniform(1.2, 0);
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = ErrorConfig::uniform(0.1, 0);
  cfg.mode_weights = {0.0, 0.0};
  EXPECT_THROW(cfg.validate(), ValidationError);
}

}  // namespace
}  // namespace dialoforge
