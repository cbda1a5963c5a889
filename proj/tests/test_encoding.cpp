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

#include <algorithm>

#include "dialoforge/encoding.hpp"
#include "dialoforge/errors.hpp"
#include "dialoforge/parallel.hpp"
#include "test_support.hpp"

namespace dialoforge {
namespace {

using testing::events_off;
using testing::minimal_ontology;

TEST(Encoding, BitVectorPacking) {
  BitVector v(70);
  v.set(0);
  v.set(9);
  v.set(69);
  EXPECT_EQ(v.count(), 3u);
  EXPECT_EQ(v.ones(), (std::vector<std::size_t>{0, 9, 69}));
  const auto bytes = v.packed();
  ASSERT_EQ(bytes.size(), 9u);
  EXPECT_EQ(static_cast<unsigned char>(bytes[0]), 0x01);
  EXPECT_EQ(static_cast<unsigned char>(bytes[1]), 0x02);
  EXPECT_EQ(BitVector::unpack(bytes, 70), v);
  EXPECT_ANY_THROW(BitVector::unpack(bytes, 65));
  EXPECT_EQ(v.to_string().substr(0, 10), "1000000001");
}

TEST(Encoding, LayoutWidthPerPreset) {
  for (auto name : kPresetNames) {
    const auto o = preset_ontology(name);
    const auto layout = StateLayout::for_ontology(o);
    EXPECT_EQ(layout.width(), 2 * o.slots().size() + 9 + o.action_catalog().size() + 4) << name;
    EXPECT_EQ(StateLayout::for_ontology(o, 3).width(), 2 * o.slots().size() + 9 + 3 * o.action_catalog().size() + 4);
    const auto d = layout.describe(o);
    EXPECT_EQ(d["width"].get<std::size_t>(), layout.width());
  }
}

TEST(Encoding, MinimalFixtureStates) {
  const auto o = minimal_ontology();
  const auto layout = StateLayout::for_ontology(o);
  const auto d = generate_dialogue(o, events_off(), 1);
  ASSERT_EQ(d.turns.size(), 5u);

  const auto s0 = decode_state(encode_state(d, 0, o), layout);
  EXPECT_TRUE(s0.last_actions.empty());
  EXPECT_TRUE(s0.filled.empty());
  EXPECT_EQ(s0.intents, std::vector{IntentKind::kInformIntent});
  EXPECT_EQ(s0.phase, Phase::kEliciting);
  EXPECT_FALSE(s0.nested);

  const auto s1 = decode_state(encode_state(d, 1, o), layout);
  EXPECT_EQ(s1.filled, std::vector<std::size_t>{0});
  EXPECT_EQ(s1.changed, std::vector<std::size_t>{0});
  EXPECT_EQ(s1.intents, std::vector{IntentKind::kInform});
  EXPECT_EQ(s1.last_actions, std::vector<std::size_t>{*o.action_index("restaurant-REQUEST-food")});

  const auto s3 = decode_state(encode_state(d, 3, o), layout);
  EXPECT_EQ(s3.filled, (std::vector<std::size_t>{0, 1}));
  EXPECT_TRUE(s3.changed.empty());
  EXPECT_EQ(s3.phase, Phase::kNotified);

  // Final turn: the stack is empty after the closing acts.
  const auto s4 = decode_state(encode_state(d, 4, o), layout);
  EXPECT_TRUE(s4.filled.empty());
  EXPECT_FALSE(s4.phase.has_value());

  EXPECT_THROW(encode_state(d, 5, o), IndexOutOfRange);
}

TEST(Encoding, DecodedTracesMatchEngineTrace) {
  const auto o = preset_ontology("hard");
  GeneratorConfig cfg;
  const auto layout = StateLayout::for_ontology(o);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto d = generate_dialogue(o, cfg, seed);
    for (std::size_t t = 0; t < d.turns.size(); ++t) {
      const auto s = decode_state(encode_state(d, t, o), layout);
      std::vector<IntentKind> expect;
      for (auto k : kIntentCatalog) {
        for (const auto& a : d.turns[t].user_acts) {
          if (a.kind == k) {
            expect.push_back(k);
            break;
          }
        }
      }
      EXPECT_EQ(s.intents, expect);
      std::vector<std::size_t> prev;
      if (t > 0) {
        for (const auto& id : d.turns[t - 1].system_acts) prev.push_back(*o.action_index(id));
        std::sort(prev.begin(), prev.end());
      }
      EXPECT_EQ(s.last_actions, prev);
    }
  }
}

TEST(Encoding, IdenticalPrefixesGiveIdenticalStates) {
  const auto o = minimal_ontology();
  const auto a = generate_dialogue(o, events_off(), 1);
  auto b = a;
  b.turns[4].user_acts = {UserAct::bare(IntentKind::kGoodbye)};
  for (std::size_t t = 0; t < 4; ++t) EXPECT_EQ(encode_state(a, t, o), encode_state(b, t, o));
}

TEST(Encoding, ActionTargets) {
  const auto o = preset_ontology("hard");
  const std::vector<std::string> two = {"restaurant-CONFIRM-people", "restaurant-REQUEST-food"};
  const auto t = encode_actions(two, o);
  EXPECT_EQ(t.width(), o.action_catalog().size());
  EXPECT_EQ(t.count(), 2u);
  EXPECT_TRUE(t.test(*o.action_index(two[0])));
  EXPECT_TRUE(t.test(*o.action_index(two[1])));

  EXPECT_EQ(encode_actions(o.action_ids(), o).count(), o.action_catalog().size());
  EXPECT_TRUE(encode_actions(std::vector<std::string>{}, o).none());
  EXPECT_TRUE(encode_actions(std::vector<std::string>{"unk"}, o).none());
  EXPECT_THROW(encode_actions(std::vector<std::string>{"restaurant-FLY"}, o), UnknownLabel);
}

TEST(Encoding, OnePairPerTurn) {
  const auto o = preset_ontology("medium");
  GeneratorConfig cfg;
  cfg.n_dialogues = 60;
  const auto ds = generate_dataset(o, cfg);
  const auto enc = encode_dataset(ds, o);
  for (auto s : kSplits) {
    std::size_t turns = 0;
    for (const auto& d : ds.split(s)) turns += d.turns.size();
    EXPECT_EQ(enc.split(s).size(), turns);
  }
}

TEST(Encoding, SerializeRoundTrip) {
  const auto o = preset_ontology("hard");
  GeneratorConfig cfg;
  cfg.n_dialogues = 40;
  const auto ds = generate_dataset(o, cfg);
  const auto enc = encode_dataset(ds, o);
  EncodedHeader h;
  h.state_width = enc.layout.width();
  h.target_width = enc.target_width;
  h.rows = enc.split(Split::kTrain).size();
  h.ontology_hash = o.hash();
  const auto bytes = serialize_split(enc.split(Split::kTrain), h);
  const auto [h2, back] = deserialize_split(bytes);
  EXPECT_EQ(back, enc.split(Split::kTrain));
  EXPECT_EQ(h2.ontology_hash, o.hash());
  EXPECT_EQ(serialize_split(back, h2), bytes);
  EXPECT_THROW(deserialize_split(bytes.substr(0, bytes.size() - 1)), SchemaError);
  EXPECT_THROW(deserialize_split("garbage"), SchemaError);
}

TEST(Encoding, EventsOffMappingIsFunctional) {
  for (auto name : kPresetNames) {
    const auto o = preset_ontology(name);
    auto cfg = events_off(1000);
    const auto enc = encode_dataset(generate_dataset(o, cfg), o);
    for (auto s : kSplits) EXPECT_EQ(find_collisions(enc.split(s)).colliding_states, 0u) << name;
  }
}

TEST(Encoding, CollisionReportCountsConflicts) {
  EncodedSplit split;
  BitVector s(3), t1(2), t2(2);
  t1.set(0);
  t2.set(1);
  split.states = {s, s, s};
  split.targets = {t1, t1, t2};
  const auto r = find_collisions(split);
  EXPECT_EQ(r.distinct_states, 1u);
  EXPECT_EQ(r.colliding_states, 1u);
  EXPECT_EQ(r.colliding_rows, 3u);
}

TEST(Encoding, PerturbedLabelsEncodeLeniently) {
  const auto o = minimal_ontology();
  const auto layout = StateLayout::for_ontology(o);
  auto d = generate_dialogue(o, events_off(), 1);
  d.turns[1].user_acts[0].kind = IntentKind::kUnk;
  d.turns[2].user_acts[0].slot = "unk";
  d.turns[1].system_acts[0] = "unk";
  const auto s1 = decode_state(encode_state(d, 1, o), layout);
  EXPECT_EQ(s1.intents, std::vector{IntentKind::kUnk});
  EXPECT_TRUE(s1.filled.empty());
  const auto s2 = decode_state(encode_state(d, 2, o), layout);
  EXPECT_TRUE(s2.changed.empty());
  EXPECT_EQ(s2.last_actions, std::vector<std::size_t>{*o.action_index("restaurant-REQUEST-people")});
}

TEST(Encoding, ParallelMatchesSerial) {
  const auto o = preset_ontology("hard");
  GeneratorConfig cfg;
  cfg.n_dialogues = 300;
  const auto ds = generate_dataset(o, cfg);
  const auto layout = StateLayout::for_ontology(o);
  const auto serial = encode_split_serial(ds.split(Split::kTrain), o, layout);
  for (int workers : {1, 3, 8}) {
    set_worker_count(workers);
    EXPECT_EQ(encode_split(ds.split(Split::kTrain), o, layout), serial);
  }
  set_worker_count(0);
}

TEST(Encoding, UnknownActionNamesDialogueAndTurn) {
  const auto o = minimal_ontology();
  auto d = generate_dialogue(o, events_off(), 1);
  d.id = "dlg-x";
  d.turns[2].system_acts = {"restaurant-FLY"};
  try {
    EncodedSplit out;
    encode_dialogue(d, o, StateLayout::for_ontology(o), out);
    FAIL();
  } catch (const UnknownLabel& e) {
    EXPECT_NE(std::string(e.what()).find("dlg-x"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("turn 2"), std::string::npos);
  }
}

}  // namespace
}  // namespace dialoforge
