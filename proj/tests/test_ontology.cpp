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

#include "dialoforge/errors.hpp"
#include "dialoforge/ontology.hpp"
#include "test_support.hpp"

namespace dialoforge {
namespace {

using testing::minimal_ontology;

TEST(Ontology, MinimalCatalogIsSortedAndComplete) {
  const auto o = minimal_ontology();
  const std::vector<std::string> expected = {
      "GENERAL-ANSWER_CHIT_CHAT", "restaurant-CONFIRM-food",  "restaurant-CONFIRM-people", "restaurant-NOTIFY",
      "restaurant-REQUEST-food",  "restaurant-REQUEST-people", "restaurant-REQ_MORE",
  };
  auto sorted = expected;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(o.action_ids(), sorted);
  EXPECT_TRUE(std::is_sorted(o.action_ids().begin(), o.action_ids().end()));
}

TEST(Ontology, IdentifierForms) {
  EXPECT_EQ((AtomicActionId{"restaurant", ActionKind::kRequest, "food"}.str()), "restaurant-REQUEST-food");
  EXPECT_EQ(AtomicActionId::answer_chit_chat().str(), "GENERAL-ANSWER_CHIT_CHAT");
  EXPECT_EQ((AtomicActionId{"hotel", ActionKind::kNotify, {}}.str()), "hotel-NOTIFY");
}

TEST(Ontology, EveryIdRoundTrips) {
  for (auto name : kPresetNames) {
    const auto o = preset_ontology(name);
    for (const auto& a : o.action_catalog()) {
      EXPECT_EQ(AtomicActionId::parse(a.str()), a) << a.str();
    }
  }
}

TEST(Ontology, ParseRejectsMalformed) {
  EXPECT_THROW(AtomicActionId::parse("restaurant"), UnknownLabel);
  EXPECT_THROW(AtomicActionId::parse("restaurant-FLY"), UnknownLabel);
  EXPECT_THROW(AtomicActionId::parse(""), UnknownLabel);
}

TEST(Ontology, PresetCounts) {
  struct Expect {
    std::string_view name;
    std::size_t domains;
    std::size_t actions;
  };
  for (const auto& e : {Expect{"simple", 2, 8}, Expect{"medium", 5, 13}, Expect{"hard", 7, 26}}) {
    const auto o = preset_ontology(e.name);
    EXPECT_EQ(o.domains().size(), e.domains) << e.name;
    EXPECT_EQ(o.action_catalog().size(), e.actions) << e.name;
    EXPECT_EQ(enumerate_atomic_actions(o), o.action_catalog());
  }
}

TEST(Ontology, FixedIntentAndKindCatalogs) {
  EXPECT_EQ(Ontology::intent_catalog().size(), 9u);
  EXPECT_EQ(kActionKinds.size(), 6u);
  for (auto k : kIntentCatalog) EXPECT_EQ(parse_intent(to_string(k)), k);
  for (auto k : kActionKinds) EXPECT_EQ(parse_action_kind(to_string(k)), k);
}

TEST(Ontology, EmptyDomainListHasOnlyChitChatAnswer) {
  const auto o = load_ontology(R"({"domains": []})");
  ASSERT_EQ(o.action_ids().size(), 1u);
  EXPECT_EQ(o.action_ids()[0], "GENERAL-ANSWER_CHIT_CHAT");
}

TEST(Ontology, TopicWithoutMandatorySlotNamesThePath) {
  const char* doc = R"({"domains": [{"name": "taxi", "topics": [{"name": "order", "slots": [
    {"name": "car", "category": "optional", "values": ["van"]}]}]}]})";
  try {
    load_ontology(doc);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(e.path().find("topics[0]"), std::string::npos) << e.path();
    EXPECT_NE(std::string(e.what()).find("taxi/order"), std::string::npos);
  }
}

TEST(Ontology, RejectsBadDocuments) {
  EXPECT_THROW(load_ontology("{"), SchemaError);
  EXPECT_THROW(load_ontology("[]"), SchemaError);
  EXPECT_THROW(load_ontology(R"({"domains": [{"name": "Bad Name", "topics": []}]})"), ValidationError);
  EXPECT_THROW(load_ontology(R"({"domains": [{"name": "a", "topics": [{"name": "t", "slots": [
    {"name": "s", "category": "sometimes", "values": ["x"]}]}]}]})"),
               SchemaError);
  EXPECT_THROW(load_ontology(R"({"domains": [{"name": "a", "topics": [{"name": "t", "slots": [
    {"name": "s", "category": "mandatory", "values": []}]}]}]})"),
               ValidationError);
  EXPECT_THROW(preset_ontology("enormous"), UnknownPreset);
}

TEST(Ontology, CanonicalJsonRoundTripsAndHashIsStable) {
  for (auto name : kPresetNames) {
    const auto o = preset_ontology(name);
    const auto again = load_ontology(o.to_json().dump());
    EXPECT_EQ(again.action_ids(), o.action_ids());
    EXPECT_EQ(again.hash(), o.hash());
    EXPECT_EQ(preset_ontology(name).hash(), o.hash());
  }
  EXPECT_NE(preset_ontology("simple").hash(), preset_ontology("hard").hash());
}

TEST(Ontology, GeneralScopesReplaceDomainActions) {
  const auto o = preset_ontology("medium");
  EXPECT_TRUE(o.action_index("GENERAL-REQ_MORE").has_value());
  EXPECT_FALSE(o.action_index("restaurant-REQ_MORE").has_value());
  EXPECT_EQ(o.req_more_action(0).str(), "GENERAL-REQ_MORE");
}

TEST(Ontology, IdentifierSyntax) {
  EXPECT_TRUE(is_identifier("leave_at"));
  EXPECT_TRUE(is_identifier("2"));
  EXPECT_FALSE(is_identifier(""));
  EXPECT_FALSE(is_identifier("a-b"));
  EXPECT_FALSE(is_identifier("A"));
}

}  // namespace
}  // namespace dialoforge
