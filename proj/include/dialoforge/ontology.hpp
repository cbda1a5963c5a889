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

#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace dialoforge {

/// Reserved label used for UNK substitution of intents, slots and actions.
inline constexpr std::string_view kUnkToken = "unk";
/// Reserved domain token of domain-independent actions.
inline constexpr std::string_view kGeneralDomain = "GENERAL";

enum class SlotCategory : std::uint8_t { kMandatory, kDesired, kOptional };

std::string_view to_string(SlotCategory c);
std::optional<SlotCategory> parse_slot_category(std::string_view s);

enum class IntentKind : std::uint8_t {
  kInformIntent,
  kInform,
  kAffirm,
  kNegate,
  kRequest,
  kThank,
  kGoodbye,
  kUnk,
  kChitChat,
};

inline constexpr std::array<IntentKind, 9> kIntentCatalog = {
    IntentKind::kInformIntent, IntentKind::kInform,  IntentKind::kAffirm,
    IntentKind::kNegate,       IntentKind::kRequest, IntentKind::kThank,
    IntentKind::kGoodbye,      IntentKind::kUnk,     IntentKind::kChitChat,
};

std::string_view to_string(IntentKind k);
std::optional<IntentKind> parse_intent(std::string_view s);

enum class ActionKind : std::uint8_t {
  kInform,
  kRequest,
  kConfirm,
  kNotify,
  kReqMore,
  kAnswerChitChat,
};

inline constexpr std::array<ActionKind, 6> kActionKinds = {
    ActionKind::kInform, ActionKind::kRequest, ActionKind::kConfirm,
    ActionKind::kNotify, ActionKind::kReqMore, ActionKind::kAnswerChitChat,
};

std::string_view to_string(ActionKind k);
std::optional<ActionKind> parse_action_kind(std::string_view s);

/// A single system act: domain (or GENERAL) + kind + optional slot.
struct AtomicActionId {
  std::string domain;
  ActionKind kind = ActionKind::kAnswerChitChat;
  std::optional<std::string> slot;

  /// Canonical form "domain-KIND[-slot]".
  std::string str() const;

  /// Inverse of str(). Throws UnknownLabel on malformed input.
  static AtomicActionId parse(std::string_view id);

  static AtomicActionId answer_chit_chat() { return {std::string(kGeneralDomain), ActionKind::kAnswerChitChat, {}}; }

  friend bool operator==(const AtomicActionId&, const AtomicActionId&) = default;
};

struct SlotSpec {
  std::string name;
  SlotCategory category = SlotCategory::kMandatory;
  std::vector<std::string> values;
};

struct TopicSpec {
  std::string name;
  std::vector<SlotSpec> slots;
  /// Slots with their own CONFIRM action. Unset means every slot.
  std::optional<std::vector<std::string>> emit_confirm;
  /// Slots the system can INFORM about when the user requests them.
  std::vector<std::string> emit_inform;

  const SlotSpec* find_slot(std::string_view slot) const;
  std::optional<std::size_t> slot_index(std::string_view slot) const;
  bool confirms_individually(std::string_view slot) const;
};

struct DomainSpec {
  std::string name;
  std::vector<TopicSpec> topics;
};

/// Action kinds that a preset emits domain-independently (GENERAL-<KIND>).
struct GeneralScopes {
  bool confirm = false;
  bool req_more = false;
  bool notify = false;
};

/// Generator defaults bundled with a preset file.
struct PresetDefaults {
  std::size_t n_dialogues = 0;
  std::array<double, 3> split_fractions{0.6, 0.2, 0.2};
};

/// Flat reference to one slot of one topic; its position in Ontology::slots()
/// is the slot's global index.
struct SlotRef {
  std::size_t domain;
  std::size_t topic;
  std::size_t slot;
};

/// Immutable, validated vocabulary of a dataset.
class Ontology {
 public:
  /// Validates and derives the action catalog. Throws ValidationError.
  Ontology(std::vector<DomainSpec> domains, GeneralScopes scopes = {}, std::string name = {},
           std::optional<PresetDefaults> defaults = std::nullopt);

  const std::string& name() const noexcept { return name_; }
  const std::vector<DomainSpec>& domains() const noexcept { return domains_; }
  const GeneralScopes& scopes() const noexcept { return scopes_; }
  const std::optional<PresetDefaults>& defaults() const noexcept { return defaults_; }

  static constexpr std::span<const IntentKind> intent_catalog() { return kIntentCatalog; }

  /// Sorted by canonical id.
  const std::vector<AtomicActionId>& action_catalog() const noexcept { return actions_; }
  const std::vector<std::string>& action_ids() const noexcept { return action_ids_; }
  std::optional<std::size_t> action_index(std::string_view id) const;

  const std::vector<SlotRef>& slots() const noexcept { return slots_; }
  /// Global index of the first slot of a topic.
  std::size_t slot_offset(std::size_t domain, std::size_t topic) const;
  std::size_t topic_count() const noexcept { return topic_count_; }

  /// Sorted distinct slot names over all topics.
  const std::vector<std::string>& slot_vocabulary() const noexcept { return slot_vocabulary_; }

  std::optional<std::size_t> domain_index(std::string_view domain) const;
  std::optional<std::pair<std::size_t, std::size_t>> topic_index(std::string_view domain,
                                                                std::string_view topic) const;

  const DomainSpec& domain(std::size_t d) const { return domains_.at(d); }
  const TopicSpec& topic(std::size_t d, std::size_t t) const { return domains_.at(d).topics.at(t); }

  AtomicActionId request_action(std::size_t domain, std::string_view slot) const;
  AtomicActionId inform_action(std::size_t domain, std::string_view slot) const;
  AtomicActionId confirm_action(std::size_t domain, std::size_t topic, std::string_view slot) const;
  AtomicActionId notify_action(std::size_t domain) const;
  AtomicActionId req_more_action(std::size_t domain) const;

  /// Canonical JSON form (what load_ontology accepts, keys sorted).
  nlohmann::json to_json() const;
  /// FNV-1a 64 over the canonical JSON text, as 16 hex digits.
  std::string hash() const;

 private:
  std::string name_;
  std::vector<DomainSpec> domains_;
  GeneralScopes scopes_;
  std::optional<PresetDefaults> defaults_;
  std::vector<AtomicActionId> actions_;
  std::vector<std::string> action_ids_;
  std::vector<SlotRef> slots_;
  std::vector<std::vector<std::size_t>> topic_offsets_by_domain_;
  std::size_t topic_count_ = 0;
  std::vector<std::string> slot_vocabulary_;
};

/// Parses and validates an ontology document. Throws SchemaError or
/// ValidationError; never returns a partially valid object.
Ontology load_ontology(std::string_view source);

/// Sorted list of every atomic action the ontology can emit.
std::vector<AtomicActionId> enumerate_atomic_actions(const Ontology& ontology);

/// Bundled preset by name: "simple", "medium" or "hard". Throws UnknownPreset.
Ontology preset_ontology(std::string_view name);

/// Raw JSON text of a bundled preset.
std::string_view preset_source(std::string_view name);

inline constexpr std::array<std::string_view, 3> kPresetNames = {"simple", "medium", "hard"};

bool is_identifier(std::string_view s);

}  // namespace dialoforge
