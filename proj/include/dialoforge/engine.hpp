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
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dialoforge/ontology.hpp"
#include "dialoforge/rng.hpp"

namespace dialoforge {

struct UserAct {
  IntentKind kind = IntentKind::kUnk;
  std::optional<std::string> domain;
  std::optional<std::string> topic;
  std::optional<std::string> slot;
  std::optional<std::string> value;

  static UserAct inform_intent(std::string domain, std::string topic) {
    return {IntentKind::kInformIntent, std::move(domain), std::move(topic), {}, {}};
  }
  static UserAct inform(std::string slot, std::optional<std::string> value) {
    return {IntentKind::kInform, {}, {}, std::move(slot), std::move(value)};
  }
  static UserAct request(std::string slot) { return {IntentKind::kRequest, {}, {}, std::move(slot), {}}; }
  static UserAct bare(IntentKind kind) { return {kind, {}, {}, {}, {}}; }

  friend bool operator==(const UserAct&, const UserAct&) = default;
};

enum class EventKind : std::uint8_t { kChitChat, kMindChange, kDomainChange };

std::string_view to_string(EventKind e);
std::optional<EventKind> parse_event(std::string_view s);

enum class Phase : std::uint8_t { kEliciting, kNotified, kWrapup };

/// Context of one topic on the dialogue stack.
struct TopicFrame {
  std::size_t domain = 0;
  std::size_t topic = 0;
  /// Indexed like the topic's slot list.
  std::vector<std::optional<std::string>> fills;
  /// Desired slots already requested once, indexed like `fills`.
  std::vector<bool> requested_desired;
  Phase phase = Phase::kEliciting;
  /// A frame is interrupted by a domain change at most once.
  bool interrupted = false;

  TopicFrame(const Ontology& ontology, std::size_t domain, std::size_t topic);

  bool mandatory_complete(const Ontology& ontology) const;

  friend bool operator==(const TopicFrame&, const TopicFrame&) = default;
};

/// LIFO stack of topic frames; rules always address the top.
struct DialogueStack {
  std::vector<TopicFrame> frames;

  bool empty() const noexcept { return frames.empty(); }
  std::size_t depth() const noexcept { return frames.size(); }
  TopicFrame& top() { return frames.back(); }
  const TopicFrame& top() const { return frames.back(); }

  friend bool operator==(const DialogueStack&, const DialogueStack&) = default;
};

struct DialogueTurn {
  std::vector<UserAct> user_acts;
  /// Canonical action ids (or the UNK token on perturbed data).
  std::vector<std::string> system_acts;
  std::optional<EventKind> event;

  friend bool operator==(const DialogueTurn&, const DialogueTurn&) = default;
};

struct Dialogue {
  std::string id;
  std::uint64_t seed = 0;
  std::vector<DialogueTurn> turns;
  std::vector<std::pair<std::size_t, EventKind>> events_log;

  friend bool operator==(const Dialogue&, const Dialogue&) = default;
};

struct GeneratorConfig {
  std::size_t n_dialogues = 1000;
  double p_chitchat = 0.2;
  double p_mind_change = 0.2;
  double p_domain_change = 0.2;
  std::size_t max_stack_depth = 2;
  std::uint64_t seed = 0;
  std::array<double, 3> split_fractions{0.6, 0.2, 0.2};

  /// Throws ValidationError.
  void validate() const;

  /// Defaults with the preset's dialogue count and split, when it has them.
  static GeneratorConfig for_ontology(const Ontology& ontology);

  friend bool operator==(const GeneratorConfig&, const GeneratorConfig&) = default;
};

inline constexpr std::size_t kTurnCap = 60;

// ---------------------------------------------------------------------------
// Policy

/// How tracking treats acts that do not fit the current stack.
enum class TrackMode : std::uint8_t {
  /// Generation: inconsistencies are bugs and throw.
  kStrict,
  /// Encoding of possibly perturbed data: inapplicable acts are ignored.
  kLenient,
};

/// Applies a user turn to the stack: pops a finished frame on a closing act,
/// pushes on INFORM_INTENT, records INFORM fills. Returns the top-frame slot
/// indices informed this turn (in act order, deduplicated).
std::vector<std::size_t> track_user_acts(DialogueStack& stack, std::span<const UserAct> acts,
                                         const Ontology& ontology, TrackMode mode);

/// Applies the phase effects of system acts to the top frame (NOTIFY,
/// REQ_MORE, desired-slot REQUEST bookkeeping). Unknown ids are ignored.
void track_system_acts(DialogueStack& stack, std::span<const std::string> system_acts,
                       const Ontology& ontology);

/// Response rules on an already tracked stack. Does not mutate it.
std::vector<AtomicActionId> respond(const DialogueStack& stack, std::span<const UserAct> acts,
                                    const Ontology& ontology);

/// One full policy step: track the user turn, respond, then track the
/// response. Throws EmptyStackError for slot-bearing acts with no frame.
std::vector<AtomicActionId> step_policy(DialogueStack& stack, std::span<const UserAct> acts,
                                        const Ontology& ontology);

// ---------------------------------------------------------------------------
// User simulator

/// Scripted goal for one frame.
struct FrameGoal {
  std::size_t domain = 0;
  std::size_t topic = 0;
  std::vector<std::string> values;
  /// Non-mandatory slots given unprompted when the topic is opened.
  std::vector<std::size_t> volunteer;
  /// Slot the user asks about once the topic is notified.
  std::optional<std::size_t> ask_slot;
  bool asked = false;
  /// Slot the user changed their mind about; at most one mind change per frame.
  std::vector<bool> changed;
};

/// User-side agenda for a whole dialogue.
struct UserGoal {
  FrameGoal root;
  std::optional<FrameGoal> follow_up;
  /// Parallel to the dialogue stack.
  std::vector<FrameGoal> active;
  bool opened = false;
  bool follow_up_started = false;
  /// Slot of the top frame the system is waiting for.
  std::optional<std::size_t> pending_request;

  /// Updates the agenda after a system response.
  void observe(const DialogueStack& stack, std::span<const AtomicActionId> system_acts,
               const Ontology& ontology);
};

inline constexpr double kFollowUpProbability = 0.5;
inline constexpr double kAskSlotProbability = 0.5;
inline constexpr double kMindChangeEmptyProbability = 0.5;

FrameGoal draw_frame_goal(const Ontology& ontology, std::size_t domain, std::size_t topic, Rng& rng);
UserGoal draw_user_goal(const Ontology& ontology, Rng& rng);

struct UserTurn {
  std::vector<UserAct> acts;
  std::optional<EventKind> event;
};

/// Next user turn: ordered event draws (chit-chat, mind change, domain
/// change), otherwise the next scripted step of the goal.
UserTurn sample_user_turn(const DialogueStack& stack, UserGoal& goal, Rng& rng, const GeneratorConfig& cfg,
                          const Ontology& ontology);

/// Simulates one dialogue to completion. Throws GenerationOverflow past kTurnCap turns.
Dialogue generate_dialogue(const Ontology& ontology, const GeneratorConfig& cfg, std::uint64_t dialogue_seed);

}  // namespace dialoforge
