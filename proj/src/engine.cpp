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

#include "dialoforge/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dialoforge/errors.hpp"

namespace dialoforge {

namespace {

constexpr std::array<std::string_view, 3> kEventNames = {"chit_chat", "mind_change", "domain_change"};

bool is_closing(IntentKind k) {
  return k == IntentKind::kNegate || k == IntentKind::kThank || k == IntentKind::kGoodbye ||
         k == IntentKind::kAffirm;
}

void add_unique(std::vector<AtomicActionId>& acts, AtomicActionId id) {
  if (std::find(acts.begin(), acts.end(), id) == acts.end()) acts.push_back(std::move(id));
}

bool on_stack(const DialogueStack& stack, std::size_t domain, std::size_t topic) {
  return std::any_of(stack.frames.begin(), stack.frames.end(),
                     [&](const TopicFrame& f) { return f.domain == domain && f.topic == topic; });
}

std::vector<UserAct> open_topic(const Ontology& ontology, const FrameGoal& g) {
  const auto& domain = ontology.domain(g.domain);
  const auto& topic = domain.topics[g.topic];
  std::vector<UserAct> acts{UserAct::inform_intent(domain.name, topic.name)};
  for (auto s : g.volunteer) acts.push_back(UserAct::inform(topic.slots[s].name, g.values[s]));
  return acts;
}

/// Slot the policy will ask for next in an eliciting frame.
std::optional<std::size_t> next_needed_slot(const TopicFrame& f, const TopicSpec& topic) {
  for (std::size_t i = 0; i < topic.slots.size(); ++i) {
    if (topic.slots[i].category == SlotCategory::kMandatory && !f.fills[i]) return i;
  }
  for (std::size_t i = 0; i < topic.slots.size(); ++i) {
    if (topic.slots[i].category == SlotCategory::kDesired && !f.fills[i]) return i;
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(EventKind e) { return kEventNames[static_cast<std::size_t>(e)]; }

std::optional<EventKind> parse_event(std::string_view s) {
  for (std::size_t i = 0; i < kEventNames.size(); ++i) {
    if (kEventNames[i] == s) return static_cast<EventKind>(i);
  }
  return std::nullopt;
}

TopicFrame::TopicFrame(const Ontology& ontology, std::size_t d, std::size_t t) : domain(d), topic(t) {
  const auto n = ontology.topic(d, t).slots.size();
  fills.resize(n);
  requested_desired.resize(n, false);
}

bool TopicFrame::mandatory_complete(const Ontology& ontology) const {
  const auto& slots = ontology.topic(domain, topic).slots;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].category == SlotCategory::kMandatory && !fills[i]) return false;
  }
  return true;
}

void GeneratorConfig::validate() const {
  auto check_p = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(name, "probability outside [0, 1]");
  };
  if (n_dialogues == 0) throw ValidationError("n_dialogues", "must be positive");
  check_p(p_chitchat, "p_chitchat");
  check_p(p_mind_change, "p_mind_change");
  check_p(p_domain_change, "p_domain_change");
  if (max_stack_depth == 0) throw ValidationError("max_stack_depth", "must be positive");
  double sum = 0.0;
  for (double f : split_fractions) {
    if (!(f >= 0.0 && f <= 1.0)) throw ValidationError("split_fractions", "fraction outside [0, 1]");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("split_fractions", "fractions must sum to 1");
}

GeneratorConfig GeneratorConfig::for_ontology(const Ontology& ontology) {
  GeneratorConfig cfg;
  if (const auto& d = ontology.defaults()) {
    cfg.n_dialogues = d->n_dialogues;
    cfg.split_fractions = d->split_fractions;
  }
  return cfg;
}

std::vector<std::size_t> track_user_acts(DialogueStack& stack, std::span<const UserAct> acts,
                                         const Ontology& ontology, TrackMode mode) {
  const bool strict = mode == TrackMode::kStrict;

  if (!stack.empty() && stack.top().phase == Phase::kWrapup &&
      std::any_of(acts.begin(), acts.end(), [](const UserAct& a) { return is_closing(a.kind); })) {
    stack.frames.pop_back();
  }

  for (const auto& act : acts) {
    if (act.kind != IntentKind::kInformIntent) continue;
    std::optional<std::pair<std::size_t, std::size_t>> where;
    if (act.domain && act.topic) where = ontology.topic_index(*act.domain, *act.topic);
    if (!where) {
      if (strict) throw UnknownLabel("INFORM_INTENT names no known topic");
      continue;
    }
    if (!stack.empty()) stack.top().interrupted = true;
    stack.frames.emplace_back(ontology, where->first, where->second);
  }

  std::vector<std::size_t> changed;
  for (const auto& act : acts) {
    if (act.kind != IntentKind::kInform && act.kind != IntentKind::kRequest) continue;
    if (stack.empty()) {
      if (strict) throw EmptyStackError("slot-bearing act with no active topic");
      continue;
    }
    if (act.kind == IntentKind::kRequest) continue;
    auto& frame = stack.top();
    const auto& topic = ontology.topic(frame.domain, frame.topic);
    const auto idx = act.slot ? topic.slot_index(*act.slot) : std::nullopt;
    if (!idx) {
      if (strict) throw UnknownLabel("INFORM for a slot outside the active topic");
      continue;
    }
    frame.fills[*idx] = act.value;
    if (!act.value && topic.slots[*idx].category == SlotCategory::kMandatory) frame.phase = Phase::kEliciting;
    if (std::find(changed.begin(), changed.end(), *idx) == changed.end()) changed.push_back(*idx);
  }
  return changed;
}

void track_system_acts(DialogueStack& stack, std::span<const std::string> system_acts,
                       const Ontology& ontology) {
  for (const auto& id : system_acts) {
    if (stack.empty()) return;
    if (!ontology.action_index(id)) continue;
    const auto act = AtomicActionId::parse(id);
    auto& frame = stack.top();
    switch (act.kind) {
      case ActionKind::kNotify:
        if (frame.phase == Phase::kEliciting && frame.mandatory_complete(ontology)) frame.phase = Phase::kNotified;
        break;
      case ActionKind::kReqMore:
        frame.phase = Phase::kWrapup;
        break;
      case ActionKind::kRequest: {
        const auto& topic = ontology.topic(frame.domain, frame.topic);
        const auto idx = act.slot ? topic.slot_index(*act.slot) : std::nullopt;
        if (idx && topic.slots[*idx].category == SlotCategory::kDesired) frame.requested_desired[*idx] = true;
        break;
      }
      default:
        break;
    }
  }
}

std::vector<AtomicActionId> respond(const DialogueStack& stack, std::span<const UserAct> acts,
                                    const Ontology& ontology) {
  std::vector<AtomicActionId> out;
  const bool chit_chat =
      std::any_of(acts.begin(), acts.end(), [](const UserAct& a) { return a.kind == IntentKind::kChitChat; });
  if (chit_chat) {
    out.push_back(AtomicActionId::answer_chit_chat());
    if (std::all_of(acts.begin(), acts.end(), [](const UserAct& a) { return a.kind == IntentKind::kChitChat; })) {
      return out;
    }
  }
  // Closing reply once the last frame is gone.
  if (stack.empty()) {
    add_unique(out, AtomicActionId::answer_chit_chat());
    return out;
  }

  const auto& frame = stack.top();
  const auto& topic = ontology.topic(frame.domain, frame.topic);

  for (const auto& act : acts) {
    if (act.kind == IntentKind::kInform && act.slot && topic.find_slot(*act.slot)) {
      add_unique(out, ontology.confirm_action(frame.domain, frame.topic, *act.slot));
    }
  }
  for (const auto& act : acts) {
    if (act.kind == IntentKind::kRequest && act.slot &&
        std::find(topic.emit_inform.begin(), topic.emit_inform.end(), *act.slot) != topic.emit_inform.end()) {
      add_unique(out, ontology.inform_action(frame.domain, *act.slot));
    }
  }

  for (std::size_t i = 0; i < topic.slots.size(); ++i) {
    if (topic.slots[i].category == SlotCategory::kMandatory && !frame.fills[i]) {
      add_unique(out, ontology.request_action(frame.domain, topic.slots[i].name));
      return out;
    }
  }
  for (std::size_t i = 0; i < topic.slots.size(); ++i) {
    if (topic.slots[i].category == SlotCategory::kDesired && !frame.fills[i] && !frame.requested_desired[i]) {
      add_unique(out, ontology.request_action(frame.domain, topic.slots[i].name));
      return out;
    }
  }
  if (frame.phase == Phase::kEliciting) {
    add_unique(out, ontology.notify_action(frame.domain));
  } else if (frame.phase == Phase::kNotified) {
    add_unique(out, ontology.req_more_action(frame.domain));
  }
  return out;
}

std::vector<AtomicActionId> step_policy(DialogueStack& stack, std::span<const UserAct> acts,
                                        const Ontology& ontology) {
  track_user_acts(stack, acts, ontology, TrackMode::kStrict);
  auto out = respond(stack, acts, ontology);
  std::vector<std::string> ids;
  ids.reserve(out.size());
  for (const auto& a : out) ids.push_back(a.str());
  track_system_acts(stack, ids, ontology);
  return out;
}

FrameGoal draw_frame_goal(const Ontology& ontology, std::size_t domain, std::size_t topic, Rng& rng) {
  const auto& spec = ontology.topic(domain, topic);
  FrameGoal g;
  g.domain = domain;
  g.topic = topic;
  g.changed.assign(spec.slots.size(), false);
  std::vector<std::size_t> non_mandatory;
  for (std::size_t i = 0; i < spec.slots.size(); ++i) {
    const auto& values = spec.slots[i].values;
    g.values.push_back(values[rng.index(values.size())]);
    if (spec.slots[i].category != SlotCategory::kMandatory) non_mandatory.push_back(i);
  }
  if (!non_mandatory.empty()) {
    rng.shuffle(non_mandatory);
    const std::size_t k = std::min<std::size_t>(1 + rng.index(2), non_mandatory.size());
    g.volunteer.assign(non_mandatory.begin(), non_mandatory.begin() + static_cast<std::ptrdiff_t>(k));
  }
  if (!spec.emit_inform.empty() && rng.bernoulli(kAskSlotProbability)) {
    g.ask_slot = spec.slot_index(spec.emit_inform[rng.index(spec.emit_inform.size())]);
  }
  return g;
}

UserGoal draw_user_goal(const Ontology& ontology, Rng& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> topics;
  for (std::size_t d = 0; d < ontology.domains().size(); ++d) {
    for (std::size_t t = 0; t < ontology.domain(d).topics.size(); ++t) topics.emplace_back(d, t);
  }
  if (topics.empty()) throw ValidationError("domains", "cannot generate dialogues from an empty ontology");
  const auto [d, t] = topics[rng.index(topics.size())];
  UserGoal goal;
  goal.root = draw_frame_goal(ontology, d, t, rng);
  const auto n_topics = ontology.domain(d).topics.size();
  if (n_topics > 1 && rng.bernoulli(kFollowUpProbability)) {
    auto other = rng.index(n_topics - 1);
    if (other >= t) ++other;
    goal.follow_up = draw_frame_goal(ontology, d, other, rng);
  }
  return goal;
}

void UserGoal::observe(const DialogueStack& stack, std::span<const AtomicActionId> system_acts,
                       const Ontology& ontology) {
  if (active.size() != stack.depth()) pending_request.reset();
  active.resize(stack.depth());
  if (stack.empty()) return;
  const auto& topic = ontology.topic(stack.top().domain, stack.top().topic);
  for (const auto& a : system_acts) {
    if (a.kind == ActionKind::kRequest && a.slot) pending_request = topic.slot_index(*a.slot);
  }
}

UserTurn sample_user_turn(const DialogueStack& stack, UserGoal& goal, Rng& rng, const GeneratorConfig& cfg,
                          const Ontology& ontology) {
  UserTurn out;

  const bool has_top = !stack.empty();
  std::vector<std::size_t> changeable;
  if (has_top && !goal.active.empty()) {
    const auto& fills = stack.top().fills;
    const auto& changed = goal.active.back().changed;
    const bool any_changed = std::find(changed.begin(), changed.end(), true) != changed.end();
    for (std::size_t i = 0; i < fills.size() && !any_changed; ++i) {
      if (fills[i]) changeable.push_back(i);
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> other_topics;
  if (has_top && stack.depth() < cfg.max_stack_depth && stack.top().phase != Phase::kWrapup &&
      !stack.top().interrupted) {
    for (std::size_t d = 0; d < ontology.domains().size(); ++d) {
      if (d == stack.top().domain) continue;
      for (std::size_t t = 0; t < ontology.domain(d).topics.size(); ++t) {
        if (!on_stack(stack, d, t)) other_topics.emplace_back(d, t);
      }
    }
  }

  if (rng.bernoulli(cfg.p_chitchat)) {
    out.acts.push_back(UserAct::bare(IntentKind::kChitChat));
    out.event = EventKind::kChitChat;
    return out;
  }
  if (rng.bernoulli(cfg.p_mind_change) && !changeable.empty()) {
    const auto& frame = stack.top();
    const auto& topic = ontology.topic(frame.domain, frame.topic);
    const auto slot = changeable[rng.index(changeable.size())];
    goal.active.back().changed[slot] = true;
    const auto& values = topic.slots[slot].values;
    std::optional<std::string> value;
    if (!rng.bernoulli(kMindChangeEmptyProbability) && values.size() > 1) {
      std::vector<std::string> others;
      for (const auto& v : values) {
        if (v != *frame.fills[slot]) others.push_back(v);
      }
      value = others[rng.index(others.size())];
      goal.active.back().values[slot] = *value;
    }
    out.acts.push_back(UserAct::inform(topic.slots[slot].name, value));
    out.event = EventKind::kMindChange;
    return out;
  }
  if (rng.bernoulli(cfg.p_domain_change) && !other_topics.empty()) {
    const auto [d, t] = other_topics[rng.index(other_topics.size())];
    goal.active.push_back(draw_frame_goal(ontology, d, t, rng));
    goal.pending_request.reset();
    out.acts = open_topic(ontology, goal.active.back());
    out.event = EventKind::kDomainChange;
    return out;
  }

  if (!has_top) {
    goal.opened = true;
    goal.active.assign(1, goal.root);
    out.acts = open_topic(ontology, goal.root);
    return out;
  }

  const auto& frame = stack.top();
  const auto& topic = ontology.topic(frame.domain, frame.topic);
  auto& fg = goal.active.back();
  switch (frame.phase) {
    case Phase::kEliciting: {
      std::optional<std::size_t> slot;
      if (goal.pending_request && *goal.pending_request < frame.fills.size() &&
          !frame.fills[*goal.pending_request]) {
        slot = goal.pending_request;
      } else {
        slot = next_needed_slot(frame, topic);
      }
      goal.pending_request.reset();
      if (slot) {
        out.acts.push_back(UserAct::inform(topic.slots[*slot].name, fg.values[*slot]));
      } else {
        out.acts.push_back(UserAct::bare(IntentKind::kThank));
      }
      break;
    }
    case Phase::kNotified:
      if (fg.ask_slot && !fg.asked) {
        fg.asked = true;
        out.acts.push_back(UserAct::request(topic.slots[*fg.ask_slot].name));
      } else {
        out.acts.push_back(UserAct::bare(IntentKind::kThank));
      }
      break;
    case Phase::kWrapup:
      if (stack.depth() > 1) {
        out.acts.push_back(UserAct::bare(IntentKind::kNegate));
      } else if (goal.follow_up && !goal.follow_up_started) {
        goal.follow_up_started = true;
        goal.active.back() = *goal.follow_up;
        out.acts.push_back(UserAct::bare(IntentKind::kAffirm));
        for (auto& a : open_topic(ontology, *goal.follow_up)) out.acts.push_back(std::move(a));
      } else {
        out.acts.push_back(UserAct::bare(IntentKind::kThank));
        out.acts.push_back(UserAct::bare(IntentKind::kGoodbye));
      }
      break;
  }
  return out;
}

Dialogue generate_dialogue(const Ontology& ontology, const GeneratorConfig& cfg, std::uint64_t dialogue_seed) {
  Rng rng(dialogue_seed);
  UserGoal goal = draw_user_goal(ontology, rng);
  DialogueStack stack;
  Dialogue dialogue;
  dialogue.seed = dialogue_seed;

  while (true) {
    if (dialogue.turns.size() == kTurnCap) {
      throw GenerationOverflow("dialogue with seed " + std::to_string(dialogue_seed) + " exceeded " +
                               std::to_string(kTurnCap) + " turns");
    }
    auto user = sample_user_turn(stack, goal, rng, cfg, ontology);
    const auto system = step_policy(stack, user.acts, ontology);
    if (system.empty()) throw std::logic_error("policy produced an empty response");
    goal.observe(stack, system, ontology);

    DialogueTurn turn;
    turn.user_acts = std::move(user.acts);
    turn.event = user.event;
    for (const auto& a : system) turn.system_acts.push_back(a.str());
    if (turn.event) dialogue.events_log.emplace_back(dialogue.turns.size(), *turn.event);
    dialogue.turns.push_back(std::move(turn));

    if (goal.opened && stack.empty()) break;
  }
  return dialogue;
}

}  // namespace dialoforge
