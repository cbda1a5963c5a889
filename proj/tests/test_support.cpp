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

#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace dialoforge::testing {

Ontology minimal_ontology() { return load_ontology(kMinimalOntology); }
Ontology two_domain_ontology() { return load_ontology(kTwoDomainOntology); }

GeneratorConfig events_off(std::size_t n_dialogues, std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.n_dialogues = n_dialogues;
  cfg.p_chitchat = cfg.p_mind_change = cfg.p_domain_change = 0.0;
  cfg.seed = seed;
  return cfg;
}

namespace {

struct ParsedId {
  std::string domain;
  std::string kind;
  std::string slot;
};

ParsedId split_id(const std::string& id) {
  ParsedId p;
  const auto a = id.find('-');
  if (a == std::string::npos) return {id, "", ""};
  p.domain = id.substr(0, a);
  const auto b = id.find('-', a + 1);
  p.kind = id.substr(a + 1, b == std::string::npos ? std::string::npos : b - a - 1);
  if (b != std::string::npos) p.slot = id.substr(b + 1);
  return p;
}

enum class Stage { kOpen, kNotified, kWrapup };

// Mirror of a topic frame, kept by slot name.
struct Frame {
  std::string domain;
  const TopicSpec* topic = nullptr;
  std::map<std::string, std::optional<std::string>> values;
  std::set<std::string> asked_desired;
  Stage stage = Stage::kOpen;
  int notifies = 0;
  int resets = 0;
  // Values of the frame below at the moment this one was pushed.
  std::map<std::string, std::optional<std::string>> below_snapshot;

  SlotCategory category(const std::string& slot) const {
    for (const auto& s : topic->slots) {
      if (s.name == slot) return s.category;
    }
    return SlotCategory::kOptional;
  }
  bool has_slot(const std::string& slot) const {
    return std::any_of(topic->slots.begin(), topic->slots.end(), [&](const SlotSpec& s) { return s.name == slot; });
  }
  bool mandatory_filled() const {
    for (const auto& s : topic->slots) {
      if (s.category == SlotCategory::kMandatory && !values.at(s.name)) return false;
    }
    return true;
  }
};

}  // namespace

std::vector<Violation> check_invariants(const Dialogue& dialogue, const Ontology& ontology, std::size_t max_depth) {
  std::vector<Violation> out;
  std::vector<Frame> stack;
  const std::string answer = "GENERAL-ANSWER_CHIT_CHAT";

  for (std::size_t t = 0; t < dialogue.turns.size(); ++t) {
    const auto& turn = dialogue.turns[t];
    auto fail = [&](std::string rule, std::string detail) {
      out.push_back({dialogue.id, t, std::move(rule), std::move(detail)});
    };
    auto has_system = [&](const std::string& id) {
      return std::find(turn.system_acts.begin(), turn.system_acts.end(), id) != turn.system_acts.end();
    };
    auto has_intent = [&](IntentKind k) {
      return std::any_of(turn.user_acts.begin(), turn.user_acts.end(), [&](const UserAct& a) { return a.kind == k; });
    };

    if (turn.user_acts.empty()) fail("non-empty", "no user acts");
    if (turn.system_acts.empty()) fail("non-empty", "no system acts");
    for (const auto& id : turn.system_acts) {
      if (!ontology.action_index(id)) fail("catalog", "unknown action " + id);
    }

    const bool only_chat = !turn.user_acts.empty() &&
                           std::all_of(turn.user_acts.begin(), turn.user_acts.end(),
                                       [](const UserAct& a) { return a.kind == IntentKind::kChitChat; });
    if (only_chat) {
      if (turn.system_acts != std::vector<std::string>{answer}) fail("chit-chat", "not answered alone");
      continue;
    }
    if (has_intent(IntentKind::kChitChat) && !has_system(answer)) fail("chit-chat", "not answered");

    // Pop on a closing act after REQ_MORE.
    const bool closing = has_intent(IntentKind::kNegate) || has_intent(IntentKind::kThank) ||
                         has_intent(IntentKind::kGoodbye) || has_intent(IntentKind::kAffirm);
    if (!stack.empty() && stack.back().stage == Stage::kWrapup && closing) {
      if (stack.back().notifies == 0) fail("notify", "frame closed without NOTIFY");
      const auto snapshot = stack.back().below_snapshot;
      stack.pop_back();
      if (!stack.empty() && stack.back().values != snapshot) fail("context", "resumed frame changed while nested");
    }

    for (const auto& a : turn.user_acts) {
      if (a.kind != IntentKind::kInformIntent) continue;
      const auto where = ontology.topic_index(a.domain.value_or(""), a.topic.value_or(""));
      if (!where) {
        fail("replay", "unknown topic");
        continue;
      }
      Frame f;
      f.domain = *a.domain;
      f.topic = &ontology.topic(where->first, where->second);
      for (const auto& s : f.topic->slots) f.values[s.name] = std::nullopt;
      if (!stack.empty()) f.below_snapshot = stack.back().values;
      stack.push_back(std::move(f));
      if (stack.size() > max_depth) fail("depth", "stack depth " + std::to_string(stack.size()));
    }

    for (const auto& a : turn.user_acts) {
      if (a.kind != IntentKind::kInform) continue;
      if (stack.empty() || !a.slot || !stack.back().has_slot(*a.slot)) {
        fail("replay", "INFORM outside the active topic");
        continue;
      }
      auto& f = stack.back();
      f.values[*a.slot] = a.value;
      if (!a.value && f.category(*a.slot) == SlotCategory::kMandatory) {
        f.stage = Stage::kOpen;
        ++f.resets;
      }
      bool confirmed = false;
      for (const auto& id : turn.system_acts) {
        const auto p = split_id(id);
        if (p.kind == "CONFIRM" && (p.slot.empty() || p.slot == *a.slot) &&
            (p.domain == f.domain || p.domain == "GENERAL")) {
          confirmed = true;
        }
      }
      if (!confirmed) fail("confirm", "INFORM(" + *a.slot + ") without CONFIRM");
    }

    if (stack.empty()) {
      if (turn.system_acts != std::vector<std::string>{answer}) fail("close", "final reply is not the chit-chat answer");
      if (t + 1 != dialogue.turns.size()) fail("close", "turns after the stack emptied");
      continue;
    }

    for (const auto& id : turn.system_acts) {
      auto& f = stack.back();
      const auto p = split_id(id);
      if (p.domain != "GENERAL" && p.domain != f.domain) fail("scope", id + " does not address the top frame");
      if (p.kind == "REQUEST") {
        const auto c = f.category(p.slot);
        if (!f.has_slot(p.slot)) fail("request", id + " names no slot of the topic");
        if (c == SlotCategory::kOptional) fail("request", "REQUEST for optional slot " + p.slot);
        if (c == SlotCategory::kDesired && !f.asked_desired.insert(p.slot).second) {
          fail("request", "desired slot " + p.slot + " requested twice");
        }
      } else if (p.kind == "NOTIFY") {
        if (!f.mandatory_filled()) fail("notify", "NOTIFY before mandatory slots are filled");
        if (f.stage != Stage::kOpen) fail("notify", "NOTIFY repeated without a reset");
        ++f.notifies;
        if (f.notifies > 1 + f.resets) fail("notify", "more NOTIFY than completions");
        f.stage = Stage::kNotified;
      } else if (p.kind == "REQ_MORE") {
        if (f.notifies == 0) fail("req_more", "REQ_MORE before NOTIFY");
        if (has_system(id) && std::any_of(turn.system_acts.begin(), turn.system_acts.end(), [](const std::string& s) {
              return s.find("-NOTIFY") != std::string::npos;
            })) {
          fail("req_more", "NOTIFY and REQ_MORE in one turn");
        }
        f.stage = Stage::kWrapup;
      }
    }
  }

  if (!stack.empty()) {
    out.push_back({dialogue.id, dialogue.turns.size(), "close", "dialogue ends with a non-empty stack"});
  }
  if (!dialogue.turns.empty()) {
    const auto& last = dialogue.turns.back().user_acts;
    const bool polite = std::any_of(last.begin(), last.end(), [](const UserAct& a) {
      return a.kind == IntentKind::kGoodbye || a.kind == IntentKind::kThank;
    });
    if (!polite) out.push_back({dialogue.id, dialogue.turns.size() - 1, "close", "last user turn does not close"});
  }
  return out;
}

// Per-pair brute force with the same zero-division convention.
MetricsReport brute_force_metrics(const std::vector<TargetVector>& pred, const std::vector<TargetVector>& gold) {
  MetricsReport r;
  const std::size_t a = gold.empty() ? 0 : gold[0].width();
  r.rows = gold.size();
  r.per_action.resize(a);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (std::size_t k = 0; k < a; ++k) {
      const bool p = pred[i].test(k), g = gold[i].test(k);
      r.per_action[k].tp += p && g;
      r.per_action[k].fp += p && !g;
      r.per_action[k].fn += !p && g;
    }
  }
  auto ratio = [](double n, double d) { return d == 0 ? 0.0 : n / d; };
  auto f1 = [](double p, double rr) { return p + rr == 0 ? 0.0 : 2 * p * rr / (p + rr); };
  std::size_t supported = 0;
  for (auto& s : r.per_action) {
    r.tp += s.tp;
    r.fp += s.fp;
    r.fn += s.fn;
    s.precision = ratio(s.tp, s.tp + s.fp);
    s.recall = ratio(s.tp, s.tp + s.fn);
    s.f1 = f1(s.precision, s.recall);
    if (s.support() > 0) {
      ++supported;
      r.macro_precision += s.precision;
      r.macro_recall += s.recall;
      r.macro_f1 += s.f1;
    }
  }
  if (supported > 0) {
    r.macro_precision /= supported;
    r.macro_recall /= supported;
    r.macro_f1 /= supported;
  }
  r.micro_precision = ratio(r.tp, r.tp + r.fp);
  r.micro_recall = ratio(r.tp, r.tp + r.fn);
  r.micro_f1 = f1(r.micro_precision, r.micro_recall);
  return r;
}

DenseBatch random_batch(Rng& rng, std::size_t rows, std::size_t f, std::size_t a) {
  DenseBatch b{rows, f, a, std::vector<double>(rows * f), std::vector<double>(rows * a)};
  for (auto& x : b.x) x = rng.bernoulli(0.4) ? 1.0 : 0.0;
  for (auto& y : b.y) y = rng.bernoulli(0.3) ? 1.0 : 0.0;
  return b;
}

LinearModel random_model(Rng& rng, std::size_t f, std::size_t a) {
  auto m = init_linear(f, a, rng.next_u64());
  for (auto& w : m.weights) w = 2 * rng.uniform() - 1;
  for (auto& b : m.bias) b = 2 * rng.uniform() - 1;
  return m;
}

double max_gradient_error(LinearModel m, const DenseBatch& batch, double l2) {
  std::vector<double> gw, gb;
  logistic_loss(m, batch, l2, &gw, &gb);
  const double h = 1e-6;
  double worst = 0.0;
  auto probe = [&](double& param, double analytic) {
    const double keep = param;
    param = keep + h;
    const double up = logistic_loss(m, batch, l2);
    param = keep - h;
    const double down = logistic_loss(m, batch, l2);
    param = keep;
    const double numeric = (up - down) / (2 * h);
    worst = std::max(worst, std::abs(numeric - analytic) / std::max(1.0, std::abs(analytic)));
  };
  for (std::size_t i = 0; i < m.weights.size(); ++i) probe(m.weights[i], gw[i]);
  for (std::size_t i = 0; i < m.bias.size(); ++i) probe(m.bias[i], gb[i]);
  return worst;
}

std::string describe(const std::vector<Violation>& violations, std::size_t limit) {
  std::ostringstream os;
  os << violations.size() << " violation(s)";
  for (std::size_t i = 0; i < violations.size() && i < limit; ++i) {
    const auto& v = violations[i];
    os << "\n  " << v.dialogue << " turn " << v.turn << " [" << v.rule << "] " << v.detail;
  }
  return os.str();
}

}  // namespace dialoforge::testing
