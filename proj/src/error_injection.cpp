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

#include "dialoforge/error_injection.hpp"

#include <algorithm>
#include <unordered_map>

#include "dialoforge/errors.hpp"
#include "dialoforge/parallel.hpp"

namespace dialoforge {

namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 3> kElementNames = {"intent", "action", "slot"};
constexpr std::array<std::string_view, 2> kModeNames = {"relabel", "unk"};

struct Streams {
  Rng intent;
  Rng action;
  Rng slot;

  Streams(std::uint64_t seed, std::size_t index)
      : intent(derive_seed(derive_seed(seed, 0), index)),
        action(derive_seed(derive_seed(seed, 1), index)),
        slot(derive_seed(derive_seed(seed, 2), index)) {}
};

PerturbMode draw_mode(const ErrorConfig& cfg, Rng& rng) {
  const auto [relabel, unk] = cfg.mode_weights;
  if (unk <= 0.0) return PerturbMode::kRelabel;
  if (relabel <= 0.0) return PerturbMode::kUnk;
  return rng.uniform() < relabel / (relabel + unk) ? PerturbMode::kRelabel : PerturbMode::kUnk;
}

bool known(const std::vector<std::string>& catalog, std::string_view label) {
  return label == kUnkToken || std::find(catalog.begin(), catalog.end(), label) != catalog.end();
}

/// Draws whether and how to perturb one label; returns the record if it fired.
std::optional<PerturbationRecord> maybe_perturb(const std::string& label, double p, ElementKind element,
                                                const LabelCatalogs& catalogs, const ErrorConfig& cfg, Rng& rng) {
  if (!rng.bernoulli(p)) return std::nullopt;
  auto mode = draw_mode(cfg, rng);
  // A label that already is UNK can only change by relabeling.
  if (mode == PerturbMode::kUnk && label == kUnkToken) mode = PerturbMode::kRelabel;
  PerturbationRecord r;
  r.element = element;
  r.original = label;
  r.replacement = perturb_label(label, catalogs.of(element), rng, mode);
  r.mode = mode;
  return r;
}

void perturb_dialogue(Dialogue& d, std::size_t index, const LabelCatalogs& catalogs, const ErrorConfig& cfg,
                      std::vector<PerturbationRecord>& out) {
  Streams rng(cfg.seed, index);
  auto where = [&](const std::string& what, std::size_t turn) {
    return d.id + " turn " + std::to_string(turn) + ": " + what;
  };
  for (std::size_t t = 0; t < d.turns.size(); ++t) {
    auto& turn = d.turns[t];
    for (std::size_t j = 0; j < turn.user_acts.size(); ++j) {
      auto& act = turn.user_acts[j];
      if (auto r = maybe_perturb(std::string(to_string(act.kind)), cfg.p_intent, ElementKind::kIntent, catalogs, cfg,
                                 rng.intent)) {
        act.kind = *parse_intent(r->replacement);
        r->dialogue_id = d.id;
        r->turn = t;
        r->position = j;
        out.push_back(std::move(*r));
      }
      if (act.slot) {
        if (!known(catalogs.slots, *act.slot)) throw UnknownLabel(where("unknown slot '" + *act.slot + "'", t));
        if (auto r = maybe_perturb(*act.slot, cfg.p_slot, ElementKind::kSlot, catalogs, cfg, rng.slot)) {
          act.slot = r->replacement;
          r->dialogue_id = d.id;
          r->turn = t;
          r->position = j;
          out.push_back(std::move(*r));
        }
      }
    }
    for (std::size_t j = 0; j < turn.system_acts.size(); ++j) {
      auto& id = turn.system_acts[j];
      if (!known(catalogs.actions, id)) throw UnknownLabel(where("unknown action '" + id + "'", t));
      if (auto r = maybe_perturb(id, cfg.p_action, ElementKind::kAction, catalogs, cfg, rng.action)) {
        id = r->replacement;
        r->dialogue_id = d.id;
        r->turn = t;
        r->position = j;
        out.push_back(std::move(*r));
      }
    }
  }
}

/// Dialogues to perturb with their global index.
std::vector<std::pair<Dialogue*, std::size_t>> targets(Dataset& ds, const ErrorConfig& cfg) {
  std::vector<std::pair<Dialogue*, std::size_t>> out;
  std::size_t index = 0;
  for (auto s : kSplits) {
    for (auto& d : ds.split(s)) {
      if (!cfg.train_only || s == Split::kTrain) out.emplace_back(&d, index);
      ++index;
    }
  }
  return out;
}

template <typename Runner>
InjectionResult run_injection(const Dataset& dataset, const Ontology& ontology, const ErrorConfig& cfg,
                              Runner&& runner) {
  cfg.validate();
  const auto catalogs = LabelCatalogs::for_ontology(ontology);
  InjectionResult result{dataset, {}};
  const auto work = targets(result.dataset, cfg);
  std::vector<std::vector<PerturbationRecord>> parts(work.size());
  runner(work.size(), [&](std::size_t i) { perturb_dialogue(*work[i].first, work[i].second, catalogs, cfg, parts[i]); });
  for (auto& p : parts) std::move(p.begin(), p.end(), std::back_inserter(result.records));
  return result;
}

}  // namespace

std::string_view to_string(ElementKind k) { return kElementNames[static_cast<std::size_t>(k)]; }

std::optional<ElementKind> parse_element(std::string_view s) {
  for (std::size_t i = 0; i < kElementNames.size(); ++i) {
    if (kElementNames[i] == s) return static_cast<ElementKind>(i);
  }
  return std::nullopt;
}

std::string_view to_string(PerturbMode m) { return kModeNames[static_cast<std::size_t>(m)]; }

std::optional<PerturbMode> parse_mode(std::string_view s) {
  for (std::size_t i = 0; i < kModeNames.size(); ++i) {
    if (kModeNames[i] == s) return static_cast<PerturbMode>(i);
  }
  return std::nullopt;
}

void ErrorConfig::validate() const {
  auto check_p = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(name, "probability outside [0, 1]");
  };
  check_p(p_intent, "p_intent");
  check_p(p_action, "p_action");
  check_p(p_slot, "p_slot");
  const auto [relabel, unk] = mode_weights;
  if (!(relabel >= 0.0) || !(unk >= 0.0)) throw ValidationError("mode_weights", "weights must be non-negative");
  if (relabel + unk <= 0.0) throw ValidationError("mode_weights", "weights must not both be zero");
}

ErrorConfig ErrorConfig::uniform(double p, std::uint64_t seed) {
  ErrorConfig cfg;
  cfg.p_intent = cfg.p_action = cfg.p_slot = p;
  cfg.seed = seed;
  return cfg;
}

std::string perturb_label(std::string_view label, std::span<const std::string> catalog, Rng& rng, PerturbMode mode) {
  if (mode == PerturbMode::kUnk) return std::string(kUnkToken);
  if (catalog.size() < 2) throw CatalogTooSmall("relabeling needs at least two labels");
  const auto others = static_cast<std::size_t>(std::count_if(catalog.begin(), catalog.end(),
                                                             [&](const std::string& c) { return c != label; }));
  auto k = rng.index(others);
  for (const auto& c : catalog) {
    if (c == label) continue;
    if (k-- == 0) return c;
  }
  return {};
}

LabelCatalogs LabelCatalogs::for_ontology(const Ontology& ontology) {
  LabelCatalogs c;
  for (auto k : kIntentCatalog) c.intents.emplace_back(to_string(k));
  c.actions = ontology.action_ids();
  c.slots = ontology.slot_vocabulary();
  return c;
}

const std::vector<std::string>& LabelCatalogs::of(ElementKind k) const {
  switch (k) {
    case ElementKind::kIntent:
      return intents;
    case ElementKind::kAction:
      return actions;
    case ElementKind::kSlot:
      break;
  }
  return slots;
}

InjectionResult inject_errors(const Dataset& dataset, const Ontology& ontology, const ErrorConfig& cfg) {
  return run_injection(dataset, ontology, cfg, [](std::size_t n, auto&& fn) { parallel_for(n, fn); });
}

InjectionResult inject_errors_serial(const Dataset& dataset, const Ontology& ontology, const ErrorConfig& cfg) {
  return run_injection(dataset, ontology, cfg, [](std::size_t n, auto&& fn) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
  });
}

void revert_perturbations(Dataset& dataset, std::span<const PerturbationRecord> records) {
  std::unordered_map<std::string, Dialogue*> by_id;
  for (auto s : kSplits) {
    for (auto& d : dataset.split(s)) by_id[d.id] = &d;
  }
  for (auto it = records.rbegin(); it != records.rend(); ++it) {
    const auto& r = *it;
    auto found = by_id.find(r.dialogue_id);
    if (found == by_id.end()) throw UnknownLabel("record for unknown dialogue '" + r.dialogue_id + "'");
    auto& d = *found->second;
    auto mismatch = [&] {
      return UnknownLabel("record does not match " + r.dialogue_id + " turn " + std::to_string(r.turn));
    };
    if (r.turn >= d.turns.size()) throw mismatch();
    auto& turn = d.turns[r.turn];
    switch (r.element) {
      case ElementKind::kIntent: {
        if (r.position >= turn.user_acts.size()) throw mismatch();
        auto& act = turn.user_acts[r.position];
        const auto original = parse_intent(r.original);
        if (to_string(act.kind) != r.replacement || !original) throw mismatch();
        act.kind = *original;
        break;
      }
      case ElementKind::kSlot: {
        if (r.position >= turn.user_acts.size()) throw mismatch();
        auto& act = turn.user_acts[r.position];
        if (act.slot != r.replacement) throw mismatch();
        act.slot = r.original;
        break;
      }
      case ElementKind::kAction: {
        if (r.position >= turn.system_acts.size() || turn.system_acts[r.position] != r.replacement) throw mismatch();
        turn.system_acts[r.position] = r.original;
        break;
      }
    }
  }
}

json to_json(const PerturbationRecord& r) {
  return {{"dialogue", r.dialogue_id}, {"turn", r.turn},         {"element", to_string(r.element)},
          {"position", r.position},    {"original", r.original}, {"new", r.replacement},
          {"mode", to_string(r.mode)}};
}

PerturbationRecord perturbation_from_json(const json& j) {
  PerturbationRecord r;
  r.dialogue_id = j.at("dialogue").get<std::string>();
  r.turn = j.at("turn").get<std::size_t>();
  const auto element = parse_element(j.at("element").get<std::string>());
  const auto mode = parse_mode(j.at("mode").get<std::string>());
  if (!element || !mode) throw SchemaError("bad element or mode in perturbation record");
  r.element = *element;
  r.mode = *mode;
  r.position = j.at("position").get<std::size_t>();
  r.original = j.at("original").get<std::string>();
  r.replacement = j.at("new").get<std::string>();
  return r;
}

std::string records_to_jsonl(std::span<const PerturbationRecord> records) {
  std::string out;
  for (const auto& r : records) {
    out += to_json(r).dump();
    out += '\n';
  }
  return out;
}

std::vector<PerturbationRecord> records_from_jsonl(std::string_view text) {
  std::vector<PerturbationRecord> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(perturbation_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw SchemaError("perturbations line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

json to_json(const ErrorConfig& cfg) {
  return {{"p_intent", cfg.p_intent},         {"p_action", cfg.p_action},
          {"p_slot", cfg.p_slot},             {"mode_weights", cfg.mode_weights},
          {"seed", cfg.seed},                 {"splits", cfg.train_only ? "train" : "all"}};
}

ErrorConfig error_config_from_json(const json& j) {
  ErrorConfig cfg;
  cfg.p_intent = j.at("p_intent").get<double>();
  cfg.p_action = j.at("p_action").get<double>();
  cfg.p_slot = j.at("p_slot").get<double>();
  cfg.mode_weights = j.at("mode_weights").get<std::array<double, 2>>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.train_only = j.value("splits", std::string("all")) == "train";
  return cfg;
}

}  // namespace dialoforge
