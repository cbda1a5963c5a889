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

#include "dialoforge/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dialoforge/errors.hpp"
#include "dialoforge/parallel.hpp"
#include "dialoforge/rng.hpp"

namespace dialoforge {

namespace {

constexpr std::array<std::string_view, 3> kSplitNames = {"train", "val", "test"};

using nlohmann::json;

void assign_splits(Dataset& ds, std::vector<Dialogue> all) {
  const auto counts = split_counts(all.size(), ds.config.split_fractions);
  auto begin = std::make_move_iterator(all.begin());
  ds.split(Split::kTrain).assign(begin, begin + static_cast<std::ptrdiff_t>(counts.train));
  begin += static_cast<std::ptrdiff_t>(counts.train);
  ds.split(Split::kVal).assign(begin, begin + static_cast<std::ptrdiff_t>(counts.val));
  begin += static_cast<std::ptrdiff_t>(counts.val);
  ds.split(Split::kTest).assign(begin, begin + static_cast<std::ptrdiff_t>(counts.test));
}

Dialogue generate_indexed(const Ontology& ontology, const GeneratorConfig& cfg, std::size_t i) {
  try {
    auto d = generate_dialogue(ontology, cfg, derive_seed(cfg.seed, i));
    d.id = dialogue_id(i);
    return d;
  } catch (const GenerationOverflow& e) {
    throw GenerationOverflow("dialogue " + std::to_string(i) + ": " + e.what());
  }
}

std::optional<std::string> optional_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

}  // namespace

std::string_view to_string(Split s) { return kSplitNames[static_cast<std::size_t>(s)]; }

std::optional<Split> parse_split(std::string_view s) {
  for (std::size_t i = 0; i < kSplitNames.size(); ++i) {
    if (kSplitNames[i] == s) return static_cast<Split>(i);
  }
  return std::nullopt;
}

SplitCounts split_counts(std::size_t n, const std::array<double, 3>& fractions) {
  // The epsilon absorbs representation error of fractions such as 1000/10438.
  auto portion = [n](double f) {
    return std::min(n, static_cast<std::size_t>(std::floor(static_cast<double>(n) * f + 1e-9)));
  };
  SplitCounts c;
  c.val = portion(fractions[1]);
  c.test = std::min(portion(fractions[2]), n - c.val);
  c.train = n - c.val - c.test;
  return c;
}

std::string dialogue_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "dlg-%06zu", index);
  return buf;
}

Dataset generate_dataset(const Ontology& ontology, const GeneratorConfig& cfg) {
  cfg.validate();
  std::vector<Dialogue> all(cfg.n_dialogues);
  parallel_for(all.size(), [&](std::size_t i) { all[i] = generate_indexed(ontology, cfg, i); });
  Dataset ds;
  ds.ontology_hash = ontology.hash();
  ds.config = cfg;
  assign_splits(ds, std::move(all));
  return ds;
}

Dataset generate_dataset_serial(const Ontology& ontology, const GeneratorConfig& cfg) {
  cfg.validate();
  std::vector<Dialogue> all;
  all.reserve(cfg.n_dialogues);
  for (std::size_t i = 0; i < cfg.n_dialogues; ++i) all.push_back(generate_indexed(ontology, cfg, i));
  Dataset ds;
  ds.ontology_hash = ontology.hash();
  ds.config = cfg;
  assign_splits(ds, std::move(all));
  return ds;
}

json to_json(const UserAct& act) {
  json j = {{"intent", to_string(act.kind)}};
  if (act.domain) j["domain"] = *act.domain;
  if (act.topic) j["topic"] = *act.topic;
  if (act.slot) j["slot"] = *act.slot;
  if (act.value) j["value"] = *act.value;
  return j;
}

UserAct user_act_from_json(const json& j) {
  const auto text = j.at("intent").get<std::string>();
  const auto kind = parse_intent(text);
  if (!kind) throw UnknownLabel("unknown intent '" + text + "'");
  return {*kind, optional_string(j, "domain"), optional_string(j, "topic"), optional_string(j, "slot"),
          optional_string(j, "value")};
}

json to_json(const Dialogue& d) {
  json turns = json::array();
  for (const auto& t : d.turns) {
    json user = json::array();
    for (const auto& a : t.user_acts) user.push_back(to_json(a));
    turns.push_back({{"user", user},
                     {"system", t.system_acts},
                     {"event", t.event ? json(to_string(*t.event)) : json(nullptr)}});
  }
  json events = json::array();
  for (const auto& [turn, kind] : d.events_log) events.push_back({turn, to_string(kind)});
  return {{"id", d.id}, {"seed", d.seed}, {"turns", turns}, {"events", events}};
}

Dialogue dialogue_from_json(const json& j) {
  Dialogue d;
  d.id = j.at("id").get<std::string>();
  d.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& jt : j.at("turns")) {
    DialogueTurn t;
    for (const auto& ja : jt.at("user")) t.user_acts.push_back(user_act_from_json(ja));
    t.system_acts = jt.at("system").get<std::vector<std::string>>();
    if (auto e = optional_string(jt, "event")) {
      const auto kind = parse_event(*e);
      if (!kind) throw UnknownLabel("unknown event '" + *e + "'");
      t.event = kind;
    }
    d.turns.push_back(std::move(t));
  }
  for (const auto& je : j.at("events")) {
    const auto name = je.at(1).get<std::string>();
    const auto kind = parse_event(name);
    if (!kind) throw UnknownLabel("unknown event '" + name + "'");
    d.events_log.emplace_back(je.at(0).get<std::size_t>(), *kind);
  }
  return d;
}

json to_json(const GeneratorConfig& cfg) {
  return {{"n_dialogues", cfg.n_dialogues},
          {"p_chitchat", cfg.p_chitchat},
          {"p_mind_change", cfg.p_mind_change},
          {"p_domain_change", cfg.p_domain_change},
          {"max_stack_depth", cfg.max_stack_depth},
          {"seed", cfg.seed},
          {"split_fractions", cfg.split_fractions}};
}

GeneratorConfig generator_config_from_json(const json& j) {
  GeneratorConfig cfg;
  cfg.n_dialogues = j.at("n_dialogues").get<std::size_t>();
  cfg.p_chitchat = j.at("p_chitchat").get<double>();
  cfg.p_mind_change = j.at("p_mind_change").get<double>();
  cfg.p_domain_change = j.at("p_domain_change").get<double>();
  cfg.max_stack_depth = j.at("max_stack_depth").get<std::size_t>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.split_fractions = j.at("split_fractions").get<std::array<double, 3>>();
  return cfg;
}

std::string to_jsonl(const std::vector<Dialogue>& dialogues) {
  std::string out;
  for (const auto& d : dialogues) {
    out += to_json(d).dump();
    out += '\n';
  }
  return out;
}

std::vector<Dialogue> dialogues_from_jsonl(std::string_view text) {
  std::vector<Dialogue> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(dialogue_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

void write_splits(const std::filesystem::path& dir, const Dataset& dataset) {
  std::filesystem::create_directories(dir);
  for (auto s : kSplits) {
    write_file(dir / (std::string(to_string(s)) + ".jsonl"), to_jsonl(dataset.split(s)));
  }
}

Dataset read_dataset(const std::filesystem::path& dir) {
  Dataset ds;
  for (auto s : kSplits) {
    const auto path = dir / (std::string(to_string(s)) + ".jsonl");
    if (!std::filesystem::exists(path)) throw InputError("missing split file '" + path.string() + "'");
    ds.split(s) = dialogues_from_jsonl(read_file(path));
  }
  const auto manifest = dir / "manifest.json";
  if (std::filesystem::exists(manifest)) {
    const auto j = json::parse(read_file(manifest));
    if (auto it = j.find("ontology_hash"); it != j.end()) ds.ontology_hash = it->get<std::string>();
    if (auto it = j.find("config"); it != j.end() && it->contains("generator")) {
      ds.config = generator_config_from_json(it->at("generator"));
    }
  }
  return ds;
}

}  // namespace dialoforge
