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

#include "dialoforge/ontology.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "dialoforge/errors.hpp"
#include "dialoforge/hash.hpp"

namespace dialoforge {

std::string to_hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

namespace {

constexpr std::array<std::string_view, 9> kIntentNames = {
    "inform_intent", "inform", "affirm", "negate", "request", "thank", "goodbye", "unk", "chit_chat",
};

constexpr std::array<std::string_view, 6> kActionNames = {
    "INFORM", "REQUEST", "CONFIRM", "NOTIFY", "REQ_MORE", "ANSWER_CHIT_CHAT",
};

constexpr std::array<std::string_view, 3> kCategoryNames = {"mandatory", "desired", "optional"};

std::vector<AtomicActionId> derive_actions(const std::vector<DomainSpec>& domains,
                                           const GeneralScopes& scopes) {
  std::set<std::string> seen;
  std::vector<AtomicActionId> out;
  auto add = [&](AtomicActionId id) {
    if (seen.insert(id.str()).second) out.push_back(std::move(id));
  };
  const std::string general(kGeneralDomain);

  add(AtomicActionId::answer_chit_chat());
  for (const auto& d : domains) {
    add({scopes.notify ? general : d.name, ActionKind::kNotify, {}});
    add({scopes.req_more ? general : d.name, ActionKind::kReqMore, {}});
    for (const auto& t : d.topics) {
      for (const auto& s : t.slots) {
        if (s.category != SlotCategory::kOptional) add({d.name, ActionKind::kRequest, s.name});
        if (t.confirms_individually(s.name)) {
          add({d.name, ActionKind::kConfirm, s.name});
        } else {
          add({scopes.confirm ? general : d.name, ActionKind::kConfirm, {}});
        }
      }
      for (const auto& s : t.emit_inform) add({d.name, ActionKind::kInform, s});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const AtomicActionId& a, const AtomicActionId& b) { return a.str() < b.str(); });
  return out;
}

void validate(const std::vector<DomainSpec>& domains) {
  std::set<std::string> domain_names;
  for (std::size_t di = 0; di < domains.size(); ++di) {
    const auto& d = domains[di];
    const std::string dpath = "domains[" + std::to_string(di) + "]";
    if (!is_identifier(d.name)) throw ValidationError(dpath, "invalid domain name '" + d.name + "'");
    if (!domain_names.insert(d.name).second) {
      throw ValidationError(dpath, "duplicate domain name '" + d.name + "'");
    }
    if (d.topics.empty()) throw ValidationError(dpath, "domain '" + d.name + "' has no topics");

    std::set<std::string> topic_names;
    for (std::size_t ti = 0; ti < d.topics.size(); ++ti) {
      const auto& t = d.topics[ti];
      const std::string tpath = dpath + ".topics[" + std::to_string(ti) + "]";
      if (!is_identifier(t.name)) throw ValidationError(tpath, "invalid topic name '" + t.name + "'");
      if (!topic_names.insert(t.name).second) {
        throw ValidationError(tpath, "duplicate topic name '" + t.name + "'");
      }
      std::set<std::string> slot_names;
      bool has_mandatory = false;
      for (std::size_t si = 0; si < t.slots.size(); ++si) {
        const auto& s = t.slots[si];
        const std::string spath = tpath + ".slots[" + std::to_string(si) + "]";
        if (!is_identifier(s.name) || s.name == kUnkToken) {
          throw ValidationError(spath, "invalid slot name '" + s.name + "'");
        }
        if (!slot_names.insert(s.name).second) {
          throw ValidationError(spath, "duplicate slot name '" + s.name + "'");
        }
        if (s.values.empty()) throw ValidationError(spath, "slot '" + s.name + "' has no values");
        std::set<std::string> values;
        for (const auto& v : s.values) {
          if (!is_identifier(v)) throw ValidationError(spath, "invalid value token '" + v + "'");
          if (!values.insert(v).second) throw ValidationError(spath, "duplicate value token '" + v + "'");
        }
        has_mandatory |= s.category == SlotCategory::kMandatory;
      }
      if (!has_mandatory) {
        throw ValidationError(tpath, "topic '" + d.name + "/" + t.name + "' has no mandatory slot");
      }
      auto check_emit = [&](const std::vector<std::string>& names, const char* key) {
        std::set<std::string> unique;
        for (const auto& n : names) {
          if (!slot_names.contains(n)) {
            throw ValidationError(tpath + ".emit." + key, "unknown slot '" + n + "'");
          }
          if (!unique.insert(n).second) {
            throw ValidationError(tpath + ".emit." + key, "duplicate slot '" + n + "'");
          }
        }
      };
      if (t.emit_confirm) check_emit(*t.emit_confirm, "confirm");
      check_emit(t.emit_inform, "inform");
    }
  }
}

}  // namespace

std::string_view to_string(SlotCategory c) { return kCategoryNames[static_cast<std::size_t>(c)]; }

std::optional<SlotCategory> parse_slot_category(std::string_view s) {
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (kCategoryNames[i] == s) return static_cast<SlotCategory>(i);
  }
  return std::nullopt;
}

std::string_view to_string(IntentKind k) { return kIntentNames[static_cast<std::size_t>(k)]; }

std::optional<IntentKind> parse_intent(std::string_view s) {
  for (std::size_t i = 0; i < kIntentNames.size(); ++i) {
    if (kIntentNames[i] == s) return static_cast<IntentKind>(i);
  }
  return std::nullopt;
}

std::string_view to_string(ActionKind k) { return kActionNames[static_cast<std::size_t>(k)]; }

std::optional<ActionKind> parse_action_kind(std::string_view s) {
  for (std::size_t i = 0; i < kActionNames.size(); ++i) {
    if (kActionNames[i] == s) return static_cast<ActionKind>(i);
  }
  return std::nullopt;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || s.size() > 32) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

std::string AtomicActionId::str() const {
  std::string out = domain;
  out += '-';
  out += to_string(kind);
  if (slot) {
    out += '-';
    out += *slot;
  }
  return out;
}

AtomicActionId AtomicActionId::parse(std::string_view id) {
  const auto first = id.find('-');
  if (first == std::string_view::npos) throw UnknownLabel("malformed action id '" + std::string(id) + "'");
  const auto second = id.find('-', first + 1);
  const auto domain = id.substr(0, first);
  const auto kind_text =
      id.substr(first + 1, second == std::string_view::npos ? std::string_view::npos : second - first - 1);
  const auto kind = parse_action_kind(kind_text);
  if (!kind || !(domain == kGeneralDomain || is_identifier(domain))) {
    throw UnknownLabel("malformed action id '" + std::string(id) + "'");
  }
  AtomicActionId out{std::string(domain), *kind, std::nullopt};
  if (second != std::string_view::npos) {
    const auto slot = id.substr(second + 1);
    if (!is_identifier(slot)) throw UnknownLabel("malformed action id '" + std::string(id) + "'");
    out.slot = std::string(slot);
  }
  return out;
}

const SlotSpec* TopicSpec::find_slot(std::string_view slot) const {
  for (const auto& s : slots) {
    if (s.name == slot) return &s;
  }
  return nullptr;
}

std::optional<std::size_t> TopicSpec::slot_index(std::string_view slot) const {
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].name == slot) return i;
  }
  return std::nullopt;
}

bool TopicSpec::confirms_individually(std::string_view slot) const {
  if (!emit_confirm) return true;
  return std::find(emit_confirm->begin(), emit_confirm->end(), slot) != emit_confirm->end();
}

Ontology::Ontology(std::vector<DomainSpec> domains, GeneralScopes scopes, std::string name,
                   std::optional<PresetDefaults> defaults)
    : name_(std::move(name)), domains_(std::move(domains)), scopes_(scopes), defaults_(defaults) {
  validate(domains_);
  actions_ = derive_actions(domains_, scopes_);
  action_ids_.reserve(actions_.size());
  for (const auto& a : actions_) action_ids_.push_back(a.str());

  std::set<std::string> vocabulary;
  topic_offsets_by_domain_.resize(domains_.size());
  for (std::size_t d = 0; d < domains_.size(); ++d) {
    for (std::size_t t = 0; t < domains_[d].topics.size(); ++t) {
      topic_offsets_by_domain_[d].push_back(slots_.size());
      ++topic_count_;
      const auto& topic = domains_[d].topics[t];
      for (std::size_t s = 0; s < topic.slots.size(); ++s) {
        slots_.push_back({d, t, s});
        vocabulary.insert(topic.slots[s].name);
      }
    }
  }
  slot_vocabulary_.assign(vocabulary.begin(), vocabulary.end());
}

std::optional<std::size_t> Ontology::action_index(std::string_view id) const {
  auto it = std::lower_bound(action_ids_.begin(), action_ids_.end(), id);
  if (it == action_ids_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - action_ids_.begin());
}

std::size_t Ontology::slot_offset(std::size_t domain, std::size_t topic) const {
  return topic_offsets_by_domain_.at(domain).at(topic);
}

std::optional<std::size_t> Ontology::domain_index(std::string_view domain) const {
  for (std::size_t d = 0; d < domains_.size(); ++d) {
    if (domains_[d].name == domain) return d;
  }
  return std::nullopt;
}

std::optional<std::pair<std::size_t, std::size_t>> Ontology::topic_index(std::string_view domain,
                                                                        std::string_view topic) const {
  const auto d = domain_index(domain);
  if (!d) return std::nullopt;
  const auto& topics = domains_[*d].topics;
  for (std::size_t t = 0; t < topics.size(); ++t) {
    if (topics[t].name == topic) return std::pair{*d, t};
  }
  return std::nullopt;
}

AtomicActionId Ontology::request_action(std::size_t domain, std::string_view slot) const {
  return {domains_.at(domain).name, ActionKind::kRequest, std::string(slot)};
}

AtomicActionId Ontology::inform_action(std::size_t domain, std::string_view slot) const {
  return {domains_.at(domain).name, ActionKind::kInform, std::string(slot)};
}

AtomicActionId Ontology::confirm_action(std::size_t domain, std::size_t topic, std::string_view slot) const {
  const auto& d = domains_.at(domain);
  if (d.topics.at(topic).confirms_individually(slot)) {
    return {d.name, ActionKind::kConfirm, std::string(slot)};
  }
  return {scopes_.confirm ? std::string(kGeneralDomain) : d.name, ActionKind::kConfirm, {}};
}

AtomicActionId Ontology::notify_action(std::size_t domain) const {
  return {scopes_.notify ? std::string(kGeneralDomain) : domains_.at(domain).name, ActionKind::kNotify, {}};
}

AtomicActionId Ontology::req_more_action(std::size_t domain) const {
  return {scopes_.req_more ? std::string(kGeneralDomain) : domains_.at(domain).name, ActionKind::kReqMore,
          {}};
}

nlohmann::json Ontology::to_json() const {
  using nlohmann::json;
  json doc;
  if (!name_.empty()) doc["name"] = name_;
  json general = json::array();
  if (scopes_.confirm) general.push_back("confirm");
  if (scopes_.notify) general.push_back("notify");
  if (scopes_.req_more) general.push_back("req_more");
  doc["general_actions"] = general;
  json domains = json::array();
  for (const auto& d : domains_) {
    json topics = json::array();
    for (const auto& t : d.topics) {
      json slots = json::array();
      for (const auto& s : t.slots) {
        slots.push_back({{"name", s.name}, {"category", to_string(s.category)}, {"values", s.values}});
      }
      json topic = {{"name", t.name}, {"slots", slots}};
      json emit = {{"inform", t.emit_inform}};
      if (t.emit_confirm) emit["confirm"] = *t.emit_confirm;
      topic["emit"] = emit;
      topics.push_back(topic);
    }
    domains.push_back({{"name", d.name}, {"topics", topics}});
  }
  doc["domains"] = domains;
  if (defaults_) {
    doc["generator"] = {{"dialogues", defaults_->n_dialogues}, {"split", defaults_->split_fractions}};
  }
  return doc;
}

std::string Ontology::hash() const {
  auto doc = to_json();
  doc.erase("name");
  doc.erase("generator");
  return hash_hex(doc.dump());
}

std::vector<AtomicActionId> enumerate_atomic_actions(const Ontology& ontology) {
  return derive_actions(ontology.domains(), ontology.scopes());
}

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + ": missing key '" + key + "'");
  return *it;
}

std::string require_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw SchemaError(path + ": expected a string");
  return v.get<std::string>();
}

const json& require_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw SchemaError(path + ": expected an array");
  return v;
}

std::vector<std::string> string_list(const json& v, const std::string& path) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < require_array(v, path).size(); ++i) {
    out.push_back(require_string(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace

Ontology load_ontology(std::string_view source) {
  json doc;
  try {
    doc = json::parse(source);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("$: expected an object");

  std::string name;
  if (auto it = doc.find("name"); it != doc.end()) name = require_string(*it, "$.name");

  GeneralScopes scopes;
  if (auto it = doc.find("general_actions"); it != doc.end()) {
    for (const auto& kind : string_list(*it, "$.general_actions")) {
      if (kind == "confirm") {
        scopes.confirm = true;
      } else if (kind == "req_more") {
        scopes.req_more = true;
      } else if (kind == "notify") {
        scopes.notify = true;
      } else {
        throw SchemaError("$.general_actions: unsupported kind '" + kind + "'");
      }
    }
  }

  std::optional<PresetDefaults> defaults;
  if (auto it = doc.find("generator"); it != doc.end()) {
    PresetDefaults pd;
    const auto& n = require(*it, "dialogues", "$.generator");
    if (!n.is_number_unsigned()) throw SchemaError("$.generator.dialogues: expected a positive integer");
    pd.n_dialogues = n.get<std::size_t>();
    const auto& split = require_array(require(*it, "split", "$.generator"), "$.generator.split");
    if (split.size() != 3) throw SchemaError("$.generator.split: expected three fractions");
    for (std::size_t i = 0; i < 3; ++i) {
      if (!split[i].is_number()) throw SchemaError("$.generator.split: expected numbers");
      pd.split_fractions[i] = split[i].get<double>();
    }
    defaults = pd;
  }

  std::vector<DomainSpec> domains;
  const auto& jdomains = require_array(require(doc, "domains", "$"), "$.domains");
  for (std::size_t di = 0; di < jdomains.size(); ++di) {
    const std::string dpath = "$.domains[" + std::to_string(di) + "]";
    DomainSpec d;
    d.name = require_string(require(jdomains[di], "name", dpath), dpath + ".name");
    const auto& jtopics = require_array(require(jdomains[di], "topics", dpath), dpath + ".topics");
    for (std::size_t ti = 0; ti < jtopics.size(); ++ti) {
      const std::string tpath = dpath + ".topics[" + std::to_string(ti) + "]";
      TopicSpec t;
      t.name = require_string(require(jtopics[ti], "name", tpath), tpath + ".name");
      const auto& jslots = require_array(require(jtopics[ti], "slots", tpath), tpath + ".slots");
      for (std::size_t si = 0; si < jslots.size(); ++si) {
        const std::string spath = tpath + ".slots[" + std::to_string(si) + "]";
        SlotSpec s;
        s.name = require_string(require(jslots[si], "name", spath), spath + ".name");
        const auto category = require_string(require(jslots[si], "category", spath), spath + ".category");
        const auto parsed = parse_slot_category(category);
        if (!parsed) throw SchemaError(spath + ".category: unknown category '" + category + "'");
        s.category = *parsed;
        s.values = string_list(require(jslots[si], "values", spath), spath + ".values");
        t.slots.push_back(std::move(s));
      }
      if (auto it = jtopics[ti].find("emit"); it != jtopics[ti].end()) {
        if (!it->is_object()) throw SchemaError(tpath + ".emit: expected an object");
        if (auto c = it->find("confirm"); c != it->end()) t.emit_confirm = string_list(*c, tpath + ".emit.confirm");
        if (auto i = it->find("inform"); i != it->end()) t.emit_inform = string_list(*i, tpath + ".emit.inform");
      }
      d.topics.push_back(std::move(t));
    }
    domains.push_back(std::move(d));
  }
  return Ontology(std::move(domains), scopes, std::move(name), defaults);
}

}  // namespace dialoforge
