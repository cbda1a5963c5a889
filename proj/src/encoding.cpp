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

#include "dialoforge/encoding.hpp"

#include <bit>
#include <map>
#include <sstream>
#include <unordered_map>

#include "dialoforge/errors.hpp"
#include "dialoforge/hash.hpp"
#include "dialoforge/parallel.hpp"

namespace dialoforge {

namespace {

constexpr std::array<std::string_view, 3> kPhaseNames = {"eliciting", "notified", "wrapup"};

std::size_t packed_size(std::size_t width) { return (width + 7) / 8; }

std::string slot_label(const Ontology& o, const SlotRef& r) {
  const auto& d = o.domain(r.domain);
  return d.name + "/" + d.topics[r.topic].name + "/" + d.topics[r.topic].slots[r.slot].name;
}

std::vector<std::string> column_names(const StateLayout& layout, const Ontology& o) {
  std::vector<std::string> cols;
  cols.reserve(layout.width());
  for (const auto& ref : o.slots()) {
    const auto label = slot_label(o, ref);
    cols.push_back("filled:" + label);
    cols.push_back("changed:" + label);
  }
  for (auto k : kIntentCatalog) cols.push_back("intent:" + std::string(to_string(k)));
  for (std::size_t h = 0; h < layout.history_window; ++h) {
    for (const auto& id : o.action_ids()) cols.push_back("prev" + std::to_string(h + 1) + ":" + id);
  }
  cols.emplace_back("dm:nested");
  for (auto p : kPhaseNames) cols.push_back("dm:" + std::string(p));
  return cols;
}

}  // namespace

std::size_t BitVector::count() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::vector<std::size_t> BitVector::ones() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < width_; ++i) {
    if (test(i)) out.push_back(i);
  }
  return out;
}

std::string BitVector::packed() const {
  std::string out(packed_size(width_), '\0');
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<char>((words_[i / 8] >> (8 * (i % 8))) & 0xFF);
  }
  return out;
}

BitVector BitVector::unpack(std::string_view bytes, std::size_t width) {
  if (bytes.size() != packed_size(width)) throw SchemaError("packed row has the wrong size");
  BitVector v(width);
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    v.words_[i / 8] |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[i])) << (8 * (i % 8));
  }
  if (width % 64 != 0 && !v.words_.empty()) {
    if (v.words_.back() >> (width % 64)) throw SchemaError("packed row has bits past its width");
  }
  return v;
}

std::string BitVector::to_string() const {
  std::string s(width_, '0');
  for (std::size_t i = 0; i < width_; ++i) {
    if (test(i)) s[i] = '1';
  }
  return s;
}

std::size_t BitVectorHash::operator()(const BitVector& v) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ v.width();
  for (auto w : v.words()) {
    h ^= w;
    h *= 0x100000001b3ULL;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

StateLayout StateLayout::for_ontology(const Ontology& ontology, std::size_t history_window) {
  StateLayout l;
  l.slot_count = ontology.slots().size();
  l.action_count = ontology.action_ids().size();
  l.history_window = history_window;
  return l;
}

nlohmann::json StateLayout::describe(const Ontology& ontology) const {
  std::vector<std::string> slots;
  for (const auto& ref : ontology.slots()) slots.push_back(slot_label(ontology, ref));
  std::vector<std::string> intents;
  for (auto k : kIntentCatalog) intents.emplace_back(to_string(k));
  return {
      {"version", kVersion},
      {"width", width()},
      {"history_window", history_window},
      {"blocks",
       {
           {{"name", "slot_status"}, {"offset", slot_offset()}, {"size", 2 * slot_count}},
           {{"name", "user_intents"}, {"offset", intent_offset()}, {"size", intent_count}},
           {{"name", "previous_system_actions"}, {"offset", action_offset()}, {"size", history_window * action_count}},
           {{"name", "dialogue_management"}, {"offset", dm_offset()}, {"size", 4}},
       }},
      {"slots", slots},
      {"intents", intents},
      {"actions", ontology.action_ids()},
      {"dialogue_management", {"nested", "eliciting", "notified", "wrapup"}},
  };
}

DecodedState decode_state(const StateVector& state, const StateLayout& layout) {
  if (state.width() != layout.width()) throw WidthMismatch("state width does not match layout");
  DecodedState out;
  for (std::size_t s = 0; s < layout.slot_count; ++s) {
    if (state.test(2 * s)) out.filled.push_back(s);
    if (state.test(2 * s + 1)) out.changed.push_back(s);
  }
  for (std::size_t i = 0; i < layout.intent_count; ++i) {
    if (state.test(layout.intent_offset() + i)) out.intents.push_back(kIntentCatalog[i]);
  }
  for (std::size_t a = 0; a < layout.action_count; ++a) {
    if (state.test(layout.action_offset() + a)) out.last_actions.push_back(a);
  }
  out.nested = state.test(layout.dm_offset());
  for (std::size_t p = 0; p < 3; ++p) {
    if (state.test(layout.dm_offset() + 1 + p)) out.phase = static_cast<Phase>(p);
  }
  return out;
}

StateVector encode_tracked_state(const DialogueStack& stack, std::span<const std::size_t> changed_slots,
                                 std::span<const UserAct> user_acts,
                                 std::span<const std::vector<std::string>> previous_system_acts,
                                 const Ontology& ontology, const StateLayout& layout) {
  StateVector v(layout.width());
  if (!stack.empty()) {
    const auto& frame = stack.top();
    const auto base = ontology.slot_offset(frame.domain, frame.topic);
    for (std::size_t i = 0; i < frame.fills.size(); ++i) {
      if (frame.fills[i]) v.set(layout.slot_offset() + 2 * (base + i));
    }
    for (auto i : changed_slots) v.set(layout.slot_offset() + 2 * (base + i) + 1);
  }
  for (const auto& act : user_acts) v.set(layout.intent_offset() + static_cast<std::size_t>(act.kind));
  for (std::size_t h = 0; h < std::min(layout.history_window, previous_system_acts.size()); ++h) {
    for (const auto& id : previous_system_acts[h]) {
      if (auto idx = ontology.action_index(id)) v.set(layout.action_offset() + h * layout.action_count + *idx);
    }
  }
  if (stack.depth() > 1) v.set(layout.dm_offset());
  if (!stack.empty()) v.set(layout.dm_offset() + 1 + static_cast<std::size_t>(stack.top().phase));
  return v;
}

TargetVector encode_actions(std::span<const std::string> system_acts, const Ontology& ontology) {
  TargetVector v(ontology.action_ids().size());
  for (const auto& id : system_acts) {
    if (id == kUnkToken) continue;
    const auto idx = ontology.action_index(id);
    if (!idx) throw UnknownLabel("action '" + id + "' is not in the catalog");
    v.set(*idx);
  }
  return v;
}

namespace {

/// Walks a dialogue turn by turn, calling visit(turn_index, stack, changed).
template <typename Visit>
void walk(const Dialogue& dialogue, const Ontology& ontology, std::size_t last_turn, Visit&& visit) {
  DialogueStack stack;
  for (std::size_t t = 0; t <= last_turn && t < dialogue.turns.size(); ++t) {
    const auto& turn = dialogue.turns[t];
    const auto changed = track_user_acts(stack, turn.user_acts, ontology, TrackMode::kLenient);
    visit(t, stack, changed);
    track_system_acts(stack, turn.system_acts, ontology);
  }
}

std::vector<std::vector<std::string>> history_before(const Dialogue& d, std::size_t turn, std::size_t window) {
  std::vector<std::vector<std::string>> out;
  for (std::size_t h = 1; h <= window && h <= turn; ++h) out.push_back(d.turns[turn - h].system_acts);
  return out;
}

}  // namespace

StateVector encode_state(const Dialogue& dialogue, std::size_t turn_index, const Ontology& ontology,
                         std::size_t history_window) {
  if (turn_index >= dialogue.turns.size()) {
    throw IndexOutOfRange("turn " + std::to_string(turn_index) + " of a " + std::to_string(dialogue.turns.size()) +
                          "-turn dialogue");
  }
  const auto layout = StateLayout::for_ontology(ontology, history_window);
  StateVector out;
  walk(dialogue, ontology, turn_index, [&](std::size_t t, const DialogueStack& stack, const auto& changed) {
    if (t != turn_index) return;
    const auto history = history_before(dialogue, t, history_window);
    out = encode_tracked_state(stack, changed, dialogue.turns[t].user_acts, history, ontology, layout);
  });
  return out;
}

std::vector<DialogueStack> replay_tracked_stacks(const Dialogue& dialogue, const Ontology& ontology) {
  std::vector<DialogueStack> out;
  walk(dialogue, ontology, dialogue.turns.size(),
       [&](std::size_t, const DialogueStack& stack, const auto&) { out.push_back(stack); });
  return out;
}

void encode_dialogue(const Dialogue& dialogue, const Ontology& ontology, const StateLayout& layout,
                     EncodedSplit& out) {
  walk(dialogue, ontology, dialogue.turns.size(), [&](std::size_t t, const DialogueStack& stack, const auto& changed) {
    const auto& turn = dialogue.turns[t];
    const auto history = history_before(dialogue, t, layout.history_window);
    out.states.push_back(encode_tracked_state(stack, changed, turn.user_acts, history, ontology, layout));
    try {
      out.targets.push_back(encode_actions(turn.system_acts, ontology));
    } catch (const UnknownLabel& e) {
      throw UnknownLabel(dialogue.id + " turn " + std::to_string(t) + ": " + e.what());
    }
  });
}

EncodedSplit encode_split(const std::vector<Dialogue>& dialogues, const Ontology& ontology,
                          const StateLayout& layout) {
  std::vector<EncodedSplit> parts(dialogues.size());
  parallel_for(dialogues.size(), [&](std::size_t i) { encode_dialogue(dialogues[i], ontology, layout, parts[i]); });
  EncodedSplit out;
  std::size_t rows = 0;
  for (const auto& p : parts) rows += p.size();
  out.states.reserve(rows);
  out.targets.reserve(rows);
  for (auto& p : parts) {
    std::move(p.states.begin(), p.states.end(), std::back_inserter(out.states));
    std::move(p.targets.begin(), p.targets.end(), std::back_inserter(out.targets));
  }
  return out;
}

EncodedSplit encode_split_serial(const std::vector<Dialogue>& dialogues, const Ontology& ontology,
                                 const StateLayout& layout) {
  EncodedSplit out;
  for (const auto& d : dialogues) encode_dialogue(d, ontology, layout, out);
  return out;
}

EncodedDataset encode_dataset(const Dataset& dataset, const Ontology& ontology, std::size_t history_window) {
  EncodedDataset out;
  out.layout = StateLayout::for_ontology(ontology, history_window);
  out.target_width = ontology.action_ids().size();
  out.ontology_hash = ontology.hash();
  for (auto s : kSplits) out.split(s) = encode_split(dataset.split(s), ontology, out.layout);
  return out;
}

CollisionReport find_collisions(const EncodedSplit& split) {
  std::unordered_map<BitVector, std::vector<const TargetVector*>, BitVectorHash> seen;
  std::unordered_map<BitVector, std::size_t, BitVectorHash> rows;
  for (std::size_t i = 0; i < split.size(); ++i) {
    auto& targets = seen[split.states[i]];
    ++rows[split.states[i]];
    const bool known = std::any_of(targets.begin(), targets.end(),
                                   [&](const TargetVector* t) { return *t == split.targets[i]; });
    if (!known) targets.push_back(&split.targets[i]);
  }
  CollisionReport r;
  r.distinct_states = seen.size();
  for (const auto& [state, targets] : seen) {
    if (targets.size() > 1) {
      ++r.colliding_states;
      r.colliding_rows += rows[state];
    }
  }
  return r;
}

std::string serialize_split(const EncodedSplit& split, const EncodedHeader& header) {
  std::ostringstream out;
  out << "dialoforge-encoded 1\n"
      << "layout " << header.layout_version << '\n'
      << "state_width " << header.state_width << '\n'
      << "target_width " << header.target_width << '\n'
      << "history_window " << header.history_window << '\n'
      << "rows " << split.size() << '\n'
      << "ontology_hash " << header.ontology_hash << '\n'
      << "end\n";
  for (std::size_t i = 0; i < split.size(); ++i) {
    if (split.states[i].width() != header.state_width || split.targets[i].width() != header.target_width) {
      throw WidthMismatch("row " + std::to_string(i) + " does not match the header widths");
    }
    out << split.states[i].packed() << split.targets[i].packed();
  }
  return out.str();
}

std::pair<EncodedHeader, EncodedSplit> deserialize_split(std::string_view bytes) {
  EncodedHeader h;
  std::map<std::string, std::string> fields;
  bool saw_magic = false;
  while (true) {
    const auto nl = bytes.find('\n');
    if (nl == std::string_view::npos) throw SchemaError("encoded header is not terminated");
    const std::string line(bytes.substr(0, nl));
    bytes.remove_prefix(nl + 1);
    if (line == "end") break;
    const auto sp = line.find(' ');
    if (sp == std::string::npos) throw SchemaError("malformed header line '" + line + "'");
    const auto key = line.substr(0, sp);
    if (!saw_magic) {
      if (key != "dialoforge-encoded" || line.substr(sp + 1) != "1") throw SchemaError("not an encoded split");
      saw_magic = true;
      continue;
    }
    fields[key] = line.substr(sp + 1);
  }
  auto number = [&](const char* key) -> std::size_t {
    auto it = fields.find(key);
    if (it == fields.end()) throw SchemaError(std::string("encoded header lacks '") + key + "'");
    try {
      return std::stoull(it->second);
    } catch (const std::exception&) {
      throw SchemaError(std::string("encoded header field '") + key + "' is not a number");
    }
  };
  h.layout_version = fields.count("layout") ? fields["layout"] : "";
  h.state_width = number("state_width");
  h.target_width = number("target_width");
  h.history_window = number("history_window");
  h.rows = number("rows");
  h.ontology_hash = fields.count("ontology_hash") ? fields["ontology_hash"] : "";

  const auto sb = packed_size(h.state_width);
  const auto tb = packed_size(h.target_width);
  if (bytes.size() != h.rows * (sb + tb)) throw SchemaError("encoded body size does not match the header");
  EncodedSplit split;
  split.states.reserve(h.rows);
  split.targets.reserve(h.rows);
  for (std::size_t r = 0; r < h.rows; ++r) {
    split.states.emplace_back(BitVector::unpack(bytes.substr(0, sb), h.state_width));
    bytes.remove_prefix(sb);
    split.targets.emplace_back(BitVector::unpack(bytes.substr(0, tb), h.target_width));
    bytes.remove_prefix(tb);
  }
  return {h, std::move(split)};
}

std::string split_to_csv(const EncodedSplit& split, const StateLayout& layout, const Ontology& ontology) {
  std::string out;
  const auto cols = column_names(layout, ontology);
  for (const auto& c : cols) {
    out += c;
    out += ',';
  }
  for (std::size_t i = 0; i < ontology.action_ids().size(); ++i) {
    out += "target:" + ontology.action_ids()[i];
    out += i + 1 < ontology.action_ids().size() ? ',' : '\n';
  }
  for (std::size_t r = 0; r < split.size(); ++r) {
    std::string row;
    for (std::size_t i = 0; i < split.states[r].width(); ++i) {
      row += split.states[r].test(i) ? '1' : '0';
      row += ',';
    }
    for (std::size_t i = 0; i < split.targets[r].width(); ++i) {
      row += split.targets[r].test(i) ? '1' : '0';
      row += i + 1 < split.targets[r].width() ? ',' : '\n';
    }
    out += row;
  }
  return out;
}

void write_encoded(const std::filesystem::path& dir, const EncodedDataset& data, const Ontology& ontology,
                   bool csv) {
  const auto enc = dir / "encoded";
  std::filesystem::create_directories(enc);
  EncodedHeader h;
  h.state_width = data.layout.width();
  h.target_width = data.target_width;
  h.ontology_hash = data.ontology_hash;
  h.history_window = data.layout.history_window;
  for (auto s : kSplits) {
    const std::string name(to_string(s));
    write_file(enc / (name + ".bin"), serialize_split(data.split(s), h));
    if (csv) write_file(enc / (name + ".csv"), split_to_csv(data.split(s), data.layout, ontology));
  }
  write_file(enc / "layout.json", data.layout.describe(ontology).dump(2) + "\n");
}

EncodedSplit read_encoded_split(const std::filesystem::path& dir, Split split, EncodedHeader* header) {
  const auto path = dir / "encoded" / (std::string(to_string(split)) + ".bin");
  if (!std::filesystem::exists(path)) throw InputError("missing encoded split '" + path.string() + "'");
  auto [h, data] = deserialize_split(read_file(path));
  if (header) *header = h;
  return std::move(data);
}

}  // namespace dialoforge
