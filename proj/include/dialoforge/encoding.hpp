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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "dialoforge/dataset.hpp"
#include "dialoforge/engine.hpp"
#include "dialoforge/ontology.hpp"

namespace dialoforge {

/// Fixed-width bit vector stored in 64-bit words; unused high bits stay zero.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t width) : width_(width), words_((width + 63) / 64, 0) {}

  std::size_t width() const noexcept { return width_; }

  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  void set(std::size_t i, bool v = true) {
    const auto mask = std::uint64_t{1} << (i % 64);
    if (v) {
      words_[i / 64] |= mask;
    } else {
      words_[i / 64] &= ~mask;
    }
  }

  std::size_t count() const;
  bool none() const { return count() == 0; }
  std::vector<std::size_t> ones() const;

  /// LSB-first packing, ceil(width / 8) bytes.
  std::string packed() const;
  static BitVector unpack(std::string_view bytes, std::size_t width);

  /// "0101..." with bit 0 first.
  std::string to_string() const;

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  friend bool operator==(const BitVector&, const BitVector&) = default;
  friend auto operator<=>(const BitVector& a, const BitVector& b) {
    if (auto c = a.width_ <=> b.width_; c != 0) return c;
    return a.words_ <=> b.words_;
  }

 private:
  std::size_t width_ = 0;
  std::vector<std::uint64_t> words_;
};

struct BitVectorHash {
  std::size_t operator()(const BitVector& v) const noexcept;
};

/// Binary encoding of the dialogue context at one turn.
struct StateVector : BitVector {
  using BitVector::BitVector;
  StateVector(BitVector b) : BitVector(std::move(b)) {}
};

/// Multi-hot encoding of the system acts of one turn.
struct TargetVector : BitVector {
  using BitVector::BitVector;
  TargetVector(BitVector b) : BitVector(std::move(b)) {}
};

/// Block layout of a StateVector. Blocks in order: slot status (filled,
/// just-changed per slot of the top frame), current user intents, previous
/// system actions (repeated per history step), dialogue management
/// (depth > 1, phase).
struct StateLayout {
  static constexpr const char* kVersion = "four-block-v1";

  std::size_t slot_count = 0;
  std::size_t intent_count = kIntentCatalog.size();
  std::size_t action_count = 0;
  std::size_t history_window = 1;

  std::size_t slot_offset() const { return 0; }
  std::size_t intent_offset() const { return 2 * slot_count; }
  std::size_t action_offset() const { return intent_offset() + intent_count; }
  std::size_t dm_offset() const { return action_offset() + history_window * action_count; }
  std::size_t width() const { return dm_offset() + 4; }

  static StateLayout for_ontology(const Ontology& ontology, std::size_t history_window = 1);

  /// Self-describing form with block offsets and column names.
  nlohmann::json describe(const Ontology& ontology) const;
};

/// Human-readable view of a StateVector, inverse of the layout.
struct DecodedState {
  std::vector<std::size_t> filled;
  std::vector<std::size_t> changed;
  std::vector<IntentKind> intents;
  std::vector<std::size_t> last_actions;
  bool nested = false;
  std::optional<Phase> phase;

  friend bool operator==(const DecodedState&, const DecodedState&) = default;
};

DecodedState decode_state(const StateVector& state, const StateLayout& layout);

/// Encodes a tracked stack plus the turn's user acts. Exposed for tests and
/// for the incremental dataset encoder.
StateVector encode_tracked_state(const DialogueStack& stack, std::span<const std::size_t> changed_slots,
                                 std::span<const UserAct> user_acts,
                                 std::span<const std::vector<std::string>> previous_system_acts,
                                 const Ontology& ontology, const StateLayout& layout);

/// State at turn_index: slot status and dialogue-management block after the
/// turn's user acts, intents of that turn, system acts of the previous turn.
/// Throws IndexOutOfRange.
StateVector encode_state(const Dialogue& dialogue, std::size_t turn_index, const Ontology& ontology,
                         std::size_t history_window = 1);

/// Multi-hot over the action catalog; the UNK token sets no bit. Throws UnknownLabel.
TargetVector encode_actions(std::span<const std::string> system_acts, const Ontology& ontology);

/// Stack after the user acts of every turn, as the encoder tracks it.
std::vector<DialogueStack> replay_tracked_stacks(const Dialogue& dialogue, const Ontology& ontology);

struct EncodedSplit {
  std::vector<StateVector> states;
  std::vector<TargetVector> targets;

  std::size_t size() const { return states.size(); }
  friend bool operator==(const EncodedSplit&, const EncodedSplit&) = default;
};

struct EncodedDataset {
  std::array<EncodedSplit, 3> splits;
  std::string ontology_hash;
  StateLayout layout;
  std::size_t target_width = 0;

  EncodedSplit& split(Split s) { return splits[static_cast<std::size_t>(s)]; }
  const EncodedSplit& split(Split s) const { return splits[static_cast<std::size_t>(s)]; }
};

/// Appends the pairs of one dialogue (one per turn) to `out`.
void encode_dialogue(const Dialogue& dialogue, const Ontology& ontology, const StateLayout& layout,
                     EncodedSplit& out);

/// Per-turn pairs in dialogue order; dialogues are encoded in parallel.
/// Errors carry the dialogue id and turn.
EncodedSplit encode_split(const std::vector<Dialogue>& dialogues, const Ontology& ontology,
                          const StateLayout& layout);
EncodedSplit encode_split_serial(const std::vector<Dialogue>& dialogues, const Ontology& ontology,
                                 const StateLayout& layout);

EncodedDataset encode_dataset(const Dataset& dataset, const Ontology& ontology, std::size_t history_window = 1);

/// States that map to more than one distinct target set.
struct CollisionReport {
  std::size_t distinct_states = 0;
  std::size_t colliding_states = 0;
  std::size_t colliding_rows = 0;
};

CollisionReport find_collisions(const EncodedSplit& split);

// ---------------------------------------------------------------------------
// Binary container: text header terminated by "end\n", then row-major
// packed state bits followed by packed target bits for every row.

struct EncodedHeader {
  std::string layout_version = StateLayout::kVersion;
  std::size_t state_width = 0;
  std::size_t target_width = 0;
  std::size_t rows = 0;
  std::string ontology_hash;
  std::size_t history_window = 1;
};

std::string serialize_split(const EncodedSplit& split, const EncodedHeader& header);
/// Throws SchemaError on malformed input.
std::pair<EncodedHeader, EncodedSplit> deserialize_split(std::string_view bytes);

/// Header and rows as CSV of 0/1 values for inspection.
std::string split_to_csv(const EncodedSplit& split, const StateLayout& layout, const Ontology& ontology);

/// Writes encoded/{split}.bin and encoded/layout.json under dir.
void write_encoded(const std::filesystem::path& dir, const EncodedDataset& data, const Ontology& ontology,
                   bool csv);
EncodedSplit read_encoded_split(const std::filesystem::path& dir, Split split, EncodedHeader* header = nullptr);

}  // namespace dialoforge
