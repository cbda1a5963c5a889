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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dialoforge/engine.hpp"
#include "dialoforge/ontology.hpp"

namespace dialoforge {

enum class Split : std::uint8_t { kTrain, kVal, kTest };

inline constexpr std::array<Split, 3> kSplits = {Split::kTrain, Split::kVal, Split::kTest};

std::string_view to_string(Split s);
std::optional<Split> parse_split(std::string_view s);

struct SplitCounts {
  std::size_t train = 0;
  std::size_t val = 0;
  std::size_t test = 0;
};

/// val and test are floored, the remainder goes to train.
SplitCounts split_counts(std::size_t n, const std::array<double, 3>& fractions);

struct Dataset {
  std::array<std::vector<Dialogue>, 3> splits;
  std::string ontology_hash;
  GeneratorConfig config;

  std::vector<Dialogue>& split(Split s) { return splits[static_cast<std::size_t>(s)]; }
  const std::vector<Dialogue>& split(Split s) const { return splits[static_cast<std::size_t>(s)]; }
  std::size_t size() const { return splits[0].size() + splits[1].size() + splits[2].size(); }

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Canonical id of the i-th generated dialogue.
std::string dialogue_id(std::size_t index);

/// Generates cfg.n_dialogues dialogues in parallel. Dialogue i uses seed
/// derive_seed(cfg.seed, i); output does not depend on the worker count.
Dataset generate_dataset(const Ontology& ontology, const GeneratorConfig& cfg);

/// Single-threaded reference of generate_dataset.
Dataset generate_dataset_serial(const Ontology& ontology, const GeneratorConfig& cfg);

// ---------------------------------------------------------------------------
// JSON container

nlohmann::json to_json(const UserAct& act);
UserAct user_act_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Dialogue& dialogue);
Dialogue dialogue_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GeneratorConfig& cfg);
GeneratorConfig generator_config_from_json(const nlohmann::json& j);

/// One dialogue per line, each line terminated by '\n'.
std::string to_jsonl(const std::vector<Dialogue>& dialogues);
std::vector<Dialogue> dialogues_from_jsonl(std::string_view text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Writes train/val/test.jsonl into dir (created if needed).
void write_splits(const std::filesystem::path& dir, const Dataset& dataset);
/// Reads train/val/test.jsonl; hash and config come from the manifest if present.
Dataset read_dataset(const std::filesystem::path& dir);

}  // namespace dialoforge
