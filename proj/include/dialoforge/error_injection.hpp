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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dialoforge/dataset.hpp"
#include "dialoforge/ontology.hpp"
#include "dialoforge/rng.hpp"

namespace dialoforge {

enum class ElementKind : std::uint8_t { kIntent, kAction, kSlot };
enum class PerturbMode : std::uint8_t { kRelabel, kUnk };

std::string_view to_string(ElementKind k);
std::optional<ElementKind> parse_element(std::string_view s);
std::string_view to_string(PerturbMode m);
std::optional<PerturbMode> parse_mode(std::string_view s);

struct ErrorConfig {
  double p_intent = 0.0;
  double p_action = 0.0;
  double p_slot = 0.0;
  /// (relabel, unk) weights of the perturbation mode.
  std::array<double, 2> mode_weights{0.5, 0.5};
  std::uint64_t seed = 0;
  /// Leave val and test untouched.
  bool train_only = false;

  /// Throws ValidationError.
  void validate() const;

  /// Same probability for all three categories.
  static ErrorConfig uniform(double p, std::uint64_t seed);
};

struct PerturbationRecord {
  std::string dialogue_id;
  std::size_t turn = 0;
  ElementKind element = ElementKind::kIntent;
  /// Index of the user act (intent, slot) or system act (action) in the turn.
  std::size_t position = 0;
  std::string original;
  std::string replacement;
  PerturbMode mode = PerturbMode::kRelabel;

  friend bool operator==(const PerturbationRecord&, const PerturbationRecord&) = default;
};

/// RELABEL: uniform draw from the catalog without `label`. UNK: the UNK token.
/// Throws CatalogTooSmall for RELABEL when fewer than two labels exist.
std::string perturb_label(std::string_view label, std::span<const std::string> catalog, Rng& rng, PerturbMode mode);

/// Candidate labels per category.
struct LabelCatalogs {
  std::vector<std::string> intents;
  std::vector<std::string> actions;
  std::vector<std::string> slots;

  static LabelCatalogs for_ontology(const Ontology& ontology);
  const std::vector<std::string>& of(ElementKind k) const;
};

struct InjectionResult {
  Dataset dataset;
  std::vector<PerturbationRecord> records;
};

/// Independent Bernoulli perturbation of every intent, action and user-act
/// slot name. Dialogue i (in train, val, test order) draws each category from
/// its own stream, so the output does not depend on the worker count and one
/// category's probability never shifts another's draws. Throws UnknownLabel
/// for labels outside the ontology.
InjectionResult inject_errors(const Dataset& dataset, const Ontology& ontology, const ErrorConfig& cfg);
InjectionResult inject_errors_serial(const Dataset& dataset, const Ontology& ontology, const ErrorConfig& cfg);

/// Undoes the records in reverse order. Throws UnknownLabel when a record does
/// not match the dataset.
void revert_perturbations(Dataset& dataset, std::span<const PerturbationRecord> records);

nlohmann::json to_json(const PerturbationRecord& r);
PerturbationRecord perturbation_from_json(const nlohmann::json& j);
std::string records_to_jsonl(std::span<const PerturbationRecord> records);
std::vector<PerturbationRecord> records_from_jsonl(std::string_view text);

nlohmann::json to_json(const ErrorConfig& cfg);
ErrorConfig error_config_from_json(const nlohmann::json& j);

}  // namespace dialoforge
