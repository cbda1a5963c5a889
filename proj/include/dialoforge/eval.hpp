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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include <json.hpp>

#include "dialoforge/encoding.hpp"
#include "dialoforge/error_injection.hpp"

namespace dialoforge {

// ---------------------------------------------------------------------------
// Models

/// Lookup baseline: majority target set per training state.
struct MemorizerModel {
  std::size_t state_width = 0;
  std::size_t target_width = 0;
  std::unordered_map<BitVector, TargetVector, BitVectorHash> table;
  /// Most frequent target set of the training split.
  TargetVector fallback;
};

/// Ties go to the lexicographically smallest packed target. Throws EmptySplit.
MemorizerModel train_memorizer(const EncodedSplit& train);

/// Independent logistic classifier per action.
struct LinearModel {
  std::size_t state_width = 0;
  std::size_t action_count = 0;
  /// Row-major, state_width x action_count.
  std::vector<double> weights;
  std::vector<double> bias;
  double threshold = 0.5;
  /// Mean training loss per epoch.
  std::vector<double> loss_history;

  double& w(std::size_t feature, std::size_t action) { return weights[feature * action_count + action]; }
  double w(std::size_t feature, std::size_t action) const { return weights[feature * action_count + action]; }
};

struct LinearConfig {
  std::size_t epochs = 20;
  double learning_rate = 0.5;
  double l2 = 1e-4;
  std::size_t batch_size = 64;
  std::uint64_t seed = 0;
  double threshold = 0.5;

  /// Throws ValidationError.
  void validate() const;
};

/// Small uniform weights in [-0.01, 0.01], zero bias.
LinearModel init_linear(std::size_t state_width, std::size_t action_count, std::uint64_t seed);

/// Dense mini-batch: x is rows x features, y is rows x outputs, both row-major.
struct DenseBatch {
  std::size_t rows = 0;
  std::size_t features = 0;
  std::size_t outputs = 0;
  std::vector<double> x;
  std::vector<double> y;
};

DenseBatch make_batch(const EncodedSplit& split, std::span<const std::size_t> rows);

/// Mean over rows of the summed per-action logistic loss plus l2/2 * |W|^2
/// (bias not penalized). Fills the gradients when they are non-null.
double logistic_loss(const LinearModel& model, const DenseBatch& batch, double l2,
                     std::vector<double>* grad_w = nullptr, std::vector<double>* grad_b = nullptr);

/// Mini-batch gradient descent, rows reshuffled every epoch. Throws EmptySplit,
/// ValidationError, and DivergenceError on a non-finite loss or an epoch mean
/// above 1.5 times the best epoch so far.
LinearModel train_linear(const EncodedSplit& train, const LinearConfig& cfg);

using Model = std::variant<MemorizerModel, LinearModel>;

/// Throws WidthMismatch.
TargetVector predict(const MemorizerModel& model, const StateVector& state);
/// Bits scoring at least the threshold; the argmax bit when none do.
TargetVector predict(const LinearModel& model, const StateVector& state);
TargetVector predict(const Model& model, const StateVector& state);
std::vector<TargetVector> predict_split(const Model& model, const EncodedSplit& split);

std::string_view model_name(const Model& model);

nlohmann::json to_json(const Model& model);
/// Throws SchemaError.
Model model_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Metrics

struct ActionScore {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  std::size_t support() const { return tp + fn; }
};

struct MetricsReport {
  std::size_t rows = 0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double micro_precision = 0.0;
  double micro_recall = 0.0;
  double micro_f1 = 0.0;
  /// Unweighted means over actions with gold support.
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  std::vector<ActionScore> per_action;
};

/// Throws LengthMismatch and WidthMismatch.
MetricsReport compute_metrics(std::span<const TargetVector> predictions, std::span<const TargetVector> golds);

nlohmann::json to_json(const MetricsReport& report, std::span<const std::string> action_names);
std::string format_report(const MetricsReport& report, std::span<const std::string> action_names);

// ---------------------------------------------------------------------------
// Robustness sweep

enum class ModelKind : std::uint8_t { kMemorizer, kLinear };

std::string_view to_string(ModelKind k);
std::optional<ModelKind> parse_model_kind(std::string_view s);

inline const std::vector<double> kDefaultRates = {0.0, 0.1, 0.2, 0.4, 0.6, 0.8, 0.9};

struct SweepConfig {
  std::vector<double> rates = kDefaultRates;
  std::vector<ModelKind> models = {ModelKind::kMemorizer};
  std::size_t seeds = 3;
  std::uint64_t seed = 0;
  /// Mode weights and split restriction; probabilities and seed are set per point.
  ErrorConfig errors;
  LinearConfig linear;
  std::size_t history_window = 1;

  /// Throws ValidationError.
  void validate() const;
};

struct SweepRow {
  double rate = 0.0;
  ModelKind model = ModelKind::kMemorizer;
  std::uint64_t seed = 0;
  MetricsReport metrics;
};

struct SweepResult {
  /// Ordered by (rate, model, seed).
  std::vector<SweepRow> rows;
  nlohmann::json manifest;
};

/// Replicate k generates a clean dataset with seed derive_seed(cfg.seed, k),
/// then per rate injects errors into all three categories, encodes, trains
/// each model on the train split and scores it on the test split.
SweepResult robustness_sweep(const Ontology& ontology, const GeneratorConfig& generator, const SweepConfig& cfg);

struct SweepTrend {
  ModelKind model = ModelKind::kMemorizer;
  std::vector<double> rates;
  std::vector<double> mean_f1;
  bool non_increasing = false;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Mean micro-F1 per rate with a least-squares line through the means.
std::vector<SweepTrend> summarize(const SweepResult& result);

/// Coefficient of determination of the least-squares line through (x, y).
double linear_fit_r2(std::span<const double> x, std::span<const double> y, double* slope = nullptr,
                     double* intercept = nullptr);

std::string sweep_to_csv(const SweepResult& result);
/// One (rate, model, seed, metric, value) row per metric.
std::string sweep_to_long_csv(const SweepResult& result);
nlohmann::json sweep_to_json(const SweepResult& result);
std::string format_sweep(const SweepResult& result);

}  // namespace dialoforge
