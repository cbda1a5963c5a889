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

#include "dialoforge/eval.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "dialoforge/errors.hpp"
#include "dialoforge/parallel.hpp"
#include "dialoforge/rng.hpp"

namespace dialoforge {

namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 2> kModelNames = {"memorizer", "linear"};

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

/// log(1 + exp(z)) without overflow.
double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

BitVector parse_bits(const std::string& s) {
  BitVector v(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1') {
      v.set(i);
    } else if (s[i] != '0') {
      throw SchemaError("bit string has a character other than 0 or 1");
    }
  }
  return v;
}

void check_width(std::size_t expected, const BitVector& state) {
  if (state.width() != expected) {
    throw WidthMismatch("state has width " + std::to_string(state.width()) + ", model expects " +
                        std::to_string(expected));
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Memorizer

MemorizerModel train_memorizer(const EncodedSplit& train) {
  if (train.size() == 0) throw EmptySplit("cannot train on an empty split");
  // Packed targets compare lexicographically, which fixes the tie break.
  std::unordered_map<BitVector, std::map<std::string, std::size_t>, BitVectorHash> counts;
  std::map<std::string, std::size_t> overall;
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto packed = train.targets[i].packed();
    ++counts[train.states[i]][packed];
    ++overall[packed];
  }
  auto majority = [](const std::map<std::string, std::size_t>& m) {
    auto best = m.begin();
    for (auto it = m.begin(); it != m.end(); ++it) {
      if (it->second > best->second) best = it;
    }
    return best->first;
  };
  MemorizerModel model;
  model.state_width = train.states.front().width();
  model.target_width = train.targets.front().width();
  model.table.reserve(counts.size());
  for (const auto& [state, targets] : counts) {
    model.table.emplace(state, BitVector::unpack(majority(targets), model.target_width));
  }
  model.fallback = BitVector::unpack(majority(overall), model.target_width);
  return model;
}

TargetVector predict(const MemorizerModel& model, const StateVector& state) {
  check_width(model.state_width, state);
  auto it = model.table.find(state);
  return it == model.table.end() ? model.fallback : it->second;
}

// ---------------------------------------------------------------------------
// Linear model

void LinearConfig::validate() const {
  if (epochs == 0) throw ValidationError("epochs", "must be positive");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ValidationError("learning_rate", "must be finite and non-negative");
  }
  if (!(l2 >= 0.0) || !std::isfinite(l2)) throw ValidationError("l2", "must be finite and non-negative");
  if (batch_size == 0) throw ValidationError("batch_size", "must be positive");
  if (!(threshold > 0.0 && threshold < 1.0)) throw ValidationError("threshold", "must lie in (0, 1)");
}

LinearModel init_linear(std::size_t state_width, std::size_t action_count, std::uint64_t seed) {
  LinearModel m;
  m.state_width = state_width;
  m.action_count = action_count;
  m.weights.resize(state_width * action_count);
  m.bias.assign(action_count, 0.0);
  Rng rng(seed);
  for (auto& w : m.weights) w = (rng.uniform() * 2.0 - 1.0) * 0.01;
  return m;
}

DenseBatch make_batch(const EncodedSplit& split, std::span<const std::size_t> rows) {
  DenseBatch b;
  b.rows = rows.size();
  b.features = rows.empty() ? 0 : split.states[rows[0]].width();
  b.outputs = rows.empty() ? 0 : split.targets[rows[0]].width();
  b.x.assign(b.rows * b.features, 0.0);
  b.y.assign(b.rows * b.outputs, 0.0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (auto i : split.states[rows[r]].ones()) b.x[r * b.features + i] = 1.0;
    for (auto a : split.targets[rows[r]].ones()) b.y[r * b.outputs + a] = 1.0;
  }
  return b;
}

double logistic_loss(const LinearModel& model, const DenseBatch& batch, double l2, std::vector<double>* grad_w,
                     std::vector<double>* grad_b) {
  const auto F = model.state_width;
  const auto A = model.action_count;
  if (batch.features != F || batch.outputs != A) throw WidthMismatch("batch does not match the model");
  if (grad_w) grad_w->assign(F * A, 0.0);
  if (grad_b) grad_b->assign(A, 0.0);
  const double scale = batch.rows == 0 ? 0.0 : 1.0 / static_cast<double>(batch.rows);
  double loss = 0.0;
  std::vector<double> z(A);
  for (std::size_t r = 0; r < batch.rows; ++r) {
    const double* x = &batch.x[r * F];
    const double* y = &batch.y[r * A];
    std::copy(model.bias.begin(), model.bias.end(), z.begin());
    for (std::size_t f = 0; f < F; ++f) {
      if (x[f] == 0.0) continue;
      for (std::size_t a = 0; a < A; ++a) z[a] += x[f] * model.w(f, a);
    }
    for (std::size_t a = 0; a < A; ++a) {
      // -[y log s(z) + (1-y) log(1 - s(z))] = softplus(z) - y z
      loss += softplus(z[a]) - y[a] * z[a];
      z[a] = (sigmoid(z[a]) - y[a]) * scale;
    }
    if (grad_b) {
      for (std::size_t a = 0; a < A; ++a) (*grad_b)[a] += z[a];
    }
    if (grad_w) {
      for (std::size_t f = 0; f < F; ++f) {
        if (x[f] == 0.0) continue;
        for (std::size_t a = 0; a < A; ++a) (*grad_w)[f * A + a] += x[f] * z[a];
      }
    }
  }
  loss *= scale;
  double norm = 0.0;
  for (std::size_t i = 0; i < model.weights.size(); ++i) {
    norm += model.weights[i] * model.weights[i];
    if (grad_w) (*grad_w)[i] += l2 * model.weights[i];
  }
  return loss + 0.5 * l2 * norm;
}

LinearModel train_linear(const EncodedSplit& train, const LinearConfig& cfg) {
  cfg.validate();
  if (train.size() == 0) throw EmptySplit("cannot train on an empty split");
  auto model = init_linear(train.states.front().width(), train.targets.front().width(), derive_seed(cfg.seed, 0));
  model.threshold = cfg.threshold;
  Rng order_rng(derive_seed(cfg.seed, 1));
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> gw;
  std::vector<double> gb;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    order_rng.shuffle(order);
    double total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const auto end = std::min(order.size(), start + cfg.batch_size);
      const auto batch = make_batch(train, std::span(order).subspan(start, end - start));
      const double loss = logistic_loss(model, batch, cfg.l2, &gw, &gb);
      if (!std::isfinite(loss)) throw DivergenceError("non-finite loss in epoch " + std::to_string(epoch));
      total += loss * static_cast<double>(end - start);
      for (std::size_t i = 0; i < gw.size(); ++i) model.weights[i] -= cfg.learning_rate * gw[i];
      for (std::size_t i = 0; i < gb.size(); ++i) model.bias[i] -= cfg.learning_rate * gb[i];
    }
    const double mean = total / static_cast<double>(order.size());
    model.loss_history.push_back(mean);
    if (mean > 1.5 * best) {
      throw DivergenceError("epoch " + std::to_string(epoch) + " mean loss " + fmt(mean) + " exceeds 1.5x the best " +
                            fmt(best));
    }
    best = std::min(best, mean);
  }
  return model;
}

TargetVector predict(const LinearModel& model, const StateVector& state) {
  check_width(model.state_width, state);
  std::vector<double> z(model.bias);
  for (auto f : state.ones()) {
    for (std::size_t a = 0; a < model.action_count; ++a) z[a] += model.w(f, a);
  }
  TargetVector out(model.action_count);
  std::size_t best = 0;
  for (std::size_t a = 0; a < model.action_count; ++a) {
    if (sigmoid(z[a]) >= model.threshold) out.set(a);
    if (z[a] > z[best]) best = a;
  }
  if (out.none() && model.action_count > 0) out.set(best);
  return out;
}

TargetVector predict(const Model& model, const StateVector& state) {
  return std::visit([&](const auto& m) { return predict(m, state); }, model);
}

std::vector<TargetVector> predict_split(const Model& model, const EncodedSplit& split) {
  std::vector<TargetVector> out(split.size());
  parallel_for(split.size(), [&](std::size_t i) { out[i] = predict(model, split.states[i]); });
  return out;
}

std::string_view model_name(const Model& model) {
  return std::holds_alternative<MemorizerModel>(model) ? to_string(ModelKind::kMemorizer)
                                                       : to_string(ModelKind::kLinear);
}

json to_json(const Model& model) {
  if (const auto* m = std::get_if<MemorizerModel>(&model)) {
    std::vector<std::pair<std::string, std::string>> rows;
    rows.reserve(m->table.size());
    for (const auto& [state, target] : m->table) rows.emplace_back(state.to_string(), target.to_string());
    std::sort(rows.begin(), rows.end());
    json table = json::array();
    for (const auto& [s, t] : rows) table.push_back({s, t});
    return {{"model", "memorizer"},
            {"state_width", m->state_width},
            {"target_width", m->target_width},
            {"fallback", m->fallback.to_string()},
            {"table", table}};
  }
  const auto& l = std::get<LinearModel>(model);
  return {{"model", "linear"},          {"state_width", l.state_width}, {"action_count", l.action_count},
          {"threshold", l.threshold},   {"weights", l.weights},         {"bias", l.bias},
          {"loss_history", l.loss_history}};
}

Model model_from_json(const json& j) {
  try {
    const auto kind = j.at("model").get<std::string>();
    if (kind == "memorizer") {
      MemorizerModel m;
      m.state_width = j.at("state_width").get<std::size_t>();
      m.target_width = j.at("target_width").get<std::size_t>();
      m.fallback = parse_bits(j.at("fallback").get<std::string>());
      for (const auto& row : j.at("table")) {
        auto state = parse_bits(row.at(0).get<std::string>());
        auto target = parse_bits(row.at(1).get<std::string>());
        if (state.width() != m.state_width || target.width() != m.target_width) {
          throw SchemaError("memorizer row does not match the declared widths");
        }
        m.table.emplace(std::move(state), std::move(target));
      }
      if (m.fallback.width() != m.target_width) throw SchemaError("fallback does not match the target width");
      return m;
    }
    if (kind == "linear") {
      LinearModel l;
      l.state_width = j.at("state_width").get<std::size_t>();
      l.action_count = j.at("action_count").get<std::size_t>();
      l.threshold = j.at("threshold").get<double>();
      l.weights = j.at("weights").get<std::vector<double>>();
      l.bias = j.at("bias").get<std::vector<double>>();
      l.loss_history = j.value("loss_history", std::vector<double>{});
      if (l.weights.size() != l.state_width * l.action_count || l.bias.size() != l.action_count) {
        throw SchemaError("linear model parameters do not match the declared widths");
      }
      return l;
    }
    throw SchemaError("unknown model kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed model file: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Metrics

MetricsReport compute_metrics(std::span<const TargetVector> predictions, std::span<const TargetVector> golds) {
  if (predictions.size() != golds.size()) {
    throw LengthMismatch(std::to_string(predictions.size()) + " predictions for " + std::to_string(golds.size()) +
                         " gold rows");
  }
  MetricsReport r;
  r.rows = golds.size();
  const std::size_t width = golds.empty() ? 0 : golds.front().width();
  r.per_action.resize(width);
  for (std::size_t i = 0; i < golds.size(); ++i) {
    if (predictions[i].width() != width || golds[i].width() != width) {
      throw WidthMismatch("row " + std::to_string(i) + " has a different target width");
    }
    const auto pw = predictions[i].words();
    const auto gw = golds[i].words();
    for (std::size_t k = 0; k < gw.size(); ++k) {
      auto tp = pw[k] & gw[k];
      auto fp = pw[k] & ~gw[k];
      auto fn = ~pw[k] & gw[k];
      for (; tp; tp &= tp - 1) ++r.per_action[64 * k + static_cast<std::size_t>(std::countr_zero(tp))].tp;
      for (; fp; fp &= fp - 1) ++r.per_action[64 * k + static_cast<std::size_t>(std::countr_zero(fp))].fp;
      for (; fn; fn &= fn - 1) ++r.per_action[64 * k + static_cast<std::size_t>(std::countr_zero(fn))].fn;
    }
  }
  std::size_t supported = 0;
  for (auto& a : r.per_action) {
    r.tp += a.tp;
    r.fp += a.fp;
    r.fn += a.fn;
    a.precision = ratio(a.tp, a.tp + a.fp);
    a.recall = ratio(a.tp, a.tp + a.fn);
    a.f1 = harmonic(a.precision, a.recall);
    if (a.support() > 0) {
      ++supported;
      r.macro_precision += a.precision;
      r.macro_recall += a.recall;
      r.macro_f1 += a.f1;
    }
  }
  if (supported > 0) {
    r.macro_precision /= static_cast<double>(supported);
    r.macro_recall /= static_cast<double>(supported);
    r.macro_f1 /= static_cast<double>(supported);
  }
  r.micro_precision = ratio(r.tp, r.tp + r.fp);
  r.micro_recall = ratio(r.tp, r.tp + r.fn);
  r.micro_f1 = harmonic(r.micro_precision, r.micro_recall);
  return r;
}

json to_json(const MetricsReport& r, std::span<const std::string> action_names) {
  json actions = json::array();
  for (std::size_t a = 0; a < r.per_action.size(); ++a) {
    const auto& s = r.per_action[a];
    actions.push_back({{"action", a < action_names.size() ? action_names[a] : std::to_string(a)},
                       {"tp", s.tp},
                       {"fp", s.fp},
                       {"fn", s.fn},
                       {"support", s.support()},
                       {"precision", s.precision},
                       {"recall", s.recall},
                       {"f1", s.f1}});
  }
  return {{"rows", r.rows},
          {"micro", {{"precision", r.micro_precision}, {"recall", r.micro_recall}, {"f1", r.micro_f1}}},
          {"macro", {{"precision", r.macro_precision}, {"recall", r.macro_recall}, {"f1", r.macro_f1}}},
          {"tp", r.tp},
          {"fp", r.fp},
          {"fn", r.fn},
          {"per_action", actions}};
}

std::string format_report(const MetricsReport& r, std::span<const std::string> action_names) {
  std::ostringstream out;
  out << "rows " << r.rows << "\n"
      << "micro  P " << fmt(r.micro_precision) << "  R " << fmt(r.micro_recall) << "  F1 " << fmt(r.micro_f1) << "\n"
      << "macro  P " << fmt(r.macro_precision) << "  R " << fmt(r.macro_recall) << "  F1 " << fmt(r.macro_f1) << "\n\n";
  std::size_t name_width = 6;
  for (const auto& n : action_names) name_width = std::max(name_width, n.size());
  char line[256];
  std::snprintf(line, sizeof line, "%-*s %9s %9s %9s %8s\n", static_cast<int>(name_width), "action", "precision",
                "recall", "f1", "support");
  out << line;
  for (std::size_t a = 0; a < r.per_action.size(); ++a) {
    const auto& s = r.per_action[a];
    const auto name = a < action_names.size() ? action_names[a] : std::to_string(a);
    std::snprintf(line, sizeof line, "%-*s %9.4f %9.4f %9.4f %8zu\n", static_cast<int>(name_width), name.c_str(),
                  s.precision, s.recall, s.f1, s.support());
    out << line;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Sweep

std::string_view to_string(ModelKind k) { return kModelNames[static_cast<std::size_t>(k)]; }

std::optional<ModelKind> parse_model_kind(std::string_view s) {
  for (std::size_t i = 0; i < kModelNames.size(); ++i) {
    if (kModelNames[i] == s) return static_cast<ModelKind>(i);
  }
  return std::nullopt;
}

void SweepConfig::validate() const {
  if (rates.empty()) throw ValidationError("rates", "at least one error rate is required");
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (!(rates[i] >= 0.0 && rates[i] <= 1.0)) throw ValidationError("rates", "error rate outside [0, 1]");
    if (i > 0 && !(rates[i] > rates[i - 1])) throw ValidationError("rates", "error rates must be strictly increasing");
  }
  if (models.empty()) throw ValidationError("models", "at least one model is required");
  if (seeds == 0) throw ValidationError("seeds", "must be positive");
  if (history_window == 0) throw ValidationError("history_window", "must be positive");
  errors.validate();
  linear.validate();
}

SweepResult robustness_sweep(const Ontology& ontology, const GeneratorConfig& generator, const SweepConfig& cfg) {
  cfg.validate();
  generator.validate();
  const auto n_rates = cfg.rates.size();
  const auto n_models = cfg.models.size();

  std::vector<std::uint64_t> replicate_seeds(cfg.seeds);
  std::vector<Dataset> clean(cfg.seeds);
  for (std::size_t k = 0; k < cfg.seeds; ++k) {
    replicate_seeds[k] = derive_seed(cfg.seed, k);
    auto gen = generator;
    gen.seed = replicate_seeds[k];
    clean[k] = generate_dataset(ontology, gen);
  }

  // One job per (replicate, rate); each fills its models' rows.
  std::vector<SweepRow> grid(cfg.seeds * n_rates * n_models);
  parallel_for(cfg.seeds * n_rates, [&](std::size_t job) {
    const auto k = job / n_rates;
    const auto r = job % n_rates;
    const double rate = cfg.rates[r];
    auto errors = cfg.errors;
    errors.p_intent = errors.p_action = errors.p_slot = rate;
    errors.seed = derive_seed(replicate_seeds[k], r + 1);
    const auto noisy = inject_errors_serial(clean[k], ontology, errors).dataset;
    const auto layout = StateLayout::for_ontology(ontology, cfg.history_window);
    const auto train = encode_split_serial(noisy.split(Split::kTrain), ontology, layout);
    const auto test = encode_split_serial(noisy.split(Split::kTest), ontology, layout);
    for (std::size_t m = 0; m < n_models; ++m) {
      const auto kind = cfg.models[m];
      auto where = [&] { return "rate " + fmt(rate) + ", model " + std::string(to_string(kind)) + ": "; };
      try {
        Model model;
        if (kind == ModelKind::kMemorizer) {
          model = train_memorizer(train);
        } else {
          auto lc = cfg.linear;
          lc.seed = derive_seed(errors.seed, 7);
          model = train_linear(train, lc);
        }
        std::vector<TargetVector> predictions(test.size());
        for (std::size_t i = 0; i < test.size(); ++i) predictions[i] = predict(model, test.states[i]);
        auto& row = grid[(r * n_models + m) * cfg.seeds + k];
        row.rate = rate;
        row.model = kind;
        row.seed = replicate_seeds[k];
        row.metrics = compute_metrics(predictions, test.targets);
      } catch (const InputError&) {
        throw;
      } catch (const std::exception& e) {
        throw Error(where() + e.what());
      }
    }
  });

  SweepResult result;
  result.rows = std::move(grid);
  json models = json::array();
  for (auto m : cfg.models) models.push_back(to_string(m));
  result.manifest = {{"rates", cfg.rates},
                     {"models", models},
                     {"seeds", cfg.seeds},
                     {"seed", cfg.seed},
                     {"replicate_seeds", replicate_seeds},
                     {"errors", to_json(cfg.errors)},
                     {"linear",
                      {{"epochs", cfg.linear.epochs},
                       {"learning_rate", cfg.linear.learning_rate},
                       {"l2", cfg.linear.l2},
                       {"batch_size", cfg.linear.batch_size},
                       {"threshold", cfg.linear.threshold}}},
                     {"history_window", cfg.history_window},
                     {"generator", to_json(generator)},
                     {"ontology_hash", ontology.hash()},
                     {"split_evaluated", "test"}};
  return result;
}

double linear_fit_r2(std::span<const double> x, std::span<const double> y, double* slope, double* intercept) {
  const auto n = static_cast<double>(x.size());
  if (x.size() != y.size() || x.empty()) throw LengthMismatch("fit needs equally many, non-zero x and y values");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double b = sxx > 0.0 ? sxy / sxx : 0.0;
  if (slope) *slope = b;
  if (intercept) *intercept = my - b * mx;
  if (syy == 0.0) return 1.0;
  return b * sxy / syy;
}

std::vector<SweepTrend> summarize(const SweepResult& result) {
  std::map<ModelKind, std::map<double, std::vector<double>>> by_model;
  for (const auto& row : result.rows) by_model[row.model][row.rate].push_back(row.metrics.micro_f1);
  std::vector<SweepTrend> out;
  for (const auto& [kind, by_rate] : by_model) {
    SweepTrend t;
    t.model = kind;
    for (const auto& [rate, f1s] : by_rate) {
      t.rates.push_back(rate);
      t.mean_f1.push_back(std::accumulate(f1s.begin(), f1s.end(), 0.0) / static_cast<double>(f1s.size()));
    }
    t.non_increasing = std::is_sorted(t.mean_f1.rbegin(), t.mean_f1.rend());
    t.r_squared = linear_fit_r2(t.rates, t.mean_f1, &t.slope, &t.intercept);
    out.push_back(std::move(t));
  }
  return out;
}

std::string sweep_to_csv(const SweepResult& result) {
  std::string out = "rate,model,micro_f1,micro_p,micro_r,macro_f1,seed\n";
  for (const auto& row : result.rows) {
    const auto& m = row.metrics;
    out += fmt(row.rate) + "," + std::string(to_string(row.model)) + "," + fmt(m.micro_f1) + "," +
           fmt(m.micro_precision) + "," + fmt(m.micro_recall) + "," + fmt(m.macro_f1) + "," + std::to_string(row.seed) +
           "\n";
  }
  return out;
}

std::string sweep_to_long_csv(const SweepResult& result) {
  std::string out = "rate,model,seed,metric,value\n";
  for (const auto& row : result.rows) {
    const auto& m = row.metrics;
    const std::pair<const char*, double> metrics[] = {
        {"micro_f1", m.micro_f1},        {"micro_precision", m.micro_precision}, {"micro_recall", m.micro_recall},
        {"macro_f1", m.macro_f1},        {"macro_precision", m.macro_precision}, {"macro_recall", m.macro_recall},
    };
    const auto prefix = fmt(row.rate) + "," + std::string(to_string(row.model)) + "," + std::to_string(row.seed) + ",";
    for (const auto& [name, value] : metrics) out += prefix + name + "," + fmt(value) + "\n";
  }
  return out;
}

json sweep_to_json(const SweepResult& result) {
  json rows = json::array();
  for (const auto& row : result.rows) {
    const auto& m = row.metrics;
    rows.push_back({{"rate", row.rate},
                    {"model", to_string(row.model)},
                    {"seed", row.seed},
                    {"micro", {{"precision", m.micro_precision}, {"recall", m.micro_recall}, {"f1", m.micro_f1}}},
                    {"macro", {{"precision", m.macro_precision}, {"recall", m.macro_recall}, {"f1", m.macro_f1}}}});
  }
  json trends = json::array();
  for (const auto& t : summarize(result)) {
    trends.push_back({{"model", to_string(t.model)},
                      {"rates", t.rates},
                      {"mean_micro_f1", t.mean_f1},
                      {"non_increasing", t.non_increasing},
                      {"slope", t.slope},
                      {"intercept", t.intercept},
                      {"r_squared", t.r_squared}});
  }
  return {{"rows", rows}, {"trends", trends}, {"config", result.manifest}};
}

std::string format_sweep(const SweepResult& result) {
  std::ostringstream out;
  for (const auto& t : summarize(result)) {
    out << to_string(t.model) << "\n";
    for (std::size_t i = 0; i < t.rates.size(); ++i) {
      out << "  rate " << fmt(t.rates[i]) << "  mean micro-F1 " << fmt(t.mean_f1[i]) << "\n";
    }
    out << "  slope " << fmt(t.slope) << "  R^2 " << fmt(t.r_squared)
        << (t.non_increasing ? "  non-increasing\n" : "  not monotone\n");
  }
  return out.str();
}

}  // namespace dialoforge
