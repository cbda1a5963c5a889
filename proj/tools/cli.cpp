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

#include "cli.hpp"

#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "dialoforge/dataset.hpp"
#include "dialoforge/encoding.hpp"
#include "dialoforge/error_injection.hpp"
#include "dialoforge/errors.hpp"
#include "dialoforge/eval.hpp"
#include "dialoforge/hash.hpp"
#include "dialoforge/ontology.hpp"
#include "dialoforge/parallel.hpp"

namespace dialoforge::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kManifestFile = "manifest.json";
constexpr const char* kOntologyFile = "ontology.json";
constexpr const char* kPerturbationFile = "perturbations.jsonl";

// ---------------------------------------------------------------------------
// Shared plumbing

std::optional<std::uint64_t> seed_from_env() {
  const char* text = std::getenv("DIALOFORGE_SEED");
  if (text == nullptr || *text == '\0') return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const auto v = std::strtoull(text, &end, 10);
  if (errno != 0 || *end != '\0' || *text == '-') {
    throw ValidationError("DIALOFORGE_SEED", "not an unsigned 64-bit integer");
  }
  return v;
}

json timestamp() {
  const char* text = std::getenv("SOURCE_DATE_EPOCH");
  if (text == nullptr || *text == '\0') return nullptr;
  char* end = nullptr;
  const auto secs = std::strtoll(text, &end, 10);
  if (*end != '\0') return nullptr;
  const auto t = static_cast<std::time_t>(secs);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_input(const fs::path& path) {
  if (!fs::exists(path)) throw InputError("missing input '" + path.string() + "'");
  return read_file(path);
}

json parse_json_file(const fs::path& path) {
  try {
    return json::parse(read_input(path));
  } catch (const json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

/// Hashes of the named files under dir, keyed by their path as given.
json hash_inputs(const fs::path& dir, std::initializer_list<std::string_view> names) {
  json out = json::object();
  for (auto name : names) {
    const auto path = dir / name;
    out[path.string()] = hash_hex(read_input(path));
  }
  return out;
}

void check_inputs(const json& inputs) {
  for (const auto& [path, hash] : inputs.items()) {
    if (hash_hex(read_input(path)) != hash.get<std::string>()) {
      throw InputError("input '" + path + "' changed since the manifest was written");
    }
  }
}

void ensure_distinct(const fs::path& in, const fs::path& out) {
  std::error_code ec;
  if (fs::exists(out) && fs::equivalent(in, out, ec)) {
    throw InputError("output directory must differ from the input directory");
  }
}

json manifest(std::string_view subcommand, const json& config, const json& inputs, std::uint64_t seed) {
  return {{"tool", "dialoforge"},  {"version", kVersion}, {"subcommand", subcommand}, {"config", config},
          {"inputs", inputs},      {"seed", seed},        {"timestamp", timestamp()}};
}

void write_manifest(const fs::path& dir, const json& m) { write_file(dir / kManifestFile, m.dump(2) + "\n"); }

json ontology_source(const std::string& preset, const std::string& file) {
  if (!preset.empty()) return {{"preset", preset}};
  return {{"file", file}};
}

Ontology load_source(const json& source, json& inputs) {
  if (source.contains("preset")) return preset_ontology(source.at("preset").get<std::string>());
  const auto path = source.at("file").get<std::string>();
  const auto text = read_input(path);
  inputs[path] = hash_hex(text);
  return load_ontology(text);
}

Ontology load_dir_ontology(const fs::path& dir) { return load_ontology(read_input(dir / kOntologyFile)); }

void write_ontology(const fs::path& dir, const Ontology& ontology) {
  write_file(dir / kOntologyFile, ontology.to_json().dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Executors: resolved config -> outputs. Re-running one with a manifest's
// config reproduces the outputs.

void run_generate(const json& config, const fs::path& out) {
  json inputs = json::object();
  const auto ontology = load_source(config.at("ontology"), inputs);
  const auto cfg = generator_config_from_json(config.at("generator"));
  const auto dataset = generate_dataset(ontology, cfg);
  write_splits(out, dataset);
  write_ontology(out, ontology);
  auto m = manifest("generate", config, inputs, cfg.seed);
  m["ontology_hash"] = ontology.hash();
  m["counts"] = {{"dialogues", dataset.size()},
                 {"train", dataset.split(Split::kTrain).size()},
                 {"val", dataset.split(Split::kVal).size()},
                 {"test", dataset.split(Split::kTest).size()},
                 {"domains", ontology.domains().size()},
                 {"actions", ontology.action_ids().size()}};
  write_manifest(out, m);
  std::cerr << "generated " << dataset.size() << " dialogues (" << dataset.split(Split::kTrain).size() << "/"
            << dataset.split(Split::kVal).size() << "/" << dataset.split(Split::kTest).size() << ") in "
            << out.string() << "\n";
}

void run_inject(const json& config, const fs::path& out) {
  const fs::path in = config.at("input").get<std::string>();
  ensure_distinct(in, out);
  const auto inputs = hash_inputs(in, {"train.jsonl", "val.jsonl", "test.jsonl", kOntologyFile});
  const auto ontology = load_dir_ontology(in);
  const auto dataset = read_dataset(in);
  const auto cfg = error_config_from_json(config.at("errors"));
  const auto result = inject_errors(dataset, ontology, cfg);
  write_splits(out, result.dataset);
  write_ontology(out, ontology);
  write_file(out / kPerturbationFile, records_to_jsonl(result.records));
  auto resolved = config;
  resolved["generator"] = to_json(dataset.config);
  auto m = manifest("inject", resolved, inputs, cfg.seed);
  m["ontology_hash"] = ontology.hash();
  m["perturbations"] = result.records.size();
  write_manifest(out, m);
  std::cerr << "wrote " << result.records.size() << " perturbations to " << (out / kPerturbationFile).string() << "\n";
}

void run_encode(const json& config, const fs::path& out) {
  const fs::path in = config.at("input").get<std::string>();
  ensure_distinct(in, out);
  const auto inputs = hash_inputs(in, {"train.jsonl", "val.jsonl", "test.jsonl", kOntologyFile});
  const auto ontology = load_dir_ontology(in);
  const auto dataset = read_dataset(in);
  const auto window = config.at("history_window").get<std::size_t>();
  if (window == 0) throw ValidationError("history_window", "must be positive");
  const auto encoded = encode_dataset(dataset, ontology, window);
  write_encoded(out, encoded, ontology, config.at("csv").get<bool>());
  write_ontology(out, ontology);
  auto m = manifest("encode", config, inputs, dataset.config.seed);
  m["ontology_hash"] = ontology.hash();
  m["state_width"] = encoded.layout.width();
  m["target_width"] = encoded.target_width;
  write_manifest(out, m);
  std::cerr << "encoded " << encoded.split(Split::kTrain).size() << "/" << encoded.split(Split::kVal).size() << "/"
            << encoded.split(Split::kTest).size() << " rows, state width " << encoded.layout.width() << "\n";
}

LinearConfig linear_from_json(const json& j) {
  LinearConfig c;
  c.epochs = j.at("epochs").get<std::size_t>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.l2 = j.at("l2").get<double>();
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.threshold = j.at("threshold").get<double>();
  return c;
}

json to_json(const LinearConfig& c) {
  return {{"epochs", c.epochs},
          {"learning_rate", c.learning_rate},
          {"l2", c.l2},
          {"batch_size", c.batch_size},
          {"threshold", c.threshold}};
}

void run_train(const json& config, const fs::path& out) {
  const fs::path in = config.at("input").get<std::string>();
  const auto inputs = hash_inputs(in, {"encoded/train.bin"});
  EncodedHeader header;
  const auto train = read_encoded_split(in, Split::kTrain, &header);
  const auto kind = parse_model_kind(config.at("model").get<std::string>());
  if (!kind) throw ValidationError("model", "unknown model kind");
  const auto seed = config.at("seed").get<std::uint64_t>();
  Model model;
  if (*kind == ModelKind::kMemorizer) {
    model = train_memorizer(train);
  } else {
    auto lc = linear_from_json(config.at("linear"));
    lc.seed = seed;
    model = train_linear(train, lc);
  }
  auto doc = dialoforge::to_json(model);
  auto m = manifest("train", config, inputs, seed);
  m["ontology_hash"] = header.ontology_hash;
  m["layout"] = header.layout_version;
  m["history_window"] = header.history_window;
  doc["manifest"] = m;
  write_file(out, doc.dump() + "\n");
  std::cerr << "trained " << to_string(*kind) << " on " << train.size() << " rows, wrote " << out.string() << "\n";
}

void run_eval(const json& config, const std::optional<fs::path>& out) {
  const fs::path in = config.at("input").get<std::string>();
  const fs::path model_path = config.at("model").get<std::string>();
  const auto split = parse_split(config.at("split").get<std::string>());
  if (!split) throw ValidationError("split", "expected train, val or test");
  json inputs = hash_inputs(in, {kOntologyFile});
  inputs[model_path.string()] = hash_hex(read_input(model_path));
  inputs[(in / "encoded" / (std::string(to_string(*split)) + ".bin")).string()] =
      hash_hex(read_input(in / "encoded" / (std::string(to_string(*split)) + ".bin")));
  const auto ontology = load_dir_ontology(in);
  EncodedHeader header;
  const auto data = read_encoded_split(in, *split, &header);
  const auto doc = parse_json_file(model_path);
  const auto model = model_from_json(doc);
  const auto width = std::visit([](const auto& m) { return m.state_width; }, model);
  if (width != header.state_width) throw InputError("model and encoded data have different state widths");
  if (doc.contains("manifest") && doc["manifest"].value("ontology_hash", header.ontology_hash) != header.ontology_hash) {
    throw InputError("model was trained on a different ontology");
  }
  const auto predictions = predict_split(model, data);
  const auto report = compute_metrics(predictions, data.targets);
  const auto text = format_report(report, ontology.action_ids());
  std::cout << text;
  if (out) {
    write_file(*out / "metrics.json", dialoforge::to_json(report, ontology.action_ids()).dump(2) + "\n");
    write_file(*out / "metrics.txt", text);
    auto m = manifest("eval", config, inputs, 0);
    m["model"] = model_name(model);
    m["ontology_hash"] = header.ontology_hash;
    write_manifest(*out, m);
  }
}

void run_sweep(const json& config, const fs::path& out) {
  json inputs = json::object();
  const auto ontology = load_source(config.at("ontology"), inputs);
  const auto gen = generator_config_from_json(config.at("generator"));
  const auto& s = config.at("sweep");
  SweepConfig sc;
  sc.rates = s.at("rates").get<std::vector<double>>();
  sc.models.clear();
  for (const auto& name : s.at("models")) {
    const auto kind = parse_model_kind(name.get<std::string>());
    if (!kind) throw ValidationError("models", "unknown model '" + name.get<std::string>() + "'");
    sc.models.push_back(*kind);
  }
  sc.seeds = s.at("seeds").get<std::size_t>();
  sc.seed = s.at("seed").get<std::uint64_t>();
  sc.errors.mode_weights = s.at("mode_weights").get<std::array<double, 2>>();
  sc.errors.train_only = s.at("splits").get<std::string>() == "train";
  sc.linear = linear_from_json(s.at("linear"));
  sc.history_window = s.at("history_window").get<std::size_t>();
  const auto result = robustness_sweep(ontology, gen, sc);
  fs::create_directories(out);
  write_file(out / "sweep.csv", sweep_to_csv(result));
  write_file(out / "sweep_long.csv", sweep_to_long_csv(result));
  write_file(out / "sweep.json", sweep_to_json(result).dump(2) + "\n");
  const auto text = format_sweep(result);
  write_file(out / "report.txt", text);
  auto m = manifest("sweep", config, inputs, sc.seed);
  m["ontology_hash"] = ontology.hash();
  m["resolved"] = result.manifest;
  write_manifest(out, m);
  std::cerr << text;
}

void execute(std::string_view subcommand, const json& config, const std::string& out) {
  if (subcommand == "generate") return run_generate(config, out);
  if (subcommand == "inject") return run_inject(config, out);
  if (subcommand == "encode") return run_encode(config, out);
  if (subcommand == "train") return run_train(config, out);
  if (subcommand == "eval") return run_eval(config, out.empty() ? std::nullopt : std::optional<fs::path>(out));
  if (subcommand == "sweep") return run_sweep(config, out);
  throw ValidationError("subcommand", "cannot reproduce '" + std::string(subcommand) + "'");
}

void run_reproduce(const fs::path& manifest_path, const std::string& out) {
  auto doc = parse_json_file(manifest_path);
  // Model files carry their manifest inline.
  if (!doc.contains("subcommand") && doc.contains("manifest")) doc = doc.at("manifest");
  try {
    check_inputs(doc.at("inputs"));
    execute(doc.at("subcommand").get<std::string>(), doc.at("config"), out);
  } catch (const json::exception& e) {
    throw SchemaError(manifest_path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Argument parsing

struct GeneratorFlags {
  std::string preset;
  std::string ontology;
  std::optional<std::size_t> dialogues;
  std::uint64_t seed = 0;
  double p_chitchat = 0.2;
  double p_mind_change = 0.2;
  double p_domain_change = 0.2;
  std::size_t max_depth = 2;

  void add(CLI::App& app) {
    auto* p = app.add_option("--preset", preset, "Built-in ontology")->check(CLI::IsMember({"simple", "medium", "hard"}));
    auto* o = app.add_option("--ontology", ontology, "Ontology JSON file");
    p->excludes(o);
    app.add_option("--dialogues", dialogues, "Number of dialogues (default: preset value or 1000)");
    app.add_option("--seed", seed, "Master seed; DIALOFORGE_SEED overrides it");
    app.add_option("--p-chitchat", p_chitchat, "Chit-chat probability per user turn");
    app.add_option("--p-mind-change", p_mind_change, "Mind-change probability per user turn");
    app.add_option("--p-domain-change", p_domain_change, "Domain-change probability per user turn");
    app.add_option("--max-depth", max_depth, "Maximum topic stack depth");
  }

  /// Resolved (ontology source, generator config) pair.
  std::pair<json, json> resolve() const {
    if (preset.empty() == ontology.empty()) throw CLI::RequiredError("exactly one of --preset or --ontology");
    const auto source = ontology_source(preset, ontology);
    json ignored = json::object();
    const auto onto = load_source(source, ignored);
    auto cfg = GeneratorConfig::for_ontology(onto);
    if (dialogues) cfg.n_dialogues = *dialogues;
    cfg.seed = seed_from_env().value_or(seed);
    cfg.p_chitchat = p_chitchat;
    cfg.p_mind_change = p_mind_change;
    cfg.p_domain_change = p_domain_change;
    cfg.max_stack_depth = max_depth;
    cfg.validate();
    return {source, dialoforge::to_json(cfg)};
  }
};

struct LinearFlags {
  LinearConfig cfg;

  void add(CLI::App& app) {
    app.add_option("--epochs", cfg.epochs, "Linear model epochs");
    app.add_option("--lr", cfg.learning_rate, "Linear model learning rate");
    app.add_option("--l2", cfg.l2, "Linear model L2 penalty");
    app.add_option("--batch", cfg.batch_size, "Linear model mini-batch size");
    app.add_option("--threshold", cfg.threshold, "Linear model decision threshold");
  }
};

std::array<double, 2> mode_weights(const std::string& mode) {
  if (mode == "relabel") return {1.0, 0.0};
  if (mode == "unk") return {0.0, 1.0};
  return {0.5, 0.5};
}

int parse_and_run(const std::vector<std::string>& args) {
  CLI::App app{"Synthetic task-oriented dialogue generator and evaluation harness", "dialoforge"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kVersion));
  int jobs = 0;
  app.add_option("--jobs", jobs, "Worker threads (0: runtime default); never changes outputs")
      ->check(CLI::NonNegativeNumber);

  auto* validate = app.add_subcommand("validate", "Check an ontology file");
  std::string validate_path;
  validate->add_option("ontology", validate_path, "Ontology JSON file")->required();

  auto* generate = app.add_subcommand("generate", "Generate a dataset");
  GeneratorFlags gen_flags;
  gen_flags.add(*generate);
  std::string gen_out;
  generate->add_option("--out", gen_out, "Output directory")->required();

  auto* inject = app.add_subcommand("inject", "Perturb the labels of a dataset");
  std::string inj_in;
  std::string inj_out;
  ErrorConfig inj_cfg;
  std::string inj_mode = "mixed";
  std::string inj_splits = "all";
  inject->add_option("--in", inj_in, "Dataset directory")->required();
  inject->add_option("--p-intent", inj_cfg.p_intent, "Intent perturbation probability");
  inject->add_option("--p-action", inj_cfg.p_action, "Action perturbation probability");
  inject->add_option("--p-slot", inj_cfg.p_slot, "Slot perturbation probability");
  inject->add_option("--mode", inj_mode, "relabel, unk or mixed")->check(CLI::IsMember({"relabel", "unk", "mixed"}));
  inject->add_option("--splits", inj_splits, "all or train")->check(CLI::IsMember({"all", "train"}));
  inject->add_option("--seed", inj_cfg.seed, "Injection seed; DIALOFORGE_SEED overrides it");
  inject->add_option("--out", inj_out, "Output directory")->required();

  auto* encode = app.add_subcommand("encode", "Encode a dataset as state/target bit matrices");
  std::string enc_in;
  std::string enc_out;
  bool enc_csv = false;
  std::size_t enc_window = 1;
  encode->add_option("--in", enc_in, "Dataset directory")->required();
  encode->add_option("--out", enc_out, "Output directory")->required();
  encode->add_flag("--csv", enc_csv, "Also write a 0/1 CSV per split");
  encode->add_option("--history", enc_window, "Previous system turns in the state");

  auto* train = app.add_subcommand("train", "Train a baseline policy");
  std::string tr_model;
  std::string tr_in;
  std::string tr_out;
  std::uint64_t tr_seed = 0;
  LinearFlags tr_linear;
  train->add_option("--model", tr_model, "memorizer or linear")->required()->check(CLI::IsMember({"memorizer", "linear"}));
  train->add_option("--in", tr_in, "Encoded dataset directory")->required();
  train->add_option("--out", tr_out, "Model file")->required();
  train->add_option("--seed", tr_seed, "Training seed; DIALOFORGE_SEED overrides it");
  tr_linear.add(*train);

  auto* eval = app.add_subcommand("eval", "Score a model on an encoded split");
  std::string ev_model;
  std::string ev_in;
  std::string ev_split = "test";
  std::string ev_out;
  eval->add_option("--model", ev_model, "Model file")->required();
  eval->add_option("--in", ev_in, "Encoded dataset directory")->required();
  eval->add_option("--split", ev_split, "Split to score")->check(CLI::IsMember({"train", "val", "test"}));
  eval->add_option("--out", ev_out, "Directory for metrics.json and metrics.txt");

  auto* sweep = app.add_subcommand("sweep", "Error-rate robustness sweep");
  GeneratorFlags sw_gen;
  sw_gen.add(*sweep);
  std::vector<double> sw_rates = kDefaultRates;
  std::vector<std::string> sw_models = {"memorizer"};
  std::size_t sw_seeds = 3;
  std::string sw_mode = "mixed";
  std::string sw_splits = "all";
  std::size_t sw_window = 1;
  std::string sw_out;
  LinearFlags sw_linear;
  sweep->add_option("--rates", sw_rates, "Comma-separated ascending error rates")->delimiter(',');
  sweep->add_option("--models", sw_models, "Comma-separated models")
      ->delimiter(',')
      ->check(CLI::IsMember({"memorizer", "linear"}));
  sweep->add_option("--seeds", sw_seeds, "Replicates per rate");
  sweep->add_option("--mode", sw_mode, "relabel, unk or mixed")->check(CLI::IsMember({"relabel", "unk", "mixed"}));
  sweep->add_option("--splits", sw_splits, "all or train")->check(CLI::IsMember({"all", "train"}));
  sweep->add_option("--history", sw_window, "Previous system turns in the state");
  sweep->add_option("--out", sw_out, "Output directory")->required();
  sw_linear.add(*sweep);

  auto* reproduce = app.add_subcommand("reproduce", "Re-run a command from its manifest");
  std::string rp_manifest;
  std::string rp_out;
  reproduce->add_option("--manifest", rp_manifest, "manifest.json or model file")->required();
  reproduce->add_option("--out", rp_out, "Output directory (model file for train)");

  std::vector<const char*> argv = {"dialoforge"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, std::cout, std::cerr);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }
  set_worker_count(jobs);

  try {
    if (validate->parsed()) {
      const auto ontology = load_ontology(read_input(validate_path));
      std::cerr << validate_path << ": ok, " << ontology.domains().size() << " domains, " << ontology.topic_count()
                << " topics, " << ontology.slots().size() << " slots, " << ontology.action_ids().size()
                << " actions, hash " << ontology.hash() << "\n";
    } else if (generate->parsed()) {
      auto [source, generator] = gen_flags.resolve();
      execute("generate", {{"ontology", source}, {"generator", generator}}, gen_out);
    } else if (inject->parsed()) {
      inj_cfg.mode_weights = mode_weights(inj_mode);
      inj_cfg.train_only = inj_splits == "train";
      inj_cfg.seed = seed_from_env().value_or(inj_cfg.seed);
      inj_cfg.validate();
      execute("inject", {{"input", inj_in}, {"errors", dialoforge::to_json(inj_cfg)}}, inj_out);
    } else if (encode->parsed()) {
      execute("encode", {{"input", enc_in}, {"history_window", enc_window}, {"csv", enc_csv}}, enc_out);
    } else if (train->parsed()) {
      tr_linear.cfg.validate();
      execute("train",
              {{"input", tr_in},
               {"model", tr_model},
               {"seed", seed_from_env().value_or(tr_seed)},
               {"linear", to_json(tr_linear.cfg)}},
              tr_out);
    } else if (eval->parsed()) {
      execute("eval", {{"model", ev_model}, {"input", ev_in}, {"split", ev_split}}, ev_out);
    } else if (sweep->parsed()) {
      auto [source, generator] = sw_gen.resolve();
      json models = sw_models;
      execute("sweep",
              {{"ontology", source},
               {"generator", generator},
               {"sweep",
                {{"rates", sw_rates},
                 {"models", models},
                 {"seeds", sw_seeds},
                 {"seed", generator.at("seed")},
                 {"mode_weights", mode_weights(sw_mode)},
                 {"splits", sw_splits},
                 {"linear", to_json(sw_linear.cfg)},
                 {"history_window", sw_window}}}},
              sw_out);
    } else if (reproduce->parsed()) {
      run_reproduce(rp_manifest, rp_out);
    }
  } catch (const CLI::RequiredError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  try {
    return parse_and_run(args);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeFailure;
  }
}

}  // namespace dialoforge::cli
