/*
 * Copyright 2026 The OrdShap Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "cli.h"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ordshap/approx.h"
#include "ordshap/exact.h"
#include "ordshap/gateway.h"
#include "ordshap/metrics.h"
#include "ordshap/sampler.h"
#include "ordshap/sequence.h"
#include "ordshap/synthetic_model.h"
#include "ordshap/toy_game.h"
#include "ordshap/transport.h"

#ifndef ORDSHAP_VERSION
#define ORDSHAP_VERSION "unknown"
#endif

namespace ordshap::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Bad flags or unusable inputs: exit 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelOptions {
  std::string game = "model";
  std::string sample_path;
  int sample_index = 0;
  std::optional<int> class_index;
  std::optional<std::string> baseline;
  std::string groups;
  std::string transport;
  std::string endpoint;
  int batch_limit = 64;
  int jobs = 1;
  int timeout_ms = 30000;
  bool no_cache = false;
  std::string model_config;
  std::uint64_t seed = 0;
};

void AddModelOptions(CLI::App* cmd, ModelOptions& o, bool allow_toy) {
  std::vector<std::string> games{"model", "synthetic"};
  if (allow_toy) games.push_back("toy");
  cmd->add_option("--game", o.game,
                  "model: an external endpoint; synthetic: the built-in "
                  "token model" +
                      std::string(allow_toy ? "; toy: the hat/bag/glove game"
                                            : ""))
      ->check(CLI::IsMember(games))
      ->capture_default_str();
  cmd->add_option("--class-index", o.class_index,
                  "output class to explain (synthetic default: the model's "
                  "last class)");
  cmd->add_option("--baseline", o.baseline,
                  "mask token, replaces the sample's masking policy");
  cmd->add_option("--groups", o.groups,
                  "comma-separated position labels, e.g. 1,1,2,3");
  cmd->add_option("--transport", o.transport,
                  "pipe_jsonl or http_json (default: inferred from the "
                  "endpoint)")
      ->check(CLI::IsMember({"pipe_jsonl", "http_json"}));
  cmd->add_option("--endpoint", o.endpoint,
                  "shell command (pipe) or http://host:port")
      ->envname(kEndpointEnv);
  cmd->add_option("--batch-limit", o.batch_limit, "sequences per request")
      ->capture_default_str();
  cmd->add_option("--jobs", o.jobs, "requests in flight")
      ->capture_default_str();
  cmd->add_option("--timeout-ms", o.timeout_ms, "per-request timeout")
      ->capture_default_str();
  cmd->add_flag("--no-cache", o.no_cache, "disable the evaluation cache");
  cmd->add_option("--model-config", o.model_config,
                  "synthetic model config (JSON, as written by synth)");
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json ReadJson(const std::string& path) {
  try {
    return json::parse(ReadFile(path));
  } catch (const json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

// 64-bit FNV-1a, hex. Identifies input files in the manifest.
std::string ContentHash(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream s;
  s << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

void WriteFile(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

void WriteJson(const fs::path& path, const json& j) {
  WriteFile(path, j.dump(2) + "\n");
}

std::string Num(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

std::string TokenLabel(const Token& t) {
  if (const auto* s = std::get_if<std::string>(&t)) return *s;
  return "embedding";
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::vector<int> ParseGroups(const std::string& text) {
  std::vector<int> labels;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      labels.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--groups: '" + item + "' is not an integer");
    }
  }
  return labels;
}

std::vector<SequenceSample> LoadSamples(const std::string& path) {
  const json j = ReadJson(path);
  std::vector<SequenceSample> samples;
  if (j.is_array()) {
    for (const json& s : j) samples.push_back(SequenceSample::FromJson(s));
  } else {
    samples.push_back(SequenceSample::FromJson(j));
  }
  if (samples.empty()) throw UsageError(path + " holds no samples");
  return samples;
}

struct RunContext {
  std::string command;
  json config = json::object();
  json inputs = json::object();
  std::uint64_t seed = 0;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  std::shared_ptr<ModelGateway> gateway;

  void AddInput(const std::string& path) {
    inputs[path] = ContentHash(ReadFile(path));
  }

  json Manifest() const {
    json m;
    m["command"] = command;
    m["config"] = config;
    m["seed"] = seed;
    m["version"] = ORDSHAP_VERSION;
    m["inputs"] = inputs;
    m["wall_clock_seconds"] = std::chrono::duration<double>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();
    GatewayStats stats;
    if (gateway) stats = gateway->stats();
    m["model_calls"] = stats.sequences_sent;
    m["round_trips"] = stats.round_trips;
    const std::int64_t lookups = stats.cache_hits + stats.cache_misses;
    m["cache_hit_rate"] =
        lookups == 0 ? 0.0 : static_cast<double>(stats.cache_hits) / lookups;
    return m;
  }
};

struct GameSetup {
  std::unique_ptr<OrderedGame> game;
  SequenceSample sample;
  PositionGrouping grouping = PositionGrouping::Identity(1);
  int num_classes = 1;
};

SyntheticModelConfig LoadSyntheticConfig(const ModelOptions& o,
                                         RunContext& ctx) {
  if (o.model_config.empty()) return SyntheticModelConfig::Default();
  ctx.AddInput(o.model_config);
  return SyntheticModelConfig::FromJson(ReadJson(o.model_config));
}

std::shared_ptr<ModelGateway> MakeGateway(const ModelOptions& o,
                                          BatchModelFn in_process) {
  ModelEndpoint endpoint;
  if (in_process) {
    endpoint.transport = ModelEndpoint::Transport::kInProcess;
  } else {
    if (o.endpoint.empty()) {
      throw UsageError(
          "a model endpoint is required: pass --endpoint or set " +
          std::string(kEndpointEnv) + ", or use a built-in --game");
    }
    std::string transport = o.transport;
    if (transport.empty()) {
      transport =
          o.endpoint.rfind("http://", 0) == 0 ? "http_json" : "pipe_jsonl";
    }
    endpoint.transport = ParseTransport(transport);
    endpoint.address = o.endpoint;
  }
  endpoint.batch_limit = o.batch_limit;
  endpoint.timeout = std::chrono::milliseconds(o.timeout_ms);
  GatewayOptions options;
  options.use_cache = !o.no_cache;
  options.jobs = o.jobs;
  try {
    endpoint.Validate();
    return std::make_shared<ModelGateway>(
        endpoint, MakeClient(endpoint, std::move(in_process)), options);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

void ApplySampleOverrides(const ModelOptions& o, SequenceSample& sample) {
  if (o.baseline) {
    sample.masking.mode = MaskingPolicy::Mode::kSingleBaseline;
    sample.masking.baseline_token = *o.baseline;
    sample.masking.references.clear();
  }
  if (!o.groups.empty()) sample.groups = ParseGroups(o.groups);
  sample.Validate();
}

void RecordModelConfig(const ModelOptions& o, RunContext& ctx) {
  ctx.config["game"] = o.game;
  ctx.config["sample"] = o.sample_path;
  ctx.config["sample_index"] = o.sample_index;
  ctx.config["baseline"] = o.baseline ? json(*o.baseline) : json(nullptr);
  ctx.config["groups"] = o.groups;
  ctx.config["transport"] = o.transport;
  ctx.config["endpoint"] = o.endpoint;
  ctx.config["batch_limit"] = o.batch_limit;
  ctx.config["jobs"] = o.jobs;
  ctx.config["cache"] = !o.no_cache;
  ctx.config["model_config"] = o.model_config;
}

GameSetup BuildGame(const ModelOptions& o, RunContext& ctx) {
  RecordModelConfig(o, ctx);
  GameSetup setup;
  std::optional<SequenceSample> loaded;
  if (!o.sample_path.empty()) {
    ctx.AddInput(o.sample_path);
    std::vector<SequenceSample> samples = LoadSamples(o.sample_path);
    if (o.sample_index < 0 ||
        o.sample_index >= static_cast<int>(samples.size())) {
      throw UsageError("--sample-index " + std::to_string(o.sample_index) +
                       " out of range for " + std::to_string(samples.size()) +
                       " samples");
    }
    loaded = samples[o.sample_index];
  }

  if (o.game == "toy") {
    std::vector<ToyItem> items;
    if (loaded) {
      for (const Token& t : loaded->tokens) {
        const auto* name = std::get_if<std::string>(&t);
        if (!name) throw UsageError("toy samples hold item names");
        items.push_back(ParseToyItem(*name));
      }
      setup.sample = *loaded;
    } else {
      items = ToyReferenceSample();
      for (ToyItem item : items) {
        setup.sample.tokens.push_back(std::string(ToyItemName(item)));
      }
    }
    if (!o.groups.empty()) setup.sample.groups = ParseGroups(o.groups);
    setup.sample.Validate();
    setup.game = std::make_unique<ToyOrderGame>(std::move(items));
    ctx.config["class_index"] = nullptr;
  } else if (o.game == "synthetic") {
    SyntheticModelConfig config = LoadSyntheticConfig(o, ctx);
    if (loaded) config.sequence_length = loaded->size();
    auto model = std::make_shared<const SyntheticTokenModel>(config);
    if (loaded) {
      setup.sample = *loaded;
    } else {
      SeededSampler sampler(o.seed);
      setup.sample = MakeSyntheticSample(
          GenerateSyntheticDataset(sampler, 1, *model).front(), *model);
    }
    ApplySampleOverrides(o, setup.sample);
    setup.num_classes = model->num_classes();
    const int class_index = o.class_index.value_or(model->num_classes() - 1);
    ctx.gateway = MakeGateway(o, AsBatchModel(model));
    ctx.config["class_index"] = class_index;
    ctx.config["synthetic_model"] = config.ToJson();
    setup.game = std::make_unique<ModelGame>(ctx.gateway, setup.sample,
                                             class_index, "synthetic");
  } else {
    if (!loaded) throw UsageError("--game model needs --sample");
    setup.sample = *loaded;
    ApplySampleOverrides(o, setup.sample);
    const int class_index = o.class_index.value_or(0);
    ctx.gateway = MakeGateway(o, nullptr);
    ctx.config["class_index"] = class_index;
    setup.game = std::make_unique<ModelGame>(ctx.gateway, setup.sample,
                                             class_index, "model");
  }
  ctx.config["tokens"] = SequenceToJson(setup.sample.tokens);
  setup.grouping = GroupedPositions(setup.sample);
  return setup;
}

std::string AttributionCsv(const SequenceSample& sample,
                           const std::vector<double>& vi,
                           const std::vector<double>& pi,
                           const std::vector<double>* shapley = nullptr,
                           const std::vector<double>* sb = nullptr) {
  std::ostringstream s;
  s << "feature,token,vi,pi";
  if (shapley) s << ",shapley,sanchez_bergantinos";
  s << "\n";
  for (std::size_t i = 0; i < vi.size(); ++i) {
    s << i + 1 << "," << CsvField(TokenLabel(sample.tokens[i])) << ","
      << Num(vi[i]) << "," << Num(pi[i]);
    if (shapley) s << "," << Num((*shapley)[i]) << "," << Num((*sb)[i]);
    s << "\n";
  }
  return s.str();
}

std::string GammaCsv(const OrdShapMatrix& gamma) {
  std::ostringstream s;
  s << "feature";
  for (int label : gamma.grouping().column_labels()) s << "," << label;
  s << "\n";
  for (int i = 1; i <= gamma.num_features(); ++i) {
    s << i;
    for (int c = 1; c <= gamma.num_columns(); ++c) {
      s << ",";
      if (gamma.has(i, c)) s << Num(gamma.at(i, c));
    }
    s << "\n";
  }
  return s.str();
}

void PrintAttributions(std::ostream& out, const SequenceSample& sample,
                       const std::vector<double>& vi,
                       const std::vector<double>& pi) {
  out << "feature  token              vi          pi\n";
  std::ostringstream rows;
  rows << std::fixed << std::setprecision(6);
  for (std::size_t i = 0; i < vi.size(); ++i) {
    rows << std::left << std::setw(9) << i + 1 << std::setw(12)
         << TokenLabel(sample.tokens[i]) << std::right << std::setw(12)
         << vi[i] << std::setw(12) << pi[i] << "\n";
  }
  out << rows.str();
}

struct ExplainOptions {
  ModelOptions model;
  std::string method = "ls";
  int K = 0;
  int L = 0;
  bool emit_gamma = false;
  std::string out_dir = ".";
};

int RunExplain(const ExplainOptions& opt, std::ostream& out) {
  RunContext ctx;
  ctx.command = "explain";
  ctx.seed = opt.model.seed;
  GameSetup setup = BuildGame(opt.model, ctx);
  ctx.config["method"] = opt.method;
  ctx.config["emit_gamma"] = opt.emit_gamma;

  AttributionResult result;
  if (opt.method == "exact") {
    result = ResultFromMatrix(OrdShapExact(*setup.game, setup.grouping),
                              {"exact", setup.game->Descriptor()});
  } else if (opt.method == "sampling") {
    SamplingConfig cfg;
    if (opt.K > 0) cfg.K = opt.K;
    if (opt.L > 0) cfg.L = opt.L;
    cfg.seed = opt.model.seed;
    try {
      cfg.Validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    ctx.config["K"] = cfg.K;
    ctx.config["L"] = cfg.L;
    result = SamplingEstimate(*setup.game, cfg, setup.grouping);
  } else {
    LeastSquaresConfig cfg;
    if (opt.K > 0) cfg.K = opt.K;
    if (opt.L > 0) cfg.L = opt.L;
    cfg.seed = opt.model.seed;
    try {
      cfg.Validate(setup.game->num_players());
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    ctx.config["K"] = cfg.K;
    ctx.config["L"] = cfg.L;
    result = LeastSquaresEstimate(*setup.game, cfg, setup.grouping);
  }
  if (!opt.emit_gamma && opt.method != "exact") result.gamma.reset();

  const fs::path dir(opt.out_dir);
  json j = result.ToJson();
  j["tokens"] = SequenceToJson(setup.sample.tokens);
  j["manifest"] = ctx.Manifest();
  WriteJson(dir / "attribution.json", j);
  WriteFile(dir / "attribution.csv",
            AttributionCsv(setup.sample, result.vi, result.pi));
  if (result.gamma) WriteFile(dir / "gamma.csv", GammaCsv(*result.gamma));
  PrintAttributions(out, setup.sample, result.vi, result.pi);
  out << "wrote " << (dir / "attribution.json").string() << "\n";
  return kExitOk;
}

int RunExactCommand(const ModelOptions& model, const std::string& out_dir,
                    std::ostream& out) {
  RunContext ctx;
  ctx.command = "exact";
  ctx.seed = model.seed;
  GameSetup setup = BuildGame(model, ctx);
  ExactReport report = RunExact(*setup.game, setup.grouping);
  const AttributionResult& a = report.attribution;

  const fs::path dir(out_dir);
  json j = a.ToJson();
  j["tokens"] = SequenceToJson(setup.sample.tokens);
  j["shapley"] = report.shapley;
  j["sanchez_bergantinos"] = report.sanchez_bergantinos;
  j["manifest"] = ctx.Manifest();
  WriteJson(dir / "exact.json", j);
  WriteFile(dir / "exact.csv",
            AttributionCsv(setup.sample, a.vi, a.pi, &report.shapley,
                           &report.sanchez_bergantinos));
  WriteFile(dir / "gamma.csv", GammaCsv(*a.gamma));
  PrintAttributions(out, setup.sample, a.vi, a.pi);
  out << "wrote " << (dir / "exact.json").string() << "\n";
  return kExitOk;
}

struct EvaluateOptions {
  ModelOptions model;
  std::string samples_path;
  std::string attributions_path;
  std::vector<std::string> metrics;
  std::string field = "vi";
  int permutations = 10;
  bool no_permutation_step = false;
  int num_classes = 2;
  std::string out_dir = ".";
};

int RunEvaluate(const EvaluateOptions& opt, std::ostream& out) {
  RunContext ctx;
  ctx.command = "evaluate";
  ctx.seed = opt.model.seed;
  RecordModelConfig(opt.model, ctx);
  ctx.AddInput(opt.samples_path);
  ctx.AddInput(opt.attributions_path);

  std::vector<SequenceSample> samples = LoadSamples(opt.samples_path);
  for (SequenceSample& s : samples) ApplySampleOverrides(opt.model, s);
  const json aj = ReadJson(opt.attributions_path);
  std::vector<AttributionResult> attributions;
  if (aj.is_array()) {
    for (const json& a : aj) attributions.push_back(AttributionResult::FromJson(a));
  } else {
    attributions.push_back(AttributionResult::FromJson(aj));
  }
  if (attributions.size() != samples.size()) {
    throw UsageError(std::to_string(samples.size()) + " samples but " +
                     std::to_string(attributions.size()) + " attributions");
  }

  int num_classes = opt.num_classes;
  if (opt.model.game == "synthetic") {
    SyntheticModelConfig config = LoadSyntheticConfig(opt.model, ctx);
    config.sequence_length = samples.front().size();
    auto model = std::make_shared<const SyntheticTokenModel>(config);
    num_classes = model->num_classes();
    ctx.gateway = MakeGateway(opt.model, AsBatchModel(model));
    ctx.config["synthetic_model"] = config.ToJson();
  } else {
    ctx.gateway = MakeGateway(opt.model, nullptr);
  }
  if (num_classes < 1) throw UsageError("--num-classes must be >= 1");
  const ClassScorer scorer(ctx.gateway, num_classes);

  MetricConfig cfg;
  cfg.permutations_per_k = opt.permutations;
  cfg.seed = opt.model.seed;
  cfg.permutation_step = !opt.no_permutation_step;
  try {
    cfg.Validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::vector<std::string> metrics = opt.metrics;
  if (metrics.empty()) metrics = {"pi", "inc", "exc", "ins", "del"};
  ctx.config["metrics"] = metrics;
  ctx.config["attribution_field"] = opt.field;
  ctx.config["num_classes"] = num_classes;
  ctx.config["metric"] = cfg.ToJson();

  std::vector<std::vector<double>> chosen;
  for (const AttributionResult& a : attributions) {
    chosen.push_back(opt.field == "pi" ? a.pi : a.vi);
  }

  const fs::path dir(opt.out_dir);
  json summary;
  for (const std::string& metric : metrics) {
    EvalCurve curve;
    if (metric == "pi") {
      std::vector<EvalCurve> curves;
      for (std::size_t s = 0; s < samples.size(); ++s) {
        curves.push_back(
            PiPermutationCurve(scorer, samples[s], attributions[s].pi, cfg));
      }
      curve = MeanCurve(curves);
    } else if (metric == "inc" || metric == "exc") {
      curve = InclusionExclusionCurve(
          scorer, samples, chosen,
          metric == "inc" ? MaskMode::kInclusion : MaskMode::kExclusion, cfg);
    } else {
      curve = InsertionDeletionCurve(
          scorer, samples, chosen,
          metric == "ins" ? CurveMode::kInsertion : CurveMode::kDeletion, cfg);
    }
    WriteFile(dir / ("metric_" + metric + ".csv"), curve.ToCsv());
    summary["auc"][metric] = curve.auc;
    summary["curves"][metric] = curve.ToJson();
    out << std::left << std::setw(5) << metric << " auc " << Num(curve.auc)
        << "\n";
  }
  summary["manifest"] = ctx.Manifest();
  WriteJson(dir / "summary.json", summary);
  out << "wrote " << (dir / "summary.json").string() << "\n";
  return kExitOk;
}

struct SynthOptions {
  int count = 200;
  int length = 10;
  std::string link = "sigmoid";
  std::string model_config;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

int RunSynth(const SynthOptions& opt, std::ostream& out) {
  RunContext ctx;
  ctx.command = "synth";
  ctx.seed = opt.seed;
  SyntheticModelConfig config = SyntheticModelConfig::Default();
  if (!opt.model_config.empty()) {
    ctx.AddInput(opt.model_config);
    config = SyntheticModelConfig::FromJson(ReadJson(opt.model_config));
  }
  config.sequence_length = opt.length;
  config.link = opt.link == "linear" ? Link::kLinear : Link::kSigmoid;
  config.seed = opt.seed;
  if (opt.count < 1) throw UsageError("--count must be >= 1");
  const SyntheticTokenModel model(config);
  SeededSampler sampler(opt.seed);
  const auto data = GenerateSyntheticDataset(sampler, opt.count, model);

  json samples = json::array();
  for (const auto& tokens : data) {
    samples.push_back(MakeSyntheticSample(tokens, model).ToJson());
  }
  ctx.config["count"] = opt.count;
  ctx.config["length"] = opt.length;
  ctx.config["link"] = opt.link;
  ctx.config["model_config"] = opt.model_config;
  ctx.config["synthetic_model"] = config.ToJson();

  const fs::path dir(opt.out_dir);
  WriteJson(dir / "samples.json", samples);
  WriteJson(dir / "model_config.json", config.ToJson());
  json manifest = ctx.Manifest();
  manifest["outputs"] = {"samples.json", "model_config.json"};
  WriteJson(dir / "manifest.json", manifest);
  out << "wrote " << opt.count << " sequences of length " << opt.length
      << " to " << (dir / "samples.json").string() << "\n";
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Position-aware Shapley attributions for ordered inputs",
               "ordshap"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ORDSHAP_VERSION);

  ExplainOptions explain;
  CLI::App* explain_cmd =
      app.add_subcommand("explain", "attribute one sample with an estimator");
  AddModelOptions(explain_cmd, explain.model, true);
  explain_cmd->add_option("--sample", explain.model.sample_path,
                          "sample JSON (object or array)");
  explain_cmd->add_option("--sample-index", explain.model.sample_index,
                          "which sample of an array");
  explain_cmd
      ->add_option("--method", explain.method,
                   "sampling, ls or exact (exact always writes gamma)")
      ->check(CLI::IsMember({"sampling", "ls", "exact"}))
      ->capture_default_str();
  explain_cmd->add_option("--K", explain.K,
                          "sampling: inner orders; ls: coalitions");
  explain_cmd->add_option("--L", explain.L,
                          "sampling: outer orders; ls: orders per coalition");
  explain_cmd->add_option("--seed", explain.model.seed)->capture_default_str();
  explain_cmd->add_flag("--emit-gamma", explain.emit_gamma,
                        "write the position matrix when the method has one");
  explain_cmd->add_option("--out", explain.out_dir, "output directory")
      ->capture_default_str();

  ModelOptions exact;
  std::string exact_out = ".";
  CLI::App* exact_cmd = app.add_subcommand(
      "exact", "exact enumeration with Shapley and SB values (n <= 6)");
  AddModelOptions(exact_cmd, exact, true);
  exact_cmd->add_option("--sample", exact.sample_path, "sample JSON");
  exact_cmd->add_option("--sample-index", exact.sample_index);
  exact_cmd->add_option("--seed", exact.seed, "synthetic sample seed");
  exact_cmd->add_option("--out", exact_out, "output directory")
      ->capture_default_str();

  EvaluateOptions evaluate;
  CLI::App* evaluate_cmd =
      app.add_subcommand("evaluate", "faithfulness curves and AUCs");
  AddModelOptions(evaluate_cmd, evaluate.model, false);
  evaluate_cmd->add_option("--samples", evaluate.samples_path, "sample JSON")
      ->required();
  evaluate_cmd
      ->add_option("--attributions", evaluate.attributions_path,
                   "attribution JSON aligned with --samples")
      ->required();
  evaluate_cmd
      ->add_option("--metric", evaluate.metrics,
                   "pi, inc, exc, ins or del; repeatable (default: all)")
      ->check(CLI::IsMember({"pi", "inc", "exc", "ins", "del"}));
  evaluate_cmd
      ->add_option("--attribution", evaluate.field,
                   "vector ranked by inc/exc/ins/del")
      ->check(CLI::IsMember({"vi", "pi"}))
      ->capture_default_str();
  evaluate_cmd
      ->add_option("--permutations", evaluate.permutations,
                   "random orders per fraction")
      ->capture_default_str();
  evaluate_cmd->add_flag("--no-permutation-step",
                         evaluate.no_permutation_step,
                         "score masked samples in their original order");
  evaluate_cmd
      ->add_option("--num-classes", evaluate.num_classes,
                   "classes of an external model")
      ->capture_default_str();
  evaluate_cmd->add_option("--seed", evaluate.model.seed)
      ->capture_default_str();
  evaluate_cmd->add_option("--out", evaluate.out_dir, "output directory")
      ->capture_default_str();

  SynthOptions synth;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "write a synthetic token dataset");
  synth_cmd->add_option("--count", synth.count)->capture_default_str();
  synth_cmd->add_option("--length", synth.length)->capture_default_str();
  synth_cmd->add_option("--link", synth.link)
      ->check(CLI::IsMember({"sigmoid", "linear"}))
      ->capture_default_str();
  synth_cmd->add_option("--model-config", synth.model_config,
                        "token values to use instead of the defaults");
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
  synth_cmd->add_option("--out", synth.out_dir, "output directory")
      ->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*explain_cmd) return RunExplain(explain, out);
    if (*exact_cmd) return RunExactCommand(exact, exact_out, out);
    if (*evaluate_cmd) return RunEvaluate(evaluate, out);
    return RunSynth(synth, out);
  } catch (const UsageError& e) {
    err << "ordshap: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SizeGuardError& e) {
    err << "ordshap: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "ordshap: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BatchError& e) {
    err << "ordshap: model request failed at sequence " << e.failing_index()
        << ": " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "ordshap: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace ordshap::cli
