// Copyright 2026 The factframe Authors.
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

// factframe command line: extract, train, predict, highlight, evaluate,
// split, stats, ingest, synth.
//
// Effective settings are layered: built-in defaults, then a JSON file given
// with --config, then explicit flags. Every command writes the merged
// settings to <out-dir>/config.json.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "factframe/checkpoint.h"
#include "factframe/data_pipeline.h"
#include "factframe/errors.h"
#include "factframe/evaluation.h"
#include "factframe/log.h"
#include "factframe/model.h"
#include "factframe/srl.h"
#include "factframe/synthetic.h"
#include "factframe/training.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace factframe {
namespace {

constexpr int kExitMissingInput = 1;
constexpr int kExitBackend = 2;
constexpr int kExitNonFinite = 3;
constexpr int kExitOther = 4;

constexpr const char* kCacheEnv = "FACTFRAME_CACHE_DIR";

// Flags that override one key of the layered settings when given.
class Overrides {
 public:
  template <typename T>
  CLI::Option* Add(CLI::App* app, const std::string& flag,
                   const std::string& section, const std::string& key,
                   const std::string& help) {
    auto holder = std::make_shared<T>();
    CLI::Option* opt = app->add_option(flag, *holder, help);
    entries_.push_back({opt, [holder, section, key](json& j) { j[section][key] = *holder; }});
    return opt;
  }
  void Apply(json& j) const {
    for (const auto& e : entries_) {
      if (e.option->count() > 0) e.apply(j);
    }
  }

 private:
  struct Entry {
    CLI::Option* option;
    std::function<void(json&)> apply;
  };
  std::vector<Entry> entries_;
};

json DefaultSettings() {
  return {{"model", ModelConfig{}.ToJson()},
          {"train", TrainConfig{}.ToJson()},
          {"srl", {{"backend", "fixture"}, {"lexicon", ""}, {"command", ""}, {"version", ""}}},
          {"highlight",
           {{"method", "fact-attention"}, {"baseline_importance", "mean"}, {"matcher", "overlap"}}},
          {"paths", json::object()}};
}

json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingInputError(path);
  return json::parse(in);
}

void RequireFile(const std::string& path) {
  if (path.empty() || !fs::exists(path)) throw MissingInputError(path.empty() ? "<unset>" : path);
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

// Settings shared by every command.
struct Common {
  std::string config_path;
  std::string out_dir = ".";
  Overrides overrides;
  json settings;

  void Register(CLI::App* app) {
    app->add_option("--config", config_path, "JSON settings file layered over defaults");
    app->add_option("--out-dir", out_dir, "output directory (config snapshot goes here)");
  }

  // defaults <- config file <- flags; writes the snapshot.
  void Resolve(const std::string& command) {
    settings = DefaultSettings();
    if (!config_path.empty()) settings.merge_patch(ReadJsonFile(config_path));
    overrides.Apply(settings);
    settings["command"] = command;
    // Keep one seed for the whole run.
    settings["model"]["seed"] = settings["train"]["seed"];
    fs::create_directories(out_dir);
    WriteText((fs::path(out_dir) / "config.json").string(), settings.dump(2) + "\n");
  }

  ModelConfig Model() const {
    ModelConfig c = ModelConfig::FromJson(settings["model"]);
    if (c.encoder == "adapter") {
      const char* cache = std::getenv(kCacheEnv);
      if (c.base_weights.empty() && cache) {
        c.base_weights = (fs::path(cache) / "encoder.ffwt").string();
      }
      if (c.vocab_path.empty() && cache) c.vocab_path = (fs::path(cache) / "vocab.txt").string();
      RequireFile(c.base_weights);
      RequireFile(c.vocab_path);
    }
    return c;
  }
  TrainConfig Train() const { return TrainConfig::FromJson(settings["train"]); }
  std::string Out(const std::string& name) const { return (fs::path(out_dir) / name).string(); }
};

void AddModelFlags(CLI::App* app, Overrides& o) {
  o.Add<std::string>(app, "--encoder", "model", "encoder", "toy | adapter")
      ->check(CLI::IsMember({"toy", "adapter"}));
  o.Add<int>(app, "--hidden", "model", "hidden", "toy encoder width");
  o.Add<int>(app, "--encoder-layers", "model", "encoder_layers", "toy encoder depth");
  o.Add<int>(app, "--encoder-heads", "model", "encoder_heads", "encoder self-attention heads");
  o.Add<int>(app, "--heads", "model", "heads", "document fact attention heads (default 16)");
  o.Add<int>(app, "--adapter-dim", "model", "adapter_dim", "adapter bottleneck width (default 32)");
  o.Add<int>(app, "--max-length", "model", "truncation_limit", "subword truncation limit");
  o.Add<std::string>(app, "--base-weights", "model", "base_weights", "adapter mode weight file");
  o.Add<std::string>(app, "--vocab", "model", "vocab_path", "adapter mode WordPiece vocabulary");
  o.Add<std::string>(app, "--activation", "model", "activation", "gelu | relu | tanh");
  o.Add<std::string>(app, "--fusion", "model", "fusion", "max | mean | last");
  o.Add<std::string>(app, "--document-context", "model", "document_context",
                     "attention | mean (ablation)");
}

void AddTrainFlags(CLI::App* app, Overrides& o) {
  o.Add<int>(app, "--epochs", "train", "epochs", "training epochs (default 40)");
  o.Add<double>(app, "--lr", "train", "learning_rate", "learning rate (default 1e-5)");
  o.Add<int>(app, "--batch-size", "train", "batch_size", "batch size (default 12)");
  o.Add<int>(app, "--grad-accum", "train", "grad_accum", "gradient accumulation steps (default 2)");
  o.Add<std::string>(app, "--weight-mode", "train", "weight_mode", "pos-over-neg | inverse")
      ->check(CLI::IsMember({"pos-over-neg", "inverse"}));
}

void AddRunFlags(CLI::App* app, Overrides& o) {
  o.Add<std::uint64_t>(app, "--seed", "train", "seed", "random seed");
  o.Add<double>(app, "--threshold", "train", "threshold", "decision threshold (default 0.5)");
}

void AddSrlFlags(CLI::App* app, Overrides& o) {
  o.Add<std::string>(app, "--backend", "srl", "backend", "fixture | subprocess")
      ->check(CLI::IsMember({"fixture", "subprocess"}));
  o.Add<std::string>(app, "--lexicon", "srl", "lexicon",
                     "fixture backend verb list (file, one verb per line)");
  o.Add<std::string>(app, "--srl-command", "srl", "command", "subprocess backend command");
  o.Add<std::string>(app, "--srl-version", "srl", "version", "subprocess backend version tag");
}

std::unique_ptr<SrlBackend> MakeBackend(const json& srl) {
  const std::string kind = srl.value("backend", "fixture");
  if (kind == "fixture") {
    const std::string path = srl.value("lexicon", "");
    RequireFile(path);
    std::ifstream in(path);
    std::set<std::string> verbs;
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream words(line);
      std::string w;
      while (words >> w) verbs.insert(w);
    }
    return std::make_unique<FixtureBackend>(std::move(verbs));
  }
  if (kind == "subprocess") {
    const std::string command = srl.value("command", "");
    if (command.empty()) throw ConfigError("--srl-command is required for the subprocess backend");
    return std::make_unique<SubprocessBackend>(command, srl.value("version", ""));
  }
  throw ConfigError("unknown SRL backend: " + kind);
}

std::vector<Sample> LoadCorpus(const std::string& path) {
  RequireFile(path);
  return ReadSamplesJsonl(path);
}

FrameStore LoadFrames(const std::string& path) {
  RequireFile(path);
  return FrameStore::Load(path);
}

std::vector<int> ParseIntList(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  return out;
}

void PrintTrainProgress(const EpochLog& e) {
  std::cerr << "epoch " << e.epoch << " loss " << e.train_loss << " val_f1 " << e.val_f1
            << " val_bacc " << e.val_bacc << "\n";
}

// ---------------------------------------------------------------- commands

struct ExtractCmd {
  Common common;
  std::string corpus;
  std::string out;
};

int RunExtract(ExtractCmd& c) {
  c.common.Resolve("extract");
  const auto samples = LoadCorpus(c.corpus);
  auto backend = MakeBackend(c.common.settings["srl"]);
  std::vector<std::string> warnings;
  const auto records = ExtractCorpusFrames(samples, *backend, &warnings);
  for (const auto& w : warnings) LogWarning(w);
  const std::string path = c.out.empty() ? c.common.Out("frames.jsonl") : c.out;
  WriteFrameSidecar(path, records);
  std::cerr << "wrote " << records.size() << " frame records for " << samples.size()
            << " samples to " << path << "\n";
  return 0;
}

struct TrainCmd {
  Common common;
  std::string train;
  std::string validation;
  std::string frames;
  std::string sweep_heads;
};

int RunTrain(TrainCmd& c) {
  c.common.Resolve("train");
  const auto train_samples = LoadCorpus(c.train);
  const auto val_samples = LoadCorpus(c.validation);
  const FrameStore store = LoadFrames(c.frames);
  const TrainConfig tc = c.common.Train();
  ModelConfig mc = c.common.Model();

  std::vector<int> head_options = {mc.heads};
  if (!c.sweep_heads.empty()) head_options = ParseIntList(c.sweep_heads);
  json sweep = json::array();
  ModelCheckpoint best;
  bool have_best = false;
  for (int heads : head_options) {
    mc.heads = heads;
    FactModel model(mc);
    const auto train = PrepareCorpus(model, train_samples, store);
    const auto val = PrepareCorpus(model, val_samples, store);
    TrainHooks hooks;
    hooks.log_path = c.common.Out(head_options.size() > 1
                                      ? "train_log_heads" + std::to_string(heads) + ".jsonl"
                                      : "train_log.jsonl");
    std::filesystem::remove(hooks.log_path);
    hooks.on_epoch = PrintTrainProgress;
    TrainResult r = Train(model, train, val, tc, hooks);
    sweep.push_back({{"heads", heads},
                     {"best_epoch", r.best.epoch},
                     {"validation_bacc", r.best.validation_bacc}});
    if (!have_best || r.best.validation_bacc > best.validation_bacc) {
      best = std::move(r.best);
      have_best = true;
    }
  }
  const std::string path = c.common.Out("model.ckpt");
  SaveCheckpoint(path, best);
  json summary = {{"checkpoint", path},
                  {"checkpoint_id", best.Id()},
                  {"heads", best.model_config.heads},
                  {"best_epoch", best.epoch},
                  {"validation_bacc", best.validation_bacc},
                  {"seed", best.seed}};
  if (head_options.size() > 1) summary["sweep"] = sweep;
  WriteText(c.common.Out("train_summary.json"), summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return 0;
}

struct PredictCmd {
  Common common;
  std::string checkpoint;
  std::string corpus;
  std::string frames;
  std::string out;
};

int RunPredict(PredictCmd& c) {
  c.common.Resolve("predict");
  RequireFile(c.checkpoint);
  const ModelCheckpoint ckpt = LoadCheckpoint(c.checkpoint);
  const auto model = RestoreModel(ckpt);
  const auto samples = LoadCorpus(c.corpus);
  const FrameStore store = LoadFrames(c.frames);
  const double threshold = c.common.settings["train"]["threshold"].get<double>();
  const std::string path = c.out.empty() ? c.common.Out("predictions.jsonl") : c.out;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  const std::string id = ckpt.Id();
  for (const auto& s : samples) {
    const Prediction p = model->Predict(model->Prepare(s, store), threshold);
    json line = {{"id", s.id},
                 {"probs", std::vector<double>(p.probabilities.begin(), p.probabilities.end())},
                 {"labels", p.labels.ToJson()},
                 {"checkpoint", id}};
    out << line.dump() << '\n';
  }
  std::cerr << "wrote " << samples.size() << " predictions to " << path << "\n";
  return 0;
}

struct HighlightCmd {
  Common common;
  std::string checkpoint;
  std::string corpus;
  std::string frames;
  std::string out;
  int top_k = 5;
};

int RunHighlight(HighlightCmd& c) {
  c.common.Resolve("highlight");
  if (c.top_k < 1) throw ConfigError("--top-k must be >= 1");
  RequireFile(c.checkpoint);
  const auto model = RestoreModel(LoadCheckpoint(c.checkpoint));
  const auto samples = LoadCorpus(c.corpus);
  const FrameStore store = LoadFrames(c.frames);
  const json& hs = c.common.settings["highlight"];
  const bool baseline = hs.value("method", "fact-attention") == "cls-baseline";
  const BaselineImportance mode = ParseBaselineImportance(hs.value("baseline_importance", "mean"));
  const std::string path = c.out.empty() ? c.common.Out("highlights.jsonl") : c.out;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& s : samples) {
    const PreparedInput in = model->Prepare(s, store);
    HighlightResult r;
    if (baseline) {
      ag::NoGradGuard no_grad;
      const EncoderOutput enc = model->encoder().Encode(in.encoder_input);
      r = BaselineClsHighlights(enc.final_attention, in.document_alignment.frames, c.top_k,
                                mode);
    } else {
      r = model->Highlights(in, c.top_k);
    }
    out << HighlightsToJson(s.id, r, in.document_frames, in.document_text).dump() << '\n';
  }
  return 0;
}

struct EvaluateCmd {
  Common common;
  std::vector<std::string> predictions;
  std::string gold;
  // Highlight evaluation
  std::string evidence;
  std::string checkpoint;
  std::string ks = "3,4,5";
};

MetricReport EvaluatePredictionFile(const std::string& path,
                                    const std::vector<Sample>& gold) {
  RequireFile(path);
  std::map<std::string, LabelVector> predicted;
  std::string checkpoint;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json j = json::parse(line);
    predicted[j.at("id").get<std::string>()] = LabelVector::FromJson(j.at("labels"));
    if (j.contains("checkpoint")) checkpoint = j["checkpoint"].get<std::string>();
  }
  std::vector<LabelVector> preds;
  std::vector<LabelVector> golds;
  std::vector<SystemCategory> cats;
  for (const auto& s : gold) {
    auto it = predicted.find(s.id);
    if (it == predicted.end()) throw std::runtime_error(path + " has no prediction for " + s.id);
    preds.push_back(it->second);
    golds.push_back(s.labels);
    cats.push_back(s.system_category);
  }
  MetricReport r = EvaluateByCategory(preds, golds, cats);
  r.metadata["predictions"] = path;
  if (!checkpoint.empty()) r.metadata["checkpoint_id"] = checkpoint;
  return r;
}

int RunEvaluate(EvaluateCmd& c) {
  c.common.Resolve("evaluate");
  if (!c.evidence.empty()) {
    RequireFile(c.evidence);
    RequireFile(c.checkpoint);
    const auto model = RestoreModel(LoadCheckpoint(c.checkpoint));
    auto backend = MakeBackend(c.common.settings["srl"]);
    const HighlightEvalSet set = BuildHighlightEvalSet(ReadEvidenceJsonl(c.evidence), *backend);
    const json& hs = c.common.settings["highlight"];
    const HighlightMethod method = hs.value("method", "fact-attention") == "cls-baseline"
                                       ? HighlightMethod::kClsBaseline
                                       : HighlightMethod::kFactAttention;
    HighlightEvalReport r = EvaluateHighlights(
        *model, set, ParseIntList(c.ks), ParseFrameMatcher(hs.value("matcher", "overlap")),
        method, ParseBaselineImportance(hs.value("baseline_importance", "mean")));
    json j = r.ToJson();
    j["dropped"] = set.dropped;
    WriteText(c.common.Out("highlight_report.json"), j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  if (c.predictions.empty()) throw ConfigError("--predictions or --evidence is required");
  const auto gold = LoadCorpus(c.gold);
  std::vector<MetricReport> reports;
  for (const auto& p : c.predictions) reports.push_back(EvaluatePredictionFile(p, gold));
  MetricReport report = AverageReports(reports);
  if (reports.size() == 1) report.metadata = reports[0].metadata;
  report.metadata["seed"] = c.common.settings["train"]["seed"];
  WriteText(c.common.Out("metrics.json"), report.ToJson().dump(2) + "\n");
  const std::string table = report.ToTable();
  WriteText(c.common.Out("metrics.txt"), table);
  std::cout << table;
  return 0;
}

struct SplitCmd {
  Common common;
  std::string corpus;
  std::string mode = "random";
  std::string sizes;
  std::string holdout_system;
  int validation_size = 0;
  bool dedup = false;
};

int RunSplit(SplitCmd& c) {
  c.common.Resolve("split");
  std::vector<Sample> samples = LoadCorpus(c.corpus);
  if (c.dedup) {
    DedupResult d = Dedup(samples);
    std::cerr << "dedup removed " << d.removed << " samples (" << d.conflicts
              << " label conflicts)\n";
    samples = std::move(d.samples);
  }
  const std::uint64_t seed = c.common.settings["train"]["seed"].get<std::uint64_t>();
  SplitManifest m;
  if (c.mode == "random") {
    const auto s = ParseIntList(c.sizes);
    if (s.size() != 3) throw ConfigError("--sizes needs train,validation,test");
    SplitSpec spec;
    spec.train = s[0];
    spec.validation = s[1];
    spec.test = s[2];
    spec.seed = seed;
    m = MakeRandomSplit(samples, spec);
  } else {
    m = MakeChallengingSplit(samples, c.holdout_system, c.validation_size, seed);
  }
  m.Write(c.common.Out("manifest.json"));
  WriteSamplesJsonl(c.common.Out("train.jsonl"), SelectSamples(samples, m.train));
  WriteSamplesJsonl(c.common.Out("validation.jsonl"), SelectSamples(samples, m.validation));
  WriteSamplesJsonl(c.common.Out("test.jsonl"), SelectSamples(samples, m.test));
  std::cout << "train " << m.train.size() << " validation " << m.validation.size() << " test "
            << m.test.size() << " removed_overlap " << m.removed_overlap.size() << "\n";
  return 0;
}

struct StatsCmd {
  Common common;
  std::string corpus;
};

int RunStats(StatsCmd& c) {
  c.common.Resolve("stats");
  const CorpusStats st = ComputeCorpusStats(LoadCorpus(c.corpus));
  WriteText(c.common.Out("stats.json"), st.ToJson().dump(2) + "\n");
  std::cout << st.ToTable();
  return 0;
}

struct IngestCmd {
  Common common;
  std::string raw;
  std::string field_map;
  std::string out;
  bool dedup = false;
};

int RunIngest(IngestCmd& c) {
  c.common.Resolve("ingest");
  RequireFile(c.raw);
  RawCorpusConfig rc;
  if (!c.field_map.empty()) rc = RawCorpusConfig::FromJson(ReadJsonFile(c.field_map));
  std::vector<Sample> samples = ReadRawCorpus(c.raw, rc);
  const std::size_t before = samples.size();
  if (c.dedup) samples = Dedup(samples).samples;
  const std::string path = c.out.empty() ? c.common.Out("corpus.jsonl") : c.out;
  WriteSamplesJsonl(path, samples);
  std::cout << "read " << before << " records, wrote " << samples.size() << " samples\n";
  return 0;
}

struct SynthCmd {
  Common common;
  SyntheticConfig config;
};

int RunSynth(SynthCmd& c) {
  c.common.Resolve("synth");
  const SyntheticCorpus corpus = GenerateSyntheticCorpus(c.config);
  WriteSamplesJsonl(c.common.Out("corpus.jsonl"), corpus.samples);
  std::string lexicon;
  for (const auto& v : corpus.verb_lexicon) lexicon += v + "\n";
  WriteText(c.common.Out("lexicon.txt"), lexicon);
  std::cout << "wrote " << corpus.samples.size() << " samples\n";
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"factframe: fine-grained factual error detection over semantic frames"};
  app.require_subcommand(1);

  ExtractCmd extract;
  auto* ex = app.add_subcommand("extract", "extract semantic frames into a sidecar file");
  extract.common.Register(ex);
  AddSrlFlags(ex, extract.common.overrides);
  ex->add_option("--corpus", extract.corpus, "sample JSONL")->required();
  ex->add_option("--out", extract.out, "sidecar path (default <out-dir>/frames.jsonl)");

  TrainCmd train;
  auto* tr = app.add_subcommand("train", "train a detector");
  train.common.Register(tr);
  AddModelFlags(tr, train.common.overrides);
  AddTrainFlags(tr, train.common.overrides);
  AddRunFlags(tr, train.common.overrides);
  tr->add_option("--train", train.train, "training JSONL")->required();
  tr->add_option("--validation", train.validation, "validation JSONL")->required();
  tr->add_option("--frames", train.frames, "frame sidecar")->required();
  tr->add_option("--sweep-heads", train.sweep_heads,
                 "comma list of head counts; keeps the best validation BACC");

  PredictCmd predict;
  auto* pr = app.add_subcommand("predict", "predict error types");
  predict.common.Register(pr);
  AddRunFlags(pr, predict.common.overrides);
  pr->add_option("--checkpoint", predict.checkpoint, "trained checkpoint")->required();
  pr->add_option("--corpus", predict.corpus, "sample JSONL")->required();
  pr->add_option("--frames", predict.frames, "frame sidecar")->required();
  pr->add_option("--out", predict.out, "default <out-dir>/predictions.jsonl");

  HighlightCmd highlight;
  auto* hl = app.add_subcommand("highlight", "rank document fact highlights");
  highlight.common.Register(hl);
  AddRunFlags(hl, highlight.common.overrides);
  hl->add_option("--checkpoint", highlight.checkpoint, "trained checkpoint")->required();
  hl->add_option("--corpus", highlight.corpus, "sample JSONL")->required();
  hl->add_option("--frames", highlight.frames, "frame sidecar")->required();
  hl->add_option("--out", highlight.out, "default <out-dir>/highlights.jsonl");
  hl->add_option("--top-k", highlight.top_k, "highlights per sample")->capture_default_str();
  highlight.common.overrides
      .Add<std::string>(hl, "--method", "highlight", "method", "fact-attention | cls-baseline")
      ->check(CLI::IsMember({"fact-attention", "cls-baseline"}));
  highlight.common.overrides
      .Add<std::string>(hl, "--baseline-importance", "highlight", "baseline_importance",
                        "mean | sum")
      ->check(CLI::IsMember({"mean", "sum"}));

  EvaluateCmd evaluate;
  auto* ev = app.add_subcommand("evaluate", "score predictions or highlights");
  evaluate.common.Register(ev);
  AddRunFlags(ev, evaluate.common.overrides);
  AddSrlFlags(ev, evaluate.common.overrides);
  ev->add_option("--predictions", evaluate.predictions,
                 "prediction JSONL; repeat once per seed to average");
  ev->add_option("--gold", evaluate.gold, "gold sample JSONL");
  ev->add_option("--evidence", evaluate.evidence, "claim/evidence JSONL for recall@k");
  ev->add_option("--checkpoint", evaluate.checkpoint, "checkpoint for highlight evaluation");
  ev->add_option("--ks", evaluate.ks, "recall cut-offs")->capture_default_str();
  evaluate.common.overrides
      .Add<std::string>(ev, "--method", "highlight", "method", "fact-attention | cls-baseline")
      ->check(CLI::IsMember({"fact-attention", "cls-baseline"}));
  evaluate.common.overrides
      .Add<std::string>(ev, "--baseline-importance", "highlight", "baseline_importance",
                        "mean | sum")
      ->check(CLI::IsMember({"mean", "sum"}));
  evaluate.common.overrides
      .Add<std::string>(ev, "--matcher", "highlight", "matcher", "overlap | exact")
      ->check(CLI::IsMember({"overlap", "exact"}));

  SplitCmd split;
  auto* sp = app.add_subcommand("split", "build train/validation/test splits");
  split.common.Register(sp);
  AddRunFlags(sp, split.common.overrides);
  sp->add_option("--corpus", split.corpus, "sample JSONL")->required();
  sp->add_option("--mode", split.mode, "random | challenging")
      ->check(CLI::IsMember({"random", "challenging"}));
  sp->add_option("--sizes", split.sizes, "train,validation,test (random mode)");
  sp->add_option("--holdout-system", split.holdout_system, "challenging mode test system");
  sp->add_option("--validation-size", split.validation_size, "challenging mode");
  sp->add_flag("--dedup", split.dedup, "deduplicate before splitting");

  StatsCmd stats;
  auto* st = app.add_subcommand("stats", "error-type and category counts");
  stats.common.Register(st);
  st->add_option("--corpus", stats.corpus, "sample JSONL")->required();

  IngestCmd ingest;
  auto* in = app.add_subcommand("ingest", "convert a raw annotated corpus to sample JSONL");
  ingest.common.Register(in);
  in->add_option("--raw", ingest.raw, "raw JSONL or CSV")->required();
  in->add_option("--field-map", ingest.field_map, "JSON field mapping");
  in->add_option("--out", ingest.out, "default <out-dir>/corpus.jsonl");
  in->add_flag("--dedup", ingest.dedup, "drop duplicate document-summary pairs");

  SynthCmd synth;
  auto* sy = app.add_subcommand("synth", "generate a synthetic corpus and verb lexicon");
  synth.common.Register(sy);
  sy->add_option("--samples", synth.config.samples, "number of samples")->capture_default_str();
  sy->add_option("--facts", synth.config.facts_per_document, "facts per document")
      ->capture_default_str();
  sy->add_option("--entities", synth.config.entities, "entity vocabulary size")
      ->capture_default_str();
  sy->add_option("--verbs", synth.config.verbs, "verb vocabulary size")->capture_default_str();
  sy->add_option("--consistent-rate", synth.config.consistent_rate,
                 "fraction of samples with no error")
      ->capture_default_str();
  sy->add_option("--seed", synth.config.seed, "random seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (ex->parsed()) return RunExtract(extract);
  if (tr->parsed()) return RunTrain(train);
  if (pr->parsed()) return RunPredict(predict);
  if (hl->parsed()) return RunHighlight(highlight);
  if (ev->parsed()) return RunEvaluate(evaluate);
  if (sp->parsed()) return RunSplit(split);
  if (st->parsed()) return RunStats(stats);
  if (in->parsed()) return RunIngest(ingest);
  if (sy->parsed()) return RunSynth(synth);
  return kExitOther;
}

}  // namespace
}  // namespace factframe

int main(int argc, char** argv) {
  try {
    return factframe::Main(argc, argv);
  } catch (const factframe::MissingInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return factframe::kExitMissingInput;
  } catch (const factframe::BackendError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return factframe::kExitBackend;
  } catch (const factframe::NonFiniteLossError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return factframe::kExitNonFinite;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return factframe::kExitOther;
  }
}
