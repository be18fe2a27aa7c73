// Copyright 2026 The artconv Authors.
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

#include "cli.h"

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "artconv/analysis.h"
#include "artconv/checkpoint.h"
#include "artconv/corpus.h"
#include "artconv/dsp.h"
#include "artconv/error.h"
#include "artconv/feature_store.h"
#include "artconv/gradcheck.h"
#include "artconv/parallel.h"
#include "artconv/synth.h"
#include "artconv/train.h"

namespace artconv::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<int> ParseIntList(const std::string& text) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, comma - start);
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DataError("not an integer list: " + text);
    }
    start = comma + 1;
  }
  return out;
}

ModelDims ParseDims(const std::string& text) {
  const std::vector<int> v = ParseIntList(text);
  if (v.size() != 3) throw DataError("--dims expects INPUT,HIDDEN,EMBEDDING");
  ModelDims d{v[0], v[1], v[2]};
  d.Check();
  return d;
}

json ReadJson(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void WriteJson(const fs::path& path, const json& doc) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

// Resolved configuration written beside a single output file.
fs::path ConfigBeside(const fs::path& file) {
  fs::path p = file;
  p.replace_extension(".config.json");
  return p;
}

struct SynthArgs {
  std::string out, config;
  std::uint64_t seed = 1;
  int speakers = 0, sentences = 0;
  double lambda = 0.0;
};

struct FeaturesArgs {
  std::string manifest, out, config;
  bool no_cmvn = false;
};

struct PairsArgs {
  std::string manifest, out, condition = "solo", range, split, sessions;
  bool same_session = false, baseline = false;
};

struct TrainArgs {
  std::string manifest, features, pairs, val_pairs, config, init, out, dims;
  int epochs = 0, batch_size = 0;
  double lr0 = 0.0;
  std::uint64_t seed = 1;
};

struct EvalArgs {
  std::string model, pairs, manifest, features, report;
  double threshold = 0.5;
};

struct AnalyzeArgs {
  std::string model, manifest, features, sessions, range, out;
  double threshold = 0.5;
};

struct GradcheckArgs {
  std::string dims = "5,4,3", out;
  std::uint64_t seed = 1;
  int length = 7;
  double tolerance = 1e-4;
};

int RunSynth(const SynthArgs& a, const CLI::App& cmd) {
  SynthConfig cfg;
  if (!a.config.empty()) cfg = ReadJson(a.config).get<SynthConfig>();
  if (cmd.count("--speakers")) cfg.speakers = a.speakers;
  if (cmd.count("--sentences")) cfg.sentences = a.sentences;
  if (cmd.count("--lambda")) cfg.lambda = a.lambda;
  cfg.Check();
  const CorpusManifest manifest = GenerateSyntheticCorpus(cfg, a.seed, a.out);
  WriteJson(fs::path(a.out) / "config.json",
            {{"command", "synth"}, {"seed", a.seed}, {"synth", cfg}});
  spdlog::info("synth: {} speakers, {} utterances -> {}", manifest.speakers.size(),
               manifest.utterances.size(), a.out);
  return kExitOk;
}

int RunFeatures(const FeaturesArgs& a) {
  MfccConfig cfg;
  if (!a.config.empty()) cfg = ReadJson(a.config).get<MfccConfig>();
  if (a.no_cmvn) cfg.apply_cmvn = false;
  cfg.Check();
  const CorpusManifest manifest = LoadManifest(a.manifest);
  const std::size_t n = ExtractCorpusFeatures(manifest, a.out, cfg);
  WriteJson(fs::path(a.out) / "config.json",
            {{"command", "features"}, {"manifest", a.manifest}, {"mfcc", cfg}});
  spdlog::info("features: {} files -> {}", n, a.out);
  return kExitOk;
}

SentenceRange RangeFor(const CorpusManifest& manifest, const PairsArgs& a) {
  if (!a.range.empty() && !a.split.empty()) {
    throw DataError("--range and --split are mutually exclusive");
  }
  if (!a.range.empty()) return ParseRange(a.range);
  if (a.split.empty()) return {1, manifest.script_length};
  const SentenceSplit split = SplitBySentence(manifest);
  for (const std::string& w : split.warnings) spdlog::warn("{}", w);
  if (a.split == "train") return split.train;
  if (a.split == "validation") return split.validation;
  if (a.split == "test") return split.test;
  throw DataError("unknown split: " + a.split);
}

int RunPairs(const PairsArgs& a) {
  const CorpusManifest manifest = LoadManifest(a.manifest);
  const Condition condition = ParseCondition(a.condition);
  const SentenceRange range = RangeFor(manifest, a);
  std::vector<PairExample> pairs;
  std::vector<int> sessions;
  if (condition == Condition::kSolo) {
    pairs = BuildSoloPairs(manifest, range);
  } else {
    sessions = a.sessions.empty() ? SessionsOf(manifest, condition) : ParseIntList(a.sessions);
    const NegativeScope scope =
        a.same_session ? NegativeScope::kSameSession : NegativeScope::kAnySession;
    const bool restricted = !a.range.empty() || !a.split.empty();
    pairs = BuildConditionPairs(manifest, condition, sessions, scope,
                                restricted ? std::optional(range) : std::nullopt);
    if (a.baseline) {
      for (PairExample& p : BuildBaselinePairs(manifest, condition, sessions)) {
        if (!restricted || range.contains(p.left.sentence_index)) pairs.push_back(p);
      }
    }
  }
  std::size_t positives = 0;
  for (const PairExample& p : pairs) positives += p.label == 1;
  SavePairs(pairs, a.out);
  WriteJson(ConfigBeside(a.out),
            {{"command", "pairs"},
             {"manifest", a.manifest},
             {"condition", ToString(condition)},
             {"range", {range.lo, range.hi}},
             {"sessions", sessions},
             {"same_session", a.same_session},
             {"baseline", a.baseline}});
  spdlog::info("pairs: {} positive, {} negative -> {}", positives, pairs.size() - positives,
               a.out);
  return kExitOk;
}

int RunTrain(const TrainArgs& a, const CLI::App& cmd) {
  TrainConfig cfg;
  if (!a.config.empty()) cfg = ReadJson(a.config).get<TrainConfig>();
  if (cmd.count("--epochs")) cfg.epochs = a.epochs;
  if (cmd.count("--batch-size")) cfg.batch_size = a.batch_size;
  if (cmd.count("--lr0")) cfg.lr0 = a.lr0;
  if (cmd.count("--seed")) cfg.seed = a.seed;
  if (cmd.count("--dims")) cfg.dims = ParseDims(a.dims);

  ModelParams init;
  if (!a.init.empty()) {
    init = LoadCheckpoint(a.init);
    cfg.dims = init.dims();
  } else {
    cfg.dims.Check();
    init = InitParams(cfg.dims, cfg.seed);
  }
  cfg.Check();

  const CorpusManifest manifest = LoadManifest(a.manifest);
  const std::vector<PairExample> train_pairs = LoadPairs(a.pairs);
  const std::vector<PairExample> val_pairs =
      a.val_pairs.empty() ? std::vector<PairExample>{} : LoadPairs(a.val_pairs);
  std::vector<PairExample> all = train_pairs;
  all.insert(all.end(), val_pairs.begin(), val_pairs.end());
  const FeatureStore features = FeatureStore::Load(manifest, a.features, all);

  const TrainResult result = Train(cfg, train_pairs, val_pairs, features, std::move(init),
                                   [](const EpochRecord& r) {
                                     if (r.validation) {
                                       spdlog::info("epoch {:3d} lr {:.3g} loss {:.5f} "
                                                    "val acc {:.4f}",
                                                    r.epoch, r.learning_rate, r.train_loss,
                                                    r.validation->accuracy);
                                     } else {
                                       spdlog::info("epoch {:3d} lr {:.3g} loss {:.5f}",
                                                    r.epoch, r.learning_rate, r.train_loss);
                                     }
                                   });
  const fs::path out(a.out);
  fs::create_directories(out);
  SaveCheckpoint(result.model, out / "model.artm");
  SaveCheckpoint(result.final_model, out / "final.artm");
  WriteJson(out / "history.json", {{"best_epoch", result.best_epoch},
                                   {"epochs", result.history}});
  WriteJson(out / "config.json", {{"command", "train"},
                                  {"manifest", a.manifest},
                                  {"features", a.features},
                                  {"pairs", a.pairs},
                                  {"val_pairs", a.val_pairs},
                                  {"init", a.init},
                                  {"train", cfg}});
  spdlog::info("train: best epoch {} -> {}", result.best_epoch, (out / "model.artm").string());
  return kExitOk;
}

int RunEval(const EvalArgs& a) {
  const ModelParams model = LoadCheckpoint(a.model);
  const CorpusManifest manifest = LoadManifest(a.manifest);
  const std::vector<PairExample> pairs = LoadPairs(a.pairs);
  const FeatureStore features = FeatureStore::Load(manifest, a.features, pairs);
  const MetricsReport report = Evaluate(model, pairs, features, a.threshold);
  WriteJson(a.report, report);
  WriteJson(ConfigBeside(a.report), {{"command", "eval"},
                                     {"model", a.model},
                                     {"pairs", a.pairs},
                                     {"manifest", a.manifest},
                                     {"features", a.features},
                                     {"threshold", a.threshold}});
  spdlog::info("eval: accuracy {:.4f} over {} pairs", report.accuracy, pairs.size());
  return kExitOk;
}

int RunAnalyze(const AnalyzeArgs& a) {
  const ModelParams model = LoadCheckpoint(a.model);
  const CorpusManifest manifest = LoadManifest(a.manifest);
  const SentenceRange range =
      a.range.empty() ? SentenceRange{1, manifest.script_length} : ParseRange(a.range);
  const std::vector<int> sessions = a.sessions.empty()
                                        ? SessionsOf(manifest, Condition::kInteractive)
                                        : ParseIntList(a.sessions);
  const std::vector<int> imitation = SessionsOf(manifest, Condition::kImitation);

  std::vector<PairExample> pairs = BuildSoloPairs(manifest, range);
  auto append = [&](std::vector<PairExample> more) {
    for (PairExample& p : more) {
      if (range.contains(p.left.sentence_index)) pairs.push_back(std::move(p));
    }
  };
  append(BuildConditionPairs(manifest, Condition::kInteractive, sessions));
  append(BuildBaselinePairs(manifest, Condition::kInteractive, sessions));
  if (!imitation.empty()) {
    append(BuildConditionPairs(manifest, Condition::kImitation, imitation));
    append(BuildBaselinePairs(manifest, Condition::kImitation, imitation));
  }
  const FeatureStore features = FeatureStore::Load(manifest, a.features, pairs);
  const std::vector<ScoredPair> scored = ScoreExamples(model, pairs, features, a.threshold);
  std::vector<std::string> speakers;
  for (const SpeakerRecord& s : manifest.speakers) speakers.push_back(s.id);
  const ConvergenceReport report = BuildReport(scored, speakers);
  EmitReport(report, a.out);
  WriteJson(fs::path(a.out) / "config.json", {{"command", "analyze"},
                                              {"model", a.model},
                                              {"manifest", a.manifest},
                                              {"features", a.features},
                                              {"sessions", sessions},
                                              {"range", {range.lo, range.hi}},
                                              {"threshold", a.threshold}});
  spdlog::info("analyze: {} pairs scored, {} kept, {} speakers -> {}", report.pairs_scored,
               report.kept.size(), report.speakers.size(), a.out);
  return kExitOk;
}

int RunGradcheck(const GradcheckArgs& a) {
  GradCheckOptions options;
  options.sequence_length = a.length;
  const GradCheckReport report = GradientCheck(ParseDims(a.dims), a.seed, options);
  for (const TensorCheck& t : report.tensors) {
    spdlog::info("{:10s} {:4d} entries  max rel err {:.3e}", t.name, t.entries,
                 t.max_relative_error);
  }
  if (!a.out.empty()) {
    json doc = report;
    doc["tolerance"] = a.tolerance;
    doc["passed"] = report.passed(a.tolerance);
    WriteJson(a.out, doc);
    WriteJson(ConfigBeside(a.out), {{"command", "gradcheck"},
                                    {"dims", a.dims},
                                    {"seed", a.seed},
                                    {"length", a.length},
                                    {"tolerance", a.tolerance}});
  }
  const bool ok = report.passed(a.tolerance);
  if (ok) {
    spdlog::info("gradcheck passed: max relative error {:.3e}", report.max_relative_error);
  } else {
    spdlog::error("gradcheck failed: max relative error {:.3e} >= {:.1e}",
                  report.max_relative_error, a.tolerance);
  }
  return ok ? kExitOk : kExitData;
}

}  // namespace

int Dispatch(int argc, const char* const* argv) {
  spdlog::set_default_logger(std::make_shared<spdlog::logger>(
      "artconv", std::make_shared<spdlog::sinks::stderr_color_sink_mt>()));
  spdlog::set_pattern("[%l] %v");

  CLI::App app{"Siamese speaker verification and convergence analysis"};
  app.name("artconv");
  app.require_subcommand(1);
  int threads = 0;
  std::string log_level = "info";
  app.add_option("--threads", threads, "Maximum worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off");

  SynthArgs sa;
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic dyadic corpus");
  synth->add_option("--out", sa.out, "Output directory")->required();
  synth->add_option("--seed", sa.seed, "Random seed");
  synth->add_option("--speakers", sa.speakers, "Number of speakers (even)");
  synth->add_option("--sentences", sa.sentences, "Script length");
  synth->add_option("--lambda", sa.lambda, "Convergence of the second dyad member");
  synth->add_option("--config", sa.config, "JSON synthesis config");

  FeaturesArgs fa;
  CLI::App* features = app.add_subcommand("features", "Extract MFCC features");
  features->add_option("--manifest", fa.manifest, "Corpus manifest")->required();
  features->add_option("--out", fa.out, "Output directory")->required();
  features->add_flag("--no-cmvn", fa.no_cmvn, "Skip per-utterance normalization");
  features->add_option("--config", fa.config, "JSON feature config");

  PairsArgs pa;
  CLI::App* pairs = app.add_subcommand("pairs", "Build labelled utterance pairs");
  pairs->add_option("--manifest", pa.manifest, "Corpus manifest")->required();
  pairs->add_option("--out", pa.out, "Output pairs JSON")->required();
  pairs->add_option("--condition", pa.condition, "solo, interactive or imitation");
  pairs->add_option("--range", pa.range, "Sentence range LO:HI");
  pairs->add_option("--split", pa.split, "train, validation or test");
  pairs->add_option("--sessions", pa.sessions, "Comma-separated session numbers");
  pairs->add_flag("--same-session", pa.same_session, "Negatives only within one session");
  pairs->add_flag("--baseline", pa.baseline, "Add pairs against the solo reading");

  TrainArgs ta;
  CLI::App* train = app.add_subcommand("train", "Train the Siamese network");
  train->add_option("--manifest", ta.manifest, "Corpus manifest")->required();
  train->add_option("--features", ta.features, "Feature directory")->required();
  train->add_option("--pairs", ta.pairs, "Training pairs JSON")->required();
  train->add_option("--val-pairs", ta.val_pairs, "Validation pairs JSON");
  train->add_option("--config", ta.config, "JSON training config");
  train->add_option("--init", ta.init, "Initial checkpoint");
  train->add_option("--out", ta.out, "Output directory")->required();
  train->add_option("--epochs", ta.epochs, "Epoch count");
  train->add_option("--batch-size", ta.batch_size, "Pairs per mini-batch");
  train->add_option("--lr0", ta.lr0, "Initial learning rate");
  train->add_option("--seed", ta.seed, "Random seed");
  train->add_option("--dims", ta.dims, "INPUT,HIDDEN,EMBEDDING");

  EvalArgs ea;
  CLI::App* eval = app.add_subcommand("eval", "Score pairs and report metrics");
  eval->add_option("--model", ea.model, "Checkpoint")->required();
  eval->add_option("--pairs", ea.pairs, "Pairs JSON")->required();
  eval->add_option("--manifest", ea.manifest, "Corpus manifest")->required();
  eval->add_option("--features", ea.features, "Feature directory")->required();
  eval->add_option("--report", ea.report, "Output report JSON")->required();
  eval->add_option("--threshold", ea.threshold, "Decision threshold");

  AnalyzeArgs aa;
  CLI::App* analyze = app.add_subcommand("analyze", "Convergence analysis");
  analyze->add_option("--model", aa.model, "Checkpoint")->required();
  analyze->add_option("--manifest", aa.manifest, "Corpus manifest")->required();
  analyze->add_option("--features", aa.features, "Feature directory")->required();
  analyze->add_option("--sessions", aa.sessions, "Interactive sessions, e.g. 2,4");
  analyze->add_option("--range", aa.range, "Sentence range LO:HI");
  analyze->add_option("--threshold", aa.threshold, "Decision threshold");
  analyze->add_option("--out", aa.out, "Output directory")->required();

  GradcheckArgs ga;
  CLI::App* gradcheck = app.add_subcommand("gradcheck", "Finite-difference gradient check");
  gradcheck->add_option("--dims", ga.dims, "INPUT,HIDDEN,EMBEDDING");
  gradcheck->add_option("--seed", ga.seed, "Random seed");
  gradcheck->add_option("--length", ga.length, "Sequence length");
  gradcheck->add_option("--tolerance", ga.tolerance, "Maximum relative error");
  gradcheck->add_option("--out", ga.out, "Output report JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  spdlog::set_level(spdlog::level::from_str(log_level));
  SetThreadLimit(threads);
  try {
    if (*synth) return RunSynth(sa, *synth);
    if (*features) return RunFeatures(fa);
    if (*pairs) return RunPairs(pa);
    if (*train) return RunTrain(ta, *train);
    if (*eval) return RunEval(ea);
    if (*analyze) return RunAnalyze(aa);
    if (*gradcheck) return RunGradcheck(ga);
  } catch (const DataError& e) {
    spdlog::error("{}", e.what());
    return kExitData;
  } catch (const NumericError& e) {
    spdlog::error("{}", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace artconv::cli
