#include "cli.h"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "inflect/errors.h"
#include "inflect/pipeline.h"
#include "inflect/synth.h"
#include "inflect/text.h"

namespace inflect {

namespace {

struct CliConfig {
  std::string train_path, dev_path, test_path, embeddings_path, model_path, out_path, predictions_path;
  TrainConfig train;
  std::string mode;
  std::string slots = "all";
  bool gold_tags = false;
  size_t k = 10;
  size_t size = 100;
  bool mark_slots = false;
  int float_bits = 64;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

void RequireFile(const std::string& path, const std::string& flag) {
  if (path.empty()) throw UsageError(flag + " is required");
  if (!std::filesystem::is_regular_file(path)) throw UsageError(flag + ": no such file " + path);
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteOutput(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

class ModelMismatch : public Error {
 public:
  using Error::Error;
};

ModelBundle LoadModelChecked(const CliConfig& cfg) {
  RequireFile(cfg.model_path, "--model");
  ModelBundle model = LoadModelFile(cfg.model_path);
  if (!cfg.mode.empty() && ParseModelMode(cfg.mode) != model.config.mode) {
    throw ModelMismatch("--mode " + cfg.mode + " but the model was trained in " +
                        ToString(model.config.mode) + " mode");
  }
  if (cfg.gold_tags && model.config.mode == ModelMode::kDirect) {
    throw ModelMismatch("--gold-tags needs a joint model; this one was trained in direct mode");
  }
  return model;
}

int CmdTrain(const CliConfig& cfg, std::ostream& out) {
  RequireFile(cfg.train_path, "--train");
  if (cfg.out_path.empty()) throw UsageError("--out is required");
  TrainConfig config = cfg.train;
  if (!cfg.mode.empty()) config.mode = ParseModelMode(cfg.mode);
  config.slot_mode = ParseSlotMode(cfg.slots);
  const Corpus corpus = ReadConlluFile(cfg.train_path);
  std::optional<EmbeddingTable> pretrained;
  if (!cfg.embeddings_path.empty()) {
    RequireFile(cfg.embeddings_path, "--embeddings");
    pretrained = LoadEmbeddingsFile(cfg.embeddings_path, config.word_dim);
  }
  out << "training on " << corpus.size() << " sentences, mode " << ToString(config.mode) << "\n";
  ModelBundle model = Train(corpus, config, pretrained ? &*pretrained : nullptr,
                            [&](size_t epoch, double loss) {
                              out << "epoch " << epoch << " loss " << std::fixed << std::setprecision(6)
                                  << loss << "\n";
                              out.flush();
                            });
  SaveModelFile(model, cfg.out_path, cfg.float_bits);
  out << "model written to " << cfg.out_path << "\n";
  if (!cfg.dev_path.empty()) {
    RequireFile(cfg.dev_path, "--dev");
    const Metrics m = Evaluate(model, ReadConlluFile(cfg.dev_path), config.slot_mode, cfg.k);
    out << "dev:\n" << m.ToTable();
  }
  return kExitOk;
}

// Rewrites token lines of the input with predictions; every other line is
// kept, so the output has exactly as many lines as the input.
int CmdPredict(const CliConfig& cfg, std::ostream& out) {
  RequireFile(cfg.test_path, "--test");
  const ModelBundle model = LoadModelChecked(cfg);
  const SlotMode slots = ParseSlotMode(cfg.slots);
  const std::string text = ReadFile(cfg.test_path);
  const Corpus corpus = ParseConlluString(text);

  std::vector<std::string> lines = SplitString(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  for (std::string& line : lines) line = std::string(StripLineEnd(line));

  for (const Sentence& sentence : corpus) {
    const TaskInstance task = MakeTaskInstance(sentence, slots);
    std::vector<MorphTag> gold;
    if (cfg.gold_tags) {
      for (const Token& t : sentence.tokens) gold.push_back(t.tag.value_or(MorphTag{}));
    }
    const SentencePrediction p = PredictSentence(model, task, cfg.gold_tags ? &gold : nullptr);
    for (size_t i = 0; i < sentence.size(); ++i) {
      const Token& t = sentence.tokens[i];
      std::vector<std::string> cols = SplitString(lines.at(t.line - 1), '\t');
      const bool slot = task.is_slot[i];
      const std::string form = p.forms[i].empty() ? "_" : p.forms[i];
      std::vector<std::string> row = {cols[0], form, cols[2], slot ? p.tags[i].UposColumn() : "_", "_",
                                      slot ? p.tags[i].FeatsColumn() : "_", "_", "_", "_", cols[9]};
      std::string joined;
      for (size_t c = 0; c < row.size(); ++c) joined += (c ? "\t" : "") + row[c];
      lines[t.line - 1] = std::move(joined);
    }
  }
  std::string result;
  for (const std::string& line : lines) result += line + "\n";
  WriteOutput(cfg.out_path, result, out);
  return kExitOk;
}

int CmdEvaluate(const CliConfig& cfg, std::ostream& out) {
  RequireFile(cfg.test_path, "--test");
  const SlotMode slots = ParseSlotMode(cfg.slots);
  const Corpus gold = ReadConlluFile(cfg.test_path);
  Metrics metrics;
  if (!cfg.predictions_path.empty()) {
    RequireFile(cfg.predictions_path, "--predictions");
    metrics = ScorePredictions(gold, ReadConlluFile(cfg.predictions_path), slots);
  } else {
    const ModelBundle model = LoadModelChecked(cfg);
    metrics = cfg.gold_tags ? EvaluateGoldTags(model, gold, slots, cfg.k) : Evaluate(model, gold, slots, cfg.k);
  }
  out << metrics.ToTable();
  const std::string record = metrics.ToJson().dump() + "\n";
  if (cfg.out_path.empty()) {
    out << record;
  } else {
    WriteOutput(cfg.out_path, record, out);
  }
  return kExitOk;
}

int CmdSynth(const CliConfig& cfg, std::ostream& out) {
  SynthOptions options;
  options.mark_slots = cfg.mark_slots;
  const Corpus corpus = GenerateSyntheticCorpus(cfg.size, cfg.train.seed, options);
  for (const Sentence& s : corpus) {
    if (auto problem = CheckSyntheticSentence(s)) throw Error("generator bug: " + *problem);
  }
  WriteOutput(cfg.out_path, FormatConllu(corpus), out);
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Contextual inflection: CRF morphological tagging plus hard-attention inflection"};
  app.require_subcommand(1);
  CliConfig cfg;

  auto add_training = [&](CLI::App* cmd) {
    cmd->add_option("--epochs", cfg.train.epochs, "training epochs")->check(CLI::PositiveNumber);
    cmd->add_option("--lr", cfg.train.learning_rate, "Adam learning rate")->check(CLI::PositiveNumber);
    cmd->add_option("--word-dim", cfg.train.word_dim, "word embedding size")->check(CLI::PositiveNumber);
    cmd->add_option("--char-dim", cfg.train.char_dim, "character embedding size")->check(CLI::PositiveNumber);
    cmd->add_option("--hidden-dim", cfg.train.hidden_dim, "sentence LSTM size per direction")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--char-hidden-dim", cfg.train.char_hidden_dim, "character LSTM size per direction")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--clip", cfg.train.clip_norm, "gradient clipping norm")->check(CLI::PositiveNumber);
    cmd->add_flag("--freeze-embeddings", cfg.train.freeze_embeddings, "keep pretrained vectors fixed");
    cmd->add_option("--embeddings", cfg.embeddings_path, "pretrained word vectors (text format)");
    cmd->add_option("--float-bits", cfg.float_bits, "model value width")->check(CLI::IsMember({32, 64}));
  };
  auto add_mode = [&](CLI::App* cmd) {
    cmd->add_option("--mode", cfg.mode, "joint or direct")->check(CLI::IsMember({"joint", "direct"}));
    cmd->add_option("--slots", cfg.slots, "all or given")->check(CLI::IsMember({"all", "given"}));
  };

  CLI::App* train = app.add_subcommand("train", "train a model");
  train->add_option("--train", cfg.train_path, "training CoNLL-U");
  train->add_option("--dev", cfg.dev_path, "development CoNLL-U, evaluated after training");
  train->add_option("--out", cfg.out_path, "model file to write");
  train->add_option("--seed", cfg.train.seed, "random seed");
  train->add_option("--k", cfg.k, "k for precision@k on --dev")->check(CLI::PositiveNumber);
  add_training(train);
  add_mode(train);

  CLI::App* predict = app.add_subcommand("predict", "inflect lemmatized CoNLL-U");
  predict->add_option("--model", cfg.model_path, "model file");
  predict->add_option("--test", cfg.test_path, "input CoNLL-U");
  predict->add_option("--out", cfg.out_path, "output CoNLL-U (default stdout)");
  predict->add_flag("--gold-tags", cfg.gold_tags, "inflect from the input's tags");
  add_mode(predict);

  CLI::App* evaluate = app.add_subcommand("evaluate", "score a model against gold CoNLL-U");
  evaluate->add_option("--model", cfg.model_path, "model file");
  evaluate->add_option("--test", cfg.test_path, "gold CoNLL-U");
  evaluate->add_option("--predictions", cfg.predictions_path, "score this predicted CoNLL-U instead");
  evaluate->add_option("--out", cfg.out_path, "write the metrics record here");
  evaluate->add_option("--k", cfg.k, "k for precision@k")->check(CLI::PositiveNumber);
  evaluate->add_flag("--gold-tags", cfg.gold_tags, "inflect from gold tags");
  add_mode(evaluate);

  CLI::App* synth = app.add_subcommand("synth", "write a synthetic agreement corpus");
  synth->add_option("--size", cfg.size, "number of sentences")->check(CLI::PositiveNumber);
  synth->add_option("--seed", cfg.train.seed, "random seed");
  synth->add_option("--out", cfg.out_path, "output CoNLL-U (default stdout)");
  synth->add_flag("--mark-slots", cfg.mark_slots, "mark a random half of tokens Slot=Yes");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (train->parsed()) return CmdTrain(cfg, out);
    if (predict->parsed()) return CmdPredict(cfg, out);
    if (evaluate->parsed()) return CmdEvaluate(cfg, out);
    if (synth->parsed()) return CmdSynth(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << "\n";
    return kExitParse;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const AlignmentError& e) {
    err << "alignment error: " << e.what() << "\n";
    return kExitAlignment;
  } catch (const VersionError& e) {
    err << "model error: " << e.what() << "\n";
    return kExitModel;
  } catch (const CorruptError& e) {
    err << "model error: " << e.what() << "\n";
    return kExitModel;
  } catch (const ModelMismatch& e) {
    err << "model error: " << e.what() << "\n";
    return kExitModel;
  } catch (const LabelError& e) {
    err << "model error: " << e.what() << "\n";
    return kExitModel;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace inflect
