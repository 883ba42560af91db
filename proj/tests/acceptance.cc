// Acceptance checks: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "inflect/alignment.h"
#include "inflect/model.h"
#include "inflect/pipeline.h"
#include "inflect/synth.h"
#include "inflect/text.h"
#include "test_util.h"

namespace inflect {
namespace {

using testing::CheckGradients;
using testing::EnumeratedLogPartition;
using testing::EnumeratePaths;
using testing::RandomLattice;
using testing::SortPaths;
using testing::TieLattice;

constexpr double kLogZTolerance = 1e-6;
constexpr double kPathScoreTolerance = 1e-9;
constexpr double kGradientTolerance = 1e-4;
constexpr double kSentenceEpsilon = 1e-4;  // step for end-to-end sentence losses
constexpr double kDecompositionTolerance = 1e-9;
constexpr double kJointTagAccuracy = 0.95;
constexpr double kGoldSlack = 0.01;
constexpr size_t kOverfitMaxEpochs = 200;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

TrainConfig DeskConfig(ModelMode mode, uint64_t seed, size_t epochs) {
  TrainConfig config;
  config.epochs = epochs;
  config.learning_rate = 0.005;
  config.seed = seed;
  config.word_dim = 16;
  config.char_dim = 16;
  config.hidden_dim = 32;
  config.char_hidden_dim = 16;
  config.mode = mode;
  return config;
}

std::string ModelBytes(const ModelBundle& model) {
  std::ostringstream out;
  SaveModel(model, out);
  return out.str();
}

// 1. Forward algorithm against enumeration.
Outcome ForwardAlgorithm() {
  Rng rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const ScoreLattice lattice = RandomLattice(1 + rng.UniformInt(5), 1 + rng.UniformInt(6), rng, 4.0);
    worst = std::max(worst, std::abs(LogPartition(lattice) - EnumeratedLogPartition(lattice)));
  }
  return {worst < kLogZTolerance, Fmt("200 lattices, max |dlogZ| = %.3g", worst)};
}

// 2. Viterbi and k-best against sorted enumeration.
Outcome ViterbiAndKBest() {
  Rng rng(202);
  size_t lattices = 0, mismatches = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const size_t n = 1 + rng.UniformInt(5);
    const size_t labels = 1 + rng.UniformInt(6);
    const ScoreLattice lattice = trial % 2 ? TieLattice(n, labels, rng) : RandomLattice(n, labels, rng);
    auto paths = EnumeratePaths(lattice);
    SortPaths(paths);
    ++lattices;
    const LabelPath best = Viterbi(lattice);
    bool ok = best.labels == paths[0].labels && std::abs(best.score - paths[0].score) < kPathScoreTolerance;
    const size_t k = 1 + rng.UniformInt(std::min<size_t>(paths.size() + 5, 60));
    const auto kbest = KBestViterbi(lattice, k);
    ok = ok && kbest.size() == std::min(k, paths.size());
    for (size_t r = 0; ok && r < kbest.size(); ++r) {
      ok = kbest[r].labels == paths[r].labels && std::abs(kbest[r].score - paths[r].score) < kPathScoreTolerance;
    }
    mismatches += !ok;
  }
  return {mismatches == 0, Fmt("%zu lattices (half with ties), %zu mismatches", lattices, mismatches)};
}

// 3. Analytic gradients against central differences.
Outcome Gradients() {
  double worst = 0.0;
  size_t checked = 0;
  std::string worst_name;
  auto record = [&](const std::string& name, const testing::GradCheck& c) {
    checked += c.checked;
    if (c.max_relative_error >= worst) {
      worst = c.max_relative_error;
      worst_name = name;
    }
  };
  {
    ParameterStore store;
    for (const auto& [name, fn] : testing::OpGradientCases(store, 303)) record(name, CheckGradients(store, fn));
  }
  {
    ParameterStore store;
    Rng rng(304);
    LstmLayer layer = LstmLayer::Create(store, "lstm", 3, 4, rng);
    Parameter& x = testing::RandomParam(store, "x", {3}, rng);
    auto loss = [&](Graph& g) {
      LstmState s = LstmStep(layer, g.Param(x), ZeroState(g, 4));
      s = LstmStep(layer, Tanh(g.Param(x)), s);
      return testing::Project(g, Concat(std::vector<Var>{s.h, s.c}), 5);
    };
    record("lstm_step", CheckGradients(store, loss));
  }
  const char* sentence =
      "1\tdos\tdos\tNUM\t_\tNumType=Card\t_\t_\t_\tSlot=Yes\n"
      "2\tgatos\tgato\tNOUN\t_\tGender=Masc|Number=Plur\t_\t_\t_\tSlot=Yes\n"
      "3\tcomen\tcomer\tVERB\t_\tNumber=Plur|Tense=Pres\t_\t_\t_\tSlot=Yes\n\n";
  const Corpus corpus = ParseConlluString(sentence);
  for (ModelMode mode : {ModelMode::kJoint, ModelMode::kDirect}) {
    TrainConfig config = DeskConfig(mode, 7, 1);
    config.word_dim = 4;
    config.char_dim = 4;
    config.hidden_dim = 3;
    config.char_hidden_dim = 3;
    ModelBundle model = ModelBundle::Create(BuildVocab(corpus), config);
    const std::string tag = ToString(mode);
    // The direct-mode CRF reads detached states.
    if (mode == ModelMode::kJoint) {
      record("crf_nll/" + tag, CheckGradients(*model.store, [&](Graph& g) {
               return BuildSentenceLoss(g, model, corpus[0], SlotMode::kAllSlots).crf;
             }, kSentenceEpsilon));
    }
    record("form_nll/" + tag, CheckGradients(*model.store, [&](Graph& g) {
             const auto forms = BuildSentenceLoss(g, model, corpus[0], SlotMode::kAllSlots).forms;
             return Sum(Concat(forms));
           }, kSentenceEpsilon));
  }
  return {worst < kGradientTolerance,
          Fmt("%zu entries, max relative error %.3g (%s)", checked, worst, worst_name.c_str())};
}

// 4. Oracle replay on random and natural pairs.
Outcome AlignmentReplay() {
  Rng rng(404);
  const std::vector<std::string> alphabet{"a", "e", "o", "s", "n", "r", "\xC3\xB1", "\xC3\xA9"};
  size_t failures = 0;
  auto random_string = [&] {
    std::string s;
    const size_t len = rng.UniformInt(12);
    for (size_t i = 0; i < len; ++i) s += alphabet[rng.UniformInt(alphabet.size())];
    return s;
  };
  for (int i = 0; i < 1000; ++i) {
    const std::string lemma = random_string();
    const std::string form = random_string();
    failures += ReplayActions(AlignOracle(lemma, form)) != form;
  }
  const auto path = std::filesystem::temp_directory_path() / "inflect_acceptance_natural.conllu";
  {
    std::ofstream out(path);
    out << FormatConllu(GenerateSyntheticCorpus(200, 405, {}));
  }
  const Corpus natural = ReadConlluFile(path.string());
  std::filesystem::remove(path);
  size_t natural_pairs = 0;
  for (const Sentence& s : natural) {
    for (const Token& t : s.tokens) {
      if (natural_pairs == 500) break;
      failures += ReplayActions(AlignOracle(t.lemma, t.form)) != t.form;
      ++natural_pairs;
    }
  }
  return {failures == 0 && natural_pairs == 500,
          Fmt("1000 random + %zu CoNLL-U pairs, %zu failures", natural_pairs, failures)};
}

// 5. Memorize a 50-sentence corpus.
Outcome Overfit() {
  const Corpus corpus = GenerateSyntheticCorpus(50, 505, {});
  ModelBundle model =
      ModelBundle::Create(BuildVocab(corpus), DeskConfig(ModelMode::kJoint, 5, kOverfitMaxEpochs));
  Trainer trainer(model, corpus);
  Metrics m;
  while (trainer.epochs_done() < kOverfitMaxEpochs) {
    trainer.RunEpoch();
    if (trainer.epochs_done() % 5 != 0) continue;
    m = Evaluate(model, corpus, SlotMode::kAllSlots, 1);
    if (m.tag_correct == m.tag_total && m.form_correct == m.form_total) break;
  }
  const bool pass = m.tag_correct == m.tag_total && m.form_correct == m.form_total;
  return {pass, Fmt("after %zu epochs: train tag %.4f, form %.4f", trainer.epochs_done(), m.tag_accuracy(),
                    m.form_accuracy())};
}

struct SeedRun {
  uint64_t seed = 0;
  Metrics joint, direct, gold;
};

// Shared by criteria 6 to 8.
std::vector<SeedRun> GeneralizationRuns(size_t epochs) {
  std::vector<SeedRun> runs;
  for (uint64_t seed : {1, 2, 3}) {
    const Corpus corpus = GenerateSyntheticCorpus(2000, seed, {});
    const Corpus train(corpus.begin(), corpus.begin() + 1600);
    const Corpus test(corpus.begin() + 1600, corpus.end());
    SeedRun run;
    run.seed = seed;
    const ModelBundle joint = Train(train, DeskConfig(ModelMode::kJoint, seed, epochs));
    run.joint = Evaluate(joint, test, SlotMode::kAllSlots, 10);
    run.gold = EvaluateGoldTags(joint, test, SlotMode::kAllSlots, 10);
    const ModelBundle direct = Train(train, DeskConfig(ModelMode::kDirect, seed, epochs));
    run.direct = Evaluate(direct, test, SlotMode::kAllSlots, 10);
    std::printf("  seed %llu: joint form %.4f tag %.4f p@10 %.4f | direct form %.4f | gold form %.4f\n",
                static_cast<unsigned long long>(seed), run.joint.form_accuracy(), run.joint.tag_accuracy(),
                run.joint.tag_precision_at_k(), run.direct.form_accuracy(), run.gold.form_accuracy());
    std::fflush(stdout);
    runs.push_back(std::move(run));
  }
  return runs;
}

Outcome JointBeatsDirect(const std::vector<SeedRun>& runs) {
  size_t wins = 0;
  bool tags_ok = true;
  std::string detail;
  for (const SeedRun& r : runs) {
    wins += r.joint.form_accuracy() >= r.direct.form_accuracy();
    tags_ok = tags_ok && r.joint.tag_accuracy() >= kJointTagAccuracy;
    detail += Fmt(" [%llu] %.4f/%.4f tag %.4f", static_cast<unsigned long long>(r.seed),
                  r.joint.form_accuracy(), r.direct.form_accuracy(), r.joint.tag_accuracy());
  }
  return {wins >= 2 && tags_ok, Fmt("joint >= direct on %zu/3 seeds; joint/direct form, joint tag:", wins) + detail};
}

Outcome GoldVsJoint(const std::vector<SeedRun>& runs) {
  bool ok = true;
  std::string detail;
  for (const SeedRun& r : runs) {
    ok = ok && r.gold.form_accuracy() >= r.joint.form_accuracy() - kGoldSlack;
    detail += Fmt(" [%llu] gold %.4f joint %.4f", static_cast<unsigned long long>(r.seed), r.gold.form_accuracy(),
                  r.joint.form_accuracy());
  }
  return {ok, "gold >= joint - 1pp on every seed:" + detail};
}

Outcome PrecisionAtK(const std::vector<SeedRun>& runs) {
  bool ordered = true, gap = true;
  std::string detail;
  for (const SeedRun& r : runs) {
    for (const Metrics* m : {&r.joint, &r.direct, &r.gold}) {
      ordered = ordered && m->tag_precision_at_k() >= m->tag_accuracy();
    }
    gap = gap && r.joint.tag_precision_at_k() > r.joint.tag_accuracy();
    detail += Fmt(" [%llu] p@1 %.4f p@10 %.4f", static_cast<unsigned long long>(r.seed), r.joint.tag_accuracy(),
                  r.joint.tag_precision_at_k());
  }
  return {ordered && gap, "p@10 >= p@1 on all 9 runs, joint gap > 0:" + detail};
}

// 9. Byte-identical retraining and bit-identical reloads.
Outcome Determinism() {
  const Corpus corpus = GenerateSyntheticCorpus(100, 909, {.mark_slots = true});
  const TrainConfig config = DeskConfig(ModelMode::kJoint, 9, 2);
  const ModelBundle a = Train(corpus, config);
  const std::string bytes = ModelBytes(a);
  const bool same_bytes = ModelBytes(Train(corpus, config)) == bytes;

  const auto path = std::filesystem::temp_directory_path() / "inflect_acceptance_model.bin";
  SaveModelFile(a, path.string());
  const ModelBundle loaded = LoadModelFile(path.string());
  std::filesystem::remove(path);
  size_t differing = 0;
  for (const Sentence& s : corpus) {
    for (SlotMode slots : {SlotMode::kAllSlots, SlotMode::kGivenSlots}) {
      const TaskInstance task = MakeTaskInstance(s, slots);
      const auto p = PredictSentence(a, task);
      const auto q = PredictSentence(loaded, task);
      differing += p.forms != q.forms || p.tags != q.tags;
    }
    differing += ScoreJointLogProbability(a, s, SlotMode::kAllSlots).joint !=
                 ScoreJointLogProbability(loaded, s, SlotMode::kAllSlots).joint;
  }
  return {same_bytes && differing == 0,
          Fmt("retrain bytes %s, %zu differing predictions on 100 sentences after reload",
              same_bytes ? "identical" : "DIFFER", differing)};
}

// 10. log p(w, m | l) = CRF term + form terms.
Outcome Decomposition() {
  const Corpus train = GenerateSyntheticCorpus(100, 1010, {});
  const Corpus sentences = GenerateSyntheticCorpus(100, 1011, {.mark_slots = true});
  double worst = 0.0;
  for (ModelMode mode : {ModelMode::kJoint, ModelMode::kDirect}) {
    const ModelBundle model = Train(train, DeskConfig(mode, 10, 1));
    for (const Sentence& s : sentences) {
      for (SlotMode slots : {SlotMode::kAllSlots, SlotMode::kGivenSlots}) {
        const JointLogProbability lp = ScoreJointLogProbability(model, s, slots);
        double sum = lp.crf;
        for (double f : lp.forms) sum += f;
        worst = std::max(worst, std::abs(lp.joint - sum));
      }
    }
  }
  return {worst < kDecompositionTolerance, Fmt("100 sentences x 2 modes x 2 slot modes, max |diff| %.3g", worst)};
}

}  // namespace
}  // namespace inflect

int main(int argc, char** argv) {
  using namespace inflect;
  size_t epochs = 8;
  if (argc > 1) epochs = std::stoul(argv[1]);

  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  };

  report(1, "forward algorithm vs enumeration", ForwardAlgorithm);
  report(2, "viterbi and k-best vs enumeration", ViterbiAndKBest);
  report(3, "gradients vs finite differences", Gradients);
  report(4, "alignment replay", AlignmentReplay);
  report(5, "overfit 50 sentences", Overfit);

  std::vector<SeedRun> runs;
  report(6, "joint vs direct generalization", [&] {
    runs = GeneralizationRuns(epochs);
    return JointBeatsDirect(runs);
  });
  auto needs_runs = [&](auto fn) {
    return [&, fn]() -> Outcome {
      if (runs.size() != 3) return {false, "generalization runs did not complete"};
      return fn(runs);
    };
  };
  report(7, "gold tags vs joint", needs_runs(GoldVsJoint));
  report(8, "precision at 10 vs 1", needs_runs(PrecisionAtK));
  report(9, "determinism and persistence", Determinism);
  report(10, "joint probability decomposition", Decomposition);

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
