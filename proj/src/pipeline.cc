#include "inflect/pipeline.h"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <thread>

#include "inflect/errors.h"

namespace inflect {

namespace {

std::vector<size_t> GoldLabels(const Vocab& vocab, const Sentence& sentence) {
  std::vector<size_t> labels;
  labels.reserve(sentence.size());
  for (const Token& t : sentence.tokens) {
    if (!t.tag) throw DataError("training token '" + t.form + "' has no tag");
    auto label = vocab.LabelOf(*t.tag);
    if (!label) throw LabelError("tag " + t.tag->ToString() + " is not in the tag set");
    labels.push_back(*label);
  }
  return labels;
}

std::vector<Var> Detach(Graph& g, const std::vector<Var>& states) {
  std::vector<Var> out;
  out.reserve(states.size());
  for (const Var& h : states) out.push_back(g.Constant(h.value()));
  return out;
}

}  // namespace

SentenceLoss BuildSentenceLoss(Graph& g, const ModelBundle& model, const Sentence& sentence,
                               SlotMode slots) {
  const TaskInstance task = MakeTaskInstance(sentence, slots);
  const std::vector<size_t> gold = GoldLabels(*model.vocab, sentence);
  const std::vector<Var> states = model.encoder.EncodeSentence(g, task.input);
  const bool direct = model.config.mode == ModelMode::kDirect;

  SentenceLoss loss;
  loss.crf = model.crf.NegLogLikelihood(g, direct ? Detach(g, states) : states, gold);
  std::vector<Var> terms{loss.crf};
  for (size_t i = 0; i < task.size(); ++i) {
    if (!task.is_slot[i]) continue;
    const Token& token = sentence.tokens[i];
    Conditioning cond;
    if (direct) {
      cond.context = states[i];
    } else {
      cond.tag = &*token.tag;
    }
    loss.forms.push_back(model.inflector.NegLogLikelihood(g, task.lemmas[i], cond, token.form));
    terms.push_back(loss.forms.back());
  }
  loss.total = Sum(Concat(terms));
  return loss;
}

Trainer::Trainer(ModelBundle& model, const Corpus& corpus)
    : model_(model), corpus_(corpus), shuffle_rng_(model.config.seed ^ 0x9E3779B97F4A7C15ULL) {
  if (corpus.empty()) throw DataError("cannot train on an empty corpus");
  adam_.learning_rate = model.config.learning_rate;
}

double Trainer::RunEpoch() {
  std::vector<size_t> order(corpus_.size());
  std::iota(order.begin(), order.end(), 0);
  shuffle_rng_.Shuffle(order);
  double total = 0.0;
  for (size_t index : order) {
    Graph g;
    SentenceLoss loss = BuildSentenceLoss(g, model_, corpus_[index], model_.config.slot_mode);
    total += loss.total.value()[0];
    g.Backward(loss.total);
    ClipGradients(*model_.store, model_.config.clip_norm);
    AdamStep(*model_.store, adam_);
  }
  ++epochs_done_;
  return total;
}

ModelBundle Train(const Corpus& corpus, const TrainConfig& config, const EmbeddingTable* pretrained,
                  const EpochCallback& on_epoch) {
  config.Validate();
  ModelBundle model = ModelBundle::Create(BuildVocab(corpus), config, pretrained);
  Trainer trainer(model, corpus);
  for (size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const double loss = trainer.RunEpoch();
    if (on_epoch) on_epoch(epoch, loss);
  }
  return model;
}

SentencePrediction PredictSentence(const ModelBundle& model, const TaskInstance& task,
                                   const std::vector<MorphTag>* gold_tags) {
  if (gold_tags != nullptr && gold_tags->size() != task.size()) {
    throw AlignmentError("gold tags differ in length from the sentence");
  }
  if (gold_tags != nullptr && model.config.mode == ModelMode::kDirect) {
    throw DomainError("a direct-mode model cannot be conditioned on gold tags");
  }
  Graph g;
  const std::vector<Var> states = model.encoder.EncodeSentence(g, task.input);
  const LabelPath best = Viterbi(model.crf.BuildLattice(states));

  SentencePrediction out;
  for (size_t label : best.labels) out.tags.push_back(model.vocab->TagOfLabel(label));
  out.forms = task.input;
  out.truncated.assign(task.size(), false);
  out.conditioning_tags.assign(task.size(), MorphTag{});
  for (size_t i = 0; i < task.size(); ++i) {
    if (!task.is_slot[i]) continue;
    Conditioning cond;
    if (model.config.mode == ModelMode::kDirect) {
      cond.context = states[i];
    } else {
      cond.tag = gold_tags != nullptr ? &(*gold_tags)[i] : &out.tags[i];
      out.conditioning_tags[i] = *cond.tag;
    }
    Inflection inflection = model.inflector.Greedy(g, task.lemmas[i], cond);
    out.forms[i] = std::move(inflection.form);
    out.truncated[i] = inflection.truncated;
  }
  return out;
}

std::vector<std::vector<MorphTag>> KBestTags(const ModelBundle& model, const TaskInstance& task, size_t k) {
  Graph g;
  const std::vector<Var> states = model.encoder.EncodeSentence(g, task.input);
  std::vector<std::vector<MorphTag>> out;
  for (const LabelPath& path : KBestViterbi(model.crf.BuildLattice(states), k)) {
    std::vector<MorphTag> tags;
    for (size_t label : path.labels) tags.push_back(model.vocab->TagOfLabel(label));
    out.push_back(std::move(tags));
  }
  return out;
}

JointLogProbability ScoreJointLogProbability(const ModelBundle& model, const Sentence& sentence,
                                             SlotMode slots) {
  JointLogProbability out;
  {
    Graph g;
    out.joint = -BuildSentenceLoss(g, model, sentence, slots).total.value()[0];
  }
  const TaskInstance task = MakeTaskInstance(sentence, slots);
  const std::vector<size_t> gold = GoldLabels(*model.vocab, sentence);
  Graph g;
  const std::vector<Var> states = model.encoder.EncodeSentence(g, task.input);
  const ScoreLattice lattice = model.crf.BuildLattice(states);
  out.crf = PathScore(lattice, gold) - LogPartition(lattice);
  for (size_t i = 0; i < task.size(); ++i) {
    if (!task.is_slot[i]) continue;
    Conditioning cond;
    if (model.config.mode == ModelMode::kDirect) {
      cond.context = states[i];
    } else {
      cond.tag = &*sentence.tokens[i].tag;
    }
    Var nll = model.inflector.NegLogLikelihood(g, task.lemmas[i], cond, sentence.tokens[i].form);
    out.forms.push_back(-nll.value()[0]);
  }
  return out;
}

double Metrics::tag_accuracy() const {
  return tag_total == 0 ? 0.0 : static_cast<double>(tag_correct) / tag_total;
}
double Metrics::form_accuracy() const {
  return form_total == 0 ? 0.0 : static_cast<double>(form_correct) / form_total;
}
double Metrics::tag_precision_at_k() const {
  return tag_total == 0 ? 0.0 : static_cast<double>(tag_in_kbest) / tag_total;
}
double Metrics::copy_baseline() const {
  return form_total == 0 ? 0.0 : static_cast<double>(copy_correct) / form_total;
}

void Metrics::Merge(const Metrics& other) {
  sentences += other.sentences;
  tag_total += other.tag_total;
  tag_correct += other.tag_correct;
  tag_in_kbest += other.tag_in_kbest;
  form_total += other.form_total;
  form_correct += other.form_correct;
  copy_correct += other.copy_correct;
  truncated += other.truncated;
  has_kbest = has_kbest && other.has_kbest;
  for (const auto& [name, score] : other.per_attribute) {
    per_attribute[name].correct += score.correct;
    per_attribute[name].total += score.total;
  }
}

nlohmann::json Metrics::ToJson() const {
  nlohmann::json attrs = nlohmann::json::object();
  for (const auto& [name, score] : per_attribute) {
    attrs[name] = {{"accuracy", score.accuracy()}, {"correct", score.correct}, {"total", score.total}};
  }
  nlohmann::json j = {{"mode", mode},
                      {"sentences", sentences},
                      {"tag_accuracy_1best", tag_accuracy()},
                      {"form_accuracy", form_accuracy()},
                      {"copy_baseline_form_accuracy", copy_baseline()},
                      {"tag_tokens", tag_total},
                      {"form_tokens", form_total},
                      {"truncated", truncated},
                      {"per_attribute", attrs}};
  if (has_kbest) {
    j["k"] = k;
    j["tag_precision_at_k"] = tag_precision_at_k();
  }
  return j;
}

std::string Metrics::ToTable() const {
  std::ostringstream out;
  char line[160];
  auto row = [&](const std::string& name, double value, size_t total) {
    std::snprintf(line, sizeof(line), "%-28s %8.2f%%  (n=%zu)\n", name.c_str(), 100.0 * value, total);
    out << line;
  };
  out << "mode: " << mode << ", sentences: " << sentences << "\n";
  row("tag accuracy (1-best)", tag_accuracy(), tag_total);
  if (has_kbest) row("tag precision@" + std::to_string(k), tag_precision_at_k(), tag_total);
  row("form accuracy", form_accuracy(), form_total);
  row("copy baseline", copy_baseline(), form_total);
  for (const auto& [name, score] : per_attribute) row("  " + name, score.accuracy(), score.total);
  if (truncated > 0) out << "truncated inflections: " << truncated << "\n";
  return out.str();
}

void AccumulateSentence(Metrics& metrics, const Sentence& gold, const TaskInstance& task,
                        const SentencePrediction& prediction,
                        const std::vector<std::vector<MorphTag>>* kbest) {
  const size_t n = gold.size();
  if (task.size() != n || prediction.forms.size() != n || prediction.tags.size() != n) {
    throw AlignmentError("prediction has " + std::to_string(prediction.forms.size()) +
                         " tokens, gold sentence has " + std::to_string(n));
  }
  if (kbest != nullptr) {
    for (const auto& seq : *kbest) {
      if (seq.size() != n) throw AlignmentError("k-best sequence length differs from gold");
    }
  }
  ++metrics.sentences;
  for (size_t i = 0; i < n; ++i) {
    if (!task.is_slot[i]) continue;
    const Token& token = gold.tokens[i];
    ++metrics.form_total;
    if (prediction.forms[i] == token.form) ++metrics.form_correct;
    if (token.form == token.lemma) ++metrics.copy_correct;
    if (i < prediction.truncated.size() && prediction.truncated[i]) ++metrics.truncated;

    if (!token.tag || token.tag->IsEmpty()) continue;
    const MorphTag& gold_tag = *token.tag;
    ++metrics.tag_total;
    if (prediction.tags[i] == gold_tag) ++metrics.tag_correct;
    if (kbest != nullptr) {
      const bool found = std::any_of(kbest->begin(), kbest->end(),
                                     [&](const std::vector<MorphTag>& seq) { return seq[i] == gold_tag; });
      if (found) ++metrics.tag_in_kbest;
    }
    AttributeScore& pos = metrics.per_attribute["POS"];
    ++pos.total;
    if (prediction.tags[i].pos() == gold_tag.pos()) ++pos.correct;
    for (const auto& [name, value] : gold_tag.features()) {
      AttributeScore& score = metrics.per_attribute[name];
      ++score.total;
      if (prediction.tags[i].Get(name) == value) ++score.correct;
    }
  }
}

namespace {

Metrics EvaluateImpl(const ModelBundle& model, const Corpus& gold, SlotMode slots, size_t k,
                     bool use_gold_tags) {
  if (k == 0) throw DomainError("precision@k needs k >= 1");
  auto score_range = [&](size_t begin, size_t end) {
    Metrics m;
    for (size_t s = begin; s < end; ++s) {
      const Sentence& sentence = gold[s];
      const TaskInstance task = MakeTaskInstance(sentence, slots);
      std::vector<MorphTag> gold_tags;
      if (use_gold_tags) {
        for (const Token& t : sentence.tokens) gold_tags.push_back(t.tag.value_or(MorphTag{}));
      }
      const SentencePrediction prediction =
          PredictSentence(model, task, use_gold_tags ? &gold_tags : nullptr);
      const auto kbest = KBestTags(model, task, k);
      AccumulateSentence(m, sentence, task, prediction, &kbest);
    }
    return m;
  };

  const size_t workers = std::clamp<size_t>(std::thread::hardware_concurrency(), 1, 16);
  const size_t chunks = std::min(workers, std::max<size_t>(1, gold.size() / 32));
  std::vector<Metrics> partial(chunks);
  if (chunks == 1) {
    partial[0] = score_range(0, gold.size());
  } else {
    std::vector<std::jthread> threads;
    std::vector<std::exception_ptr> errors(chunks);
    for (size_t c = 0; c < chunks; ++c) {
      threads.emplace_back([&, c] {
        try {
          partial[c] = score_range(gold.size() * c / chunks, gold.size() * (c + 1) / chunks);
        } catch (...) {
          errors[c] = std::current_exception();
        }
      });
    }
    threads.clear();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  Metrics total;
  total.mode = use_gold_tags ? "gold" : ToString(model.config.mode);
  total.k = k;
  for (const Metrics& m : partial) total.Merge(m);
  return total;
}

}  // namespace

Metrics Evaluate(const ModelBundle& model, const Corpus& gold, SlotMode slots, size_t k) {
  return EvaluateImpl(model, gold, slots, k, false);
}

Metrics EvaluateGoldTags(const ModelBundle& model, const Corpus& gold, SlotMode slots, size_t k) {
  return EvaluateImpl(model, gold, slots, k, true);
}

Metrics ScorePredictions(const Corpus& gold, const Corpus& predicted, SlotMode slots) {
  if (gold.size() != predicted.size()) {
    throw AlignmentError("gold has " + std::to_string(gold.size()) + " sentences, predictions " +
                         std::to_string(predicted.size()));
  }
  Metrics metrics;
  metrics.mode = "file";
  metrics.has_kbest = false;
  for (size_t s = 0; s < gold.size(); ++s) {
    const TaskInstance task = MakeTaskInstance(gold[s], slots);
    const Sentence& pred = predicted[s];
    SentencePrediction prediction;
    for (size_t i = 0; i < pred.size(); ++i) {
      const Token& t = pred.tokens[i];
      if (i < task.size() && t.lemma != task.lemmas[i]) {
        throw AlignmentError("sentence " + std::to_string(s + 1) + " token " + std::to_string(i + 1) +
                             ": lemma '" + t.lemma + "' vs gold '" + task.lemmas[i] + "'");
      }
      prediction.forms.push_back(t.form);
      prediction.tags.push_back(t.tag.value_or(MorphTag{}));
    }
    AccumulateSentence(metrics, gold[s], task, prediction, nullptr);
  }
  return metrics;
}

}  // namespace inflect
