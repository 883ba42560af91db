#ifndef INFLECT_PIPELINE_H_
#define INFLECT_PIPELINE_H_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "inflect/corpus.h"
#include "inflect/model.h"
#include "inflect/task.h"

namespace inflect {

// Training objective for one gold sentence: the CRF term over every position
// plus one teacher-forced inflector term per slot. In direct mode the CRF
// reads a detached copy of the encoder states, so the tag loss never reaches
// the encoder and the inflector learns without tag information.
struct SentenceLoss {
  Var total;
  Var crf;
  std::vector<Var> forms;  // one per slot, in sentence order
};
SentenceLoss BuildSentenceLoss(Graph& g, const ModelBundle& model, const Sentence& sentence,
                               SlotMode slots);

// Per-sentence Adam training with gradient clipping and seeded shuffling.
class Trainer {
 public:
  Trainer(ModelBundle& model, const Corpus& corpus);
  // One pass over the shuffled corpus; returns the summed loss.
  double RunEpoch();
  size_t epochs_done() const { return epochs_done_; }

 private:
  ModelBundle& model_;
  const Corpus& corpus_;
  Rng shuffle_rng_;
  AdamOptions adam_;
  size_t epochs_done_ = 0;
};

using EpochCallback = std::function<void(size_t epoch, double loss)>;

// Builds vocabularies from `corpus`, initializes and trains for
// config.epochs. Throws DataError on an empty corpus.
ModelBundle Train(const Corpus& corpus, const TrainConfig& config,
                  const EmbeddingTable* pretrained = nullptr, const EpochCallback& on_epoch = nullptr);

struct SentencePrediction {
  std::vector<MorphTag> tags;     // Viterbi tags, every position
  std::vector<std::string> forms; // slot forms generated, others copied
  std::vector<bool> truncated;    // greedy decoding hit its length cap
  std::vector<MorphTag> conditioning_tags;  // tags the inflector read (joint/gold)
};

// Tags the whole sentence with Viterbi, then inflects each slot greedily
// from its decoded tag (joint), the supplied gold tag, or the sentence state
// (direct). Non-slot tokens are copied through.
SentencePrediction PredictSentence(const ModelBundle& model, const TaskInstance& task,
                                   const std::vector<MorphTag>* gold_tags = nullptr);

// k-best tag sequences for the task input.
std::vector<std::vector<MorphTag>> KBestTags(const ModelBundle& model, const TaskInstance& task, size_t k);

// log p(w, m | l) for a gold sentence, computed on the training tape, and
// its two factors computed separately: the CRF log-probability of the gold
// tags from the plain lattice and the inflector's per-slot log-probabilities.
struct JointLogProbability {
  double joint = 0.0;
  double crf = 0.0;
  std::vector<double> forms;
};
JointLogProbability ScoreJointLogProbability(const ModelBundle& model, const Sentence& sentence, SlotMode slots);

struct AttributeScore {
  size_t correct = 0;
  size_t total = 0;
  double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / total; }
};

// Counts behind the reported accuracies. Merging is associative and
// order-independent.
struct Metrics {
  std::string mode = "joint";   // joint, direct or gold
  size_t k = 10;
  size_t sentences = 0;
  size_t tag_total = 0;         // slot tokens with a non-empty gold analysis
  size_t tag_correct = 0;
  size_t tag_in_kbest = 0;
  size_t form_total = 0;        // slot tokens
  size_t form_correct = 0;
  size_t copy_correct = 0;      // slot tokens whose form equals the lemma
  size_t truncated = 0;
  bool has_kbest = true;
  std::map<std::string, AttributeScore> per_attribute;

  double tag_accuracy() const;
  double form_accuracy() const;
  double tag_precision_at_k() const;
  double copy_baseline() const;

  void Merge(const Metrics& other);
  nlohmann::json ToJson() const;
  std::string ToTable() const;
};

// Predicts every sentence and scores slot tokens. Throws AlignmentError if a
// prediction does not line up with its gold sentence.
Metrics Evaluate(const ModelBundle& model, const Corpus& gold, SlotMode slots, size_t k = 10);
// As Evaluate, but the inflector reads the gold tags.
Metrics EvaluateGoldTags(const ModelBundle& model, const Corpus& gold, SlotMode slots, size_t k = 10);

// Scores one predicted sentence against its gold counterpart.
void AccumulateSentence(Metrics& metrics, const Sentence& gold, const TaskInstance& task,
                        const SentencePrediction& prediction,
                        const std::vector<std::vector<MorphTag>>* kbest);
// Scores a predicted corpus (e.g. a file written by `predict`) without
// k-best information.
Metrics ScorePredictions(const Corpus& gold, const Corpus& predicted, SlotMode slots);

}  // namespace inflect

#endif  // INFLECT_PIPELINE_H_
