#ifndef INFLECT_INFLECTOR_H_
#define INFLECT_INFLECTOR_H_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "inflect/alignment.h"
#include "inflect/config.h"
#include "inflect/corpus.h"
#include "inflect/graph.h"
#include "inflect/lstm.h"
#include "inflect/vocab.h"

namespace inflect {

// Transducer input: tag feature symbols (joint mode only), then <w>, the
// lemma's characters and </w>.
struct AugmentedInput {
  std::vector<std::string> symbols;
  size_t lemma_begin = 0;  // index of the first lemma character

  size_t size() const { return symbols.size(); }
  size_t last() const { return symbols.size() - 1; }  // the </w> position
};

AugmentedInput BuildInput(const std::string& lemma, const MorphTag* tag);

// What the decoder reads besides the attended input: a tag (joint and gold
// modes) or the sentence encoder's state for the word (direct mode).
struct Conditioning {
  const MorphTag* tag = nullptr;
  std::optional<Var> context;
};

struct Inflection {
  std::string form;
  ActionSequence actions;
  bool truncated = false;
};

// Hard-attention character transducer. Output actions are WRITE(c) for each
// character-table entry, then STEP, then END.
class Inflector {
 public:
  // context_dim is the sentence state size in direct mode; joint mode
  // conditions on the mean of the tag's feature embeddings instead.
  static Inflector Create(ParameterStore& store, std::shared_ptr<const Vocab> vocab,
                          const TrainConfig& config, Rng& rng);

  ModelMode mode() const { return mode_; }
  size_t num_actions() const { return vocab_->chars.size() + 2; }
  size_t step_action() const { return vocab_->chars.size(); }
  size_t end_action() const { return vocab_->chars.size() + 1; }

  AugmentedInput InputFor(const std::string& lemma, const Conditioning& cond) const;
  // One x_j per input position.
  std::vector<Var> EncodeInput(Graph& g, const AugmentedInput& input) const;
  Var ConditioningVector(Graph& g, const Conditioning& cond) const;

  struct DecoderState {
    LstmState lstm;
    size_t position = 0;
    size_t prev_action = 0;
  };
  DecoderState InitialState(Graph& g, const AugmentedInput& input) const;
  // Advances the decoder LSTM with z = [x_position; conditioning;
  // embed(prev action)] and returns the unnormalized action scores.
  Var DecoderStep(const std::vector<Var>& encoded, Var conditioning, DecoderState& state) const;
  // Writable characters and END are always allowed; STEP only before </w>.
  std::vector<uint8_t> ActionMask(const AugmentedInput& input, size_t position) const;
  // Masked softmax; masked entries are exactly 0.
  static std::vector<double> Distribution(const Tensor& logits, const std::vector<uint8_t>& mask);

  // Teacher-forced -log p(form | lemma, conditioning) over the oracle actions.
  Var NegLogLikelihood(Graph& g, const std::string& lemma, const Conditioning& cond,
                       const std::string& form) const;
  // Greedy decoding; ties go to the lower action index. At most max_len
  // characters are written (default 2 * |lemma| + 10).
  Inflection Greedy(Graph& g, const std::string& lemma, const Conditioning& cond,
                    std::optional<size_t> max_len = std::nullopt) const;

  Parameter& output_weights() const { return *output_weights_; }
  Parameter& symbol_embeddings() const { return *symbol_embeddings_; }

 private:
  size_t ActionIndex(const Action& action) const;
  size_t SymbolIndex(const std::string& symbol) const;

  std::shared_ptr<const Vocab> vocab_;
  ModelMode mode_ = ModelMode::kJoint;
  Parameter* symbol_embeddings_ = nullptr;  // chars then feature symbols
  Parameter* action_embeddings_ = nullptr;  // actions then a begin marker
  BiLstm encoder_;
  LstmLayer decoder_;
  Parameter* output_weights_ = nullptr;
  Parameter* output_bias_ = nullptr;
};

}  // namespace inflect

#endif  // INFLECT_INFLECTOR_H_
