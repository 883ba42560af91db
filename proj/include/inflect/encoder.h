#ifndef INFLECT_ENCODER_H_
#define INFLECT_ENCODER_H_

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "inflect/config.h"
#include "inflect/embeddings.h"
#include "inflect/graph.h"
#include "inflect/lstm.h"
#include "inflect/vocab.h"

namespace inflect {

// Turns a lemmatized sentence into contextual states h_i of size
// 2 * hidden_dim. Each word is the projection of [char BiLSTM finals; word
// embedding], and the sentence BiLSTM runs over those vectors.
class SentenceEncoder {
 public:
  // Creates (or binds, when the store already holds them) the encoder
  // parameters under "encoder/". Rows of the word table whose word appears in
  // `pretrained` start from that vector.
  static SentenceEncoder Create(ParameterStore& store, std::shared_ptr<const Vocab> vocab,
                                const TrainConfig& config, Rng& rng,
                                const EmbeddingTable* pretrained = nullptr);

  Var EncodeWord(Graph& g, const std::string& word) const;
  // Throws DomainError on an empty sentence.
  std::vector<Var> EncodeSentence(Graph& g, std::span<const std::string> words) const;

  size_t output_dim() const { return 2 * sentence_lstm_.forward.hidden_dim; }
  const BiLstm& char_lstm() const { return char_lstm_; }
  const BiLstm& sentence_lstm() const { return sentence_lstm_; }
  Parameter& char_embeddings() const { return *char_embeddings_; }

 private:
  std::shared_ptr<const Vocab> vocab_;
  Parameter* char_embeddings_ = nullptr;
  Parameter* word_embeddings_ = nullptr;
  Parameter* projection_ = nullptr;
  Parameter* projection_bias_ = nullptr;
  BiLstm char_lstm_;
  BiLstm sentence_lstm_;
  bool freeze_embeddings_ = false;
};

}  // namespace inflect

#endif  // INFLECT_ENCODER_H_
