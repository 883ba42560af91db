#include "inflect/encoder.h"

#include <algorithm>

#include "inflect/errors.h"
#include "inflect/text.h"

namespace inflect {

SentenceEncoder SentenceEncoder::Create(ParameterStore& store, std::shared_ptr<const Vocab> vocab,
                                        const TrainConfig& config, Rng& rng,
                                        const EmbeddingTable* pretrained) {
  SentenceEncoder enc;
  const bool fresh = !store.Contains("encoder/word_embeddings");
  enc.char_embeddings_ =
      &EnsureParameter(store, "encoder/char_embeddings", {vocab->chars.size(), config.char_dim}, rng);
  enc.char_lstm_ = BiLstm::Create(store, "encoder/char_lstm", config.char_dim, config.char_hidden_dim, rng);
  enc.word_embeddings_ =
      &EnsureParameter(store, "encoder/word_embeddings", {vocab->words.size(), config.word_dim}, rng);
  const size_t composed = 2 * config.char_hidden_dim + config.word_dim;
  enc.projection_ = &EnsureParameter(store, "encoder/projection", {config.hidden_dim, composed}, rng);
  enc.projection_bias_ = &EnsureParameter(store, "encoder/projection_bias", {config.hidden_dim}, rng);
  enc.sentence_lstm_ =
      BiLstm::Create(store, "encoder/sentence_lstm", config.hidden_dim, config.hidden_dim, rng);
  enc.freeze_embeddings_ = config.freeze_embeddings;
  if (fresh) {
    enc.projection_bias_->value.Fill(0.0);
    if (pretrained != nullptr) {
      if (pretrained->dim() != config.word_dim) {
        throw ShapeError("pretrained vectors have dimension " + std::to_string(pretrained->dim()) +
                         ", model expects " + std::to_string(config.word_dim));
      }
      Tensor& table = enc.word_embeddings_->value;
      for (size_t row = 0; row < vocab->words.size(); ++row) {
        if (auto vec = pretrained->Find(vocab->words.Symbol(row))) {
          std::copy(vec->begin(), vec->end(), table.data().begin() + static_cast<std::ptrdiff_t>(row * config.word_dim));
        }
      }
    }
  }
  enc.vocab_ = std::move(vocab);
  return enc;
}

Var SentenceEncoder::EncodeWord(Graph& g, const std::string& word) const {
  std::vector<Var> chars;
  for (const std::string& c : SplitCodePoints(word)) {
    chars.push_back(g.Lookup(*char_embeddings_, vocab_->chars.Index(c)));
  }
  if (chars.empty()) chars.push_back(g.Lookup(*char_embeddings_, vocab_->chars.Index(kUnk)));
  BiLstm::Output spelled = char_lstm_.Run(chars);
  const size_t row = vocab_->words.Index(word);
  Var word_vec = freeze_embeddings_
                     ? g.Constant(Tensor::Vector(std::vector<double>(
                           word_embeddings_->value.values().begin() +
                               static_cast<std::ptrdiff_t>(row * word_embeddings_->value.cols()),
                           word_embeddings_->value.values().begin() +
                               static_cast<std::ptrdiff_t>((row + 1) * word_embeddings_->value.cols()))))
                     : g.Lookup(*word_embeddings_, row);
  const Var parts[] = {spelled.forward_final, spelled.backward_final, word_vec};
  return Add(MatMul(g.Param(*projection_), Concat(parts)), g.Param(*projection_bias_));
}

std::vector<Var> SentenceEncoder::EncodeSentence(Graph& g, std::span<const std::string> words) const {
  if (words.empty()) throw DomainError("cannot encode an empty sentence");
  std::vector<Var> vectors;
  vectors.reserve(words.size());
  for (const std::string& w : words) vectors.push_back(EncodeWord(g, w));
  return sentence_lstm_.Run(vectors).states;
}

}  // namespace inflect
