#include "inflect/inflector.h"

#include <cmath>

#include "inflect/errors.h"
#include "inflect/text.h"

namespace inflect {

AugmentedInput BuildInput(const std::string& lemma, const MorphTag* tag) {
  AugmentedInput input;
  if (tag != nullptr) input.symbols = tag->Symbols();
  input.symbols.emplace_back(kBow);
  input.lemma_begin = input.symbols.size();
  for (std::string& c : SplitCodePoints(lemma)) input.symbols.push_back(std::move(c));
  input.symbols.emplace_back(kEow);
  return input;
}

Inflector Inflector::Create(ParameterStore& store, std::shared_ptr<const Vocab> vocab,
                            const TrainConfig& config, Rng& rng) {
  Inflector inf;
  inf.mode_ = config.mode;
  const size_t symbols = vocab->chars.size() + vocab->features.size();
  const size_t actions = vocab->chars.size() + 2;
  inf.symbol_embeddings_ =
      &EnsureParameter(store, "inflector/symbol_embeddings", {symbols, config.char_dim}, rng);
  inf.action_embeddings_ =
      &EnsureParameter(store, "inflector/action_embeddings", {actions + 1, config.char_dim}, rng);
  inf.encoder_ = BiLstm::Create(store, "inflector/encoder", config.char_dim, config.char_hidden_dim, rng);
  const size_t conditioning_dim =
      config.mode == ModelMode::kJoint ? config.char_dim : 2 * config.hidden_dim;
  const size_t decoder_input = 2 * config.char_hidden_dim + conditioning_dim + config.char_dim;
  inf.decoder_ = LstmLayer::Create(store, "inflector/decoder", decoder_input, config.hidden_dim, rng);
  const bool fresh = !store.Contains("inflector/output_bias");
  inf.output_weights_ =
      &EnsureParameter(store, "inflector/output_weights", {actions, config.hidden_dim}, rng);
  inf.output_bias_ = &EnsureParameter(store, "inflector/output_bias", {actions}, rng);
  if (fresh) inf.output_bias_->value.Fill(0.0);
  inf.vocab_ = std::move(vocab);
  return inf;
}

size_t Inflector::SymbolIndex(const std::string& symbol) const {
  if (auto c = vocab_->chars.Find(symbol)) return *c;
  if (symbol.find('=') != std::string::npos) {
    return vocab_->chars.size() + vocab_->features.Index(symbol);
  }
  return vocab_->chars.Index(symbol);
}

size_t Inflector::ActionIndex(const Action& action) const {
  switch (action.kind) {
    case Action::Kind::kWrite:
      return vocab_->chars.Index(action.symbol);
    case Action::Kind::kStep:
      return step_action();
    case Action::Kind::kEnd:
      break;
  }
  return end_action();
}

AugmentedInput Inflector::InputFor(const std::string& lemma, const Conditioning& cond) const {
  if (mode_ == ModelMode::kJoint && cond.tag == nullptr) {
    throw DomainError("joint-mode inflection needs a tag");
  }
  return BuildInput(lemma, mode_ == ModelMode::kJoint ? cond.tag : nullptr);
}

std::vector<Var> Inflector::EncodeInput(Graph& g, const AugmentedInput& input) const {
  std::vector<Var> embedded;
  embedded.reserve(input.size());
  for (const std::string& s : input.symbols) embedded.push_back(g.Lookup(*symbol_embeddings_, SymbolIndex(s)));
  return encoder_.Run(embedded).states;
}

Var Inflector::ConditioningVector(Graph& g, const Conditioning& cond) const {
  if (mode_ == ModelMode::kDirect) {
    if (!cond.context) throw DomainError("direct-mode inflection needs a context vector");
    return *cond.context;
  }
  if (cond.tag == nullptr) throw DomainError("joint-mode inflection needs a tag");
  std::vector<Var> features;
  for (const std::string& s : cond.tag->Symbols()) {
    features.push_back(g.Lookup(*symbol_embeddings_, vocab_->chars.size() + vocab_->features.Index(s)));
  }
  return Mean(features);
}

Inflector::DecoderState Inflector::InitialState(Graph& g, const AugmentedInput& input) const {
  DecoderState state;
  state.lstm = ZeroState(g, decoder_.hidden_dim);
  state.position = input.lemma_begin;
  state.prev_action = num_actions();
  return state;
}

Var Inflector::DecoderStep(const std::vector<Var>& encoded, Var conditioning, DecoderState& state) const {
  Graph& g = *conditioning.graph;
  const Var parts[] = {encoded.at(state.position), conditioning,
                       g.Lookup(*action_embeddings_, state.prev_action)};
  state.lstm = LstmStep(decoder_, Concat(parts), state.lstm);
  return Add(MatMul(g.Param(*output_weights_), state.lstm.h), g.Param(*output_bias_));
}

std::vector<uint8_t> Inflector::ActionMask(const AugmentedInput& input, size_t position) const {
  std::vector<uint8_t> mask(num_actions(), 1);
  for (const char* reserved : {kPad, kBow, kEow}) mask[vocab_->chars.Index(reserved)] = 0;
  mask[step_action()] = position < input.last() ? 1 : 0;
  return mask;
}

std::vector<double> Inflector::Distribution(const Tensor& logits, const std::vector<uint8_t>& mask) {
  std::vector<double> kept;
  for (size_t i = 0; i < logits.size(); ++i) {
    if (mask[i]) kept.push_back(logits[i]);
  }
  const double lse = LogSumExp(kept);
  std::vector<double> probs(logits.size(), 0.0);
  for (size_t i = 0; i < logits.size(); ++i) {
    if (mask[i]) probs[i] = std::exp(logits[i] - lse);
  }
  return probs;
}

Var Inflector::NegLogLikelihood(Graph& g, const std::string& lemma, const Conditioning& cond,
                                const std::string& form) const {
  const AugmentedInput input = InputFor(lemma, cond);
  const std::vector<Var> encoded = EncodeInput(g, input);
  const Var conditioning = ConditioningVector(g, cond);
  DecoderState state = InitialState(g, input);
  std::vector<Var> log_probs;
  for (const Action& action : AlignOracle(lemma, form)) {
    const size_t target = ActionIndex(action);
    Var logits = DecoderStep(encoded, conditioning, state);
    log_probs.push_back(MaskedLogSoftmaxAt(logits, target, ActionMask(input, state.position)));
    if (action.kind == Action::Kind::kStep) ++state.position;
    state.prev_action = target;
  }
  return Scale(Sum(Concat(log_probs)), -1.0);
}

Inflection Inflector::Greedy(Graph& g, const std::string& lemma, const Conditioning& cond,
                             std::optional<size_t> max_len) const {
  const AugmentedInput input = InputFor(lemma, cond);
  const size_t cap = max_len.value_or(2 * (input.last() - input.lemma_begin) + 10);
  const std::vector<Var> encoded = EncodeInput(g, input);
  const Var conditioning = ConditioningVector(g, cond);
  DecoderState state = InitialState(g, input);
  Inflection result;
  size_t written = 0;
  while (true) {
    Var logits = DecoderStep(encoded, conditioning, state);
    const std::vector<double> probs = Distribution(logits.value(), ActionMask(input, state.position));
    size_t best = 0;
    for (size_t a = 1; a < probs.size(); ++a) {
      if (probs[a] > probs[best]) best = a;
    }
    state.prev_action = best;
    if (best == end_action()) {
      result.actions.push_back(Action::End());
      break;
    }
    if (best == step_action()) {
      result.actions.push_back(Action::Step());
      ++state.position;
      continue;
    }
    if (written == cap) {
      result.truncated = true;
      break;
    }
    const std::string& symbol = best == vocab_->chars.Index(kUnk) && state.position < input.last()
                                    ? input.symbols[state.position]
                                    : vocab_->chars.Symbol(best);
    result.actions.push_back(Action::Write(symbol));
    result.form += symbol;
    ++written;
  }
  return result;
}

}  // namespace inflect
