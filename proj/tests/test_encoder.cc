#include <doctest.h>

#include <cmath>
#include <set>

#include "inflect/encoder.h"
#include "inflect/errors.h"
#include "inflect/lstm.h"
#include "inflect/synth.h"
#include "inflect/text.h"
#include "inflect/vocab.h"
#include "test_util.h"

namespace inflect {
namespace {

TrainConfig SmallConfig() {
  TrainConfig config;
  config.word_dim = 6;
  config.char_dim = 5;
  config.hidden_dim = 4;
  config.char_hidden_dim = 3;
  return config;
}

struct EncoderFixture {
  std::shared_ptr<const Vocab> vocab;
  ParameterStore store;
  SentenceEncoder encoder;

  explicit EncoderFixture(uint64_t seed = 1) {
    vocab = std::make_shared<const Vocab>(BuildVocab(GenerateSyntheticCorpus(30, 1, {})));
    Rng rng(seed);
    encoder = SentenceEncoder::Create(store, vocab, SmallConfig(), rng);
  }
};

Var RandomInput(Graph& g, size_t dim, Rng& rng) {
  Tensor t({dim});
  for (double& x : t.data()) x = rng.Uniform(-1, 1);
  return g.Constant(std::move(t));
}

double Distance(const Tensor& a, const Tensor& b) {
  double d = 0.0;
  for (size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(d);
}

TEST_CASE("lstm_step closed forms") {
  ParameterStore store;
  Rng rng(1);
  LstmLayer layer = LstmLayer::Create(store, "l", 3, 4, rng);
  layer.weights->value.Fill(0.0);
  layer.bias->value.Fill(0.0);

  Graph g;
  LstmState zero = ZeroState(g, 4);
  LstmState out = LstmStep(layer, RandomInput(g, 3, rng), zero);
  for (double v : out.c.value().data()) CHECK(v == 0.0);
  for (double v : out.h.value().data()) CHECK(v == 0.0);

  // Forget gate saturated: c = sigmoid(10) * c_prev + 0.5 * tanh(0).
  for (size_t j = 4; j < 8; ++j) layer.bias->value[j] = 10.0;
  Tensor c_prev = Tensor::Vector({0.3, -1.2, 2.0, 0.0});
  LstmState prev{g.Constant(Tensor({4})), g.Constant(c_prev)};
  LstmState next = LstmStep(layer, RandomInput(g, 3, rng), prev);
  const double sig10 = 1.0 / (1.0 + std::exp(-10.0));
  for (size_t j = 0; j < 4; ++j) {
    CHECK(std::abs(next.c.value()[j] - c_prev[j] * sig10) < 1e-4);
    CHECK(std::abs(next.c.value()[j] - c_prev[j]) < 1e-4 * 10);
  }
}

TEST_CASE("lstm_step shape contract") {
  ParameterStore store;
  Rng rng(2);
  for (size_t input_dim : {1, 5, 17}) {
    LstmLayer layer = LstmLayer::Create(store, "l" + std::to_string(input_dim), input_dim, 6, rng);
    Graph g;
    LstmState s = LstmStep(layer, RandomInput(g, input_dim, rng), ZeroState(g, 6));
    CHECK(s.h.value().shape() == Shape{6});
    CHECK(s.c.value().shape() == Shape{6});
    CHECK_THROWS_AS(LstmStep(layer, RandomInput(g, input_dim + 1, rng), ZeroState(g, 6)), ShapeError);
  }
  CHECK_THROWS_AS(EnsureParameter(store, "l1/weights", {3, 3}, rng), ShapeError);
}

TEST_CASE("forget bias starts at one") {
  ParameterStore store;
  Rng rng(3);
  LstmLayer layer = LstmLayer::Create(store, "l", 2, 3, rng);
  for (size_t j = 0; j < 12; ++j) CHECK(layer.bias->value[j] == (j >= 3 && j < 6 ? 1.0 : 0.0));
}

TEST_CASE("encode_word") {
  EncoderFixture f;
  Graph g;
  const Tensor a = f.encoder.EncodeWord(g, "gato").value();
  const Tensor b = f.encoder.EncodeWord(g, "gato").value();
  CHECK(a.values() == b.values());
  CHECK(a.size() == SmallConfig().hidden_dim);
  CHECK(f.encoder.EncodeWord(g, "a").value().AllFinite());
  CHECK(f.encoder.EncodeWord(g, "\xE2\x82\xAC\xE2\x82\xAC").value().AllFinite());  // unknown chars

  Rng rng(5);
  // Known characters only: unknown ones share the <unk> row.
  const auto& symbols = f.vocab->chars.symbols();
  const std::vector<std::string> alphabet(symbols.begin() + 4, symbols.end());
  std::set<std::string> words;
  while (words.size() < 100) {
    std::string w;
    const size_t len = 1 + rng.UniformInt(8);
    for (size_t i = 0; i < len; ++i) w += alphabet[rng.UniformInt(alphabet.size())];
    words.insert(w);
  }
  std::vector<Tensor> vectors;
  for (const std::string& w : words) vectors.push_back(f.encoder.EncodeWord(g, w).value());
  for (size_t i = 0; i < vectors.size(); ++i) {
    for (size_t j = i + 1; j < vectors.size(); ++j) CHECK(Distance(vectors[i], vectors[j]) > 0.0);
  }
}

TEST_CASE("encode_sentence shapes and context sensitivity") {
  EncoderFixture f;
  Graph g;
  const std::vector<std::string> one{"gato"};
  const auto single = f.encoder.EncodeSentence(g, one);
  REQUIRE(single.size() == 1);
  CHECK(single[0].value().size() == 2 * SmallConfig().hidden_dim);
  CHECK(f.encoder.output_dim() == 2 * SmallConfig().hidden_dim);
  CHECK_THROWS_AS(f.encoder.EncodeSentence(g, std::span<const std::string>{}), DomainError);

  std::vector<std::string> words{"el", "gato", "comer", "pan", "ayer"};
  const auto before = f.encoder.EncodeSentence(g, words);
  CHECK(before.size() == words.size());
  for (const Var& h : before) CHECK(h.value().AllFinite());
  words.back() = "hoy";
  const auto after = f.encoder.EncodeSentence(g, words);
  CHECK(Distance(before[0].value(), after[0].value()) > 0.0);
}

TEST_CASE("tied forward and backward weights make reversal swap halves") {
  ParameterStore store;
  Rng rng(6);
  BiLstm bi = BiLstm::Create(store, "bi", 3, 4, rng);
  bi.backward = bi.forward;
  Graph g;
  std::vector<Var> inputs;
  for (int i = 0; i < 5; ++i) inputs.push_back(RandomInput(g, 3, rng));
  std::vector<Var> reversed(inputs.rbegin(), inputs.rend());
  const auto out = bi.Run(inputs);
  const auto rev = bi.Run(reversed);
  const size_t n = inputs.size();
  for (size_t i = 0; i < n; ++i) {
    const Tensor& a = out.states[i].value();
    const Tensor& b = rev.states[n - 1 - i].value();
    for (size_t j = 0; j < 4; ++j) {
      CHECK(a[j] == doctest::Approx(b[j + 4]).epsilon(1e-14));
      CHECK(a[j + 4] == doctest::Approx(b[j]).epsilon(1e-14));
    }
  }
  CHECK(out.forward_final.value().values() == rev.backward_final.value().values());
}

TEST_CASE("gradients reach character embeddings") {
  EncoderFixture f(7);
  Rng rng(8);
  Tensor weights({f.encoder.output_dim()});
  for (double& x : weights.data()) x = rng.Uniform(-1, 1);
  const std::vector<std::string> words{"el", "gato", "comer"};
  auto loss = [&](Graph& g) {
    const auto states = f.encoder.EncodeSentence(g, words);
    Var w = g.Constant(weights);
    Var total = Sum(Mul(Tanh(states[0]), w));
    for (size_t i = 1; i < states.size(); ++i) total = Add(total, Sum(Mul(Tanh(states[i]), w)));
    return total;
  };
  // Only the char table is probed; other parameters keep their values.
  Parameter& chars = f.encoder.char_embeddings();
  f.store.ZeroGrad();
  {
    Graph g;
    g.Backward(loss(g));
  }
  const Tensor analytic = chars.grad;
  f.store.ZeroGrad();
  const double eps = 1e-5;
  double worst = 0.0;
  size_t nonzero = 0;
  for (const std::string& w : words) {
    for (const std::string& c : SplitCodePoints(w)) {
      const size_t row = f.vocab->chars.Index(c);
      for (size_t j = 0; j < chars.value.cols(); ++j) {
        const size_t i = row * chars.value.cols() + j;
        const double saved = chars.value[i];
        auto eval = [&] {
          Graph g;
          return loss(g).value()[0];
        };
        chars.value[i] = saved + eps;
        const double up = eval();
        chars.value[i] = saved - eps;
        const double down = eval();
        chars.value[i] = saved;
        const double numeric = (up - down) / (2 * eps);
        const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-5});
        worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
        nonzero += analytic[i] != 0.0;
      }
    }
  }
  CHECK(nonzero > 0);
  CHECK(worst < 1e-4);
}

TEST_CASE("full encoder gradient check") {
  EncoderFixture f(9);
  const std::vector<std::string> words{"uno", "perro"};
  auto loss = [&](Graph& g) {
    const auto states = f.encoder.EncodeSentence(g, words);
    return Add(Sum(Tanh(states[0])), Sum(Mul(states[1], states[1])));
  };
  CHECK(testing::CheckGradients(f.store, loss, 1e-5, 40).max_relative_error < 1e-4);
}

}  // namespace
}  // namespace inflect
