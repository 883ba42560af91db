#ifndef INFLECT_LSTM_H_
#define INFLECT_LSTM_H_

#include <span>
#include <string>
#include <vector>

#include "inflect/graph.h"
#include "inflect/parameters.h"

namespace inflect {

// Returns the named parameter, creating it with Glorot init when absent.
// Throws ShapeError if an existing entry has a different shape.
Parameter& EnsureParameter(ParameterStore& store, const std::string& name, const Shape& shape,
                           Rng& rng);

// Gate order in the stacked weights is input, forget, output, candidate.
struct LstmLayer {
  Parameter* weights = nullptr;  // (4H x (I + H)) over [x; h_prev]
  Parameter* bias = nullptr;     // (4H), forget slice initialized to 1
  size_t input_dim = 0;
  size_t hidden_dim = 0;

  static LstmLayer Create(ParameterStore& store, const std::string& prefix, size_t input_dim,
                          size_t hidden_dim, Rng& rng);
};

struct LstmState {
  Var h;
  Var c;
};

LstmState ZeroState(Graph& g, size_t hidden_dim);

// i, f, o = sigmoid(.), g = tanh(.), c = f*c_prev + i*g, h = o*tanh(c).
LstmState LstmStep(const LstmLayer& layer, Var x, const LstmState& prev);

// Hidden states in input order; a reversed run reads right to left.
std::vector<Var> RunLstm(const LstmLayer& layer, std::span<const Var> inputs, bool reverse);

struct BiLstm {
  LstmLayer forward;
  LstmLayer backward;

  static BiLstm Create(ParameterStore& store, const std::string& prefix, size_t input_dim,
                       size_t hidden_dim, Rng& rng);

  struct Output {
    std::vector<Var> states;  // concat(forward_i, backward_i)
    Var forward_final;        // forward state after the last input
    Var backward_final;       // backward state after the first input
  };
  Output Run(std::span<const Var> inputs) const;
};

}  // namespace inflect

#endif  // INFLECT_LSTM_H_
