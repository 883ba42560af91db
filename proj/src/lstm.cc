#include "inflect/lstm.h"

#include <cmath>

#include "inflect/errors.h"

namespace inflect {

namespace {

double Logistic(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Gate nonlinearities and cell update fused into one node whose value is
// [h; c]. pre holds the 4H gate pre-activations.
Var LstmCell(Var pre, Var c_prev) {
  Graph& g = *pre.graph;
  const Tensor& a = pre.value();
  const Tensor& cp = c_prev.value();
  const size_t hidden = cp.size();
  if (a.size() != 4 * hidden) {
    throw ShapeError("lstm cell: pre-activations " + ShapeString(a.shape()) + " for hidden " +
                     std::to_string(hidden));
  }
  std::vector<double> gates(4 * hidden);
  std::vector<double> tanh_c(hidden);
  std::vector<double> out(2 * hidden);
  for (size_t k = 0; k < hidden; ++k) {
    const double i = Logistic(a[k]);
    const double f = Logistic(a[hidden + k]);
    const double o = Logistic(a[2 * hidden + k]);
    const double cand = std::tanh(a[3 * hidden + k]);
    gates[k] = i;
    gates[hidden + k] = f;
    gates[2 * hidden + k] = o;
    gates[3 * hidden + k] = cand;
    const double c = f * cp[k] + i * cand;
    tanh_c[k] = std::tanh(c);
    out[k] = o * tanh_c[k];
    out[hidden + k] = c;
  }
  Tensor result = Tensor::Vector(std::move(out));
  if (!result.AllFinite()) throw NumericError("lstm cell produced a non-finite value");
  return g.Record(std::move(result), [pre, c_prev, hidden, gates = std::move(gates),
                                      tanh_c = std::move(tanh_c)](Graph& g, size_t self) {
    auto grad = g.Grad(self);
    auto cp = g.value(c_prev).data();
    auto ga = g.Grad(pre.id);
    auto gc = g.Grad(c_prev.id);
    for (size_t k = 0; k < hidden; ++k) {
      const double i = gates[k];
      const double f = gates[hidden + k];
      const double o = gates[2 * hidden + k];
      const double cand = gates[3 * hidden + k];
      const double dh = grad[k];
      const double dc = grad[hidden + k] + dh * o * (1.0 - tanh_c[k] * tanh_c[k]);
      ga[k] += dc * cand * i * (1.0 - i);
      ga[hidden + k] += dc * cp[k] * f * (1.0 - f);
      ga[2 * hidden + k] += dh * tanh_c[k] * o * (1.0 - o);
      ga[3 * hidden + k] += dc * i * (1.0 - cand * cand);
      gc[k] += dc * f;
    }
  });
}

}  // namespace

Parameter& EnsureParameter(ParameterStore& store, const std::string& name, const Shape& shape,
                           Rng& rng) {
  if (store.Contains(name)) {
    Parameter& p = store.Get(name);
    if (p.value.shape() != shape) {
      throw ShapeError("parameter " + name + " has shape " + ShapeString(p.value.shape()) +
                       ", expected " + ShapeString(shape));
    }
    return p;
  }
  return store.Add(name, GlorotUniform(shape, rng));
}

LstmLayer LstmLayer::Create(ParameterStore& store, const std::string& prefix, size_t input_dim,
                            size_t hidden_dim, Rng& rng) {
  LstmLayer layer;
  layer.input_dim = input_dim;
  layer.hidden_dim = hidden_dim;
  const bool fresh = !store.Contains(prefix + "/bias");
  layer.weights = &EnsureParameter(store, prefix + "/weights", {4 * hidden_dim, input_dim + hidden_dim}, rng);
  layer.bias = &EnsureParameter(store, prefix + "/bias", {4 * hidden_dim}, rng);
  if (fresh) {
    layer.bias->value.Fill(0.0);
    for (size_t k = hidden_dim; k < 2 * hidden_dim; ++k) layer.bias->value[k] = 1.0;
  }
  return layer;
}

LstmState ZeroState(Graph& g, size_t hidden_dim) {
  Var zero = g.Constant(Tensor({hidden_dim}));
  return {zero, zero};
}

LstmState LstmStep(const LstmLayer& layer, Var x, const LstmState& prev) {
  Graph& g = *x.graph;
  if (x.value().size() != layer.input_dim || prev.h.value().size() != layer.hidden_dim) {
    throw ShapeError("lstm step: input " + ShapeString(x.value().shape()) + ", expected (" +
                     std::to_string(layer.input_dim) + ")");
  }
  const Var joined[] = {x, prev.h};
  Var pre = Add(MatMul(g.Param(*layer.weights), Concat(joined)), g.Param(*layer.bias));
  Var cell = LstmCell(pre, prev.c);
  return {Slice(cell, 0, layer.hidden_dim), Slice(cell, layer.hidden_dim, layer.hidden_dim)};
}

std::vector<Var> RunLstm(const LstmLayer& layer, std::span<const Var> inputs, bool reverse) {
  std::vector<Var> states(inputs.size());
  if (inputs.empty()) return states;
  LstmState state = ZeroState(*inputs[0].graph, layer.hidden_dim);
  for (size_t step = 0; step < inputs.size(); ++step) {
    const size_t i = reverse ? inputs.size() - 1 - step : step;
    state = LstmStep(layer, inputs[i], state);
    states[i] = state.h;
  }
  return states;
}

BiLstm BiLstm::Create(ParameterStore& store, const std::string& prefix, size_t input_dim,
                      size_t hidden_dim, Rng& rng) {
  return {LstmLayer::Create(store, prefix + "/fwd", input_dim, hidden_dim, rng),
          LstmLayer::Create(store, prefix + "/bwd", input_dim, hidden_dim, rng)};
}

BiLstm::Output BiLstm::Run(std::span<const Var> inputs) const {
  if (inputs.empty()) throw DomainError("BiLSTM over an empty sequence");
  Output out;
  std::vector<Var> fwd = RunLstm(forward, inputs, false);
  std::vector<Var> bwd = RunLstm(backward, inputs, true);
  out.states.reserve(inputs.size());
  for (size_t i = 0; i < inputs.size(); ++i) {
    const Var pair[] = {fwd[i], bwd[i]};
    out.states.push_back(Concat(pair));
  }
  out.forward_final = fwd.back();
  out.backward_final = bwd.front();
  return out;
}

}  // namespace inflect
