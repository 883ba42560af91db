#ifndef INFLECT_GRAPH_H_
#define INFLECT_GRAPH_H_

#include <deque>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "inflect/parameters.h"
#include "inflect/tensor.h"

namespace inflect {

class Graph;

// Handle to a value recorded on a Graph.
struct Var {
  Graph* graph = nullptr;
  size_t id = 0;

  const Tensor& value() const;
};

// Reverse-mode differentiation tape. Operations append nodes in topological
// order; Backward walks them in reverse, accumulating gradients additively on
// fan-out, pushes parameter gradients into their ParameterStore entries and
// clears the tape. A graph belongs to one thread.
class Graph {
 public:
  using BackwardFn = std::function<void(Graph&, size_t self)>;

  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Var Constant(Tensor value);
  // Whole parameter; repeated calls within one tape share a node.
  Var Param(Parameter& param);
  // One row of a matrix parameter, with a sparse gradient.
  Var Lookup(Parameter& param, size_t row);

  const Tensor& value(Var v) const;
  size_t size() const { return nodes_.size(); }

  // loss must be a single-element node on this tape.
  void Backward(Var loss);
  void Clear();

  // Used by op implementations.
  Var Record(Tensor value, BackwardFn backward);
  std::span<double> Grad(size_t id);
  bool HasGrad(size_t id) const;

 private:
  struct Node {
    Tensor value;
    const Tensor* external = nullptr;
    Parameter* param = nullptr;
    std::vector<double> grad;
    BackwardFn backward;
  };

  const Tensor& NodeValue(const Node& n) const {
    return n.external ? *n.external : n.value;
  }

  std::deque<Node> nodes_;  // deque keeps node references stable
  std::unordered_map<const Parameter*, size_t> param_nodes_;
  std::vector<Parameter*> touched_;
};

// Elementwise; shapes must match.
Var Add(Var a, Var b);
Var Sub(Var a, Var b);
Var Mul(Var a, Var b);
Var Scale(Var a, double factor);
Var Tanh(Var a);
Var Sigmoid(Var a);

// (m x k) times (k) -> (m), or (m x k) times (k x n) -> (m x n).
Var MatMul(Var a, Var b);
// Concatenates vectors.
Var Concat(std::span<const Var> parts);
// Elements [begin, begin + length) of a vector.
Var Slice(Var a, size_t begin, size_t length);
// Average of equally shaped tensors.
Var Mean(std::span<const Var> parts);
Var Sum(Var a);
// Scalar at a flat index.
Var Pick(Var a, size_t index);

// Over the last axis; a matrix is processed row by row.
Var Softmax(Var a);
Var LogSoftmax(Var a);
// Vector -> scalar, matrix -> one value per row. Throws DomainError when the
// last axis is empty.
Var LogSumExp(Var a);

// log softmax(logits)[index] restricted to entries with allowed[j] != 0.
Var MaskedLogSoftmaxAt(Var logits, size_t index, std::span<const uint8_t> allowed);

// Log partition function of a linear-chain CRF. emissions is (n x L): the
// unary score of label m at position i. transitions is ((L + 1) x L): row 0
// scores the start symbol, row p + 1 scores previous label p.
Var CrfLogPartition(Var emissions, Var transitions);

// Stacks equally sized vectors as the rows of a matrix.
Var StackRows(std::span<const Var> rows);

// Plain helpers shared by inference code.
double LogSumExp(std::span<const double> values);

}  // namespace inflect

#endif  // INFLECT_GRAPH_H_
